#include "prismkit/serialize.hpp"

namespace prismkit {

nlohmann::ordered_json elem_to_json(const RingElem& a) {
  nlohmann::ordered_json j;
  j["spec_id"] = a.spec()->id();
  auto terms = nlohmann::ordered_json::array();
  for (const auto& [m, c] : a.terms()) {  // std::map iterates in graded-lex order
    nlohmann::ordered_json t;
    auto mono = nlohmann::ordered_json::array();
    for (size_t i = 0; i < m.e.size(); ++i)
      if (m.e[i] > 0) mono.push_back({a.spec()->vars()[i], m.e[i]});
    t["monomial"] = std::move(mono);
    t["coeff"] = c.get_str();
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

RingElem elem_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("spec_id") || !j.contains("terms"))
    fail(Errc::ParseError, "element JSON must have spec_id and terms");
  SpecPtr spec = RingSpec::parse(j.at("spec_id").get<std::string>());
  std::map<Monomial, Int> raw;
  for (const auto& t : j.at("terms")) {
    Monomial m(spec->nvars());
    for (const auto& ve : t.at("monomial")) {
      const std::string var = ve.at(0).get<std::string>();
      int idx = spec->var_index(var);
      if (idx < 0) fail(Errc::ParseError, "unknown variable '" + var + "' in element");
      m.e[static_cast<size_t>(idx)] += ve.at(1).get<unsigned>();
    }
    raw[m] += Int(t.at("coeff").get<std::string>());
  }
  return RingElem::make(std::move(spec), std::move(raw));
}

std::string elem_to_string(const RingElem& a) { return elem_to_json(a).dump(); }

RingElem elem_from_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, e.what());
  }
  return elem_from_json(j);
}

}  // namespace prismkit
