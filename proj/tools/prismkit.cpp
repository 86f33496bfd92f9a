// prismkit command-line entry point: exact Witt-vector / delta-ring / prism
// computations plus the verification harness.
#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "prismkit/harness.hpp"
#include "prismkit/serialize.hpp"

using namespace prismkit;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct Config {
  long p = 2;
  int N = 4;        // p-adic digits
  int n = 3;        // Witt length
  int D = 2;        // delta depth
  int M = 8;        // series order
  uint64_t seed = 1;
  size_t budget = 1u << 16;
  std::string format = "json";

  Precision prec() const { return Precision(p, N, n, D, M); }
  bool text() const { return format == "text"; }
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, "cannot open " + path);
  json j;
  in >> j;
  return j;
}

ordered_json witt_to_json(const WittVector& w) {
  ordered_json comps = ordered_json::array();
  for (const auto& c : w.comps) comps.push_back(elem_to_json(c));
  return ordered_json{{"p", w.p}, {"comps", comps}};
}

WittVector witt_from_json(const json& j) {
  if (!j.contains("p") || !j.contains("comps"))
    fail(Errc::ParseError, "Witt vector JSON needs \"p\" and \"comps\"");
  std::vector<RingElem> comps;
  for (const auto& c : j.at("comps")) comps.push_back(elem_from_json(c));
  return WittVector(j.at("p").get<long>(), std::move(comps));
}

void emit(const Config& cfg, const ordered_json& j, const std::string& text_form) {
  if (cfg.text())
    std::cout << text_form << "\n";
  else
    std::cout << j.dump() << "\n";
}

void emit_elem(const Config& cfg, const RingElem& a) { emit(cfg, elem_to_json(a), a.str()); }
void emit_witt(const Config& cfg, const WittVector& w) { emit(cfg, witt_to_json(w), w.str()); }

// "1,0,-2" (monic, high-to-low) or "u^2-2"; returns c0..c_{e-1}.
std::vector<Int> parse_eisenstein(const std::string& text) {
  std::vector<Int> hi2lo;
  if (text.find_first_of("+-*^") == std::string::npos ||
      (text.find(',') != std::string::npos)) {
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) hi2lo.emplace_back(tok);
  } else {
    auto terms = parse_poly_terms(text, {"u"});
    unsigned deg = 0;
    for (const auto& [m, c] : terms) deg = std::max(deg, m.e[0]);
    hi2lo.assign(deg + 1, 0);
    for (const auto& [m, c] : terms) hi2lo[deg - m.e[0]] = c;
  }
  if (hi2lo.size() < 2 || hi2lo.front() != 1)
    fail(Errc::NotEisenstein, "expected a monic polynomial of degree >= 1");
  std::vector<Int> eis(hi2lo.rbegin(), hi2lo.rend() - 1);  // c0..c_{e-1}
  return eis;
}

PrismSpec make_prism(const Config& cfg, const std::string& catalog,
                     const std::string& eisenstein, int K) {
  if (catalog == "crystalline") return mk_prism_crystalline(cfg.prec());
  if (catalog == "bk") {
    if (eisenstein.empty()) fail(Errc::NotEisenstein, "--eisenstein is required for bk");
    return mk_prism_bk(parse_eisenstein(eisenstein), cfg.prec());
  }
  if (catalog == "qdr") return mk_prism_qdr(cfg.prec());
  if (catalog == "perfectoid") return mk_prism_perfectoid(K, cfg.prec());
  fail(Errc::ParseError, "unknown catalog: " + catalog);
}

std::vector<RingElem> parse_numerators(const PrismSpec& P, const std::vector<std::string>& exprs) {
  std::vector<RingElem> xs;
  const SpecPtr& C = P.A.carrier();
  for (const auto& e : exprs)
    xs.push_back(RingElem::make(C, parse_poly_terms(e, C->vars())));
  if (xs.empty()) fail(Errc::ParseError, "at least one --numerators expression is required");
  return xs;
}

int run_verify(const Config& cfg, const std::string& name, bool corrupt) {
  HarnessConfig hc;
  hc.seed = cfg.seed;
  hc.budget = cfg.budget;
  hc.corrupt_fixture = corrupt;
  auto reports = name.empty() || name == "all" ? run_all(hc) : run_named(name, hc);
  if (reports.empty()) {
    std::cerr << "no check named \"" << name << "\"\n";
    return 2;
  }
  bool all_pass = true;
  size_t name_w = 5;
  for (const auto& r : reports) name_w = std::max(name_w, r.name.size());
  for (const auto& r : reports) {
    all_pass = all_pass && r.pass;
    std::cout << report_line(r) << "\n";
    std::ostringstream row;
    row << (r.pass ? "PASS  " : "FAIL  ") << r.name;
    row << std::string(name_w + 2 - r.name.size(), ' ') << r.instance;
    std::cerr << row.str() << "\n";
  }
  std::cerr << (all_pass ? "all checks passed" : "FAILURES present") << " ("
            << reports.size() << " checks)\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  CLI::App app{"prismkit: exact truncated Witt vectors, delta-rings, and prisms"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config")->configurable(false);
  app.add_option("--p", cfg.p, "prime p")->configurable(true);
  app.add_option("--prec", cfg.N, "p-adic digits N")->configurable(true);
  app.add_option("--witt-len", cfg.n, "Witt length n")->configurable(true);
  app.add_option("--depth", cfg.D, "delta depth D")->configurable(true);
  app.add_option("--order", cfg.M, "series order M")->configurable(true);
  app.add_option("--seed", cfg.seed, "RNG seed")->configurable(true);
  app.add_option("--budget", cfg.budget, "enumeration budget")->configurable(true);
  app.add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->configurable(true);

  std::vector<std::string> ins;           // --in files
  std::string op_name, catalog, eisenstein, target_id, z_text, c_file, check_name = "all";
  std::vector<std::string> numerators, image_files;
  int max_index = 3, K = 4, m_exp = 1, terms = 3, free_vars = 1;
  bool corrupt = false;

  // ---- witt ----
  auto* witt = app.add_subcommand("witt", "truncated Witt vector arithmetic");
  std::map<std::string, int> arity;  // inputs per op
  for (const auto& [nm, k] : std::initializer_list<std::pair<const char*, int>>{
           {"add", 2}, {"mul", 2}, {"neg", 1}, {"teich", 1}, {"ver", 1},
           {"frob", 1}, {"res", 1}, {"ghost", 1}, {"from-ghost", 1}}) {
    auto* sc = witt->add_subcommand(nm, "");
    sc->add_option("--in", ins, "input JSON file")->expected(k, k)->required();
    arity[nm] = k;
  }
  auto* witt_table = witt->add_subcommand("table", "dump universal polynomials");
  witt_table->add_option("--op", op_name, "sum|product|negation|frobenius|delta")->required();
  witt_table->add_option("--max", max_index, "largest component index");

  // ---- delta ----
  auto* dl = app.add_subcommand("delta", "free delta-ring operations");
  auto* dl_free = dl->add_subcommand("free", "print the free presentation");
  dl_free->add_option("--vars", free_vars, "number of generators");
  auto* dl_apply = dl->add_subcommand("apply", "delta of an element of Z{x}");
  dl_apply->add_option("--vars", free_vars, "number of generators");
  dl_apply->add_option("--in", ins, "element JSON file")->required();
  auto* dl_phi = dl->add_subcommand("phi", "Frobenius lift of an element of Z{x}");
  dl_phi->add_option("--vars", free_vars, "number of generators");
  dl_phi->add_option("--in", ins, "element JSON file")->required();
  auto* dl_lift = dl->add_subcommand("lift", "adjunction lift Z{x} -> W_n(S)");
  dl_lift->add_option("--vars", free_vars, "number of generators");
  dl_lift->add_option("--target", target_id, "target carrier spec id")->required();
  dl_lift->add_option("--image", image_files, "element JSON file per generator")->required();

  // ---- prism ----
  auto* pr = app.add_subcommand("prism", "oriented prisms and envelopes");
  for (const char* nm : {"new", "check", "envelope", "points"}) {
    auto* sc = pr->add_subcommand(nm, "");
    sc->add_option("--catalog", catalog, "crystalline|bk|qdr|perfectoid")->required();
    sc->add_option("--eisenstein", eisenstein, "monic E as \"1,0,-2\" or \"u^2-2\"");
    sc->add_option("--K", K, "perfectoid truncation exponent");
  }
  pr->get_subcommand("envelope")->add_option("--numerators", numerators, "numerator expressions")->required();
  auto* pr_pts = pr->get_subcommand("points");
  pr_pts->add_option("--numerators", numerators, "numerator expressions")->required();
  pr_pts->add_option("--target", target_id, "point carrier spec id")->required();
  pr_pts->add_option("--image", image_files, "Witt JSON per base variable");

  // ---- ht ----
  auto* ht = app.add_subcommand("ht", "Hodge-Tate torsors, group law, logarithm");
  auto* ht_solve = ht->add_subcommand("solve", "solve F x = p^m in W_n(R)");
  ht_solve->add_option("--R", target_id, "carrier spec id")->required();
  ht_solve->add_option("--n", cfg.n, "Witt length");
  ht_solve->add_option("--m", m_exp, "target exponent");
  auto* ht_star = ht->add_subcommand("star", "a + b + c a b");
  ht_star->add_option("--in", ins, "two element JSON files")->expected(2, 2)->required();
  ht_star->add_option("--c", c_file, "parameter element JSON file")->required();
  auto* ht_gl = ht->add_subcommand("grouplaw", "exp/log series identities");
  ht_gl->add_option("--eisenstein", eisenstein, "monic E for the integrality profile");
  auto* ht_log = ht->add_subcommand("log", "crystalline prismatic logarithm");
  ht_log->add_option("--z", z_text, "scalar z (integer)")->required();
  ht_log->add_option("--terms", terms, "partial-sum length K");

  // ---- verify ----
  auto* vf = app.add_subcommand("verify", "run the lemma harness");
  vf->add_option("name", check_name, "check name or 'all'");
  vf->add_flag("--corrupt-fixture", corrupt, "also emit the raw corrupted-fixture report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (witt->parsed() && !witt_table->parsed()) {
      const std::string op = witt->get_subcommands().at(0)->get_name();
      if (op == "teich") {
        emit_witt(cfg, teichmuller(elem_from_json(read_json_file(ins[0])), cfg.p, cfg.n));
      } else if (op == "from-ghost") {
        std::vector<RingElem> g;
        for (const auto& gj : read_json_file(ins[0])) g.push_back(elem_from_json(gj));
        auto r = from_ghost(g, cfg.p);
        ordered_json j{{"witt", witt_to_json(r.w)}, {"losses", r.losses}};
        emit(cfg, j, r.w.str());
      } else {
        std::vector<WittVector> in;
        for (const auto& f : ins) in.push_back(witt_from_json(read_json_file(f)));
        if (op == "add") emit_witt(cfg, witt_add(in[0], in[1]));
        else if (op == "mul") emit_witt(cfg, witt_mul(in[0], in[1]));
        else if (op == "neg") emit_witt(cfg, witt_neg(in[0]));
        else if (op == "ver") emit_witt(cfg, verschiebung(in[0]));
        else if (op == "frob") emit_witt(cfg, witt_frobenius(in[0]));
        else if (op == "res") emit_witt(cfg, restriction(in[0]));
        else if (op == "ghost") {
          ordered_json j = ordered_json::array();
          std::string txt;
          for (const auto& gc : ghost(in[0])) {
            j.push_back(elem_to_json(gc));
            txt += (txt.empty() ? "" : "; ") + gc.str();
          }
          emit(cfg, j, "(" + txt + ")");
        }
      }
    } else if (witt_table->parsed()) {
      static const std::map<std::string, WittOp> ops{{"sum", WittOp::Sum},
                                                     {"product", WittOp::Product},
                                                     {"negation", WittOp::Negation},
                                                     {"frobenius", WittOp::Frobenius},
                                                     {"delta", WittOp::Delta}};
      auto it = ops.find(op_name);
      if (it == ops.end()) fail(Errc::ParseError, "unknown op: " + op_name);
      for (int i = 0; i <= max_index; ++i) {
        auto poly = universal_poly(cfg.p, it->second, i, std::max(max_index, 6));
        emit(cfg, ordered_json{{"op", op_name}, {"index", i}, {"poly", elem_to_json(poly)}},
             op_name + "_" + std::to_string(i) + " = " + poly.str());
      }
    } else if (dl->parsed()) {
      auto A = DeltaRing::free_delta_ring(free_vars, cfg.D, cfg.prec());
      if (dl_free->parsed()) {
        ordered_json rules = ordered_json::array();
        std::string txt;
        for (size_t v = 0; v < A.carrier()->nvars(); ++v) {
          const auto& r = A.delta_of(v);
          rules.push_back(r ? ordered_json(r->str()) : ordered_json(nullptr));
          txt += "delta(" + A.carrier()->vars()[v] + ") = " + (r ? r->str() : "<free>") + "\n";
        }
        emit(cfg,
             ordered_json{{"vars", A.carrier()->vars()}, {"depth", cfg.D}, {"rule_table", rules}},
             A.carrier()->id() + "\n" + txt);
      } else if (dl_apply->parsed() || dl_phi->parsed()) {
        auto a = elem_from_json(read_json_file(ins[0]));
        if (!a.spec()->same(*A.carrier()))
          fail(Errc::SpecMismatch, "element lives in " + a.spec()->id() + ", expected " +
                                       A.carrier()->id());
        emit_elem(cfg, dl_apply->parsed() ? A.delta(a) : A.phi(a));
      } else if (dl_lift->parsed()) {
        auto S = RingSpec::parse(target_id);
        std::vector<RingElem> f;
        for (const auto& fp : image_files) f.push_back(elem_from_json(read_json_file(fp)));
        // images of the higher delta^j x_i default to 0 when omitted
        while (f.size() < A.carrier()->nvars()) f.push_back(RingElem::zero(S));
        auto L = delta_lift_hom(A, f, cfg.n, S);
        ordered_json j = ordered_json::array();
        std::string txt;
        for (const auto& w : L.gen_images) {
          j.push_back(witt_to_json(w));
          txt += w.str() + "\n";
        }
        emit(cfg, j, txt);
      }
    } else if (pr->parsed()) {
      auto P = make_prism(cfg, catalog, eisenstein, K);
      const std::string sub = pr->get_subcommands().at(0)->get_name();
      if (sub == "new") {
        emit(cfg,
             ordered_json{{"catalog", prism_catalog_name(P.catalog)},
                          {"carrier", P.A.carrier()->id()},
                          {"d", elem_to_json(P.d)},
                          {"p", P.A.p()}},
             std::string(prism_catalog_name(P.catalog)) + ": (" + P.A.carrier()->id() + ", d = " +
                 P.d.str() + ")");
      } else if (sub == "check") {
        auto rep = is_distinguished(P.A, P.d);
        ordered_json j{{"distinguished", rep.distinguished}, {"delta_unit", rep.delta_unit}};
        std::string txt = std::string("distinguished: ") + (rep.distinguished ? "true" : "false") +
                          "\ndelta_unit: " + (rep.delta_unit ? "true" : "false");
        if (rep.witness) {
          j["witness"] = ordered_json{{"a", elem_to_json(rep.witness->first)},
                                      {"b", elem_to_json(rep.witness->second)}};
          txt += "\np = (" + rep.witness->first.str() + ") * d + (" + rep.witness->second.str() +
                 ") * phi(d)";
        }
        emit(cfg, j, txt);
      } else if (sub == "envelope") {
        auto E = prismatic_envelope(P, parse_numerators(P, numerators), cfg.D);
        ordered_json rels = ordered_json::array();
        std::string txt = E.ext->id() + "\n";
        for (const auto& r : E.relations) {
          ordered_json rj{{"k", r.k},
                          {"i", r.i},
                          {"oriented", r.oriented},
                          {"residual", r.residual.str()}};
          if (r.oriented) {
            rj["rule_var"] = E.ext->vars()[static_cast<size_t>(r.rule_var)];
            rj["rule_rhs"] = r.rule_rhs.str();
            txt += E.ext->vars()[static_cast<size_t>(r.rule_var)] + " -> " + r.rule_rhs.str() + "\n";
          } else {
            txt += "unoriented: " + r.residual.str() + " = 0\n";
          }
          rels.push_back(rj);
        }
        emit(cfg,
             ordered_json{{"ext", E.ext->id()},
                          {"depth", E.depth},
                          {"relations", rels},
                          {"confluence_diagnostic", E.confluence_diagnostic}},
             txt);
      } else if (sub == "points") {
        auto E = prismatic_envelope(P, parse_numerators(P, numerators), cfg.D);
        auto S = RingSpec::parse(target_id);
        std::vector<WittVector> base_images;
        for (const auto& f : image_files) base_images.push_back(witt_from_json(read_json_file(f)));
        auto pts = envelope_points(E, S, cfg.n, base_images, cfg.budget);
        std::vector<std::string> keys;
        ordered_json arr = ordered_json::array();
        std::vector<ordered_json> rows;
        for (const auto& tup : pts.set_a) {
          ordered_json row = ordered_json::array();
          std::string key;
          for (const auto& h : tup) {
            row.push_back(witt_to_json(h));
            key += h.str() + " ";
          }
          rows.push_back(std::move(row));
          keys.push_back(key);
        }
        std::vector<size_t> order(rows.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](size_t a, size_t b) { return keys[a] < keys[b]; });
        std::string txt;
        for (size_t i : order) {
          arr.push_back(rows[i]);
          txt += keys[i] + "\n";
        }
        emit(cfg,
             ordered_json{{"equal", pts.equal},
                          {"count", pts.set_a.size()},
                          {"points", arr}},
             std::string("A = B: ") + (pts.equal ? "true" : "false") + ", count " +
                 std::to_string(pts.set_a.size()) + "\n" + txt);
      }
    } else if (ht->parsed()) {
      if (ht_solve->parsed()) {
        auto R = RingSpec::parse(target_id);
        auto sols = solve_frobenius_equation({R, cfg.p, cfg.n, m_exp, cfg.budget});
        std::sort(sols.begin(), sols.end(),
                  [](const WittVector& a, const WittVector& b) { return a.str() < b.str(); });
        ordered_json arr = ordered_json::array();
        std::string txt;
        for (const auto& s : sols) {
          arr.push_back(witt_to_json(s));
          txt += s.str() + "\n";
        }
        emit(cfg, arr, txt);
      } else if (ht_star->parsed()) {
        emit_elem(cfg, star_product(elem_from_json(read_json_file(ins[0])),
                                    elem_from_json(read_json_file(ins[1])),
                                    elem_from_json(read_json_file(c_file))));
      } else if (ht_gl->parsed()) {
        const int M = cfg.M;
        auto E = exp_G(M), L = log_G(M);
        bool log_exp = L.subst_x(E, M) == QPoly::var_x() && E.subst_x(L, M) == QPoly::var_x();
        bool hom = E.subst_x(QPoly::var_x() + QPoly::var_y(), M) ==
                   qp_star(E, E.subst_x(QPoly::var_y(), M), M);
        ordered_json j{{"order", M}, {"log_exp_identity", log_exp}, {"exp_additive_to_star", hom}};
        std::string txt = "order " + std::to_string(M) + ": log/exp inverse " +
                          (log_exp ? "ok" : "FAILED") + ", exp additive-to-star " +
                          (hom ? "ok" : "FAILED");
        if (!eisenstein.empty()) {
          auto rep = integrality_profile(parse_eisenstein(eisenstein), cfg.p, M);
          ordered_json ts = ordered_json::array();
          bool all = true;
          for (const auto& t : rep.terms) {
            ts.push_back(ordered_json{{"n", t.n},
                                      {"exp_integral", t.exp_integral},
                                      {"log_integral", t.log_integral}});
            all = all && t.exp_integral && t.log_integral;
          }
          j["v_eprime"] = rep.v_eprime.get_str();
          j["boundary"] = rep.boundary;
          j["terms"] = ts;
          txt += "\nv(E'(pi)) = " + rep.v_eprime.get_str() +
                 (rep.boundary ? " (boundary)" : "") + ", all coefficients integral: " +
                 (all ? "true" : "false");
        }
        emit(cfg, j, txt);
      } else if (ht_log->parsed()) {
        auto S = RingSpec::integers_mod_pn(cfg.p, cfg.N);
        auto r = prismatic_log(RingElem::constant(S, Int(z_text)), terms);
        emit(cfg, ordered_json{{"value", elem_to_json(r.value)}, {"lost", r.lost}},
             "log(1 + p z)/p = " + r.value.str() + " in " + S->id());
      }
    } else if (vf->parsed()) {
      return run_verify(cfg, check_name, corrupt);
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
