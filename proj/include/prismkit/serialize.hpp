#pragma once

#include <json.hpp>

#include "prismkit/ring.hpp"

namespace prismkit {

// Canonical element encoding: {"spec_id": ..., "terms": [{"monomial":
// [[var, exp], ...], "coeff": "decimal"}]}, terms in graded-lex order.
// Round-trips bit-exactly.
nlohmann::ordered_json elem_to_json(const RingElem& a);
RingElem elem_from_json(const nlohmann::json& j);

std::string elem_to_string(const RingElem& a);
RingElem elem_from_string(const std::string& text);

}  // namespace prismkit
