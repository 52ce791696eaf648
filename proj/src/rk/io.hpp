#pragma once

#include "rees.hpp"

#include <json.hpp>

#include <string>

namespace rk {

struct Instance {
    std::string id;
    PolyMatrix phi;
};

// Instance files: {"id": ..., "n": ..., "field": "QQ"|"GF(p)",
// "matrix": [[entry strings, row-major]]}. The matrix must be n x (n-1).
Instance load_instance(const std::string& path, const Field& field_override,
                       bool has_override, MonomialOrder order = {});
Field parse_field(const std::string& text);  // "q", "QQ", "gf:p", "GF(p)"

// Generators as strings, monic, descending by leading monomial.
std::vector<std::string> ideal_strings(const Ideal& I);
nlohmann::json json_of(const Ideal& I);
nlohmann::json json_of(const SettingReport& rep);
nlohmann::json json_of(const CaseLabel& label);
nlohmann::json json_of(const PencilInvariants& inv);
nlohmann::json json_of(const PolyMatrix& M);

} // namespace rk
