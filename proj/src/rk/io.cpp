#include "io.hpp"

#include <algorithm>
#include <fstream>

namespace rk {

using nlohmann::json;

Field parse_field(const std::string& text) {
    if (text == "q" || text == "Q" || text == "QQ") return Field{};
    std::string inner;
    if (text.rfind("gf:", 0) == 0) inner = text.substr(3);
    else if (text.rfind("GF(", 0) == 0 && text.back() == ')')
        inner = text.substr(3, text.size() - 4);
    else
        throw ParseError("unknown field spec: " + text);
    unsigned long p = 0;
    try {
        p = std::stoul(inner);
    } catch (const std::exception&) {
        throw ParseError("bad characteristic in field spec: " + text);
    }
    if (p < 2) throw ParseError("characteristic must be a prime >= 2");
    for (unsigned long d = 2; d * d <= p; ++d)
        if (p % d == 0) throw ParseError(std::to_string(p) + " is not prime");
    return Field{p};
}

Instance load_instance(const std::string& path, const Field& field_override,
                       bool has_override, MonomialOrder order) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (!j.contains("n") || !j.contains("matrix"))
        throw ParseError(path + ": instance needs \"n\" and \"matrix\"");
    int n = j["n"].get<int>();
    if (n < 2 || n > 30) throw ParseError(path + ": unreasonable n");
    Field field;
    if (has_override) field = field_override;
    else if (j.contains("field")) field = parse_field(j["field"].get<std::string>());

    Instance inst;
    inst.id = j.value("id", path);
    Ctx ctx = make_pipeline_ring(n, field, order);
    auto& rows = j["matrix"];
    if (!rows.is_array() || (int)rows.size() != n)
        throw ParseError(path + ": matrix must have n rows");
    inst.phi = PolyMatrix::zero(ctx, n, n - 1);
    for (int r = 0; r < n; ++r) {
        if (!rows[r].is_array() || (int)rows[r].size() != n - 1)
            throw ParseError(path + ": row " + std::to_string(r + 1) +
                             " must have n-1 entries");
        for (int c = 0; c < n - 1; ++c)
            inst.phi.at(r, c) = parse_poly(rows[r][c].get<std::string>(), ctx);
    }
    return inst;
}

std::vector<std::string> ideal_strings(const Ideal& I) {
    std::vector<Polynomial> gens;
    for (auto& g : I.gens)
        if (!g.is_zero()) gens.push_back(g.monic());
    const MonomialOrder& ord = I.ctx ? I.ctx->order : MonomialOrder{};
    std::sort(gens.begin(), gens.end(), [&](const Polynomial& a, const Polynomial& b) {
        return mono_cmp(a.leading().m, b.leading().m, ord) > 0;
    });
    std::vector<std::string> out;
    for (auto& g : gens) out.push_back(g.str());
    return out;
}

json json_of(const Ideal& I) { return json(ideal_strings(I)); }

json json_of(const SettingReport& rep) {
    json j;
    j["ok"] = rep.ok();
    json checks = json::object();
    for (auto& [name, v] : rep.checks) checks[name] = v;
    j["checks"] = checks;
    if (!rep.witness.empty()) j["witness"] = rep.witness;
    return j;
}

json json_of(const CaseLabel& label) {
    return json{{"case", label.str()},
                {"last_column_in_U2", label.last_in_U2},
                {"evidence", label.evidence}};
}

json json_of(const PencilInvariants& inv) {
    json j;
    j["normal_rank"] = inv.normal_rank;
    std::vector<std::string> ifs;
    for (auto& f : inv.invariant_factors) ifs.push_back(f.str());
    j["invariant_factors"] = ifs;
    json eds = json::array();
    for (auto& [f, p] : inv.elementary_divisors)
        eds.push_back(json{{"form", f.str()}, {"power", p}});
    j["elementary_divisors"] = eds;
    j["m_block_sizes"] = inv.m_block_sizes;
    j["summary"] = inv.summary_str();
    return j;
}

json json_of(const PolyMatrix& M) {
    json rows = json::array();
    for (int r = 0; r < M.rows; ++r) {
        json row = json::array();
        for (int c = 0; c < M.cols; ++c) row.push_back(M.at(r, c).str());
        rows.push_back(row);
    }
    return rows;
}

} // namespace rk
