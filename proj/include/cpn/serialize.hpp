#pragma once

// JSON round-trips for the algebra types (schema_version 1) and CSV number
// formatting.  Term order inside a serialized polynomial follows the packed
// exponent key, so repeated export of the same object is byte-identical.

#include "sigma.hpp"

#include <json.hpp>

#include <cstdio>
#include <string>

namespace cpn {

inline constexpr int schema_version = 1;

inline nlohmann::json to_json(const MPoly& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [key, c] : p.terms()) {
        auto e = detail::unpack_exps(key);
        // + 0.0 flushes negative zeros so a dump->parse->dump cycle is byte-stable
        terms.push_back({{"exps", {e[0], e[1], e[2], e[3]}}, {"re", c.real() + 0.0}, {"im", c.imag() + 0.0}});
    }
    return {{"arity", p.arity()}, {"terms", std::move(terms)}};
}

inline MPoly mpoly_from_json(const nlohmann::json& j) {
    MPoly p(j.at("arity").get<int>());
    for (const auto& t : j.at("terms")) {
        const auto& e = t.at("exps");
        p.set_term({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>(), e.at(3).get<int>()},
                   cplx(t.at("re").get<double>(), t.at("im").get<double>()));
    }
    return p;
}

inline nlohmann::json to_json(const RationalMat& m) {
    nlohmann::json num = nlohmann::json::array();
    for (const auto& e : m.num) num.push_back(to_json(e));
    return {{"dim", m.dim}, {"den", to_json(m.den)}, {"num", std::move(num)}};
}

inline RationalMat mat_from_json(const nlohmann::json& j) {
    RationalMat m(j.at("dim").get<int>());
    m.den = mpoly_from_json(j.at("den"));
    const auto& num = j.at("num");
    if (num.size() != m.num.size()) throw std::runtime_error("matrix entry count mismatch");
    for (std::size_t i = 0; i < m.num.size(); ++i) m.num[i] = mpoly_from_json(num[i]);
    return m;
}

inline nlohmann::json to_json(const FieldVec& f) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : f.comps) comps.push_back(to_json(c));
    return {{"den", to_json(f.den)}, {"comps", std::move(comps)}};
}

inline FieldVec field_from_json(const nlohmann::json& j) {
    std::vector<MPoly> comps;
    for (const auto& c : j.at("comps")) comps.push_back(mpoly_from_json(c));
    return FieldVec(std::move(comps), mpoly_from_json(j.at("den")));
}

inline nlohmann::json to_json(const ProjectorSeq& seq) {
    nlohmann::json projectors = nlohmann::json::array(), fields = nlohmann::json::array();
    for (const auto& p : seq.projectors) projectors.push_back(to_json(p));
    for (const auto& f : seq.fields) fields.push_back(to_json(f));
    return {{"schema_version", schema_version},
            {"n", seq.n},
            {"provenance", provenance_name(seq.provenance)},
            {"projectors", std::move(projectors)},
            {"fields", std::move(fields)}};
}

inline ProjectorSeq seq_from_json(const nlohmann::json& j) {
    if (j.at("schema_version").get<int>() != schema_version)
        throw std::runtime_error("unsupported schema version");
    ProjectorSeq seq;
    seq.n = j.at("n").get<int>();
    auto prov = provenance_from_name(j.at("provenance").get<std::string>());
    if (!prov) throw std::runtime_error("unknown provenance tag");
    seq.provenance = *prov;
    for (const auto& p : j.at("projectors")) seq.projectors.push_back(mat_from_json(p));
    for (const auto& f : j.at("fields")) seq.fields.push_back(field_from_json(f));
    if (static_cast<int>(seq.projectors.size()) != seq.n + 1)
        throw std::runtime_error("projector count does not match the model size");
    return seq;
}

// 17 significant digits: enough for an exact double round-trip.
inline std::string csv_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace cpn
