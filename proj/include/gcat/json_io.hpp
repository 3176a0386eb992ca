#pragma once

// JSON export of the graded modular data, and re-ingestion that recomputes
// the classification flags from the serialized table alone. The exact values
// travel as cyclotomic text ("N; c0, c1, ...") so a round trip is bit-exact.

#include "gcat/surgery.hpp"

#include <json.hpp>

namespace gcat {

using json = nlohmann::json;

inline json modular_data_to_json(const GradedModularData& data,
                                 const ClassificationReport& report) {
    const AlcoveSpec& spec = data.spec;
    const RootSystemData& rs = spec.root_system();
    json j;
    j["cartan"] = rs.type.name();
    j["rank"] = rs.rank;
    j["r"] = spec.r;
    j["zeta_exponent"] = spec.zeta_exponent;
    j["case"] = case_name(spec.cse);
    j["order_N"] = spec.N;
    j["k"] = spec.k;
    j["table1"] = {{"d", rs.d},
                   {"D", rs.D},
                   {"h", rs.h},
                   {"h_dual", rs.h_dual},
                   {"center", rs.center.invariants}};

    json simples = json::array();
    for (size_t i = 0; i < data.size(); ++i) {
        auto approx = data.qdim[i].embed(1);
        simples.push_back({{"index", i},
                           {"mu", data.alcove.simples[i].mu},
                           {"grade", data.alcove.grades[i]},
                           {"qdim", data.qdim[i].str()},
                           {"qdim_approx", {approx.real(), approx.imag()}},
                           {"twist_exponent", data.twist_exp[i]}});
    }
    j["simples"] = std::move(simples);

    json smat = json::array();
    for (size_t i = 0; i < data.size(); ++i) {
        json row = json::array();
        for (size_t k = 0; k < data.size(); ++k) row.push_back(data.smat[i][k].str());
        smat.push_back(std::move(row));
    }
    j["smat"] = std::move(smat);

    auto delta_map = [&](const std::map<CenterGroup::Elem, CycNum>& m) {
        json out = json::object();
        for (const auto& [grade, val] : m) out[CenterGroup::elem_str(grade)] = val.str();
        return out;
    };
    j["delta"] = delta_map(data.delta);
    j["delta_plus"] = delta_map(data.delta_plus);
    j["delta_minus"] = delta_map(data.delta_minus);

    json transparent = json::array();
    for (size_t i : report.transparent) transparent.push_back(data.alcove.simples[i].mu);
    j["flags"] = {{"weakly_nondegenerate", report.weakly_nondegenerate},
                  {"regular", report.regular},
                  {"g_modular", report.g_modular},
                  {"ungraded_modular", report.ungraded_modular},
                  {"transparent", std::move(transparent)}};
    return j;
}

struct JsonVerification {
    ClassificationReport recomputed;
    std::vector<std::string> mismatches;

    bool ok() const { return mismatches.empty(); }
};

// Recompute the classification from the serialized table and compare with the
// stored flags. Nothing from the live build path is reused.
inline JsonVerification verify_modular_data_json(const json& j) {
    JsonVerification out;
    long order = j.at("order_N").get<long>();

    std::vector<CycNum> qdim;
    std::vector<CenterGroup::Elem> grades;
    for (const auto& s : j.at("simples")) {
        qdim.push_back(CycNum::parse(s.at("qdim").get<std::string>()));
        grades.push_back(s.at("grade").get<CenterGroup::Elem>());
    }
    const size_t n = qdim.size();
    std::vector<std::vector<CycNum>> smat(n, std::vector<CycNum>(n));
    const auto& sm = j.at("smat");
    if (sm.size() != n) throw spec_error("smat size disagrees with simple count");
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k)
            smat[i][k] = CycNum::parse(sm.at(i).at(k).get<std::string>());

    auto parse_delta = [&](const char* key) {
        std::map<CenterGroup::Elem, CycNum> m;
        std::map<std::string, CenterGroup::Elem> grade_of;
        for (const auto& g : grades) grade_of[CenterGroup::elem_str(g)] = g;
        for (const auto& [gs, val] : j.at(key).items()) {
            auto it = grade_of.find(gs);
            if (it == grade_of.end()) throw spec_error("delta grade not among the simples");
            m.emplace(it->second, CycNum::parse(val.get<std::string>()));
        }
        return m;
    };
    auto delta_plus = parse_delta("delta_plus");
    auto delta_minus = parse_delta("delta_minus");

    CenterGroup::Elem zero(grades.empty() ? 0 : grades[0].size(), 0);
    detail::ModularTableView view{order, &smat, &qdim, &grades, &delta_plus, &delta_minus, zero};
    out.recomputed = detail::classify_core(view);

    const auto& flags = j.at("flags");
    auto check = [&](const char* name, bool have) {
        bool stored = flags.at(name).get<bool>();
        if (stored != have)
            out.mismatches.push_back(std::string(name) + ": stored " + (stored ? "true" : "false") +
                                     ", recomputed " + (have ? "true" : "false"));
    };
    check("weakly_nondegenerate", out.recomputed.weakly_nondegenerate);
    check("regular", out.recomputed.regular);
    check("g_modular", out.recomputed.g_modular);
    check("ungraded_modular", out.recomputed.ungraded_modular);

    std::vector<std::vector<long>> stored_transparent;
    for (const auto& t : flags.at("transparent"))
        stored_transparent.push_back(t.get<std::vector<long>>());
    std::vector<std::vector<long>> recomputed_transparent;
    for (size_t i : out.recomputed.transparent)
        recomputed_transparent.push_back(j.at("simples").at(i).at("mu").get<std::vector<long>>());
    if (stored_transparent != recomputed_transparent)
        out.mismatches.push_back("transparent: stored set differs from recomputed set");
    return out;
}

inline PlumbingForest plumbing_from_json(const json& j) {
    PlumbingForest f;
    try {
        f.framings = j.at("vertices").get<std::vector<long>>();
        for (const auto& e : j.at("edges")) {
            if (e.size() != 2) throw spec_error("edge needs two endpoints");
            f.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        }
    } catch (const json::exception& ex) {
        throw spec_error(std::string("malformed plumbing document: ") + ex.what());
    }
    validate_forest(f);
    return f;
}

}  // namespace gcat
