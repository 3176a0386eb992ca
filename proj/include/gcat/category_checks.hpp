#pragma once

// Category-level predicates over the computed modular data, and the
// arithmetic criteria that predict them from (series, rank, r) alone:
//
//   weakly non-degenerate:  Delta^+_0 * Delta^-_0 != 0
//   regular:                weakly non-degenerate and every transparent
//                           simple sits in the neutral component
//   G-modular:              [S]_{I0 x I0} invertible (exact determinant)
//   modular (ungraded):     the full S-matrix is invertible
//
// Transparency is decided by the S-row criterion: mu is transparent against
// the neutral component iff S(mu, nu) = qdim(mu) qdim(nu) for all nu in I_0.
// cross_validate compares the computed flags with the predictions; the
// predictions are one-directional implications except for weak
// non-degeneracy on the A and D series, where the source states an exact
// characterization.

#include "gcat/modular_data.hpp"

#include <sstream>

namespace gcat {

// Exact determinant by fraction-full Gaussian elimination over Q(zeta_N).
inline CycNum cyclotomic_determinant(std::vector<std::vector<CycNum>> m, long order) {
    const size_t n = m.size();
    CycNum det = CycNum::one(order);
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && m[p][c].is_zero()) ++p;
        if (p == n) return CycNum::zero(order);
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        CycNum inv = m[c][c].inverse();
        for (size_t i = c + 1; i < n; ++i) {
            if (m[i][c].is_zero()) continue;
            CycNum f = m[i][c] * inv;
            for (size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

// Indices of the C_0-transparent simples, by the S-row test against I_0.
inline std::vector<size_t> transparent_simples(const GradedModularData& data) {
    if (data.delta0.is_zero()) throw data_error("transparency test needs Delta_0 != 0");
    const auto& neutral = data.alcove.by_grade.at(data.spec.rs->center.zero());
    std::vector<size_t> out;
    for (size_t i = 0; i < data.size(); ++i) {
        bool ok = true;
        for (size_t j : neutral)
            if (!(data.smat[i][j] == data.qdim[i] * data.qdim[j])) {
                ok = false;
                break;
            }
        if (ok) out.push_back(i);
    }
    return out;
}

struct ClassificationReport {
    bool weakly_nondegenerate = false;
    bool regular = false;
    bool g_modular = false;
    bool ungraded_modular = false;
    bool vanish_lemma_holds = true;  // regular => Delta^+-_alpha = 0 off grade 0
    std::vector<size_t> transparent;
    std::map<std::string, std::string> witnesses;
};

namespace detail {

// Classification core shared by the live path and the JSON re-ingestion
// path: needs only the table data, not the spec.
struct ModularTableView {
    long order;  // cyclotomic order N
    const std::vector<std::vector<CycNum>>* smat;
    const std::vector<CycNum>* qdim;
    const std::vector<CenterGroup::Elem>* grades;
    const std::map<CenterGroup::Elem, CycNum>* delta_plus;
    const std::map<CenterGroup::Elem, CycNum>* delta_minus;
    CenterGroup::Elem zero_grade;
};

inline ClassificationReport classify_core(const ModularTableView& v) {
    ClassificationReport rep;
    const auto& smat = *v.smat;
    const auto& qdim = *v.qdim;
    const auto& grades = *v.grades;
    const size_t n = qdim.size();

    std::vector<size_t> neutral;
    for (size_t i = 0; i < n; ++i)
        if (grades[i] == v.zero_grade) neutral.push_back(i);

    for (size_t i = 0; i < n; ++i) {
        bool ok = true;
        for (size_t j : neutral)
            if (!(smat[i][j] == qdim[i] * qdim[j])) {
                ok = false;
                break;
            }
        if (ok) rep.transparent.push_back(i);
    }

    const CycNum& dp = v.delta_plus->at(v.zero_grade);
    const CycNum& dm = v.delta_minus->at(v.zero_grade);
    rep.weakly_nondegenerate = !(dp * dm).is_zero();
    rep.witnesses["weakly_nondegenerate"] =
        "Delta+_0 = " + dp.str() + ", Delta-_0 = " + dm.str();

    rep.regular = rep.weakly_nondegenerate;
    std::string offenders;
    for (size_t i : rep.transparent)
        if (!(grades[i] == v.zero_grade)) {
            rep.regular = false;
            offenders += " #" + std::to_string(i);
        }
    rep.witnesses["regular"] = offenders.empty() ? "M_C inside the neutral component"
                                                 : "transparent outside grade 0:" + offenders;

    std::vector<std::vector<CycNum>> s0(neutral.size(), std::vector<CycNum>(neutral.size()));
    for (size_t a = 0; a < neutral.size(); ++a)
        for (size_t b = 0; b < neutral.size(); ++b) s0[a][b] = smat[neutral[a]][neutral[b]];
    CycNum det0 = cyclotomic_determinant(std::move(s0), v.order);
    rep.g_modular = !det0.is_zero();
    rep.witnesses["g_modular"] = "det S|_{I0} = " + det0.str();

    CycNum detf = cyclotomic_determinant(smat, v.order);
    rep.ungraded_modular = !detf.is_zero();
    rep.witnesses["ungraded_modular"] = "det S = " + detf.str();

    if (rep.regular) {
        for (const auto& [grade, val] : *v.delta_plus)
            if (!(grade == v.zero_grade) && !val.is_zero()) rep.vanish_lemma_holds = false;
        for (const auto& [grade, val] : *v.delta_minus)
            if (!(grade == v.zero_grade) && !val.is_zero()) rep.vanish_lemma_holds = false;
    }
    return rep;
}

}  // namespace detail

inline ClassificationReport classify(const GradedModularData& data) {
    detail::ModularTableView v{data.spec.N,
                               &data.smat,
                               &data.qdim,
                               &data.alcove.grades,
                               &data.delta_plus,
                               &data.delta_minus,
                               data.spec.rs->center.zero()};
    return detail::classify_core(v);
}

// Flags predicted by pure arithmetic on (series, rank, r, d, D, |G|, h, h').
struct PredictedFlags {
    bool g_modular = false;            // sufficient conditions
    bool regular = false;              // sufficient condition (*)
    bool weakly_nondegenerate = false;
    bool weak_exact = false;  // true when the prediction characterizes weak
                              // non-degeneracy exactly (series A and D)
};

inline PredictedFlags predicted_flags(const AlcoveSpec& spec) {
    const RootSystemData& rs = spec.root_system();
    const Series series = rs.type.series;
    const long ell = rs.rank, r = spec.r, d = rs.d, gsize = rs.center.order();
    PredictedFlags out;

    // Invertibility of the neutral S-matrix:
    //   r coprime to d|G| with r > h, or the C-series even case.
    bool ref11 = std::gcd(r, d * gsize) == 1 && r > rs.h;
    bool ref22 = series == Series::C && ell % 2 == 1 && r % 2 == 0 && r % 4 != 0 &&
                 r > d * rs.h_dual;
    out.g_modular = ref11 || ref22;

    // Regularity from the divisibility condition (*) on k = r/d - h'.
    bool case2 = spec.case2_semantics();
    bool star = false;
    if (case2) {
        long k = spec.k;
        switch (series) {
            case Series::A:
            case Series::C:
                star = (k * ell) % (2 * gsize) == 0;
                break;
            case Series::D:
                star = k % 2 == 0 && (k * ell) % (2 * gsize) == 0;
                break;
            default:
                // B, E, F and the centerless G: k divisible by |G|.
                star = k % gsize == 0;
                break;
        }
    }
    out.regular = star;

    // Weak non-degeneracy: the cases above, plus the extra windows on the
    // D (odd rank, r = 2 mod 4) and A (k l (l+1) divisible by 2 gcd(k,l+1)^2)
    // series where the characterization is exact.
    switch (series) {
        case Series::A: {
            long k = r - ell - 1;
            long s = std::gcd(k, ell + 1);
            out.weakly_nondegenerate = r > rs.h && (k * ell * (ell + 1)) % (2 * s * s) == 0;
            out.weak_exact = true;
            break;
        }
        case Series::D:
            out.weakly_nondegenerate =
                ref11 || star || (ell % 2 == 1 && r % 4 == 2 && r > rs.h);
            out.weak_exact = true;
            break;
        default:
            out.weakly_nondegenerate = ref11 || ref22 || star;
            break;
    }
    return out;
}

struct CrossValidation {
    ClassificationReport computed;
    PredictedFlags predicted;
    std::vector<std::string> mismatches;

    bool ok() const { return mismatches.empty(); }
};

inline CrossValidation cross_validate_data(const GradedModularData& data) {
    const AlcoveSpec& spec = data.spec;
    CrossValidation cv;
    cv.computed = classify(data);
    cv.predicted = predicted_flags(spec);

    auto flag = [&](const std::string& name, bool pred, bool comp, bool exact) {
        if (pred && !comp)
            cv.mismatches.push_back(name + ": predicted true, computed false (" + spec.name() + ")");
        if (exact && comp && !pred)
            cv.mismatches.push_back(name + ": computed true, predicted false (" + spec.name() + ")");
    };
    flag("g_modular", cv.predicted.g_modular, cv.computed.g_modular, false);
    flag("regular", cv.predicted.regular, cv.computed.regular, false);
    flag("weakly_nondegenerate", cv.predicted.weakly_nondegenerate,
         cv.computed.weakly_nondegenerate, cv.predicted.weak_exact);

    // Internal consistency: definitions and the vanishing lemma.
    if (cv.computed.regular && !cv.computed.weakly_nondegenerate)
        cv.mismatches.push_back("regular without weak non-degeneracy (" + spec.name() + ")");
    if (!cv.computed.vanish_lemma_holds)
        cv.mismatches.push_back("regular but some Delta^+-_alpha != 0 off grade 0 (" + spec.name() + ")");
    // Finite G throughout, so regular + G-modular must give ungraded modularity.
    if (cv.computed.regular && cv.computed.g_modular && !cv.computed.ungraded_modular)
        cv.mismatches.push_back("regular and G-modular but full S singular (" + spec.name() + ")");
    return cv;
}

inline CrossValidation cross_validate(const AlcoveSpec& spec, const BuildOptions& opt = {}) {
    return cross_validate_data(build_modular_data(spec, opt));
}

}  // namespace gcat
