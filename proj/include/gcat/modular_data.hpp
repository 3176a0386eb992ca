#pragma once

// Exact modular data of the category C(g, eps; zeta): quantum dimensions by
// the Weyl q-dimension product, twists zeta^{D(mu|mu+2rho)}, the Hopf-link
// matrix by Weyl character sums, and the Gauss sums Delta_alpha,
// Delta^+-_alpha. Everything lives in Q(zeta_N) with N = 2 D r and
// zeta = zeta_N^s, eps = zeta^D.
//
// The S-entry against the unit object is evaluated through the q-dimension
// product instead of the character sum; the two routes agree and the product
// form stays usable when the Weyl group is too large to enumerate (the
// unit-row entries are all such a spec needs). The unit tests compare both
// routes on small ranks.

#include "gcat/alcove.hpp"
#include "gcat/cyclotomic.hpp"

#include <atomic>

namespace gcat {

struct BuildOptions {
    Caps caps;
    int parallelism = 1;
};

namespace detail {

// zeta_N^{s*e} as a CycNum, exponent e given in zeta-units.
inline CycNum zeta_power(const AlcoveSpec& spec, long e) {
    return CycNum::root(spec.N, pos_mod(spec.zeta_exponent * pos_mod(e, spec.N), spec.N));
}

// eps^a - eps^{-a} with eps = zeta^D; a q-integer numerator.
inline CycNum eps_bracket(const AlcoveSpec& spec, long a) {
    long da = spec.rs->D * a;
    return zeta_power(spec, da) - zeta_power(spec, -da);
}

}  // namespace detail

// Weyl q-dimension: prod over positive roots of [ (mu+rho|alpha) ] / [ (rho|alpha) ].
inline CycNum quantum_dimension(const AlcoveSpec& spec, const SimpleIdx& mu) {
    const RootSystemData& rs = spec.root_system();
    WeightVec shifted = mu.weight() + rs.rho;
    CycNum num = CycNum::one(spec.N), den = CycNum::one(spec.N);
    for (const auto& alpha : rs.positive_roots) {
        num *= detail::eps_bracket(spec, to_long(rs.inner_product(shifted, alpha)));
        den *= detail::eps_bracket(spec, to_long(rs.inner_product(rs.rho, alpha)));
    }
    if (den.is_zero()) throw data_error("vanishing q-dimension denominator for " + spec.name());
    return num / den;
}

// Ribbon eigenvalue zeta^{D(mu|mu+2rho)}; the exponent is integral by the
// defining property of D.
inline long twist_exponent(const AlcoveSpec& spec, const SimpleIdx& mu) {
    const RootSystemData& rs = spec.root_system();
    WeightVec w = mu.weight();
    Rational q = Rational(rs.D) * rs.inner_product(w, w + rs.rho + rs.rho);
    return pos_mod(to_long(q), spec.N);
}

inline CycNum twist_scalar(const AlcoveSpec& spec, const SimpleIdx& mu) {
    return detail::zeta_power(spec, twist_exponent(spec, mu));
}

// zeta^q for an exponent in zeta units that the theory promises to be an
// integer (e.g. D * 2r(glift|mu)); non-integrality means inconsistent data.
inline CycNum zeta_power_exact(const AlcoveSpec& spec, const Rational& exponent) {
    if (!is_integral(exponent))
        throw data_error("non-integral zeta exponent " + exponent.get_str() + " for " + spec.name());
    return detail::zeta_power(spec, to_long(exponent));
}

// eps^q = zeta^{D q}; q itself may be a rational with denominator dividing D.
inline CycNum eps_power_exact(const AlcoveSpec& spec, const Rational& exponent) {
    return zeta_power_exact(spec, Rational(spec.rs->D) * exponent);
}

struct GradedModularData {
    AlcoveSpec spec;
    Alcove alcove;
    std::vector<CycNum> qdim;
    std::vector<CycNum> twist;
    std::vector<long> twist_exp;  // zeta-exponent of the twist
    std::vector<std::vector<CycNum>> smat;
    std::map<CenterGroup::Elem, CycNum> delta;        // Delta_alpha
    std::map<CenterGroup::Elem, CycNum> delta_plus;   // Delta^+_alpha
    std::map<CenterGroup::Elem, CycNum> delta_minus;  // Delta^-_alpha
    CycNum delta0;

    size_t size() const { return alcove.size(); }
    const CycNum& s_entry(size_t i, size_t j) const { return smat[i][j]; }
    const CenterGroup::Elem& grade(size_t i) const { return alcove.grades[i]; }
    const CycNum& delta_plus0() const { return delta_plus.at(spec.rs->center.zero()); }
    const CycNum& delta_minus0() const { return delta_minus.at(spec.rs->center.zero()); }
};

namespace detail {

// Signed orbit of nu+rho prepared for fast exponent evaluation: each orbit
// point y is stored as the integer vector 2D * Gram * y, so the character
// exponent against mu+rho is a plain integer dot product.
struct PreparedOrbit {
    std::vector<std::vector<long>> rows;
    std::vector<int> signs;
};

inline PreparedOrbit prepare_orbit(const AlcoveSpec& spec, const WeightVec& x, long cap) {
    const RootSystemData& rs = spec.root_system();
    PreparedOrbit po;
    for (auto& [y, sgn] : rs.weyl_orbit_signed(x, cap)) {
        std::vector<long> row(rs.rank);
        for (int i = 0; i < rs.rank; ++i) {
            Rational acc(0);
            for (int j = 0; j < rs.rank; ++j) acc += rs.fw_gram[i][j] * y.c[j];
            row[i] = to_long(Rational(2 * rs.D) * acc);
        }
        po.rows.push_back(std::move(row));
        po.signs.push_back(sgn);
    }
    return po;
}

// sum over the orbit of sgn * zeta^{s * (mu+rho . row)} as a raw coefficient
// vector, reduced once at the end.
inline CycNum orbit_character_sum(const AlcoveSpec& spec, const PreparedOrbit& po,
                                  const std::vector<long>& shifted_mu) {
    std::vector<Rational> raw(spec.N, Rational(0));
    for (size_t t = 0; t < po.rows.size(); ++t) {
        long e = 0;
        for (size_t i = 0; i < shifted_mu.size(); ++i) e += shifted_mu[i] * po.rows[t][i];
        long slot = pos_mod(spec.zeta_exponent * pos_mod(e, spec.N), spec.N);
        raw[slot] += po.signs[t];
    }
    return CycNum::from_raw(spec.N, std::move(raw));
}

}  // namespace detail

// Weyl character sum route for the Hopf entry, no special casing. Needs the
// Weyl group under the cap.
inline CycNum hopf_pairing_character_sum(const AlcoveSpec& spec, const SimpleIdx& mu,
                                         const SimpleIdx& nu, const Caps& caps = {}) {
    const RootSystemData& rs = spec.root_system();
    long cap = caps.weyl_group;
    auto orbit = detail::prepare_orbit(spec, nu.weight() + rs.rho, cap);
    auto rho_orbit = detail::prepare_orbit(spec, rs.rho, cap);

    std::vector<long> shifted(rs.rank);
    for (int i = 0; i < rs.rank; ++i) shifted[i] = mu.mu[i] + 1;
    std::vector<long> rho_coords(rs.rank, 1);

    CycNum den = detail::orbit_character_sum(spec, rho_orbit, rho_coords);
    if (den.is_zero()) throw data_error("vanishing Weyl denominator for " + spec.name());
    return detail::orbit_character_sum(spec, orbit, shifted) / den;
}

// Hopf link entry <H(Lambda_mu, Lambda_nu)>. Entries against the unit object
// go through the q-dimension product, which agrees with the character sum
// and stays usable above the Weyl cap; other entries use the character sum.
inline CycNum hopf_pairing(const AlcoveSpec& spec, const SimpleIdx& mu, const SimpleIdx& nu,
                           const Caps& caps = {}) {
    auto is_zero_weight = [](const SimpleIdx& s) {
        return std::all_of(s.mu.begin(), s.mu.end(), [](long v) { return v == 0; });
    };
    if (is_zero_weight(mu)) return quantum_dimension(spec, nu);
    if (is_zero_weight(nu)) return quantum_dimension(spec, mu);
    return hopf_pairing_character_sum(spec, mu, nu, caps);
}

inline GradedModularData build_modular_data(const AlcoveSpec& spec, const BuildOptions& opt = {}) {
    const RootSystemData& rs = spec.root_system();
    GradedModularData data{spec, enumerate_alcove(spec)};
    const size_t n = data.alcove.size();

    data.qdim.resize(n);
    data.twist.resize(n);
    data.twist_exp.resize(n);
    for (size_t i = 0; i < n; ++i) {
        data.qdim[i] = quantum_dimension(spec, data.alcove.simples[i]);
        if (data.qdim[i].is_zero())
            throw data_error("vanishing quantum dimension inside the alcove for " + spec.name());
        data.twist_exp[i] = twist_exponent(spec, data.alcove.simples[i]);
        data.twist[i] = detail::zeta_power(spec, data.twist_exp[i]);
    }
    if (!(data.qdim[0] == CycNum::one(spec.N)) || !(data.twist[0] == CycNum::one(spec.N)))
        throw data_error("unit object has nontrivial dimension or twist");

    // S-matrix. Rows against the unit object are q-dimensions; other rows
    // need Weyl sums, which is where the group-size cap applies.
    data.smat.assign(n, std::vector<CycNum>(n, CycNum::zero(spec.N)));
    bool need_weyl = n > 1;
    if (need_weyl && rs.weyl_order > opt.caps.weyl_group)
        throw cap_error("S-matrix of " + spec.name() + " needs a Weyl group of order " +
                        rs.weyl_order.get_str() + ", above the cap");

    for (size_t j = 0; j < n; ++j) {
        data.smat[0][j] = data.qdim[j];
        data.smat[j][0] = data.qdim[j];
    }
    if (need_weyl) {
        auto rho_orbit = detail::prepare_orbit(spec, rs.rho, opt.caps.weyl_group);
        std::vector<long> rho_coords(rs.rank, 1);
        CycNum den = detail::orbit_character_sum(spec, rho_orbit, rho_coords);
        if (den.is_zero()) throw data_error("vanishing Weyl denominator for " + spec.name());
        CycNum den_inv = den.inverse();

        parallel_for(static_cast<long>(n) - 1, opt.parallelism, [&](long off) {
            size_t j = static_cast<size_t>(off) + 1;
            auto orbit = detail::prepare_orbit(spec, data.alcove.simples[j].weight() + rs.rho,
                                               opt.caps.weyl_group);
            std::vector<long> shifted(rs.rank);
            for (size_t i = 1; i <= j; ++i) {
                for (int t = 0; t < rs.rank; ++t) shifted[t] = data.alcove.simples[i].mu[t] + 1;
                CycNum v = detail::orbit_character_sum(spec, orbit, shifted) * den_inv;
                data.smat[i][j] = v;
                data.smat[j][i] = std::move(v);
            }
        });
    }

    for (const auto& [grade, members] : data.alcove.by_grade) {
        CycNum d0 = CycNum::zero(spec.N), dp = CycNum::zero(spec.N), dm = CycNum::zero(spec.N);
        for (size_t i : members) {
            CycNum sq = data.qdim[i] * data.qdim[i];
            d0 += sq;
            dp += data.twist[i] * sq;
            dm += detail::zeta_power(spec, -data.twist_exp[i]) * sq;
        }
        data.delta.emplace(grade, std::move(d0));
        data.delta_plus.emplace(grade, std::move(dp));
        data.delta_minus.emplace(grade, std::move(dm));
    }
    data.delta0 = data.delta.at(rs.center.zero());
    if (data.delta0.is_zero()) throw data_error("Delta_0 vanishes for " + spec.name());
    return data;
}

// Puncture-free genus-n block dimension D^{2n-2} * sum over I_0 of
// qdim^{2-2n}; the even power of the global constant keeps the value in the
// base field.
inline RadicalScalar block_dimension(const GradedModularData& data, long genus) {
    if (genus < 1) throw spec_error("genus must be at least 1");
    const auto& neutral = data.alcove.by_grade.at(data.spec.rs->center.zero());
    CycNum acc = CycNum::zero(data.spec.N);
    for (size_t i : neutral) acc += data.qdim[i].pow(2 - 2 * genus);
    return RadicalScalar(std::move(acc), 2 * genus - 2, data.delta0);
}

}  // namespace gcat
