#include "gcat/modular_data.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace gcat;

namespace {

SimpleIdx si(std::initializer_list<long> mu) { return SimpleIdx{std::vector<long>(mu)}; }

AlcoveSpec spec_of(const char* name, long r, long zeta = 1) {
    return make_alcove_spec(build_root_system(CartanType::parse(name)), r, zeta);
}

// Independent q-integer oracle [n] at eps = zeta_N^{s D}.
CycNum q_int(const AlcoveSpec& spec, long n) {
    CycNum eps = CycNum::root(spec.N, spec.zeta_exponent * spec.rs->D);
    return (eps.pow(n) - eps.pow(-n)) / (eps - eps.pow(-1));
}

}  // namespace

TEST_CASE("A1 quantum dimensions are q-integers") {
    AlcoveSpec spec = spec_of("A1", 5);
    for (long n = 0; n < 4; ++n)
        CHECK(quantum_dimension(spec, si({n})) == q_int(spec, n + 1));
    CycNum q3 = quantum_dimension(spec, si({3}));
    CHECK(q3 * q3 == CycNum::one(spec.N));
}

TEST_CASE("quantum dimensions are nonzero with totally real squares") {
    for (auto [name, r] : std::vector<std::pair<const char*, long>>{
             {"A1", 6}, {"A2", 7}, {"B2", 8}, {"G2", 11}, {"C3", 10}}) {
        AlcoveSpec spec = spec_of(name, r);
        Alcove alc = enumerate_alcove(spec);
        INFO(spec.name());
        CHECK(quantum_dimension(spec, alc.simples[0]) == CycNum::one(spec.N));
        for (const auto& mu : alc.simples) {
            CycNum q = quantum_dimension(spec, mu);
            REQUIRE_FALSE(q.is_zero());
            CycNum sq = q * q;
            for (long j = 1; j < spec.N; ++j) {
                if (std::gcd(j, spec.N) != 1) continue;
                auto z = sq.embed(j);
                CHECK(std::abs(z.imag()) < 1e-9);
                CHECK(z.real() > 0);
            }
        }
    }
}

TEST_CASE("A1 twists are zeta^{n(n+2)}") {
    AlcoveSpec spec = spec_of("A1", 5);
    for (long n = 0; n < 4; ++n) CHECK(twist_exponent(spec, si({n})) == (n * (n + 2)) % 20);
    CHECK(twist_scalar(spec, si({3})) == CycNum::root(20, 15));
    CHECK(twist_scalar(spec, si({0})) == CycNum::one(20));
}

TEST_CASE("twists are invariant under duality") {
    for (auto [name, r] : std::vector<std::pair<const char*, long>>{{"A2", 7}, {"D4", 8}, {"B2", 9}}) {
        AlcoveSpec spec = spec_of(name, r);
        Alcove alc = enumerate_alcove(spec);
        INFO(spec.name());
        for (const auto& mu : alc.simples) {
            SimpleIdx dual{spec.rs->dual_weight(mu.weight()).integral_coords()};
            CHECK(twist_scalar(spec, mu) == twist_scalar(spec, dual));
        }
    }
}

TEST_CASE("A1 Hopf pairing matches the closed q-integer form") {
    for (long r = 3; r <= 12; ++r) {
        AlcoveSpec spec = spec_of("A1", r);
        INFO("r=" << r);
        for (long m = 0; m < r - 1; ++m)
            for (long n = 0; n < r - 1; ++n)
                CHECK(hopf_pairing(spec, si({m}), si({n})) == q_int(spec, (m + 1) * (n + 1)));
    }
    AlcoveSpec s5 = spec_of("A1", 5);
    CHECK(hopf_pairing(s5, si({2}), si({2})) == -CycNum::one(20));
}

TEST_CASE("character-sum route agrees with the q-dimension route on the unit row") {
    for (auto [name, r] : std::vector<std::pair<const char*, long>>{
             {"A1", 5}, {"A1", 6}, {"A2", 7}, {"B2", 8}, {"G2", 11}, {"C3", 10}}) {
        AlcoveSpec spec = spec_of(name, r);
        Alcove alc = enumerate_alcove(spec);
        SimpleIdx zero{std::vector<long>(spec.rs->rank, 0)};
        INFO(spec.name());
        for (const auto& mu : alc.simples) {
            CHECK(hopf_pairing_character_sum(spec, zero, mu) == quantum_dimension(spec, mu));
            CHECK(hopf_pairing_character_sum(spec, mu, zero) == quantum_dimension(spec, mu));
        }
    }
}

TEST_CASE("built data satisfies the structural identities") {
    for (auto [name, r] : std::vector<std::pair<const char*, long>>{
             {"A1", 5}, {"A1", 6}, {"A2", 7}, {"B2", 8}, {"B2", 9}, {"C3", 10}}) {
        AlcoveSpec spec = spec_of(name, r);
        GradedModularData data = build_modular_data(spec);
        INFO(spec.name());

        // Symmetry and the unit row.
        for (size_t i = 0; i < data.size(); ++i)
            for (size_t j = 0; j <= i; ++j) CHECK(data.smat[i][j] == data.smat[j][i]);
        for (size_t j = 0; j < data.size(); ++j) CHECK(data.smat[0][j] == data.qdim[j]);
        CHECK(data.twist[0] == CycNum::one(spec.N));

        // Delta_alpha = Delta_0 for every grade, nonzero.
        REQUIRE_FALSE(data.delta0.is_zero());
        for (const auto& [grade, val] : data.delta) CHECK(val == data.delta0);

        // Hopf entries are duality-invariant.
        for (size_t i = 0; i < data.size(); ++i) {
            SimpleIdx di{spec.rs->dual_weight(data.alcove.simples[i].weight()).integral_coords()};
            size_t ii = data.alcove.index_of(di);
            for (size_t j = 0; j < data.size(); ++j) {
                SimpleIdx dj{spec.rs->dual_weight(data.alcove.simples[j].weight()).integral_coords()};
                CHECK(data.smat[i][j] == data.smat[ii][data.alcove.index_of(dj)]);
            }
        }
    }
}

TEST_CASE("A1 r=5 Gauss sums in golden-ratio arithmetic") {
    AlcoveSpec spec = spec_of("A1", 5);
    GradedModularData data = build_modular_data(spec);
    CycNum phi = q_int(spec, 3);
    CHECK(data.delta0 == CycNum(Rational(2), 20) + phi);
    CHECK(data.delta.at({1}) == data.delta0);
}

TEST_CASE("A1 r=6 twisted sums vanish off the neutral grade") {
    GradedModularData data = build_modular_data(spec_of("A1", 6));
    CHECK(data.delta_plus.at({1}).is_zero());
    CHECK(data.delta_minus.at({1}).is_zero());
    CHECK_FALSE(data.delta_plus0().is_zero());
    CHECK_FALSE(data.delta_minus0().is_zero());
    // Delta^+_1 is 3 zeta^3 (1 + zeta^12) termwise.
    CycNum z3 = CycNum::root(24, 3), z12 = CycNum::root(24, 12);
    CHECK(CycNum(Rational(3), 24) * z3 * (CycNum::one(24) + z12) == data.delta_plus.at({1}));
}

TEST_CASE("second symmetry: squared dimensions and Hopf entries") {
    for (auto [name, r] : std::vector<std::pair<const char*, long>>{
             {"A1", 5}, {"A1", 6}, {"A2", 7}, {"B2", 8}, {"C3", 10}}) {
        AlcoveSpec spec = spec_of(name, r);
        GradedModularData data = build_modular_data(spec);
        GPrime gp = gprime_elements(spec);
        INFO(spec.name());
        for (const auto& g : gp.elements) {
            for (size_t nu = 0; nu < data.size(); ++nu) {
                SimpleIdx moved = gprime_dot(spec, g, data.alcove.simples[nu]);
                size_t gnu = data.alcove.index_of(moved);
                CHECK(data.qdim[gnu] * data.qdim[gnu] == data.qdim[nu] * data.qdim[nu]);
                for (size_t mu = 0; mu < data.size(); ++mu) {
                    Rational pairing =
                        spec.rs->inner_product(g.lift, data.alcove.simples[mu].weight());
                    CycNum phase = eps_power_exact(spec, Rational(2 * spec.r) * pairing);
                    CHECK(data.smat[mu][gnu] * data.qdim[mu] * data.qdim[gnu] ==
                          phase * data.smat[mu][nu] * data.qdim[mu] * data.qdim[nu]);
                }
            }
        }
    }
}

TEST_CASE("second symmetry is independent of the choice of lift") {
    for (auto [name, r] : std::vector<std::pair<const char*, long>>{{"A1", 6}, {"A2", 7}, {"B2", 8}}) {
        AlcoveSpec spec = spec_of(name, r);
        GradedModularData data = build_modular_data(spec);
        GPrime gp = gprime_elements(spec);
        INFO(spec.name());
        for (const auto& g : gp.elements) {
            for (const auto& y : gp.yprime_basis) {
                GPrime::Elem shifted{g.comp, g.lift + y};
                for (size_t nu = 0; nu < data.size(); ++nu)
                    CHECK(gprime_dot(spec, shifted, data.alcove.simples[nu]) ==
                          gprime_dot(spec, g, data.alcove.simples[nu]));
                for (size_t mu = 0; mu < data.size(); ++mu) {
                    Rational p0 = spec.rs->inner_product(g.lift, data.alcove.simples[mu].weight());
                    Rational p1 =
                        spec.rs->inner_product(shifted.lift, data.alcove.simples[mu].weight());
                    CHECK(eps_power_exact(spec, Rational(2 * spec.r) * p0) ==
                          eps_power_exact(spec, Rational(2 * spec.r) * p1));
                }
            }
        }
    }
}

TEST_CASE("transparent twists follow the lift pairing in case 2") {
    for (auto [name, r] : std::vector<std::pair<const char*, long>>{
             {"A1", 5}, {"A1", 6}, {"A2", 7}, {"B2", 8}, {"B2", 10}, {"C3", 10}}) {
        AlcoveSpec spec = spec_of(name, r);
        REQUIRE(spec.case2_semantics());
        GPrime gp = gprime_elements(spec);
        SimpleIdx zero{std::vector<long>(spec.rs->rank, 0)};
        INFO(spec.name());
        for (const auto& g : gp.elements) {
            SimpleIdx g0 = gprime_dot(spec, g, zero);
            Rational norm = spec.rs->inner_product(g.lift, g.lift);
            CycNum expected = eps_power_exact(
                spec, Rational(spec.r) * Rational(spec.rs->d) * Rational(spec.k) * norm);
            CHECK(twist_scalar(spec, g0) == expected);
        }
    }
}

TEST_CASE("block dimensions") {
    AlcoveSpec spec = spec_of("A1", 5);
    GradedModularData data = build_modular_data(spec);

    CHECK(block_dimension(data, 1) == RadicalScalar(CycNum(Rational(2), 20), 0, data.delta0));
    CHECK(block_dimension(data, 2) == RadicalScalar(CycNum(Rational(5), 20), 0, data.delta0));

    // Genus 3: Delta0^2 (1 + phi^{-4}) in golden-ratio arithmetic.
    CycNum phi = q_int(spec, 3);
    CycNum expected = data.delta0 * data.delta0 *
                      (CycNum::one(20) + (phi * phi * phi * phi).inverse());
    CHECK(block_dimension(data, 3) == RadicalScalar(expected, 0, data.delta0));
    CHECK(block_dimension(data, 3).dcal_exponent() == 0);
    CHECK_THROWS_AS(block_dimension(data, 0), spec_error);
}

TEST_CASE("alcoves with one simple need no Weyl enumeration") {
    AlcoveSpec spec = spec_of("E8", 31);
    GradedModularData data = build_modular_data(spec);
    REQUIRE(data.size() == 1);
    CHECK(data.qdim[0] == CycNum::one(spec.N));
    CHECK(data.smat[0][0] == CycNum::one(spec.N));
}

TEST_CASE("the Weyl cap is enforced for multi-simple S-matrices") {
    AlcoveSpec spec = spec_of("A2", 7);
    BuildOptions opt;
    opt.caps.weyl_group = 2;
    CHECK_THROWS_AS(build_modular_data(spec, opt), cap_error);
}

TEST_CASE("hopf pairing rejects weights outside the alcove") {
    AlcoveSpec spec = spec_of("A1", 5);
    GradedModularData data = build_modular_data(spec);
    CHECK_THROWS_AS(data.alcove.index_of(si({7})), spec_error);
}

TEST_CASE("a nontrivial zeta exponent changes the twists Galois-equivariantly") {
    AlcoveSpec s1 = spec_of("A1", 5, 1);
    AlcoveSpec s3 = spec_of("A1", 5, 3);
    for (long n = 0; n < 4; ++n) {
        CHECK(twist_scalar(s3, si({n})) == twist_scalar(s1, si({n})).galois(3));
        CHECK(quantum_dimension(s3, si({n})) == quantum_dimension(s1, si({n})).galois(3));
    }
}
