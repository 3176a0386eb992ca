#include "gcat/cyclotomic.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace gcat;

namespace {

// q-integer [n] at eps = zeta_order^{eps_power}, straight from the defining
// expression; used as an independent oracle below.
CycNum q_int(long order, long eps_power, long n) {
    CycNum eps = CycNum::root(order, eps_power);
    return (eps.pow(n) - eps.pow(-n)) / (eps - eps.pow(-1));
}

CycNum random_cyc(std::mt19937_64& rng, long order) {
    long phi = euler_phi(order);
    std::vector<Rational> c(phi);
    std::uniform_int_distribution<long> num(-4, 4), den(1, 3);
    for (auto& q : c) {
        q = Rational(num(rng), den(rng));
        q.canonicalize();
    }
    return CycNum::from_raw(order, std::move(c));
}

}  // namespace

TEST_CASE("roots of unity multiply by exponent addition") {
    CHECK(CycNum::root(20, 5) * CycNum::root(20, 15) == CycNum::one(20));
    CHECK(CycNum::root(12, 7) * CycNum::root(12, 5) == CycNum::one(12));
    CHECK(CycNum::root(7, 3).pow(7) == CycNum::one(7));
}

TEST_CASE("full orbit of zeta_4 sums to zero") {
    CycNum s = CycNum::one(4) + CycNum::root(4, 1) + CycNum::root(4, 2) + CycNum::root(4, 3);
    CHECK(s.is_zero());
}

TEST_CASE("the q-integer [3] at zeta_10 is the golden ratio element") {
    CycNum phi = q_int(20, 2, 3);  // eps = zeta_20^2, a primitive 10th root
    CHECK(phi * phi == phi + CycNum::one(20));
    CHECK(std::abs(phi.embed(1).real() - 1.6180339887) < 1e-9);
    CHECK(std::abs(phi.embed(1).imag()) < 1e-12);
}

TEST_CASE("complex embedding spot values") {
    CHECK(std::abs(CycNum::one(1).embed(1) - std::complex<double>(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(CycNum::root(4, 1).embed(1) - std::complex<double>(0.0, 1.0)) < 1e-12);
    CHECK(std::abs(q_int(20, 2, 2).embed(1).real() - 1.618034) < 1e-6);
    CHECK_THROWS_AS(CycNum::root(4, 1).embed(2), spec_error);
}

TEST_CASE("arithmetic across different orders embeds into the lcm") {
    CycNum z4 = CycNum::root(4, 1), z6 = CycNum::root(6, 1);
    CHECK(z4 * z6 == CycNum::root(12, 5));
    CHECK(z4 + z6 - z6 == CycNum::root(12, 3));
    CHECK(CycNum::root(3, 1) == CycNum::root(6, 2));
}

TEST_CASE("division is exact and rejects zero") {
    CycNum a = CycNum::root(9, 2) + CycNum(Rational(3), 9);
    CHECK(a / a == CycNum::one(9));
    CHECK_THROWS_AS(a / CycNum::zero(9), error);
    CHECK(a * a.inverse() == CycNum::one(9));
}

TEST_CASE("field axioms hold exactly on random triples") {
    std::mt19937_64 rng(0x5eed001);
    for (long order : {4L, 5L, 12L, 20L, 24L}) {
        for (int trial = 0; trial < 20; ++trial) {
            CycNum a = random_cyc(rng, order), b = random_cyc(rng, order), c = random_cyc(rng, order);
            CHECK((a + b) + c == a + (b + c));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a * b == b * a);
            if (!b.is_zero()) CHECK((a / b) * b == a);
        }
    }
}

TEST_CASE("Galois actions commute with arithmetic") {
    std::mt19937_64 rng(0x5eed002);
    for (long order : {5L, 12L, 24L}) {
        for (long j = 2; j < order; ++j) {
            if (std::gcd(j, order) != 1) continue;
            CycNum a = random_cyc(rng, order), b = random_cyc(rng, order);
            CHECK(a.galois(j) * b.galois(j) == (a * b).galois(j));
            CHECK(a.galois(j) + b.galois(j) == (a + b).galois(j));
        }
        CHECK_THROWS_AS(random_cyc(rng, order).galois(0), spec_error);
        if (order % 2 == 0) CHECK_THROWS_AS(random_cyc(rng, order).galois(2), spec_error);
    }
}

TEST_CASE("embedding is a ring homomorphism numerically") {
    std::mt19937_64 rng(0x5eed003);
    for (int trial = 0; trial < 25; ++trial) {
        CycNum a = random_cyc(rng, 24), b = random_cyc(rng, 24);
        for (long j : {1L, 5L, 7L, 11L}) {
            CHECK(std::abs(a.embed(j) * b.embed(j) - (a * b).embed(j)) < 1e-9);
            CHECK(std::abs(a.embed(j) + b.embed(j) - (a + b).embed(j)) < 1e-9);
        }
    }
}

TEST_CASE("textual form round trips") {
    CycNum a = CycNum::root(12, 5) + CycNum(Rational(-7, 3), 12);
    CHECK(CycNum::parse(a.str()) == a);
    CHECK(a.str().rfind("12;", 0) == 0);
    CHECK(CycNum::parse("4; 0, 1") == CycNum::root(4, 1));
    CHECK(CycNum::parse("20; 1/2") == CycNum(Rational(1, 2), 20));
    CHECK_THROWS_AS(CycNum::parse("junk"), spec_error);
    CHECK_THROWS_AS(CycNum::parse("12; 1, 2, 3, 4, 5"), spec_error);
}

TEST_CASE("radical scalars normalize the D exponent into {0,-1}") {
    CycNum delta0(Rational(4), 1);  // D = 2 numerically
    RadicalScalar s(CycNum(Rational(1), 1), -3, delta0);
    CHECK(s.dcal_exponent() == -1);
    CHECK(s.base() == CycNum(Rational(1, 4), 1));  // 1 * Delta0^{-1}

    RadicalScalar even(CycNum(Rational(3), 1), 4, delta0);
    CHECK(even.dcal_exponent() == 0);
    CHECK(even.base() == CycNum(Rational(48), 1));  // 3 * Delta0^2
}

TEST_CASE("radical scalars compare across parities via squares and sign") {
    CycNum delta0(Rational(4), 1);
    RadicalScalar direct(CycNum(Rational(2), 1), 0, delta0);   // 2
    RadicalScalar radical(CycNum(Rational(4), 1), -1, delta0);  // 4 / D = 2
    CHECK(direct == radical);
    RadicalScalar negated(CycNum(Rational(-4), 1), -1, delta0);  // -2
    CHECK(direct != negated);
    CHECK(radical * radical == RadicalScalar(CycNum(Rational(4), 1), 0, delta0));
    CHECK(direct.times_dcal_power(-2) == RadicalScalar(CycNum(Rational(1, 2), 1), 0, delta0));
}

TEST_CASE("no silent denesting when Delta0 is a perfect square") {
    // Delta0 = 4 has a rational square root; the representation must keep the
    // formal D^{-1} rather than substituting 2.
    CycNum delta0(Rational(4), 1);
    RadicalScalar s(CycNum(Rational(1), 1), -1, delta0);
    CHECK(s.dcal_exponent() == -1);
    CHECK(s.base() == CycNum(Rational(1), 1));
}
