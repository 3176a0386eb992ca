#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_N), with zeta_N a fixed
// primitive N-th root of unity. Elements are stored in the power basis
// 1, zeta, ..., zeta^{phi(N)-1}, reduced modulo the N-th cyclotomic
// polynomial, so equality is coefficient-wise. Arithmetic between elements of
// different orders embeds both into the lcm order first.
//
// RadicalScalar adjoins a formal square root D of a fixed field element
// (here always Delta_0), normalized so the exponent of D is 0 or -1. No
// attempt is ever made to denest the root into the base field.

#include "gcat/types.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <sstream>

namespace gcat {

inline long euler_phi(long n) {
    long result = n;
    long m = n;
    for (long p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        result -= result / p;
        while (m % p == 0) m /= p;
    }
    if (m > 1) result -= result / m;
    return result;
}

namespace detail {

// Dense univariate polynomials, ascending coefficients.
using ZPoly = std::vector<Integer>;
using QPoly = std::vector<Rational>;

inline void ztrim(ZPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}
inline void qtrim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division of integer polynomials, used only with monic divisors.
inline ZPoly zdiv_exact(ZPoly num, const ZPoly& den) {
    ZPoly quot(num.size() >= den.size() ? num.size() - den.size() + 1 : 0, Integer(0));
    while (num.size() >= den.size()) {
        size_t shift = num.size() - den.size();
        Integer c = num.back();  // den is monic
        quot[shift] = c;
        for (size_t i = 0; i < den.size(); ++i) num[shift + i] -= c * den[i];
        ztrim(num);
        if (num.empty()) break;
    }
    if (!num.empty()) throw error("inexact polynomial division");
    return quot;
}

// Phi_n, computed by dividing x^n - 1 by all Phi_d with d | n, d < n.
inline const ZPoly& cyclotomic_polynomial(long n) {
    static std::map<long, ZPoly> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    std::function<const ZPoly&(long)> get = [&](long m) -> const ZPoly& {
        auto it = cache.find(m);
        if (it != cache.end()) return it->second;
        ZPoly p(m + 1, Integer(0));
        p[0] = -1;
        p[m] = 1;  // x^m - 1
        for (long d = 1; d < m; ++d)
            if (m % d == 0) p = zdiv_exact(std::move(p), get(d));
        return cache.emplace(m, std::move(p)).first->second;
    };
    return get(n);
}

inline size_t qdeg(const QPoly& p) { return p.empty() ? 0 : p.size() - 1; }

inline QPoly qmul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, Rational(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            if (b[j] == 0) continue;
            r[i + j] += a[i] * b[j];
        }
    }
    qtrim(r);
    return r;
}

// Remainder of a rational polynomial modulo the monic integer polynomial mod.
inline QPoly qmod(QPoly p, const ZPoly& mod) {
    size_t deg = mod.size() - 1;
    while (p.size() > deg) {
        Rational c = p.back();
        size_t shift = p.size() - 1 - deg;
        p.pop_back();
        if (c == 0) continue;
        for (size_t i = 0; i < deg; ++i) {
            if (mod[i] == 0) continue;
            p[shift + i] -= c * mod[i];
        }
    }
    return p;
}

// Extended Euclid in Q[x]: returns u with u*f = gcd(f, g) (mod g). Used to
// invert modulo the irreducible Phi_n, so the gcd is a nonzero constant.
inline QPoly qinverse_mod(const QPoly& f, const ZPoly& mod) {
    QPoly r0(mod.begin(), mod.end());
    QPoly r1 = f;
    qtrim(r1);
    if (r1.empty()) throw error("division by zero in cyclotomic field");
    QPoly s0{}, s1{Rational(1)};  // coefficients of f in the Bezout identity
    while (!r1.empty()) {
        // r0 = q*r1 + rem
        QPoly q(r0.size() > r1.size() ? r0.size() - r1.size() + 1 : 1, Rational(0));
        QPoly rem = r0;
        while (rem.size() >= r1.size() && !rem.empty()) {
            Rational c = rem.back() / r1.back();
            size_t shift = rem.size() - r1.size();
            q[shift] = c;
            for (size_t i = 0; i < r1.size(); ++i) rem[shift + i] -= c * r1[i];
            qtrim(rem);
        }
        QPoly s2 = s0;
        QPoly qs1 = qmul(q, s1);
        if (s2.size() < qs1.size()) s2.resize(qs1.size(), Rational(0));
        for (size_t i = 0; i < qs1.size(); ++i) s2[i] -= qs1[i];
        qtrim(s2);
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r0.size() != 1) throw error("modulus not irreducible over the given element");
    QPoly u = s0;
    for (auto& c : u) c /= r0[0];
    return u;
}

}  // namespace detail

class CycNum {
  public:
    CycNum() : n_(1), c_(1, Rational(0)) {}
    explicit CycNum(const Rational& q, long order = 1) : n_(order), c_(euler_phi(order), Rational(0)) {
        if (order < 1) throw spec_error("cyclotomic order must be positive");
        c_[0] = q;
    }
    explicit CycNum(long v, long order = 1) : CycNum(Rational(v), order) {}

    static CycNum zero(long n) { return CycNum(Rational(0), n); }
    static CycNum one(long n) { return CycNum(Rational(1), n); }

    // zeta_n^k, any integer k.
    static CycNum root(long n, long k) {
        std::vector<Rational> raw(n, Rational(0));
        raw[pos_mod(k, n)] = 1;
        return CycNum(n, reduce(n, std::move(raw)));
    }

    // Element from unreduced power-basis coefficients (exponents mod n).
    static CycNum from_raw(long n, std::vector<Rational> raw) {
        return CycNum(n, reduce(n, std::move(raw)));
    }

    long order() const { return n_; }
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_zero() const {
        for (const auto& q : c_)
            if (q != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }
    const Rational& rational_value() const {
        if (!is_rational()) throw error("element is not rational: " + str());
        return c_[0];
    }

    // Embed into Q(zeta_m); requires n_ | m.
    CycNum promoted(long m) const {
        if (m == n_) return *this;
        if (m % n_ != 0) throw error("cannot embed: order does not divide target");
        long stride = m / n_;
        std::vector<Rational> raw(m, Rational(0));
        for (size_t k = 0; k < c_.size(); ++k) raw[k * stride] = c_[k];
        return CycNum(m, reduce(m, std::move(raw)));
    }

    friend CycNum operator+(const CycNum& a, const CycNum& b) {
        auto [x, y] = align(a, b);
        for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] += y.c_[i];
        return x;
    }
    friend CycNum operator-(const CycNum& a, const CycNum& b) {
        auto [x, y] = align(a, b);
        for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] -= y.c_[i];
        return x;
    }
    CycNum operator-() const {
        CycNum r = *this;
        for (auto& q : r.c_) q = -q;
        return r;
    }
    friend CycNum operator*(const CycNum& a, const CycNum& b) {
        auto [x, y] = align(a, b);
        std::vector<Rational> raw(2 * x.c_.size(), Rational(0));
        for (size_t i = 0; i < x.c_.size(); ++i) {
            if (x.c_[i] == 0) continue;
            for (size_t j = 0; j < y.c_.size(); ++j) {
                if (y.c_[j] == 0) continue;
                raw[i + j] += x.c_[i] * y.c_[j];
            }
        }
        return CycNum(x.n_, reduce(x.n_, std::move(raw)));
    }
    friend CycNum operator/(const CycNum& a, const CycNum& b) { return a * b.inverse(); }

    CycNum& operator+=(const CycNum& o) { return *this = *this + o; }
    CycNum& operator-=(const CycNum& o) { return *this = *this - o; }
    CycNum& operator*=(const CycNum& o) { return *this = *this * o; }
    CycNum& operator/=(const CycNum& o) { return *this = *this / o; }

    CycNum inverse() const {
        if (is_zero()) throw error("division by zero in cyclotomic field");
        detail::QPoly f(c_.begin(), c_.end());
        detail::QPoly u = detail::qinverse_mod(f, detail::cyclotomic_polynomial(n_));
        u.resize(c_.size(), Rational(0));
        return CycNum(n_, std::move(u));
    }

    CycNum pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        CycNum acc = CycNum::one(n_);
        CycNum base = *this;
        while (e) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }

    // Galois action zeta |-> zeta^j, j coprime to the order.
    CycNum galois(long j) const {
        if (std::gcd(pos_mod(j, n_), n_) != 1) throw spec_error("Galois index not coprime to order");
        std::vector<Rational> raw(n_, Rational(0));
        for (size_t k = 0; k < c_.size(); ++k) {
            if (c_[k] == 0) continue;
            raw[pos_mod(static_cast<long>(k) * j, n_)] += c_[k];
        }
        return CycNum(n_, reduce(n_, std::move(raw)));
    }

    // Numeric image under zeta_n |-> exp(2 pi i j / n). For display and sign
    // reporting only; never used to decide equality.
    std::complex<double> embed(long j = 1) const {
        if (std::gcd(pos_mod(j, n_), n_) != 1) throw spec_error("embedding index not coprime to order");
        std::complex<double> acc(0.0, 0.0);
        const double tau = 6.283185307179586476925286766559;
        for (size_t k = 0; k < c_.size(); ++k) {
            if (c_[k] == 0) continue;
            double arg = tau * static_cast<double>(pos_mod(static_cast<long>(k) * j, n_)) / static_cast<double>(n_);
            acc += c_[k].get_d() * std::complex<double>(std::cos(arg), std::sin(arg));
        }
        return acc;
    }

    bool operator==(const CycNum& o) const {
        auto [x, y] = align(*this, o);
        return x.c_ == y.c_;
    }
    bool operator!=(const CycNum& o) const { return !(*this == o); }

    // Textual form "N; c0, c1, ..." with rationals as p/q.
    std::string str() const {
        std::ostringstream os;
        os << n_ << ";";
        for (size_t i = 0; i < c_.size(); ++i) os << (i ? ", " : " ") << c_[i].get_str();
        return os.str();
    }

    static CycNum parse(const std::string& text) {
        auto semi = text.find(';');
        if (semi == std::string::npos) throw spec_error("cyclotomic literal needs 'N; c0, c1, ...'");
        long n = 0;
        try {
            n = std::stol(text.substr(0, semi));
        } catch (const std::exception&) {
            throw spec_error("malformed cyclotomic order in: " + text);
        }
        if (n < 1) throw spec_error("cyclotomic order must be positive");
        std::vector<Rational> coeffs;
        std::string rest = text.substr(semi + 1);
        std::string item;
        std::istringstream is(rest);
        while (std::getline(is, item, ',')) {
            if (item.find_first_not_of(" \t") == std::string::npos) continue;
            coeffs.push_back(parse_rational(item));
        }
        size_t phi = static_cast<size_t>(euler_phi(n));
        if (coeffs.size() > phi) throw spec_error("too many coefficients for order " + std::to_string(n));
        coeffs.resize(phi, Rational(0));
        return CycNum(n, std::move(coeffs));
    }

  private:
    CycNum(long n, std::vector<Rational> c) : n_(n), c_(std::move(c)) {}

    static std::vector<Rational> reduce(long n, std::vector<Rational> raw) {
        const detail::ZPoly& phi = detail::cyclotomic_polynomial(n);
        const size_t deg = phi.size() - 1;
        for (size_t k = raw.size(); k-- > deg;) {
            if (raw[k] == 0) continue;
            Rational c = raw[k];
            raw[k] = 0;
            for (size_t i = 0; i < deg; ++i) {
                if (phi[i] == 0) continue;
                raw[k - deg + i] -= c * phi[i];
            }
        }
        raw.resize(deg, Rational(0));
        return raw;
    }

    static std::pair<CycNum, CycNum> align(const CycNum& a, const CycNum& b) {
        if (a.n_ == b.n_) return {a, b};
        long l = std::lcm(a.n_, b.n_);
        return {a.promoted(l), b.promoted(l)};
    }

    long n_;
    std::vector<Rational> c_;
};

// Element base * D^e with D a formal square root of delta0 and e in {0, -1}.
// Cross-parity equality compares squares exactly and separates the two square
// roots by the index-1 complex embedding.
class RadicalScalar {
  public:
    RadicalScalar(CycNum base, long dcal_power, CycNum delta0)
        : delta0_(std::move(delta0)) {
        if (delta0_.is_zero()) throw data_error("radical extension over zero is degenerate");
        long e = (pos_mod(dcal_power, 2) == 0) ? 0 : -1;
        long half = (dcal_power - e) / 2;
        base_ = std::move(base);
        if (half != 0) base_ *= delta0_.pow(half);
        dexp_ = e;
    }

    const CycNum& base() const { return base_; }
    long dcal_exponent() const { return dexp_; }
    const CycNum& delta0() const { return delta0_; }

    bool is_zero() const { return base_.is_zero(); }

    RadicalScalar times(const CycNum& c) const {
        RadicalScalar r = *this;
        r.base_ *= c;
        return r;
    }
    RadicalScalar times_dcal_power(long p) const {
        return RadicalScalar(base_, dexp_ + p, delta0_);
    }
    RadicalScalar operator*(const RadicalScalar& o) const {
        if (!(delta0_ == o.delta0_)) throw error("mixed radical contexts");
        return RadicalScalar(base_ * o.base_, dexp_ + o.dexp_, delta0_);
    }

    // Exact square, always in the base field.
    CycNum square() const {
        CycNum s = base_ * base_;
        if (dexp_ == -1) s /= delta0_;
        return s;
    }

    std::complex<double> approx() const {
        std::complex<double> v = base_.embed(1);
        if (dexp_ == -1) v /= std::sqrt(std::abs(delta0_.embed(1).real()));
        return v;
    }

    bool operator==(const RadicalScalar& o) const {
        if (!(delta0_ == o.delta0_)) return false;
        if (dexp_ == o.dexp_) return base_ == o.base_;
        if (is_zero() && o.is_zero()) return true;
        if (square() != o.square()) return false;
        // Same square, different normal form: separate +-sqrt numerically.
        std::complex<double> a = approx(), b = o.approx();
        return std::abs(a - b) < std::abs(a + b);
    }
    bool operator!=(const RadicalScalar& o) const { return !(*this == o); }

    std::string str() const {
        std::string s = base_.str();
        if (dexp_ == -1) s += " * D^-1";
        return s;
    }

  private:
    CycNum base_;
    long dexp_ = 0;
    CycNum delta0_;
};

}  // namespace gcat
