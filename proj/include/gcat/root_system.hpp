#pragma once

// Simple Lie algebra combinatorics: Cartan matrix, the inner product
// normalized so short roots have square length 2, positive roots, the Weyl
// group (never stored beyond an enumeration cap), the center group G = X/Y
// and the associated constants (d, D, h, h_dual).
//
// All lattice vectors are held in the fundamental-weight basis. In that basis
// the i-th simple reflection is x |-> x - x_i * alpha_i and dominance is a
// coordinate-wise sign test, which keeps the alcove machinery elementary.

#include "gcat/smith.hpp"
#include "gcat/types.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

namespace gcat {

enum class Series : char { A = 'A', B = 'B', C = 'C', D = 'D', E = 'E', F = 'F', G = 'G' };

struct CartanType {
    Series series;
    int rank;

    std::string name() const { return std::string(1, static_cast<char>(series)) + std::to_string(rank); }

    // "A2", "d4", "E8"; rank bounds keep every Weyl group enumerable.
    static CartanType parse(const std::string& text) {
        if (text.size() < 2) throw spec_error("unsupported Cartan type: " + text);
        char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
        if (c < 'A' || c > 'G') throw spec_error("unsupported Cartan type: " + text);
        int rank = 0;
        for (size_t i = 1; i < text.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(text[i])))
                throw spec_error("unsupported Cartan type: " + text);
            rank = rank * 10 + (text[i] - '0');
        }
        CartanType t{static_cast<Series>(c), rank};
        t.validate();
        return t;
    }

    void validate() const {
        auto bad = [&]() { throw spec_error("unsupported series/rank combination: " + name()); };
        switch (series) {
            case Series::A:
                if (rank < 1 || rank > 8) bad();
                break;
            case Series::B:
            case Series::C:
                if (rank < 2 || rank > 6) bad();
                break;
            case Series::D:
                if (rank < 3 || rank > 6) bad();
                break;
            case Series::E:
                if (rank < 6 || rank > 8) bad();
                break;
            case Series::F:
                if (rank != 4) bad();
                break;
            case Series::G:
                if (rank != 2) bad();
                break;
            default:
                bad();
        }
    }
};

// A weight in the fundamental-weight basis; rational coordinates because
// lifts of G' elements live in finer lattices than X.
struct WeightVec {
    std::vector<Rational> c;

    WeightVec() = default;
    explicit WeightVec(size_t rank) : c(rank, Rational(0)) {}
    explicit WeightVec(std::vector<Rational> coords) : c(std::move(coords)) {}

    size_t rank() const { return c.size(); }
    bool is_integral() const {
        return std::all_of(c.begin(), c.end(), [](const Rational& q) { return gcat::is_integral(q); });
    }
    std::vector<long> integral_coords() const {
        std::vector<long> r(c.size());
        for (size_t i = 0; i < c.size(); ++i) r[i] = to_long(c[i]);
        return r;
    }

    friend WeightVec operator+(WeightVec a, const WeightVec& b) {
        for (size_t i = 0; i < a.c.size(); ++i) a.c[i] += b.c[i];
        return a;
    }
    friend WeightVec operator-(WeightVec a, const WeightVec& b) {
        for (size_t i = 0; i < a.c.size(); ++i) a.c[i] -= b.c[i];
        return a;
    }
    WeightVec operator-() const {
        WeightVec r = *this;
        for (auto& q : r.c) q = -q;
        return r;
    }
    friend WeightVec operator*(const Rational& s, WeightVec v) {
        for (auto& q : v.c) q *= s;
        return v;
    }
    bool operator==(const WeightVec& o) const { return c == o.c; }
    bool operator<(const WeightVec& o) const { return c < o.c; }

    std::string str() const {
        std::ostringstream os;
        os << "(";
        for (size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i].get_str();
        os << ")";
        return os.str();
    }
};

// The center G = X/Y as a product of cyclic groups; elements are tuples
// reduced mod the invariant orders. The trivial group has the empty tuple.
struct CenterGroup {
    std::vector<long> invariants;  // cyclic orders > 1

    using Elem = std::vector<long>;

    long order() const {
        long n = 1;
        for (long m : invariants) n *= m;
        return n;
    }
    Elem zero() const { return Elem(invariants.size(), 0); }
    bool is_zero(const Elem& e) const {
        return std::all_of(e.begin(), e.end(), [](long v) { return v == 0; });
    }
    Elem add(const Elem& a, const Elem& b) const {
        Elem r(invariants.size());
        for (size_t i = 0; i < invariants.size(); ++i) r[i] = pos_mod(a[i] + b[i], invariants[i]);
        return r;
    }
    Elem neg(const Elem& a) const {
        Elem r(invariants.size());
        for (size_t i = 0; i < invariants.size(); ++i) r[i] = pos_mod(-a[i], invariants[i]);
        return r;
    }
    Elem scale(long k, const Elem& a) const {
        Elem r(invariants.size());
        for (size_t i = 0; i < invariants.size(); ++i) r[i] = pos_mod(k * a[i], invariants[i]);
        return r;
    }
    std::vector<Elem> elements() const {
        std::vector<Elem> out{zero()};
        for (size_t i = 0; i < invariants.size(); ++i) {
            std::vector<Elem> next;
            next.reserve(out.size() * invariants[i]);
            for (const auto& e : out)
                for (long v = 0; v < invariants[i]; ++v) {
                    Elem f = e;
                    f[i] = v;
                    next.push_back(std::move(f));
                }
            out = std::move(next);
        }
        std::sort(out.begin(), out.end());
        return out;
    }
    static std::string elem_str(const Elem& e) {
        if (e.empty()) return "(0)";
        std::string s = "(";
        for (size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::to_string(e[i]);
        return s + ")";
    }
};

class RootSystemData {
  public:
    CartanType type;
    int rank = 0;
    std::vector<std::vector<long>> cartan;     // a_ij
    std::vector<long> dsym;                    // d_i = (alpha_i|alpha_i)/2
    std::vector<std::vector<Rational>> fw_gram;  // (lambda_i|lambda_j)
    std::vector<WeightVec> simple_roots;       // columns of the Cartan matrix
    std::vector<WeightVec> positive_roots;
    WeightVec rho;     // all-ones vector
    WeightVec alpha0;  // short highest root, square length 2
    WeightVec beta0;   // long highest root, square length 2d
    std::vector<std::vector<long>> w0;  // longest Weyl element on fw coords
    long d = 1;                         // lacing number
    long D = 1;                         // smallest D with D(X|X) in Z
    long h = 0, h_dual = 0;             // Coxeter and dual Coxeter numbers
    CenterGroup center;
    Integer weyl_order = 1;

    Rational inner_product(const WeightVec& x, const WeightVec& y) const {
        if (x.rank() != static_cast<size_t>(rank) || y.rank() != static_cast<size_t>(rank))
            throw spec_error("rank mismatch in inner product");
        Rational acc(0);
        for (int i = 0; i < rank; ++i) {
            if (x.c[i] == 0) continue;
            Rational row(0);
            for (int j = 0; j < rank; ++j) {
                if (y.c[j] == 0) continue;
                row += fw_gram[i][j] * y.c[j];
            }
            acc += x.c[i] * row;
        }
        return acc;
    }

    WeightVec simple_reflection(int i, WeightVec x) const {
        Rational k = x.c[i];
        if (k == 0) return x;
        for (int j = 0; j < rank; ++j) x.c[j] -= k * simple_roots[i].c[j];
        return x;
    }

    bool is_dominant(const WeightVec& x) const {
        return std::all_of(x.c.begin(), x.c.end(), [](const Rational& q) { return q >= 0; });
    }
    bool is_strictly_dominant(const WeightVec& x) const {
        return std::all_of(x.c.begin(), x.c.end(), [](const Rational& q) { return q > 0; });
    }

    // Projection X -> G = X/Y; kernel is exactly the root lattice.
    CenterGroup::Elem center_class(const WeightVec& x) const {
        if (x.rank() != static_cast<size_t>(rank)) throw spec_error("rank mismatch in center class");
        if (!x.is_integral()) throw spec_error("center class needs a weight-lattice element");
        CenterGroup::Elem out;
        out.reserve(center.invariants.size());
        for (size_t slot = 0; slot < center_rows_.size(); ++slot) {
            Integer acc = 0;
            for (int j = 0; j < rank; ++j) acc += center_rows_[slot][j] * Integer(x.c[j].get_num());
            Integer rem = acc % center.invariants[slot];
            out.push_back(pos_mod(to_long(rem), center.invariants[slot]));
        }
        return out;
    }

    // mu |-> -w0(mu); an involution permuting the dominant weights.
    WeightVec dual_weight(const WeightVec& mu) const {
        if (!is_dominant(mu)) throw spec_error("dual weight needs a dominant weight");
        WeightVec out(static_cast<size_t>(rank));
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j)
                if (mu.c[j] != 0) out.c[i] -= Rational(w0[i][j]) * mu.c[j];
        return out;
    }

    // Full signed orbit of a strictly dominant weight; point w(x) is found at
    // BFS depth length(w), so the attached sign is det(w).
    std::vector<std::pair<WeightVec, int>> weyl_orbit_signed(const WeightVec& x, long cap) const {
        if (!is_strictly_dominant(x)) throw error("signed orbit needs a strictly dominant start");
        if (weyl_order > cap)
            throw cap_error("Weyl group of " + type.name() + " has " + weyl_order.get_str() +
                            " elements, above the cap " + std::to_string(cap));
        std::vector<std::pair<WeightVec, int>> out;
        std::map<std::vector<Rational>, bool> seen;
        std::vector<std::pair<WeightVec, int>> frontier{{x, +1}};
        seen[x.c] = true;
        while (!frontier.empty()) {
            std::vector<std::pair<WeightVec, int>> next;
            for (auto& [v, s] : frontier) {
                out.emplace_back(v, s);
                for (int i = 0; i < rank; ++i) {
                    WeightVec u = simple_reflection(i, v);
                    if (seen.emplace(u.c, true).second) next.emplace_back(std::move(u), -s);
                }
            }
            frontier = std::move(next);
        }
        return out;
    }

    // Used internally during construction; also handy in tests.
    std::vector<std::vector<long>> center_projection_rows() const {
        std::vector<std::vector<long>> rows;
        for (const auto& r : center_rows_) {
            std::vector<long> out;
            for (const auto& z : r) out.push_back(to_long(z));
            rows.push_back(out);
        }
        return rows;
    }

    friend std::shared_ptr<const RootSystemData> build_root_system(CartanType t);

  private:
    std::vector<std::vector<Integer>> center_rows_;  // SNF rows for slots with s_i > 1
};

namespace detail {

inline std::vector<std::vector<long>> cartan_matrix(CartanType t) {
    const int n = t.rank;
    std::vector<std::vector<long>> a(n, std::vector<long>(n, 0));
    for (int i = 0; i < n; ++i) a[i][i] = 2;
    auto link = [&](int i, int j) { a[i][j] = a[j][i] = -1; };
    switch (t.series) {
        case Series::A:
            for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
            break;
        case Series::B:
            for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
            a[n - 1][n - 2] = -2;  // alpha_n is the short root
            break;
        case Series::C:
            for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
            a[n - 2][n - 1] = -2;  // alpha_n is the long root
            break;
        case Series::D:
            for (int i = 0; i + 2 < n; ++i) link(i, i + 1);
            link(n - 3, n - 1);
            break;
        case Series::E: {
            // Bourbaki numbering: node 2 hangs off node 4 of the A-chain
            // 1-3-4-5-6(-7)(-8).
            std::vector<std::pair<int, int>> edges{{1, 3}, {3, 4}, {4, 5}, {5, 6}, {2, 4}};
            if (n >= 7) edges.push_back({6, 7});
            if (n == 8) edges.push_back({7, 8});
            for (auto [u, v] : edges) link(u - 1, v - 1);
            break;
        }
        case Series::F:
            link(0, 1);
            link(2, 3);
            a[1][2] = -1;
            a[2][1] = -2;  // alpha_1, alpha_2 long; alpha_3, alpha_4 short
            break;
        case Series::G:
            a[0][1] = -3;
            a[1][0] = -1;  // alpha_1 short, alpha_2 long
            break;
    }
    return a;
}

inline Integer weyl_group_order(CartanType t) {
    auto factorial = [](long n) {
        Integer f = 1;
        for (long i = 2; i <= n; ++i) f *= i;
        return f;
    };
    Integer two_pow = 1;
    switch (t.series) {
        case Series::A:
            return factorial(t.rank + 1);
        case Series::B:
        case Series::C:
            mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, t.rank);
            return two_pow * factorial(t.rank);
        case Series::D:
            mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, t.rank - 1);
            return two_pow * factorial(t.rank);
        case Series::E:
            return t.rank == 6 ? Integer(51840) : t.rank == 7 ? Integer(2903040) : Integer(696729600);
        case Series::F:
            return Integer(1152);
        case Series::G:
            return Integer(12);
    }
    throw spec_error("unsupported series");
}

inline std::vector<std::vector<Rational>> rational_inverse(const std::vector<std::vector<long>>& m) {
    const size_t n = m.size();
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n, Rational(0)));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) a[i][j] = Rational(m[i][j]);
        a[i][n + i] = 1;
    }
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) throw error("singular matrix");
        std::swap(a[p], a[c]);
        Rational inv = 1 / a[c][c];
        for (size_t j = 0; j < 2 * n; ++j) a[c][j] *= inv;
        for (size_t i = 0; i < n; ++i) {
            if (i == c || a[i][c] == 0) continue;
            Rational k = a[i][c];
            for (size_t j = 0; j < 2 * n; ++j) a[i][j] -= k * a[c][j];
        }
    }
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
    return inv;
}

}  // namespace detail

inline std::shared_ptr<const RootSystemData> build_root_system(CartanType t) {
    t.validate();
    auto rs = std::make_shared<RootSystemData>();
    RootSystemData& r = *rs;
    r.type = t;
    r.rank = t.rank;
    const int n = t.rank;
    r.cartan = detail::cartan_matrix(t);

    // Symmetrizing weights d_i from d_i a_ij = d_j a_ji, normalized to min 1.
    {
        std::vector<Rational> dq(n, Rational(0));
        dq[0] = 1;
        std::vector<int> todo{0};
        while (!todo.empty()) {
            int i = todo.back();
            todo.pop_back();
            for (int j = 0; j < n; ++j) {
                if (i == j || r.cartan[i][j] == 0 || dq[j] != 0) continue;
                dq[j] = dq[i] * Rational(r.cartan[i][j]) / Rational(r.cartan[j][i]);
                todo.push_back(j);
            }
        }
        Rational mn = dq[0];
        for (const auto& q : dq) mn = std::min(mn, q);
        for (auto& q : dq) q /= mn;
        r.dsym.resize(n);
        for (int i = 0; i < n; ++i) r.dsym[i] = to_long(dq[i]);
    }
    r.d = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) r.d = std::max(r.d, std::labs(r.cartan[i][j]));
    if (*std::max_element(r.dsym.begin(), r.dsym.end()) != r.d)
        throw data_error("symmetrizer inconsistent with lacing number");

    // (lambda_i | lambda_j) = (diag(d) * A^{-1})_{ij}.
    auto ainv = detail::rational_inverse(r.cartan);
    r.fw_gram.assign(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.fw_gram[i][j] = Rational(r.dsym[i]) * ainv[i][j];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (r.fw_gram[i][j] != r.fw_gram[j][i]) throw data_error("weight Gram matrix not symmetric");

    // D = lcm of coordinate denominators of the Gram matrix.
    Integer dlcm = 1;
    for (const auto& row : r.fw_gram)
        for (const auto& q : row) dlcm = lcm(dlcm, Integer(q.get_den()));
    r.D = to_long(dlcm);

    r.simple_roots.reserve(n);
    for (int j = 0; j < n; ++j) {
        WeightVec v(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) v.c[i] = r.cartan[i][j];
        r.simple_roots.push_back(std::move(v));
    }
    r.rho = WeightVec(std::vector<Rational>(n, Rational(1)));

    // Positive roots: close the simple roots under simple reflections and
    // keep those with nonnegative simple-root coordinates.
    {
        std::map<std::vector<Rational>, bool> seen;
        std::vector<WeightVec> stack = r.simple_roots;
        for (const auto& v : stack) seen[v.c] = true;
        std::vector<WeightVec> all;
        while (!stack.empty()) {
            WeightVec v = stack.back();
            stack.pop_back();
            all.push_back(v);
            for (int i = 0; i < n; ++i) {
                WeightVec u = r.simple_reflection(i, v);
                if (seen.emplace(u.c, true).second) stack.push_back(u);
            }
        }
        for (const auto& root : all) {
            bool positive = true;
            for (int i = 0; i < n && positive; ++i) {
                Rational coord(0);
                for (int j = 0; j < n; ++j) coord += ainv[i][j] * root.c[j];
                if (coord < 0) positive = false;
            }
            if (positive) r.positive_roots.push_back(root);
        }
        std::sort(r.positive_roots.begin(), r.positive_roots.end());
    }

    // Highest short/long roots are the unique dominant roots of their length.
    {
        bool found_short = false, found_long = false;
        for (const auto& root : r.positive_roots) {
            if (!r.is_dominant(root)) continue;
            Rational len = r.inner_product(root, root);
            if (len == 2) {
                if (found_short) throw data_error("two dominant short roots");
                r.alpha0 = root;
                found_short = true;
            }
            if (len == Rational(2 * r.d)) {
                if (found_long) throw data_error("two dominant long roots");
                r.beta0 = root;
                found_long = true;
            }
        }
        if (!found_short || !found_long) throw data_error("missing dominant root");
    }

    r.h = to_long(r.inner_product(r.rho, r.alpha0)) + 1;
    Rational hd = r.inner_product(r.rho, r.beta0) / Rational(r.d);
    r.h_dual = to_long(hd) + 1;
    if (static_cast<long>(r.positive_roots.size()) * 2 != r.h * n)
        throw data_error("positive root count disagrees with Coxeter number");

    // Longest Weyl element: fold -rho to rho, recording the reflection word.
    {
        std::vector<std::vector<long>> m(n, std::vector<long>(n, 0));
        for (int i = 0; i < n; ++i) m[i][i] = 1;
        WeightVec x = -r.rho;
        auto apply_reflection = [&](int i) {
            // Left-compose s_i: row update of the accumulated matrix.
            for (int j = 0; j < n; ++j) {
                long k = m[i][j];
                if (k == 0) continue;
                for (int l = 0; l < n; ++l) m[l][j] -= k * to_long(r.simple_roots[i].c[l]);
            }
        };
        bool moved = true;
        while (moved) {
            moved = false;
            for (int i = 0; i < n; ++i) {
                if (x.c[i] < 0) {
                    x = r.simple_reflection(i, x);
                    apply_reflection(i);
                    moved = true;
                }
            }
        }
        if (!(x == r.rho)) throw data_error("failed to reach rho while folding");
        r.w0 = std::move(m);
    }

    // Center group via the Smith form of the Cartan matrix: X/Y is
    // Z^n / A Z^n and the projection is U-row reduction mod the diagonal.
    {
        IMat a(n, std::vector<Integer>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a[i][j] = r.cartan[i][j];
        auto snf = smith_normal_form(a);
        for (int i = 0; i < n; ++i) {
            long s = to_long(snf.diag[i]);
            if (s <= 0) throw data_error("Cartan matrix must be nonsingular");
            if (s > 1) {
                r.center.invariants.push_back(s);
                r.center_rows_.push_back(snf.U[i]);
            }
        }
        if (Integer(r.center.order()) != [&] {
                Integer p = 1;
                for (const auto& s : snf.diag) p *= s;
                return p;
            }())
            throw data_error("center order disagrees with Cartan determinant");
    }

    r.weyl_order = detail::weyl_group_order(t);
    return rs;
}

}  // namespace gcat
