#pragma once

// The truncated dominant chamber C_eps at a root of unity: enumeration of the
// simple-object index set { mu dominant : mu + rho in C_eps }, its grading by
// the center group, and the G'-action mu |-> g.mu realized by folding
// r*glift + mu + rho back into the alcove with reflections in the alcove
// walls. Working with wall reflections directly sidesteps any commitment to a
// particular semidirect decomposition of the affine Weyl group.

#include "gcat/root_system.hpp"

#include <set>

namespace gcat {

enum class AlcoveCase { case1, case2, both, unsupported };

inline std::string case_name(AlcoveCase c) {
    switch (c) {
        case AlcoveCase::case1: return "case1";
        case AlcoveCase::case2: return "case2";
        case AlcoveCase::both: return "both";
        default: return "unsupported";
    }
}

// Case 1: gcd(r, d) = 1 and r > h, wall against the short highest root.
// Case 2: d | r and r/d > h_dual, wall against the long highest root.
// For simply-laced types the two coincide.
inline AlcoveCase classify_case(const RootSystemData& rs, long r) {
    if (r < 1) throw spec_error("r must be positive");
    bool c1 = std::gcd(r, rs.d) == 1 && r > rs.h;
    bool c2 = r % rs.d == 0 && r / rs.d > rs.h_dual;
    if (c1 && c2) return AlcoveCase::both;
    if (c1) return AlcoveCase::case1;
    if (c2) return AlcoveCase::case2;
    return AlcoveCase::unsupported;
}

struct AlcoveSpec {
    std::shared_ptr<const RootSystemData> rs;
    long r = 0;              // order of eps^2
    AlcoveCase cse = AlcoveCase::unsupported;
    long zeta_exponent = 1;  // zeta = zeta_N^s, coprime to N
    long N = 0;              // 2 D r, the global cyclotomic order
    long k = 0;              // r/d - h_dual for case-2 semantics

    const RootSystemData& root_system() const { return *rs; }

    // Wall root theta and the normalization (theta|theta)/2.
    const WeightVec& wall_root() const {
        return cse == AlcoveCase::case1 ? rs->alpha0 : rs->beta0;
    }
    long wall_half_norm() const { return cse == AlcoveCase::case1 ? 1 : rs->d; }

    // Case-2 machinery (dual lattices, Prop-sub classification) applies to
    // genuine case 2 and to the overlap case.
    bool case2_semantics() const { return cse != AlcoveCase::case1; }

    std::string name() const {
        return rs->type.name() + " r=" + std::to_string(r) + " zeta=" + std::to_string(zeta_exponent);
    }
};

inline AlcoveSpec make_alcove_spec(std::shared_ptr<const RootSystemData> rs, long r,
                                   long zeta_exponent = 1) {
    AlcoveCase c = classify_case(*rs, r);
    if (c == AlcoveCase::unsupported)
        throw spec_error(rs->type.name() + " with r=" + std::to_string(r) +
                         " matches neither alcove case");
    AlcoveSpec spec;
    spec.rs = std::move(rs);
    spec.r = r;
    spec.cse = c;
    spec.N = 2 * spec.rs->D * r;
    spec.zeta_exponent = pos_mod(zeta_exponent, spec.N);
    if (std::gcd(spec.zeta_exponent, spec.N) != 1)
        throw spec_error("zeta exponent " + std::to_string(zeta_exponent) +
                         " not coprime to 2Dr = " + std::to_string(spec.N));
    spec.k = spec.case2_semantics() ? r / spec.rs->d - spec.rs->h_dual : 0;
    return spec;
}

// A simple object: a dominant weight mu with mu + rho inside the open alcove.
struct SimpleIdx {
    std::vector<long> mu;

    bool operator==(const SimpleIdx& o) const { return mu == o.mu; }
    bool operator<(const SimpleIdx& o) const { return mu < o.mu; }

    WeightVec weight() const {
        std::vector<Rational> c(mu.size());
        for (size_t i = 0; i < mu.size(); ++i) c[i] = Rational(mu[i]);
        return WeightVec(std::move(c));
    }
    std::string str() const {
        std::string s = "[";
        for (size_t i = 0; i < mu.size(); ++i) s += (i ? "," : "") + std::to_string(mu[i]);
        return s + "]";
    }
};

struct Alcove {
    std::vector<SimpleIdx> simples;              // lexicographic order
    std::vector<CenterGroup::Elem> grades;       // parallel to simples
    std::map<CenterGroup::Elem, std::vector<size_t>> by_grade;
    std::map<std::vector<long>, size_t> index;

    size_t size() const { return simples.size(); }
    size_t index_of(const SimpleIdx& s) const {
        auto it = index.find(s.mu);
        if (it == index.end()) throw spec_error("weight " + s.str() + " is not in the alcove");
        return it->second;
    }
    bool contains(const SimpleIdx& s) const { return index.count(s.mu) > 0; }
};

inline Alcove enumerate_alcove(const AlcoveSpec& spec) {
    const RootSystemData& rs = spec.root_system();
    const WeightVec& theta = spec.wall_root();
    const int n = rs.rank;

    // Marks m_i = (lambda_i | theta) are positive integers, so the alcove is
    // the lattice simplex sum (mu_i + 1) m_i < r.
    std::vector<long> marks(n);
    for (int i = 0; i < n; ++i) {
        WeightVec e(static_cast<size_t>(n));
        e.c[i] = 1;
        marks[i] = to_long(rs.inner_product(e, theta));
        if (marks[i] <= 0) throw data_error("nonpositive mark against the wall root");
    }

    Alcove out;
    std::vector<long> mu(n, 0);
    long base = 0;
    for (long m : marks) base += m;  // (rho|theta)
    std::function<void(int, long)> rec = [&](int i, long used) {
        if (i == n) {
            SimpleIdx s{mu};
            out.grades.push_back(rs.center_class(s.weight()));
            out.simples.push_back(std::move(s));
            return;
        }
        for (long v = 0;; ++v) {
            long total = used + v * marks[i];
            if (total + base >= spec.r) break;
            mu[i] = v;
            rec(i + 1, total);
        }
        mu[i] = 0;
    };
    rec(0, 0);

    for (size_t idx = 0; idx < out.simples.size(); ++idx) {
        out.index[out.simples[idx].mu] = idx;
        out.by_grade[out.grades[idx]].push_back(idx);
    }
    return out;
}

// The group G' acting on the alcove: X'/Y' with X' = X, Y' = Y in case 1 and
// the dual pair X' = Y*, Y' = X* under case-2 semantics. Every element
// carries a canonical small lift in X'.
struct GPrime {
    std::vector<long> invariants;
    std::vector<WeightVec> xprime_basis;
    std::vector<WeightVec> yprime_basis;

    struct Elem {
        std::vector<long> comp;  // coordinates mod invariants
        WeightVec lift;          // representative in X', fw coordinates
    };
    std::vector<Elem> elements;  // sorted by comp; element 0 first

    long order() const {
        long n = 1;
        for (long m : invariants) n *= m;
        return n;
    }
    std::vector<long> add(const std::vector<long>& a, const std::vector<long>& b) const {
        std::vector<long> r(invariants.size());
        for (size_t i = 0; i < invariants.size(); ++i) r[i] = pos_mod(a[i] + b[i], invariants[i]);
        return r;
    }
    std::vector<long> neg(const std::vector<long>& a) const {
        std::vector<long> r(invariants.size());
        for (size_t i = 0; i < invariants.size(); ++i) r[i] = pos_mod(-a[i], invariants[i]);
        return r;
    }
    const Elem& element(const std::vector<long>& comp) const {
        for (const auto& e : elements)
            if (e.comp == comp) return e;
        throw error("no such G' element");
    }
};

inline GPrime gprime_elements(const AlcoveSpec& spec) {
    const RootSystemData& rs = spec.root_system();
    const int n = rs.rank;
    GPrime gp;

    // Relation matrix M expresses the Y' basis in the X' basis. In both cases
    // it reduces to the Cartan matrix or its transpose.
    IMat m(n, std::vector<Integer>(n));
    if (spec.case2_semantics()) {
        // X' basis lambda_j / d_j, Y' basis alpha_i / d_i; M = A^T.
        for (int i = 0; i < n; ++i) {
            WeightVec b(static_cast<size_t>(n));
            b.c[i] = Rational(1, rs.dsym[i]);
            gp.xprime_basis.push_back(b);
            gp.yprime_basis.push_back(Rational(1, rs.dsym[i]) * rs.simple_roots[i]);
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m[i][j] = rs.cartan[j][i];
    } else {
        // X' = X with basis lambda_j, Y' = Y with basis alpha_i; M = A.
        for (int i = 0; i < n; ++i) {
            WeightVec b(static_cast<size_t>(n));
            b.c[i] = 1;
            gp.xprime_basis.push_back(b);
            gp.yprime_basis.push_back(rs.simple_roots[i]);
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m[i][j] = rs.cartan[i][j];
    }

    auto snf = smith_normal_form(m);
    IMat uinv = unimodular_inverse(snf.U);

    std::vector<size_t> slots;  // positions with invariant > 1
    for (int i = 0; i < n; ++i) {
        long s = to_long(snf.diag[i]);
        if (s > 1) {
            gp.invariants.push_back(s);
            slots.push_back(i);
        }
    }

    // Squared length for the canonical-lift choice.
    auto norm2 = [&](const WeightVec& v) {
        Rational acc(0);
        for (const auto& q : v.c) acc += q * q;
        return acc;
    };
    auto lex_less = [](const WeightVec& a, const WeightVec& b) { return a.c < b.c; };

    std::vector<std::vector<long>> comps{{std::vector<long>(gp.invariants.size(), 0)}};
    for (size_t i = 0; i < gp.invariants.size(); ++i) {
        std::vector<std::vector<long>> next;
        for (const auto& c : comps)
            for (long v = 0; v < gp.invariants[i]; ++v) {
                auto f = c;
                f[i] = v;
                next.push_back(f);
            }
        comps = std::move(next);
    }
    std::sort(comps.begin(), comps.end());

    for (const auto& comp : comps) {
        // x = Uinv * t in X'-basis coordinates, t the padded tuple.
        std::vector<Integer> t(n, 0);
        for (size_t s = 0; s < slots.size(); ++s) t[slots[s]] = comp[s];
        WeightVec lift(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            Integer xi = 0;
            for (int j = 0; j < n; ++j) xi += uinv[i][j] * t[j];
            if (xi != 0) lift = lift + Rational(xi) * gp.xprime_basis[i];
        }
        // Greedy reduction modulo Y' toward the shortest representative,
        // breaking norm ties toward the dominant side.
        bool improved = true;
        while (improved) {
            improved = false;
            for (const auto& b : gp.yprime_basis) {
                for (int sgn : {+1, -1}) {
                    WeightVec cand = lift + Rational(sgn) * b;
                    if (norm2(cand) < norm2(lift) ||
                        (norm2(cand) == norm2(lift) && lex_less(lift, cand))) {
                        lift = cand;
                        improved = true;
                    }
                }
            }
        }
        gp.elements.push_back(GPrime::Elem{comp, lift});
    }
    return gp;
}

struct FoldOutcome {
    WeightVec x;
    bool on_wall = false;
};

// Fold x into the closed alcove using the reflections generating W_eps:
// the simple reflections and the affine reflection in the wall
// (x|theta) = r. Reports whether the result sits on a wall.
inline FoldOutcome fold_into_alcove(const AlcoveSpec& spec, WeightVec x) {
    const RootSystemData& rs = spec.root_system();
    const WeightVec& theta = spec.wall_root();
    const Rational wall(spec.r);
    const Rational halfnorm(spec.wall_half_norm());

    for (long guard = 0; guard < 1000000; ++guard) {
        int neg = -1;
        for (int i = 0; i < rs.rank; ++i)
            if (x.c[i] < 0) {
                neg = i;
                break;
            }
        if (neg >= 0) {
            x = rs.simple_reflection(neg, x);
            continue;
        }
        Rational level = rs.inner_product(x, theta);
        if (level > wall) {
            Rational t = (level - wall) / halfnorm;
            x = x - t * theta;
            continue;
        }
        FoldOutcome out{std::move(x), false};
        for (int i = 0; i < rs.rank; ++i)
            if (out.x.c[i] == 0) out.on_wall = true;
        if (level == wall) out.on_wall = true;
        return out;
    }
    throw data_error("alcove folding failed to terminate");
}

// The dot action g.mu = g(mu + rho) - rho with g(x) = w(r*glift + x), w the
// folding element of W_eps.
inline SimpleIdx gprime_dot(const AlcoveSpec& spec, const GPrime::Elem& g, const SimpleIdx& mu) {
    const RootSystemData& rs = spec.root_system();
    WeightVec x = Rational(spec.r) * g.lift + mu.weight() + rs.rho;
    FoldOutcome folded = fold_into_alcove(spec, std::move(x));
    if (folded.on_wall)
        throw data_error("G' action folded " + mu.str() + " onto an alcove wall; lift " +
                         g.lift.str() + " is inconsistent with the spec");
    WeightVec nu = folded.x - rs.rho;
    if (!nu.is_integral())
        throw data_error("G' action produced a non-integral weight from " + mu.str());
    return SimpleIdx{nu.integral_coords()};
}

}  // namespace gcat
