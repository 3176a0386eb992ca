#pragma once

// Invariants of plumbed 3-manifolds. A surgery presentation is a forest of
// framed unknots clasped along edges; the linking matrix carries framings on
// the diagonal and adjacency off it. For a cohomology class xi in H^1(M;G),
// encoded by its meridian values alpha with B alpha = 0 over G,
//
//   tau(M, xi) = D^{-b1-1} (Delta0^-)^{-sigma-} (Delta0^+)^{-sigma+}
//                 * <L(omega_{alpha_1}, ..., omega_{alpha_m})>
//
// where the bracket of a forest factors through twists, quantum dimensions
// and Hopf pairings only, evaluated by message passing over each tree.
// Signatures come from exact rational congruence diagonalization; class
// enumeration brute-forces G^m under a cap and switches to a Smith-form
// kernel parametrization above it.

#include "gcat/category_checks.hpp"

#include <random>

namespace gcat {

struct PlumbingForest {
    std::vector<long> framings;
    std::vector<std::pair<int, int>> edges;

    size_t size() const { return framings.size(); }
};

inline void validate_forest(const PlumbingForest& f) {
    const long m = static_cast<long>(f.size());
    std::vector<int> parent(m);
    for (long i = 0; i < m; ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : f.edges) {
        if (u < 0 || v < 0 || u >= m || v >= m) throw spec_error("edge endpoint out of range");
        if (u == v) throw spec_error("self-loop in plumbing graph");
        auto key = std::minmax(u, v);
        if (!seen.insert(key).second) throw spec_error("duplicate edge in plumbing graph");
        int ru = find(u), rv = find(v);
        if (ru == rv) throw spec_error("plumbing graph contains a cycle");
        parent[ru] = rv;
    }
}

inline std::vector<std::vector<long>> linking_matrix(const PlumbingForest& f) {
    validate_forest(f);
    const size_t m = f.size();
    std::vector<std::vector<long>> b(m, std::vector<long>(m, 0));
    for (size_t v = 0; v < m; ++v) b[v][v] = f.framings[v];
    for (auto [u, v] : f.edges) b[u][v] = b[v][u] = 1;
    return b;
}

inline std::vector<int> vertex_degrees(const PlumbingForest& f) {
    std::vector<int> deg(f.size(), 0);
    for (auto [u, v] : f.edges) {
        ++deg[u];
        ++deg[v];
    }
    return deg;
}

struct SignatureCounts {
    long sigma_plus = 0, sigma_minus = 0, b1 = 0;
};

// Exact signature by symmetric congruence over Q. Zero-diagonal blocks are
// opened up with a hyperbolic row+column addition, which contributes one
// positive and one negative square per pair.
inline SignatureCounts signature_counts(const std::vector<std::vector<long>>& bmat) {
    const size_t n = bmat.size();
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) a[i][j] = Rational(bmat[i][j]);

    SignatureCounts out;
    std::vector<bool> alive(n, true);
    size_t remaining = n;
    while (remaining > 0) {
        size_t p = n;
        for (size_t i = 0; i < n && p == n; ++i)
            if (alive[i] && a[i][i] != 0) p = i;
        if (p < n) {
            (a[p][p] > 0 ? out.sigma_plus : out.sigma_minus)++;
            for (size_t q = 0; q < n; ++q) {
                if (!alive[q] || q == p || a[q][p] == 0) continue;
                Rational k = a[q][p] / a[p][p];
                for (size_t j = 0; j < n; ++j) a[q][j] -= k * a[p][j];
                for (size_t j = 0; j < n; ++j) a[j][q] -= k * a[j][p];
            }
            alive[p] = false;
            --remaining;
            continue;
        }
        size_t hp = n, hq = n;
        for (size_t i = 0; i < n && hp == n; ++i) {
            if (!alive[i]) continue;
            for (size_t j = i + 1; j < n && hp == n; ++j)
                if (alive[j] && a[i][j] != 0) {
                    hp = i;
                    hq = j;
                }
        }
        if (hp == n) {
            out.b1 = static_cast<long>(remaining);
            break;
        }
        for (size_t j = 0; j < n; ++j) a[hp][j] += a[hq][j];
        for (size_t j = 0; j < n; ++j) a[j][hp] += a[j][hq];
    }
    return out;
}

// A class xi in H^1(M;G) as the vector of its meridian values.
struct GClass {
    std::vector<CenterGroup::Elem> alpha;

    bool operator==(const GClass& o) const { return alpha == o.alpha; }
    bool operator<(const GClass& o) const { return alpha < o.alpha; }
    std::string str() const {
        std::string s;
        for (size_t i = 0; i < alpha.size(); ++i)
            s += (i ? "," : "") + CenterGroup::elem_str(alpha[i]);
        return s;
    }
};

inline bool is_kernel_class(const std::vector<std::vector<long>>& b, const CenterGroup& g,
                            const std::vector<CenterGroup::Elem>& alpha) {
    const size_t m = b.size();
    for (size_t v = 0; v < m; ++v) {
        CenterGroup::Elem row = g.zero();
        for (size_t u = 0; u < m; ++u)
            if (b[v][u] != 0) row = g.add(row, g.scale(b[v][u], alpha[u]));
        if (!g.is_zero(row)) return false;
    }
    return true;
}

// All solutions of B alpha = 0 over G. Brute force while |G|^m fits under
// the cap, otherwise a Smith-form kernel parametrization per cyclic factor.
inline std::vector<GClass> cohomology_classes(const std::vector<std::vector<long>>& b,
                                              const CenterGroup& g, long cap = 1'000'000) {
    const size_t m = b.size();
    std::vector<GClass> out;

    Integer total = 1;
    for (size_t i = 0; i < m; ++i) total *= g.order();
    if (total <= cap) {
        auto elems = g.elements();
        std::vector<size_t> idx(m, 0);
        while (true) {
            std::vector<CenterGroup::Elem> alpha(m);
            for (size_t i = 0; i < m; ++i) alpha[i] = elems[idx[i]];
            if (is_kernel_class(b, g, alpha)) out.push_back(GClass{std::move(alpha)});
            size_t pos = 0;
            while (pos < m && ++idx[pos] == elems.size()) idx[pos++] = 0;
            if (pos == m) break;
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // Kernel mod each invariant factor via U B V = S: with x = V y, the
    // constraint is s_j y_j = 0 mod q, so y_j runs over multiples of
    // q / gcd(s_j, q).
    std::vector<std::vector<std::vector<long>>> factor_solutions;  // per factor: list of x-vectors
    IMat bi(m, std::vector<Integer>(m));
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) bi[i][j] = b[i][j];
    auto snf = smith_normal_form(bi);
    Integer expected_total = 1;
    for (long q : g.invariants) {
        std::vector<long> step(m), count(m);
        long kernel_size = 1;
        for (size_t j = 0; j < m; ++j) {
            Integer rem = snf.diag[j] % q;
            long s = pos_mod(to_long(rem), q);
            long gcd_sq = std::gcd(s, q);
            count[j] = gcd_sq;
            step[j] = q / gcd_sq;
            kernel_size *= gcd_sq;
        }
        expected_total *= kernel_size;
        if (expected_total > cap)
            throw cap_error("class enumeration above the cap: kernel has " +
                            expected_total.get_str() + " elements");
        std::vector<std::vector<long>> sols;
        std::vector<long> t(m, 0);
        while (true) {
            std::vector<long> x(m, 0);
            for (size_t i = 0; i < m; ++i) {
                Integer acc = 0;
                for (size_t j = 0; j < m; ++j) acc += snf.V[i][j] * Integer(t[j] * step[j]);
                Integer rem = acc % q;
                x[i] = pos_mod(to_long(rem), q);
            }
            sols.push_back(std::move(x));
            size_t pos = 0;
            while (pos < m && ++t[pos] == count[pos]) t[pos++] = 0;
            if (pos == m) break;
        }
        std::sort(sols.begin(), sols.end());
        factor_solutions.push_back(std::move(sols));
    }

    // Assemble tuples across factors.
    std::vector<std::vector<CenterGroup::Elem>> assembled{
        std::vector<CenterGroup::Elem>(m, CenterGroup::Elem{})};
    for (size_t f = 0; f < g.invariants.size(); ++f) {
        std::vector<std::vector<CenterGroup::Elem>> next;
        for (const auto& partial : assembled)
            for (const auto& x : factor_solutions[f]) {
                auto row = partial;
                for (size_t i = 0; i < m; ++i) row[i].push_back(x[i]);
                next.push_back(std::move(row));
            }
        assembled = std::move(next);
    }
    for (auto& alpha : assembled) out.push_back(GClass{std::move(alpha)});
    std::sort(out.begin(), out.end());
    return out;
}

// Bracket of a fully colored forest: framed unknots contribute
// twist^f * qdim^{1-deg}, clasps contribute Hopf entries.
inline CycNum colored_forest_bracket(const PlumbingForest& f, const std::vector<size_t>& colors,
                                     const GradedModularData& data) {
    validate_forest(f);
    if (colors.size() != f.size()) throw spec_error("one color per vertex required");
    auto deg = vertex_degrees(f);
    CycNum acc = CycNum::one(data.spec.N);
    for (size_t v = 0; v < f.size(); ++v) {
        acc *= detail::zeta_power(data.spec, f.framings[v] * data.twist_exp[colors[v]]);
        acc *= data.qdim[colors[v]].pow(1 - deg[v]);
    }
    for (auto [u, v] : f.edges) acc *= data.smat[colors[u]][colors[v]];
    return acc;
}

// <L(omega_{alpha_1}, ..., omega_{alpha_m})>: the coloring sum weighted by
// quantum dimensions, evaluated tree by tree with message passing.
inline CycNum omega_bracket(const PlumbingForest& f, const std::vector<CenterGroup::Elem>& alpha,
                            const GradedModularData& data, const Caps& caps = {}) {
    validate_forest(f);
    const size_t m = f.size();
    if (alpha.size() != m) throw spec_error("one grade per vertex required");
    const CenterGroup& g = data.spec.rs->center;

    std::vector<const std::vector<size_t>*> colors(m);
    Integer coloring_count = 1;
    static const std::vector<size_t> kEmpty;
    for (size_t v = 0; v < m; ++v) {
        auto it = data.alcove.by_grade.find(alpha[v]);
        colors[v] = it == data.alcove.by_grade.end() ? &kEmpty : &it->second;
        coloring_count *= static_cast<long>(colors[v]->size());
    }
    if (coloring_count > caps.colorings)
        throw cap_error("coloring sum has " + coloring_count.get_str() + " terms, above the cap");
    if (coloring_count == 0) return CycNum::zero(data.spec.N);

    auto deg = vertex_degrees(f);
    std::vector<std::vector<int>> adj(m);
    for (auto [u, v] : f.edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }

    // Vertex weight qdim^{2-deg} twist^f for each admissible color.
    auto weight = [&](size_t v, size_t c) {
        CycNum w = detail::zeta_power(data.spec, f.framings[v] * data.twist_exp[c]);
        return w * data.qdim[c].pow(2 - deg[v]);
    };

    CycNum result = CycNum::one(data.spec.N);
    std::vector<char> visited(m, 0);
    for (size_t root = 0; root < m; ++root) {
        if (visited[root]) continue;
        // Post-order over the tree containing root.
        std::vector<size_t> order;
        std::vector<long> parent(m, -1);
        std::vector<size_t> stack{root};
        visited[root] = 1;
        while (!stack.empty()) {
            size_t v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (int u : adj[v])
                if (!visited[u]) {
                    visited[u] = 1;
                    parent[u] = static_cast<long>(v);
                    stack.push_back(static_cast<size_t>(u));
                }
        }
        std::reverse(order.begin(), order.end());

        std::vector<std::vector<CycNum>> msg(m);  // per vertex: value per own color
        for (size_t v : order) {
            msg[v].reserve(colors[v]->size());
            for (size_t c : *colors[v]) msg[v].push_back(weight(v, c));
            for (int u : adj[v]) {
                if (parent[u] != static_cast<long>(v)) continue;
                for (size_t ci = 0; ci < colors[v]->size(); ++ci) {
                    CycNum sum = CycNum::zero(data.spec.N);
                    for (size_t ui = 0; ui < colors[u]->size(); ++ui)
                        sum += msg[u][ui] * data.smat[(*colors[u])[ui]][(*colors[v])[ci]];
                    msg[v][ci] *= sum;
                }
            }
        }
        CycNum tree_value = CycNum::zero(data.spec.N);
        for (const auto& val : msg[root]) tree_value += val;
        result *= tree_value;
    }
    return result;
}

struct TauResult {
    RadicalScalar value;
    long sigma_plus = 0, sigma_minus = 0, b1 = 0;

    std::string str() const {
        return value.str() + "  (sigma+=" + std::to_string(sigma_plus) +
               " sigma-=" + std::to_string(sigma_minus) + " b1=" + std::to_string(b1) + ")";
    }
};

inline TauResult tau(const PlumbingForest& f, const GClass& xi, const GradedModularData& data,
                     const Caps& caps = {}) {
    const CenterGroup& g = data.spec.rs->center;
    if (xi.alpha.size() != f.size()) throw spec_error("class length disagrees with vertex count");
    auto b = linking_matrix(f);
    if (!is_kernel_class(b, g, xi.alpha))
        throw spec_error("not a cohomology class: B*alpha != 0 for " + xi.str());
    if ((data.delta_plus0() * data.delta_minus0()).is_zero())
        throw spec_error("tau needs weakly non-degenerate data; Delta0^+ Delta0^- = 0 for " +
                         data.spec.name());

    auto sig = signature_counts(b);
    if (sig.b1 != static_cast<long>(f.size()) - sig.sigma_plus - sig.sigma_minus)
        throw data_error("signature counts violate b1 = m - sigma+ - sigma-");

    CycNum bracket = omega_bracket(f, xi.alpha, data, caps);
    CycNum norm = data.delta_plus0().pow(-sig.sigma_plus) * data.delta_minus0().pow(-sig.sigma_minus);
    RadicalScalar value =
        RadicalScalar(bracket * norm, 0, data.delta0).times_dcal_power(-sig.b1 - 1);
    return TauResult{std::move(value), sig.sigma_plus, sig.sigma_minus, sig.b1};
}

// Kirby blow-down of a +-1-framed vertex of degree <= 1: the vertex
// disappears and a neighbor's framing shifts by -f_v. The class entry at v
// was forced by B alpha = 0, so it is simply dropped.
inline std::pair<PlumbingForest, GClass> blow_down(const PlumbingForest& f, int v,
                                                   const GClass& xi) {
    validate_forest(f);
    const int m = static_cast<int>(f.size());
    if (v < 0 || v >= m) throw spec_error("blow-down vertex out of range");
    if (f.framings[v] != 1 && f.framings[v] != -1)
        throw spec_error("blow-down needs framing +1 or -1");
    auto deg = vertex_degrees(f);
    if (deg[v] > 1) throw spec_error("blow-down vertex must have degree <= 1");
    if (xi.alpha.size() != f.size()) throw spec_error("class length disagrees with vertex count");

    PlumbingForest out;
    GClass oxi;
    std::vector<int> remap(m, -1);
    for (int u = 0; u < m; ++u) {
        if (u == v) continue;
        remap[u] = static_cast<int>(out.framings.size());
        out.framings.push_back(f.framings[u]);
        oxi.alpha.push_back(xi.alpha[u]);
    }
    for (auto [a, bvert] : f.edges) {
        if (a == v || bvert == v) {
            int u = a == v ? bvert : a;
            out.framings[remap[u]] -= f.framings[v];
            continue;
        }
        out.edges.emplace_back(remap[a], remap[bvert]);
    }
    return {std::move(out), std::move(oxi)};
}

inline PlumbingForest permute_forest(const PlumbingForest& f, const std::vector<int>& perm) {
    PlumbingForest out;
    out.framings.resize(f.size());
    for (size_t v = 0; v < f.size(); ++v) out.framings[perm[v]] = f.framings[v];
    for (auto [u, v] : f.edges) out.edges.emplace_back(perm[u], perm[v]);
    return out;
}

// Per-forest splitting test: for every alpha in G^m with B alpha != 0 the
// omega-bracket must vanish exactly. Together with multilinearity of
// omega = sum of omega_alpha this is the field-internal form of the
// |G|^{-(b1+1)/2} splitting of the ungraded invariant.
struct SplitVanishReport {
    long classes_checked = 0;
    long vanishing_required = 0;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

inline SplitVanishReport split_vanishing_check(const PlumbingForest& f,
                                               const GradedModularData& data,
                                               const Caps& caps = {}) {
    const CenterGroup& g = data.spec.rs->center;
    const size_t m = f.size();
    auto b = linking_matrix(f);

    Integer total = 1;
    for (size_t i = 0; i < m; ++i) total *= g.order();
    if (total > caps.classes)
        throw cap_error("grade enumeration has " + total.get_str() + " tuples, above the cap");

    SplitVanishReport rep;
    auto elems = g.elements();
    std::vector<size_t> idx(m, 0);
    while (true) {
        std::vector<CenterGroup::Elem> alpha(m);
        for (size_t i = 0; i < m; ++i) alpha[i] = elems[idx[i]];
        ++rep.classes_checked;
        if (!is_kernel_class(b, g, alpha)) {
            ++rep.vanishing_required;
            CycNum val = omega_bracket(f, alpha, data, caps);
            if (!val.is_zero()) {
                std::string s;
                for (size_t i = 0; i < m; ++i) s += CenterGroup::elem_str(alpha[i]);
                rep.failures.push_back("alpha=" + s + " bracket=" + val.str());
            }
        }
        size_t pos = 0;
        while (pos < m && ++idx[pos] == elems.size()) idx[pos++] = 0;
        if (pos == m || m == 0) break;
    }
    return rep;
}

// Canonical forest shapes on exactly m vertices, up to isomorphism. The
// bracket is relabeling-invariant, so these cover all forests of that size.
inline std::vector<std::vector<std::pair<int, int>>> forest_shapes(int m) {
    using E = std::vector<std::pair<int, int>>;
    switch (m) {
        case 1:
            return {E{}};
        case 2:
            return {E{}, E{{0, 1}}};
        case 3:
            return {E{}, E{{0, 1}}, E{{0, 1}, {1, 2}}};
        case 4:
            return {E{},
                    E{{0, 1}},
                    E{{0, 1}, {2, 3}},
                    E{{0, 1}, {1, 2}},
                    E{{0, 1}, {1, 2}, {2, 3}},
                    E{{0, 1}, {0, 2}, {0, 3}}};
        default:
            throw spec_error("shape table covers 1 <= m <= 4");
    }
}

// Bulk splitting scan over every forest shape with at most max_vertices
// vertices and every framing vector bounded by framing_bound: checks that the
// omega-bracket vanishes exactly on every grade vector outside the kernel of
// the linking matrix.
//
// The bracket of a forest is the product of its tree brackets and the kernel
// condition is a conjunction of per-tree conditions, so over a field the scan
// reduces to per-tree bookkeeping: a violation exists iff some assignment
// makes every tree value nonzero while some tree breaks its kernel rows.
// Tree values are evaluated bottom-up with tables memoized per subtree
// assignment, which shares almost all field arithmetic across the framing
// sweep.
struct SplitScanReport {
    long shapes = 0;
    Integer assignments = 0;         // (framing, grade) pairs covered
    Integer vanishing_required = 0;  // pairs with B alpha != 0
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

namespace detail {

struct TreeScan {
    std::vector<int> verts;          // post-order, root last
    std::vector<char> value_nonzero;  // per tree assignment
    std::vector<char> kernel_ok;      // per tree assignment
    long assignment_count = 0;
};

// Decode digit t for vertex position p of assignment a (mixed radix, base T,
// digits ordered by the tree's post-order list).
inline long scan_digit(long a, size_t p, long T, size_t nverts) {
    for (size_t skip = nverts - 1 - p; skip > 0; --skip) a /= T;
    return a % T;
}

}  // namespace detail

inline SplitScanReport split_vanishing_scan(const GradedModularData& data, int max_vertices,
                                            long framing_bound, const Caps& caps = {},
                                            int parallelism = 1) {
    if (max_vertices < 1 || max_vertices > 4)
        throw spec_error("splitting scan supports 1 <= m <= 4 vertices");
    const AlcoveSpec& spec = data.spec;
    const CenterGroup& g = spec.rs->center;
    const long F = framing_bound;
    const auto grade_list = [&] {
        std::vector<CenterGroup::Elem> v = g.elements();
        return v;
    }();
    const long T = (2 * F + 1) * static_cast<long>(grade_list.size());
    const size_t nsimples = data.size();

    // Per-color tables reused across shapes.
    std::vector<std::vector<CycNum>> twist_pow(nsimples);  // [color][f + F]
    for (size_t c = 0; c < nsimples; ++c) {
        twist_pow[c].reserve(2 * F + 1);
        for (long f = -F; f <= F; ++f)
            twist_pow[c].push_back(detail::zeta_power(spec, f * data.twist_exp[c]));
    }
    std::vector<std::vector<size_t>> members;  // colors per grade index
    for (const auto& grade : grade_list) {
        auto it = data.alcove.by_grade.find(grade);
        members.push_back(it == data.alcove.by_grade.end() ? std::vector<size_t>{} : it->second);
    }

    SplitScanReport rep;
    std::mutex rep_mutex;

    std::vector<std::pair<int, std::vector<std::pair<int, int>>>> shapes;
    for (int m = 1; m <= max_vertices; ++m)
        for (auto& e : forest_shapes(m)) shapes.emplace_back(m, e);

    parallel_for(static_cast<long>(shapes.size()), parallelism, [&](long shape_idx) {
        const auto& [m, edges] = shapes[shape_idx];
        PlumbingForest proto;
        proto.framings.assign(m, 0);
        proto.edges = edges;
        auto deg = vertex_degrees(proto);
        std::vector<std::vector<int>> adj(m);
        for (auto [u, v] : edges) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }

        // qdim^{2-deg} per vertex-degree value actually present.
        std::vector<std::vector<CycNum>> qd_pow(m);
        for (int v = 0; v < m; ++v) {
            qd_pow[v].reserve(nsimples);
            for (size_t c = 0; c < nsimples; ++c) qd_pow[v].push_back(data.qdim[c].pow(2 - deg[v]));
        }

        // Split into trees.
        std::vector<char> seen(m, 0);
        std::vector<detail::TreeScan> trees;
        for (int start = 0; start < m; ++start) {
            if (seen[start]) continue;
            detail::TreeScan ts;
            std::vector<int> parent(m, -1);
            std::vector<int> stack{start};
            seen[start] = 1;
            std::vector<int> pre;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                pre.push_back(v);
                for (int u : adj[v])
                    if (!seen[u]) {
                        seen[u] = 1;
                        parent[u] = v;
                        stack.push_back(u);
                    }
            }
            ts.verts.assign(pre.rbegin(), pre.rend());  // post-order, start is last

            // Message tables per vertex: for each assignment of its subtree,
            // the weighted color vector over the vertex's own grade members.
            struct Table {
                std::vector<std::vector<CycNum>> w;  // [assignment][own color slot]
                long size = 0;                        // assignment count
                std::vector<int> span;                // subtree vertices, post-order
            };
            std::map<int, Table> tables;

            for (int v : ts.verts) {
                std::vector<int> kids;
                for (int u : adj[v])
                    if (parent[u] == v) kids.push_back(u);

                Table tab;
                // Assignment indices compose as own digit fastest, then the
                // children blocks in order; the span list mirrors that layout
                // from the most significant digit down.
                for (size_t ki = kids.size(); ki-- > 0;) {
                    auto& sub = tables.at(kids[ki]).span;
                    tab.span.insert(tab.span.end(), sub.begin(), sub.end());
                }
                tab.span.push_back(v);
                tab.size = 1;
                for (size_t i = 0; i < tab.span.size(); ++i) tab.size *= T;

                // Contract each child table against the S-matrix once per
                // child assignment: message value at every possible color of v.
                std::vector<std::vector<std::vector<CycNum>>> contracted(kids.size());
                for (size_t ki = 0; ki < kids.size(); ++ki) {
                    const Table& child = tables.at(kids[ki]);
                    contracted[ki].assign(child.w.size(),
                                          std::vector<CycNum>(nsimples, CycNum::zero(spec.N)));
                    for (size_t a = 0; a < child.w.size(); ++a) {
                        long own_digit = a % T;
                        const auto& kid_members = members[own_digit % grade_list.size()];
                        for (size_t cv = 0; cv < nsimples; ++cv) {
                            CycNum sum = CycNum::zero(spec.N);
                            for (size_t s = 0; s < kid_members.size(); ++s)
                                sum += child.w[a][s] * data.smat[kid_members[s]][cv];
                            contracted[ki][a][cv] = std::move(sum);
                        }
                    }
                }

                long kid_combo_total = 1;
                for (int u : kids) kid_combo_total *= tables.at(u).size;
                tab.w.resize(tab.size);

                std::vector<long> kid_idx(kids.size(), 0);
                for (long combo = 0; combo < kid_combo_total; ++combo) {
                    // base[c] = qdim^{2-deg} * product of child messages at c
                    std::vector<CycNum> base(nsimples);
                    for (size_t c = 0; c < nsimples; ++c) {
                        CycNum val = qd_pow[v][c];
                        for (size_t ki = 0; ki < kids.size(); ++ki)
                            val *= contracted[ki][kid_idx[ki]][c];
                        base[c] = std::move(val);
                    }
                    for (long own = 0; own < T; ++own) {
                        long fidx = own / grade_list.size();
                        const auto& own_members = members[own % grade_list.size()];
                        long a = (combo * T) + own;
                        auto& slot = tab.w[a];
                        slot.reserve(own_members.size());
                        for (size_t s = 0; s < own_members.size(); ++s)
                            slot.push_back(base[own_members[s]] * twist_pow[own_members[s]][fidx]);
                    }
                    // bump the mixed-radix child combo
                    for (size_t ki = 0; ki < kids.size(); ++ki) {
                        if (++kid_idx[ki] < tables.at(kids[ki]).size) break;
                        kid_idx[ki] = 0;
                    }
                }
                for (int u : kids) tables.erase(u);
                tables.emplace(v, std::move(tab));
            }

            // Root: value zero flag and kernel flag per assignment.
            Table root = std::move(tables.at(ts.verts.back()));
            ts.assignment_count = root.size;
            ts.value_nonzero.resize(root.size);
            ts.kernel_ok.resize(root.size);
            for (long a = 0; a < root.size; ++a) {
                CycNum total = CycNum::zero(spec.N);
                for (const auto& term : root.w[a]) total += term;
                ts.value_nonzero[a] = !total.is_zero();

                // Decode the assignment and evaluate the kernel rows of the
                // vertices of this tree.
                std::vector<long> fval(m, 0);
                std::vector<const CenterGroup::Elem*> aval(m, nullptr);
                for (size_t p = 0; p < root.span.size(); ++p) {
                    long digit = detail::scan_digit(a, p, T, root.span.size());
                    fval[root.span[p]] = digit / static_cast<long>(grade_list.size()) - F;
                    aval[root.span[p]] = &grade_list[digit % grade_list.size()];
                }
                bool kernel = true;
                for (int v : root.span) {
                    CenterGroup::Elem row = g.scale(fval[v], *aval[v]);
                    for (int u : adj[v]) row = g.add(row, *aval[u]);
                    if (!g.is_zero(row)) {
                        kernel = false;
                        break;
                    }
                }
                ts.kernel_ok[a] = kernel;
            }
            trees.push_back(std::move(ts));
        }

        // A violating assignment has every tree value nonzero and at least
        // one kernel row broken; count = prod(nonzero) - prod(nonzero & kernel).
        Integer prod_nonzero = 1, prod_kernel = 1, total = 1;
        for (const auto& ts : trees) {
            long nz = 0, nzk = 0;
            for (long a = 0; a < ts.assignment_count; ++a) {
                if (ts.value_nonzero[a]) ++nz;
                if (ts.value_nonzero[a] && ts.kernel_ok[a]) ++nzk;
            }
            prod_nonzero *= nz;
            prod_kernel *= nzk;
            total *= ts.assignment_count;
        }
        Integer kernel_total = 1;
        for (const auto& ts : trees) {
            long kc = 0;
            for (long a = 0; a < ts.assignment_count; ++a)
                if (ts.kernel_ok[a]) ++kc;
            kernel_total *= kc;
        }

        std::lock_guard<std::mutex> lock(rep_mutex);
        ++rep.shapes;
        rep.assignments += total;
        rep.vanishing_required += total - kernel_total;
        if (prod_nonzero != prod_kernel) {
            std::ostringstream os;
            os << "shape m=" << m << " edges=" << edges.size() << ": "
               << Integer(prod_nonzero - prod_kernel).get_str()
               << " nonvanishing brackets outside the kernel";
            rep.violations.push_back(os.str());
        }
    });
    return rep;
}

struct KirbyReport {
    int forests = 0;
    int tau_evaluations = 0;
    int blowdowns = 0;
    int relabelings = 0;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

// Randomized topological-invariance check: tau must be unchanged by every
// admissible blow-down and by vertex relabeling. Seeded and deterministic.
inline KirbyReport kirby_invariance_check(const GradedModularData& data, int forest_count,
                                          int max_vertices, unsigned long seed,
                                          const Caps& caps = {}) {
    std::mt19937_64 rng(seed);
    const CenterGroup& g = data.spec.rs->center;
    KirbyReport rep;

    auto rand_int = [&](long lo, long hi) {  // inclusive
        return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
    };

    for (int trial = 0; trial < forest_count; ++trial) {
        PlumbingForest f;
        int m = static_cast<int>(rand_int(1, max_vertices));
        for (int v = 0; v < m; ++v) {
            // Bias toward +-1 framings so blow-downs are frequently possible.
            long roll = rand_int(0, 9);
            f.framings.push_back(roll < 3 ? 1 : roll < 6 ? -1 : rand_int(-3, 3));
        }
        for (int v = 1; v < m; ++v)
            if (rand_int(0, 1)) f.edges.emplace_back(static_cast<int>(rand_int(0, v - 1)), v);
        ++rep.forests;

        auto classes = cohomology_classes(linking_matrix(f), g, caps.classes);
        if (classes.size() > 4) classes.resize(4);
        auto deg = vertex_degrees(f);

        for (const auto& xi : classes) {
            TauResult base = tau(f, xi, data, caps);
            ++rep.tau_evaluations;

            for (int v = 0; v < m; ++v) {
                if (deg[v] > 1 || (f.framings[v] != 1 && f.framings[v] != -1)) continue;
                auto [f2, xi2] = blow_down(f, v, xi);
                TauResult reduced = tau(f2, xi2, data, caps);
                ++rep.blowdowns;
                if (reduced.value != base.value)
                    rep.failures.push_back("blow-down changed tau at vertex " + std::to_string(v) +
                                           " (trial " + std::to_string(trial) + ")");
            }

            std::vector<int> perm(m);
            for (int v = 0; v < m; ++v) perm[v] = v;
            std::shuffle(perm.begin(), perm.end(), rng);
            PlumbingForest fp = permute_forest(f, perm);
            GClass xip;
            xip.alpha.resize(m);
            for (int v = 0; v < m; ++v) xip.alpha[perm[v]] = xi.alpha[v];
            TauResult relabeled = tau(fp, xip, data, caps);
            ++rep.relabelings;
            if (relabeled.value != base.value)
                rep.failures.push_back("relabeling changed tau (trial " + std::to_string(trial) + ")");
        }
    }
    return rep;
}

}  // namespace gcat
