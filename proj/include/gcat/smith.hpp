#pragma once

// Smith normal form over Z for the small integer matrices that show up here
// (Cartan matrices, linking matrices). Returns unimodular U, V with
// U * A * V = diag(s_1, ..., s_k) and s_1 | s_2 | ... ; trailing zeros when A
// is singular.

#include "gcat/types.hpp"

namespace gcat {

using IMat = std::vector<std::vector<Integer>>;

inline IMat identity_imat(size_t n) {
    IMat m(n, std::vector<Integer>(n, 0));
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

struct SmithNormalForm {
    IMat U, V;                  // unimodular; U*A*V = diag
    std::vector<Integer> diag;  // length min(rows, cols), divisibility chain
};

inline SmithNormalForm smith_normal_form(IMat a) {
    const size_t rows = a.size();
    const size_t cols = rows ? a[0].size() : 0;
    SmithNormalForm res;
    res.U = identity_imat(rows);
    res.V = identity_imat(cols);

    auto row_add = [&](size_t dst, size_t src, const Integer& k) {
        for (size_t j = 0; j < cols; ++j) a[dst][j] += k * a[src][j];
        for (size_t j = 0; j < rows; ++j) res.U[dst][j] += k * res.U[src][j];
    };
    auto col_add = [&](size_t dst, size_t src, const Integer& k) {
        for (size_t i = 0; i < rows; ++i) a[i][dst] += k * a[i][src];
        for (size_t i = 0; i < cols; ++i) res.V[i][dst] += k * res.V[i][src];
    };
    auto row_swap = [&](size_t i, size_t j) {
        std::swap(a[i], a[j]);
        std::swap(res.U[i], res.U[j]);
    };
    auto col_swap = [&](size_t i, size_t j) {
        for (size_t r = 0; r < rows; ++r) std::swap(a[r][i], a[r][j]);
        for (size_t r = 0; r < cols; ++r) std::swap(res.V[r][i], res.V[r][j]);
    };
    auto row_negate = [&](size_t i) {
        for (size_t j = 0; j < cols; ++j) a[i][j] = -a[i][j];
        for (size_t j = 0; j < rows; ++j) res.U[i][j] = -res.U[i][j];
    };

    size_t t = 0;
    while (t < rows && t < cols) {
        // Pick the entry of smallest nonzero magnitude as pivot.
        size_t pi = t, pj = t;
        Integer best = 0;
        for (size_t i = t; i < rows; ++i)
            for (size_t j = t; j < cols; ++j) {
                if (a[i][j] == 0) continue;
                Integer m = abs(a[i][j]);
                if (best == 0 || m < best) {
                    best = m;
                    pi = i;
                    pj = j;
                }
            }
        if (best == 0) break;  // all remaining entries vanish
        row_swap(t, pi);
        col_swap(t, pj);
        if (a[t][t] < 0) row_negate(t);

        bool clean = true;
        for (size_t i = t + 1; i < rows; ++i) {
            if (a[i][t] == 0) continue;
            Integer q = a[i][t] / a[t][t];
            row_add(i, t, -q);
            if (a[i][t] != 0) clean = false;
        }
        for (size_t j = t + 1; j < cols; ++j) {
            if (a[t][j] == 0) continue;
            Integer q = a[t][j] / a[t][t];
            col_add(j, t, -q);
            if (a[t][j] != 0) clean = false;
        }
        if (!clean) continue;  // remainders left; repeat with a smaller pivot

        // Enforce the divisibility chain: fold any non-divisible entry into
        // column t and restart the reduction at this corner.
        bool chain_ok = true;
        for (size_t i = t + 1; i < rows && chain_ok; ++i)
            for (size_t j = t + 1; j < cols && chain_ok; ++j)
                if (a[i][j] % a[t][t] != 0) {
                    col_add(t, j, 1);
                    chain_ok = false;
                }
        if (!chain_ok) continue;
        ++t;
    }

    res.diag.resize(std::min(rows, cols));
    for (size_t i = 0; i < res.diag.size(); ++i) res.diag[i] = a[i][i];
    return res;
}

// Inverse of a unimodular integer matrix (det = +-1), by integer Gauss-Jordan.
inline IMat unimodular_inverse(IMat m) {
    const size_t n = m.size();
    IMat inv = identity_imat(n);
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) throw error("matrix is singular, expected unimodular");
        std::swap(m[p], m[c]);
        std::swap(inv[p], inv[c]);
        // Reduce the pivot to +-1 by repeated subtraction against other rows.
        while (abs(m[c][c]) != 1) {
            size_t q = n;
            for (size_t i = c + 1; i < n; ++i)
                if (m[i][c] != 0 && (q == n || abs(m[i][c]) < abs(m[q][c]))) q = i;
            if (q == n) throw error("matrix is not unimodular");
            Integer k = m[c][c] / m[q][c];
            for (size_t j = 0; j < n; ++j) {
                m[c][j] -= k * m[q][j];
                inv[c][j] -= k * inv[q][j];
            }
            if (m[c][c] == 0) {
                std::swap(m[c], m[q]);
                std::swap(inv[c], inv[q]);
            }
        }
        if (m[c][c] == -1) {
            for (size_t j = 0; j < n; ++j) {
                m[c][j] = -m[c][j];
                inv[c][j] = -inv[c][j];
            }
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == c || m[i][c] == 0) continue;
            Integer k = m[i][c];
            for (size_t j = 0; j < n; ++j) {
                m[i][j] -= k * m[c][j];
                inv[i][j] -= k * inv[c][j];
            }
        }
    }
    return inv;
}

}  // namespace gcat
