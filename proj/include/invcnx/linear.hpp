#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "invcnx/param_scalar.hpp"

namespace invcnx {

// Field hooks used by the elimination templates.
inline bool is_zero(const Rational& q) { return q == 0; }
inline bool is_zero(const ParamScalar& s) { return s.is_zero(); }

/// Pivot preference: lower is better. Constants beat rational functions so
/// that parameter-dependent pivots are only taken when unavoidable.
inline long pivot_score(const Rational& q) {
    return static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2));
}
inline long pivot_score(const ParamScalar& s) {
    if (s.is_constant()) return pivot_score(s.constant_value());
    return 1'000'000L + s.complexity();
}

/// One affine equation  sum_c entries[c] * u_c = rhs.
template <class F>
struct SparseRow {
    std::map<int, F> entries;
    F rhs{};
};

template <class F>
struct Elimination {
    /// Reduced pivot rows keyed by pivot column: coefficient 1 on the pivot,
    /// no entries in any other pivot column.
    std::map<int, SparseRow<F>> pivots;
    std::vector<int> free_columns;
    /// Values divided by while normalizing pivot rows, in elimination order.
    std::vector<F> pivot_values;
    /// Input row index that produced each pivot, same order as pivot_values.
    std::vector<std::size_t> pivot_rows;
    /// Index of the first input row that reduced to 0 = nonzero.
    std::optional<std::size_t> inconsistent_row;
    F inconsistent_value{};

    bool consistent() const { return !inconsistent_row.has_value(); }
    std::size_t rank() const { return pivots.size(); }
};

/// Incremental Gauss-Jordan elimination over an exact field. Rows are
/// reduced in input order against a fully reduced pivot set; elimination
/// stops at the first inconsistent row.
template <class F>
Elimination<F> eliminate(const std::vector<SparseRow<F>>& rows, int ncols) {
    Elimination<F> out;
    for (std::size_t ri = 0; ri < rows.size(); ++ri) {
        SparseRow<F> r = rows[ri];
        std::vector<std::pair<int, F>> hits;
        for (const auto& [c, v] : r.entries)
            if (out.pivots.count(c)) hits.emplace_back(c, v);
        for (const auto& [c, v] : hits) {
            const SparseRow<F>& p = out.pivots.at(c);
            for (const auto& [pc, pv] : p.entries) {
                F& slot = r.entries[pc];
                slot -= v * pv;
                if (is_zero(slot)) r.entries.erase(pc);
            }
            r.rhs -= v * p.rhs;
        }
        if (r.entries.empty()) {
            if (!is_zero(r.rhs)) {
                out.inconsistent_row = ri;
                out.inconsistent_value = r.rhs;
                break;
            }
            continue;
        }
        auto best = r.entries.begin();
        long best_score = pivot_score(best->second);
        for (auto it = std::next(r.entries.begin()); it != r.entries.end(); ++it) {
            long s = pivot_score(it->second);
            if (s < best_score) {
                best = it;
                best_score = s;
            }
        }
        const int pc = best->first;
        const F pv = best->second;
        out.pivot_values.push_back(pv);
        out.pivot_rows.push_back(ri);
        for (auto& [c, v] : r.entries) v /= pv;
        r.rhs /= pv;
        for (auto& [oc, orow] : out.pivots) {
            auto it = orow.entries.find(pc);
            if (it == orow.entries.end()) continue;
            const F factor = it->second;
            for (const auto& [c, v] : r.entries) {
                F& slot = orow.entries[c];
                slot -= factor * v;
                if (is_zero(slot)) orow.entries.erase(c);
            }
            orow.rhs -= factor * r.rhs;
        }
        out.pivots.emplace(pc, std::move(r));
    }
    for (int c = 0; c < ncols; ++c)
        if (!out.pivots.count(c)) out.free_columns.push_back(c);
    return out;
}

/// Particular solution (free columns set to zero) of a consistent elimination.
template <class F>
std::vector<F> particular_solution(const Elimination<F>& e, int ncols) {
    std::vector<F> x(static_cast<std::size_t>(ncols));
    for (const auto& [c, row] : e.pivots) x[static_cast<std::size_t>(c)] = row.rhs;
    return x;
}

/// Basis of the homogeneous solution space, one vector per free column.
template <class F>
std::vector<std::vector<F>> kernel_basis(const Elimination<F>& e, int ncols) {
    std::vector<std::vector<F>> basis;
    for (int f : e.free_columns) {
        std::vector<F> v(static_cast<std::size_t>(ncols));
        v[static_cast<std::size_t>(f)] = F(1);
        for (const auto& [c, row] : e.pivots) {
            auto it = row.entries.find(f);
            if (it != row.entries.end()) v[static_cast<std::size_t>(c)] = -it->second;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Rank of a list of vectors (rows) over an exact field.
template <class F>
std::size_t rank_of(const std::vector<std::vector<F>>& vectors) {
    std::vector<SparseRow<F>> rows;
    int ncols = 0;
    for (const auto& v : vectors) {
        SparseRow<F> r;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!is_zero(v[i])) r.entries.emplace(static_cast<int>(i), v[i]);
        ncols = std::max(ncols, static_cast<int>(v.size()));
        rows.push_back(std::move(r));
    }
    return eliminate(rows, ncols).rank();
}

/// Fraction-free (Bareiss) determinant of a square matrix over an exact
/// integral domain embedded in a field.
template <class F>
F bareiss_determinant(Eigen::Matrix<F, Eigen::Dynamic, Eigen::Dynamic> m) {
    const Eigen::Index n = m.rows();
    F sign(1), prev(1);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (is_zero(m(k, k))) {
            Eigen::Index swap = -1;
            for (Eigen::Index i = k + 1; i < n; ++i)
                if (!is_zero(m(i, k))) {
                    swap = i;
                    break;
                }
            if (swap < 0) return F(0);
            m.row(k).swap(m.row(swap));
            sign = -sign;
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            for (Eigen::Index j = k + 1; j < n; ++j) {
                F v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                m(i, j) = v / prev;
            }
            m(i, k) = F(0);
        }
        prev = m(k, k);
    }
    return n == 0 ? F(1) : F(sign * m(n - 1, n - 1));
}

}  // namespace invcnx
