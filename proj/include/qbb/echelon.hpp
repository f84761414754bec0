#pragma once

#include <cstddef>
#include <vector>

#include "qbb/qfield.hpp"

namespace qbb {

/// Reduced row echelon form over Q(q), built incrementally. Pivot columns
/// are chosen as the first nonzero coordinate of each (already reduced)
/// incoming row, rows are kept normalized with pivot entry 1, and earlier
/// rows are back-substituted, so the stored rows are a canonical RREF of
/// the span regardless of insertion order of a fixed row list.
class RowEchelon {
  public:
    explicit RowEchelon(size_t cols) : cols_(cols) {}

    size_t cols() const { return cols_; }
    size_t rank() const { return rows_.size(); }
    const std::vector<std::vector<RationalFunction>>& rows() const { return rows_; }
    const std::vector<size_t>& pivots() const { return pivots_; }

    /// Reduces v against the current rows (in place).
    void reduce(std::vector<RationalFunction>& v) const {
        for (size_t r = 0; r < rows_.size(); ++r) {
            const RationalFunction& c = v[pivots_[r]];
            if (c.is_zero()) continue;
            RationalFunction factor = c;
            for (size_t j = pivots_[r]; j < cols_; ++j) {
                if (rows_[r][j].is_zero()) continue;
                v[j] -= factor * rows_[r][j];
            }
        }
    }

    /// Adds the span of v; returns true if the rank grew.
    bool add_row(std::vector<RationalFunction> v) {
        reduce(v);
        size_t p = cols_;
        for (size_t j = 0; j < cols_; ++j)
            if (!v[j].is_zero()) {
                p = j;
                break;
            }
        if (p == cols_) return false;
        RationalFunction inv = v[p].inverse();
        for (size_t j = p; j < cols_; ++j)
            if (!v[j].is_zero()) v[j] *= inv;
        // back-substitute into existing rows
        for (size_t r = 0; r < rows_.size(); ++r) {
            const RationalFunction& c = rows_[r][p];
            if (c.is_zero()) continue;
            RationalFunction factor = c;
            for (size_t j = p; j < cols_; ++j) {
                if (v[j].is_zero()) continue;
                rows_[r][j] -= factor * v[j];
            }
        }
        size_t pos = 0;
        while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
        rows_.insert(rows_.begin() + static_cast<long>(pos), std::move(v));
        pivots_.insert(pivots_.begin() + static_cast<long>(pos), p);
        return true;
    }

    bool is_pivot_col(size_t j) const {
        for (auto p : pivots_)
            if (p == j) return true;
        return false;
    }

  private:
    size_t cols_;
    std::vector<std::vector<RationalFunction>> rows_;
    std::vector<size_t> pivots_;
};

inline size_t matrix_rank(std::vector<std::vector<RationalFunction>> m) {
    if (m.empty()) return 0;
    RowEchelon ech(m[0].size());
    for (auto& row : m) ech.add_row(std::move(row));
    return ech.rank();
}

} // namespace qbb
