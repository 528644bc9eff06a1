/**
 * Sparse exact rational matrices: arithmetic, composition, rank,
 * kernel/image dimensions, nondegeneracy.
 *
 * Rank uses exact Gaussian elimination with a deterministic pivot rule:
 * rows are consumed in increasing index order and each surviving row pivots
 * on its smallest-index nonzero column.  All arithmetic is exact, so the
 * reported rank is the rank over Q.
 */

#ifndef BGG_MATRIX_HPP
#define BGG_MATRIX_HPP

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bgg/rational.hpp"

namespace bgg {

class ExactMatrix {
  public:
    ExactMatrix() : rows_(0), cols_(0) {}
    ExactMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix shape");
    }

    static ExactMatrix identity(int n) {
        ExactMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.data_[i].push_back({i, Rational(1)});
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    /// Sparse row, sorted by column index, zero entries never stored.
    const std::vector<std::pair<int, Rational>>& row(int i) const { return data_.at(i); }

    Rational get(int i, int j) const {
        check_index(i, j);
        for (const auto& [c, v] : data_[i])
            if (c == j) return v;
        return Rational(0);
    }

    void set(int i, int j, const Rational& v) {
        check_index(i, j);
        auto& r = data_[i];
        auto it = std::lower_bound(r.begin(), r.end(), j,
                                   [](const auto& p, int col) { return p.first < col; });
        if (it != r.end() && it->first == j) {
            if (v == 0) r.erase(it);
            else it->second = v;
        } else if (v != 0) {
            r.insert(it, {j, v});
        }
    }

    void add(int i, int j, const Rational& v) {
        if (v == 0) return;
        check_index(i, j);
        auto& r = data_[i];
        auto it = std::lower_bound(r.begin(), r.end(), j,
                                   [](const auto& p, int col) { return p.first < col; });
        if (it != r.end() && it->first == j) {
            it->second += v;
            if (it->second == 0) r.erase(it);
        } else {
            r.insert(it, {j, v});
        }
    }

    bool is_zero() const {
        for (const auto& r : data_)
            if (!r.empty()) return false;
        return true;
    }

    int nnz() const {
        int n = 0;
        for (const auto& r : data_) n += static_cast<int>(r.size());
        return n;
    }

    bool operator==(const ExactMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const ExactMatrix& o) const { return !(*this == o); }

    ExactMatrix transpose() const {
        ExactMatrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [c, v] : data_[i]) t.data_[c].push_back({i, v});
        // Rows of t are filled in increasing i, already sorted by column.
        return t;
    }

    ExactMatrix scaled(const Rational& s) const {
        ExactMatrix m(rows_, cols_);
        if (s == 0) return m;
        m.data_ = data_;
        for (auto& r : m.data_)
            for (auto& [c, v] : r) v *= s;
        return m;
    }

    ExactMatrix negated() const { return scaled(Rational(-1)); }

    ExactMatrix operator+(const ExactMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch in +");
        ExactMatrix m(rows_, cols_);
        for (int i = 0; i < rows_; ++i) {
            m.data_[i] = data_[i];
            for (const auto& [c, v] : o.data_[i]) m.add(i, c, v);
        }
        return m;
    }

    ExactMatrix operator-(const ExactMatrix& o) const { return *this + o.negated(); }

    /// Stack two matrices vertically (same column count).
    static ExactMatrix vstack(const ExactMatrix& a, const ExactMatrix& b) {
        if (a.cols_ != b.cols_) throw std::invalid_argument("vstack column mismatch");
        ExactMatrix m(a.rows_ + b.rows_, a.cols_);
        for (int i = 0; i < a.rows_; ++i) m.data_[i] = a.data_[i];
        for (int i = 0; i < b.rows_; ++i) m.data_[a.rows_ + i] = b.data_[i];
        return m;
    }

    /// Exact product this * B.
    ExactMatrix compose(const ExactMatrix& B) const {
        if (cols_ != B.rows_) throw std::invalid_argument("compose dimension mismatch");
        ExactMatrix m(rows_, B.cols_);
        std::map<int, Rational> acc;
        for (int i = 0; i < rows_; ++i) {
            acc.clear();
            for (const auto& [k, v] : data_[i])
                for (const auto& [j, w] : B.data_[k]) {
                    auto [it, inserted] = acc.try_emplace(j, Rational(v * w));
                    if (!inserted) it->second += v * w;
                }
            auto& r = m.data_[i];
            for (auto& [j, v] : acc)
                if (v != 0) r.push_back({j, v});
        }
        return m;
    }

    int rank() const {
        // Pivot rows in reduced form, keyed by pivot column.
        std::map<int, std::vector<std::pair<int, Rational>>> pivots;
        std::vector<std::pair<int, Rational>> work;
        for (int i = 0; i < rows_; ++i) {
            work = data_[i];
            reduce_row(work, pivots);
            if (!work.empty()) {
                int pc = work.front().first;
                Rational inv = Rational(1) / work.front().second;
                for (auto& [c, v] : work) v *= inv;
                pivots.emplace(pc, std::move(work));
                work.clear();
            }
        }
        return static_cast<int>(pivots.size());
    }

    int kernel_dim() const { return cols_ - rank(); }

    bool is_nondegenerate() const {
        if (rows_ != cols_) throw std::invalid_argument("is_nondegenerate requires a square matrix");
        return rank() == rows_;
    }

  private:
    void check_index(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw std::out_of_range("matrix index out of range");
    }

    static void reduce_row(std::vector<std::pair<int, Rational>>& row,
                           const std::map<int, std::vector<std::pair<int, Rational>>>& pivots) {
        // Eliminate leading entries against pivot rows (which have pivot value 1).
        while (!row.empty()) {
            auto it = pivots.find(row.front().first);
            if (it == pivots.end()) return;
            Rational factor = row.front().second;
            // row -= factor * pivot_row  (merge of two sorted sparse rows)
            const auto& p = it->second;
            std::vector<std::pair<int, Rational>> out;
            out.reserve(row.size() + p.size());
            size_t a = 0, b = 0;
            while (a < row.size() || b < p.size()) {
                if (b == p.size() || (a < row.size() && row[a].first < p[b].first)) {
                    out.push_back(row[a++]);
                } else if (a == row.size() || p[b].first < row[a].first) {
                    out.push_back({p[b].first, -factor * p[b].second});
                    ++b;
                } else {
                    Rational v = row[a].second - factor * p[b].second;
                    if (v != 0) out.push_back({row[a].first, std::move(v)});
                    ++a;
                    ++b;
                }
            }
            row = std::move(out);
        }
    }

    int rows_, cols_;
    std::vector<std::vector<std::pair<int, Rational>>> data_;
};

// ---------------------------------------------------------------------------
// Small dense helpers (local element computations: dof matrices, dual bases).
// ---------------------------------------------------------------------------

using DenseMatrix = std::vector<std::vector<Rational>>;

inline DenseMatrix dense_from(const ExactMatrix& m) {
    DenseMatrix d(m.rows(), std::vector<Rational>(m.cols(), Rational(0)));
    for (int i = 0; i < m.rows(); ++i)
        for (const auto& [c, v] : m.row(i)) d[i][c] = v;
    return d;
}

/// Invert a small dense square matrix by Gauss-Jordan; throws if singular.
inline DenseMatrix dense_inverse(DenseMatrix a) {
    const int n = static_cast<int>(a.size());
    DenseMatrix inv(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(a[i].size()) != n) throw std::invalid_argument("dense_inverse: not square");
        inv[i][i] = 1;
    }
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a[r][col] != 0) { piv = r; break; }
        if (piv < 0) throw std::domain_error("dense_inverse: singular matrix");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        Rational d = a[col][col];
        for (int j = 0; j < n; ++j) { a[col][j] /= d; inv[col][j] /= d; }
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rational f = a[r][col];
            for (int j = 0; j < n; ++j) { a[r][j] -= f * a[col][j]; inv[r][j] -= f * inv[col][j]; }
        }
    }
    return inv;
}

/// Nullspace basis (as columns) of a small dense matrix, via RREF.
inline std::vector<std::vector<Rational>> dense_kernel_basis(DenseMatrix a, int cols) {
    const int rows = static_cast<int>(a.size());
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (a[i][c] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(a[piv], a[r]);
        Rational d = a[r][c];
        for (int j = 0; j < cols; ++j) a[r][j] /= d;
        for (int i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (int j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<std::vector<Rational>> basis;
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col) is_pivot[c] = true;
    for (int c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        std::vector<Rational> v(cols, Rational(0));
        v[c] = 1;
        for (size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -a[i][c];
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace bgg

#endif // BGG_MATRIX_HPP
