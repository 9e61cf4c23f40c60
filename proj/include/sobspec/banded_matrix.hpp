#ifndef SOBSPEC_BANDED_MATRIX_HPP
#define SOBSPEC_BANDED_MATRIX_HPP

// Finite truncation of a semi-infinite banded operator.
//
// exact_size is the number of leading rows/columns whose entries coincide
// with the entries of the infinite operator. Products shrink it by
// min(upper_bw(A), lower_bw(B)): entry (i,j) of AB sums over
// k <= min(i + upper_bw(A), j + lower_bw(B)), and every such k must index an
// exact row of B / column of A.

#include "sobspec/errors.hpp"
#include "sobspec/precision.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace sobspec {

template <class T = Real>
class BandedMatrix {
public:
    BandedMatrix() = default;

    BandedMatrix(std::string name, std::size_t nrows, std::size_t ncols, std::size_t lower_bw, std::size_t upper_bw,
                 std::size_t exact_size)
        : name_(std::move(name)),
          nrows_(nrows),
          ncols_(ncols),
          lower_(std::min(lower_bw, nrows ? nrows - 1 : 0)),
          upper_(std::min(upper_bw, ncols ? ncols - 1 : 0)),
          exact_(std::min({exact_size, nrows, ncols})),
          data_(nrows * (lower_ + upper_ + 1), T(0)) {}

    const std::string& name() const { return name_; }
    void rename(std::string n) { name_ = std::move(n); }
    std::size_t nrows() const { return nrows_; }
    std::size_t ncols() const { return ncols_; }
    std::size_t lower_bw() const { return lower_; }
    std::size_t upper_bw() const { return upper_; }
    std::size_t exact_size() const { return exact_; }
    void set_exact_size(std::size_t e) { exact_ = std::min({e, nrows_, ncols_}); }

    bool in_band(std::size_t i, std::size_t j) const {
        if (i >= nrows_ || j >= ncols_) return false;
        return (j >= i) ? (j - i <= upper_) : (i - j <= lower_);
    }

    /// Entry (i,j); zero outside the band.
    T operator()(std::size_t i, std::size_t j) const {
        if (!in_band(i, j)) return T(0);
        return data_[offset(i, j)];
    }

    /// Writable reference; (i,j) must lie in the band.
    T& ref(std::size_t i, std::size_t j) {
        if (!in_band(i, j))
            throw index_error(name_ + ": entry (" + std::to_string(i) + "," + std::to_string(j) + ") outside band");
        return data_[offset(i, j)];
    }

    /// First and one-past-last column index stored in row i.
    std::pair<std::size_t, std::size_t> row_range(std::size_t i) const {
        std::size_t lo = i > lower_ ? i - lower_ : 0;
        std::size_t hi = std::min(ncols_, i + upper_ + 1);
        return {lo, std::max(lo, hi)};
    }

    BandedMatrix transpose(std::string name = {}) const {
        BandedMatrix out(name.empty() ? name_ + "^T" : std::move(name), ncols_, nrows_, upper_, lower_, exact_);
        for (std::size_t i = 0; i < nrows_; ++i) {
            auto [lo, hi] = row_range(i);
            for (std::size_t j = lo; j < hi; ++j) out.ref(j, i) = (*this)(i, j);
        }
        return out;
    }

    /// A + s I (square matrices).
    BandedMatrix plus_identity(const T& s, std::string name = {}) const {
        BandedMatrix out = *this;
        if (!name.empty()) out.name_ = std::move(name);
        for (std::size_t i = 0; i < std::min(nrows_, ncols_); ++i) out.ref(i, i) += s;
        return out;
    }

    BandedMatrix scaled(const T& s, std::string name = {}) const {
        BandedMatrix out = *this;
        if (!name.empty()) out.name_ = std::move(name);
        for (auto& v : out.data_) v *= s;
        return out;
    }

    /// Copy of the leading rows x cols block, exact_size clipped.
    BandedMatrix leading(std::size_t rows, std::size_t cols) const {
        BandedMatrix out(name_, std::min(rows, nrows_), std::min(cols, ncols_), lower_, upper_, exact_);
        for (std::size_t i = 0; i < out.nrows_; ++i) {
            auto [lo, hi] = out.row_range(i);
            for (std::size_t j = lo; j < hi; ++j) out.ref(i, j) = (*this)(i, j);
        }
        return out;
    }

private:
    std::size_t offset(std::size_t i, std::size_t j) const { return i * (lower_ + upper_ + 1) + (j + lower_ - i); }

    std::string name_;
    std::size_t nrows_ = 0, ncols_ = 0, lower_ = 0, upper_ = 0, exact_ = 0;
    std::vector<T> data_;
};

/// A B with band-limited summation and exact_size propagation.
template <class T>
BandedMatrix<T> multiply(const BandedMatrix<T>& A, const BandedMatrix<T>& B, std::string name = {}) {
    if (A.ncols() != B.nrows()) throw invalid_parameter("multiply: inner dimensions differ");
    std::size_t loss = std::min(A.upper_bw(), B.lower_bw());
    std::size_t e = std::min(A.exact_size(), B.exact_size());
    e = e > loss ? e - loss : 0;
    BandedMatrix<T> C(name.empty() ? A.name() + "*" + B.name() : std::move(name), A.nrows(), B.ncols(),
                      A.lower_bw() + B.lower_bw(), A.upper_bw() + B.upper_bw(), e);
    for (std::size_t i = 0; i < C.nrows(); ++i) {
        auto [lo, hi] = C.row_range(i);
        auto [alo, ahi] = A.row_range(i);
        for (std::size_t j = lo; j < hi; ++j) {
            std::size_t klo = std::max(alo, j > B.upper_bw() ? j - B.upper_bw() : 0);
            std::size_t khi = std::min(ahi, std::min(B.nrows(), j + B.lower_bw() + 1));
            T s(0);
            for (std::size_t k = klo; k < khi; ++k) s += A(i, k) * B(k, j);
            C.ref(i, j) = std::move(s);
        }
    }
    return C;
}

/// max |A_ij| over the leading n x n block.
template <class T>
T max_abs(const BandedMatrix<T>& A, std::size_t n) {
    using std::abs;
    T m(0);
    for (std::size_t i = 0; i < std::min(n, A.nrows()); ++i) {
        auto [lo, hi] = A.row_range(i);
        for (std::size_t j = lo; j < std::min(hi, n); ++j) {
            T v = abs(A(i, j));
            if (v > m) m = v;
        }
    }
    return m;
}

/// max |A_ij - B_ij| over the leading n x n block.
template <class T>
T max_abs_diff(const BandedMatrix<T>& A, const BandedMatrix<T>& B, std::size_t n) {
    using std::abs;
    T m(0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!A.in_band(i, j) && !B.in_band(i, j)) continue;
            T v = abs(A(i, j) - B(i, j));
            if (v > m) m = v;
        }
    return m;
}

/// max|A - B| / max(max|A|, max|B|) on the leading n x n block. Throws
/// internal_consistency if n exceeds either exact_size.
template <class T>
T relative_residual(const BandedMatrix<T>& A, const BandedMatrix<T>& B, std::size_t n) {
    if (n > A.exact_size() || n > B.exact_size())
        throw internal_consistency("residual " + A.name() + " vs " + B.name() + ": block " + std::to_string(n) +
                                   " exceeds exact sizes " + std::to_string(A.exact_size()) + "/" +
                                   std::to_string(B.exact_size()));
    T scale = std::max(max_abs(A, n), max_abs(B, n));
    T diff = max_abs_diff(A, B, n);
    if (scale == 0) return diff;
    return T(diff / scale);
}

template <class T>
BandedMatrix<T> identity_matrix(std::size_t n, std::string name = "I") {
    BandedMatrix<T> I(std::move(name), n, n, 0, 0, n);
    for (std::size_t i = 0; i < n; ++i) I.ref(i, i) = 1;
    return I;
}

}  // namespace sobspec

#endif  // SOBSPEC_BANDED_MATRIX_HPP
