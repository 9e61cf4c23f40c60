#ifndef SOBSPEC_KERNELS_HPP
#define SOBSPEC_KERNELS_HPP

// Reproducing kernels K_n(x,y) = sum_{k<=n} p_k(x) p_k(y) and their partial
// derivatives up to order (1,1).
//
// Direct summation is the reference path. The Christoffel-Darboux quotient
// and the confluent closed forms are used where they are well conditioned
// and are checked against summation in the tests.
//
// Index of the (1,1) confluent formula: the closed form
//
//   [ (P_n P'''_{n+1} - P_{n+1} P'''_n)/6 + (P'_n P''_{n+1} - P'_{n+1} P''_n)/2 ] / ||P_n||^2
//
// evaluated at c equals K_n^{(1,1)}(c,c), the kernel with the SAME index n as
// the prefactor. Reading the left-hand side as K_{n-1}^{(1,1)} is off by one:
// for Laguerre alpha = 0, c = -1, n = 1 the closed form gives 1 = p_1'(c)^2,
// while K_0^{(1,1)} = 0. kernel_confluents() therefore returns index n.

#include "sobspec/spectral_core.hpp"

#include <string>

namespace sobspec {

/// K_n^{(j,k)}(c,c) for 0 <= j,k <= 1.
template <class T = Real>
struct KernelConfluents {
    long n = -1;
    T c{0};
    T K{0};
    T K01{0};
    T K10{0};
    T K11{0};
};

namespace detail {

template <class T>
void require_kernel_index(const RecurrenceTable<T>& rec, std::size_t n, const char* who) {
    if (n + 1 >= rec.size())
        throw index_error(std::string(who) + ": index " + std::to_string(n) + " needs a table of size > " +
                          std::to_string(n + 1));
}

template <class T>
bool well_separated(const T& x, const T& y) {
    using std::abs;
    return T(abs(x - y)) > T(1e-8) * (1 + T(abs(x)) + T(abs(y)));
}

}  // namespace detail

/// sum_{k<=n} p_k(x) p_k(y), no closed form.
template <class T>
T kernel_sum(const RecurrenceTable<T>& rec, std::size_t n, const T& x, const T& y) {
    if (n >= rec.size()) throw index_error("kernel_sum: index out of range");
    auto jx = eval_jet(rec, n, x, 0);
    auto jy = eval_jet(rec, n, y, 0);
    T s(0);
    for (std::size_t k = 0; k <= n; ++k) s += jx.at(k, 0) * jy.at(k, 0) / rec.norm_sq(k);
    return s;
}

/// sum_{k<=n} p_k(x) p_k'(y).
template <class T>
T kernel_dy_sum(const RecurrenceTable<T>& rec, std::size_t n, const T& x, const T& y) {
    if (n >= rec.size()) throw index_error("kernel_dy_sum: index out of range");
    auto jx = eval_jet(rec, n, x, 0);
    auto jy = eval_jet(rec, n, y, 1);
    T s(0);
    for (std::size_t k = 0; k <= n; ++k) s += jx.at(k, 0) * jy.at(k, 1) / rec.norm_sq(k);
    return s;
}

/// K_n(x,y); Christoffel-Darboux when |x-y| > 1e-8 (1+|x|+|y|), summation otherwise.
template <class T>
T kernel_at(const RecurrenceTable<T>& rec, std::size_t n, const T& x, const T& y) {
    detail::require_kernel_index(rec, n, "kernel_at");
    if (!detail::well_separated(x, y)) return kernel_sum(rec, n, x, y);
    auto jx = eval_jet(rec, n + 1, x, 0);
    auto jy = eval_jet(rec, n + 1, y, 0);
    T num = jx.at(n + 1, 0) * jy.at(n, 0) - jx.at(n, 0) * jy.at(n + 1, 0);
    return T(num / (rec.norm_sq(n) * (x - y)));
}

/// K_n^{(0,1)}(x,c) from P_n, P_{n+1} and their first derivatives at c.
/// Near x == c this falls back to summation; exactly at c it is undefined,
/// use kernel_confluents().
template <class T>
T kernel_dy_at_c(const RecurrenceTable<T>& rec, std::size_t n, const T& x, const T& c) {
    detail::require_kernel_index(rec, n, "kernel_dy_at_c");
    if (x == c) throw domain_error("kernel_dy_at_c: x == c, use kernel_confluents");
    if (!detail::well_separated(x, c)) return kernel_dy_sum(rec, n, x, c);
    auto jx = eval_jet(rec, n + 1, x, 0);
    auto jc = eval_jet(rec, n + 1, c, 1);
    T h = x - c;
    T first = (jx.at(n + 1, 0) * jc.at(n, 0) - jx.at(n, 0) * jc.at(n + 1, 0)) / (h * h);
    T second = (jx.at(n + 1, 0) * jc.at(n, 1) - jx.at(n, 0) * jc.at(n + 1, 1)) / h;
    return T((first + second) / rec.norm_sq(n));
}

/// Confluent values at x = y = c from the closed forms in P_n, P_{n+1} and
/// their derivatives up to order three.
template <class T>
KernelConfluents<T> kernel_confluents(const RecurrenceTable<T>& rec, std::size_t n, const T& c) {
    detail::require_kernel_index(rec, n, "kernel_confluents");
    auto jc = eval_jet(rec, n + 1, c, 3);
    auto P = [&](std::size_t k, int j) -> const T& { return jc.at(k, j); };
    const std::size_t m = n + 1;
    KernelConfluents<T> out;
    out.n = static_cast<long>(n);
    out.c = c;
    out.K = (P(m, 1) * P(n, 0) - P(n, 1) * P(m, 0)) / rec.norm_sq(n);
    out.K01 = (P(n, 0) * P(m, 2) - P(m, 0) * P(n, 2)) / (2 * rec.norm_sq(n));
    out.K10 = out.K01;
    T third = (P(n, 0) * P(m, 3) - P(m, 0) * P(n, 3)) / 6;
    T second = (P(n, 1) * P(m, 2) - P(m, 1) * P(n, 2)) / 2;
    out.K11 = (third + second) / rec.norm_sq(n);
    return out;
}

/// Confluent values by direct summation of p_k^{(j)}(c) p_k^{(k)}(c).
template <class T>
KernelConfluents<T> kernel_confluents_summed(const RecurrenceTable<T>& rec, std::size_t n, const T& c) {
    if (n >= rec.size()) throw index_error("kernel_confluents_summed: index out of range");
    auto jc = eval_jet(rec, n, c, 1);
    KernelConfluents<T> out;
    out.n = static_cast<long>(n);
    out.c = c;
    for (std::size_t k = 0; k <= n; ++k) {
        const T& v = jc.at(k, 0);
        const T& d = jc.at(k, 1);
        out.K += v * v / rec.norm_sq(k);
        out.K01 += v * d / rec.norm_sq(k);
        out.K11 += d * d / rec.norm_sq(k);
    }
    out.K10 = out.K01;
    return out;
}

/// Confluent values for index n - 1 with the empty-sum convention K_{-1} = 0.
template <class T>
KernelConfluents<T> kernel_confluents_before(const RecurrenceTable<T>& rec, std::size_t n, const T& c) {
    if (n == 0) {
        KernelConfluents<T> zero;
        zero.c = c;
        return zero;
    }
    return kernel_confluents(rec, n - 1, c);
}

}  // namespace sobspec

#endif  // SOBSPEC_KERNELS_HPP
