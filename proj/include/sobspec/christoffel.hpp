#ifndef SOBSPEC_CHRISTOFFEL_HPP
#define SOBSPEC_CHRISTOFFEL_HPP

// Once- and twice-iterated Christoffel transforms of dmu at a point c
// outside the support:
//
//   (x-c)^2 P_n^[2](x) = P_{n+2}(x) - d_n P_{n+1}(x) + e_n P_n(x)
//   x P_n^[2] = P_{n+1}^[2] + kappa_n P_n^[2] + tau_n P_{n-1}^[2]
//
// The ledger keeps both routes for the quantities that admit two formulas
// (e_n, tau_n, kappa_n) so that callers can compare them.

#include "sobspec/kernels.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace sobspec {

namespace detail {

/// Relative tolerance for "two formulas must agree" guards: half the
/// working digits.
template <class T>
T agreement_tolerance() {
    if constexpr (std::is_floating_point_v<T>) {
        return T(1e-7);
    } else {
        using std::pow;
        return T(pow(T(10), -static_cast<int>(T::default_precision() / 2)));
    }
}

template <class T>
T relative_gap(const T& a, const T& b) {
    using std::abs;
    T scale = abs(a) > abs(b) ? T(abs(a)) : T(abs(b));
    if (scale == 0) return T(0);
    return T(abs(a - b) / scale);
}

}  // namespace detail

template <class T = Real>
struct ChristoffelCoeffs {
    T d;         ///< d_n, determinant form
    T e;         ///< e_n, determinant form
    T e_kernel;  ///< e_n = (r_n/r_{n+1})^2 K_{n+1}(c,c)/K_n(c,c)
};

/// d_n and e_n from the 2x2 Wronskian-type determinants in P_n, P_{n+1},
/// P_{n+2} at c, plus the kernel-ratio form of e_n. Throws
/// numerical_failure if the two forms of e_n disagree beyond half the
/// working precision.
template <class T>
ChristoffelCoeffs<T> christoffel_coeffs(const RecurrenceTable<T>& rec, std::size_t n, const T& c) {
    if (n + 2 >= rec.size()) throw index_error("christoffel_coeffs: table too small for index " + std::to_string(n));
    auto jc = eval_jet(rec, n + 2, c, 1);
    const T& P0 = jc.at(n, 0);
    const T& P1 = jc.at(n + 1, 0);
    const T& P2 = jc.at(n + 2, 0);
    const T& D0 = jc.at(n, 1);
    const T& D1 = jc.at(n + 1, 1);
    const T& D2 = jc.at(n + 2, 1);
    if (P0 == 0) throw degenerate_point("christoffel_coeffs: P_n(c) vanishes");
    T den = P1 * D0 - D1 * P0;
    if (den == 0) throw degenerate_point("christoffel_coeffs: vanishing determinant in d_n");
    ChristoffelCoeffs<T> out;
    out.d = (P2 * D0 - D2 * P0) / den;
    out.e = (P2 * D1 - D2 * P1) / den;
    T Kn = kernel_confluents(rec, n, c).K;
    T Kn1 = kernel_confluents(rec, n + 1, c).K;
    out.e_kernel = rec.norm_sq(n + 1) / rec.norm_sq(n) * Kn1 / Kn;
    if (detail::relative_gap(out.e, out.e_kernel) > detail::agreement_tolerance<T>())
        throw numerical_failure("christoffel_coeffs: determinant and kernel forms of e_n disagree");
    return out;
}

/// r_n^[2] = r_{n+1} (K_n(c,c)/K_{n+1}(c,c))^{1/2}.
template <class T>
T iterated_leading(const RecurrenceTable<T>& rec, std::size_t n, const T& c) {
    using std::sqrt;
    if (n + 2 >= rec.size()) throw index_error("iterated_leading: table too small for index " + std::to_string(n));
    T Kn = kernel_confluents(rec, n, c).K;
    T Kn1 = kernel_confluents(rec, n + 1, c).K;
    return T(rec.leading(n + 1) * sqrt(T(Kn / Kn1)));
}

/// Scalar data of the 2-iterated family, built sequentially in n.
template <class T = Real>
class ChristoffelLedger {
public:
    ChristoffelLedger(const RecurrenceTable<T>& rec, const T& c, std::size_t size) : c_(c) {
        using std::sqrt;
        if (size < 1) throw invalid_parameter("christoffel ledger: size must be positive");
        // d_n and kappa_n reach P_{n+2}; K_{n+1} needs P_{n+2} too.
        if (size + 2 > rec.size())
            throw index_error("christoffel ledger: size " + std::to_string(size) + " needs a recurrence of size " +
                              std::to_string(size + 2));
        const std::size_t top = size + 1;
        auto jc = eval_jet(rec, top, c, 1);
        Pc_.resize(top + 1);
        Pdc_.resize(top + 1);
        pc_.resize(top + 1);
        for (std::size_t k = 0; k <= top; ++k) {
            Pc_[k] = jc.at(k, 0);
            Pdc_[k] = jc.at(k, 1);
            pc_[k] = Pc_[k] * rec.leading(k);
        }
        Kc_.resize(size + 1);
        for (std::size_t k = 0; k <= size; ++k) Kc_[k] = kernel_confluents(rec, k, c).K;

        d_.resize(size);
        e_.resize(size);
        e_kernel_.resize(size);
        r2_.resize(size);
        norm2_sq_.resize(size);
        for (std::size_t n = 0; n < size; ++n) {
            auto co = christoffel_coeffs(rec, n, c);
            d_[n] = co.d;
            e_[n] = co.e;
            e_kernel_[n] = co.e_kernel;
            if (!(e_[n] > 0)) throw numerical_failure("christoffel ledger: e_n is not positive");
            r2_[n] = rec.leading(n + 1) * sqrt(T(Kc_[n] / Kc_[n + 1]));
            norm2_sq_[n] = e_[n] * rec.norm_sq(n);
        }

        kappa_.resize(size);
        kappa_explicit_.resize(size);
        tau_.resize(size);
        tau_prop_.resize(size);
        tau_scaled_.resize(size);
        for (std::size_t n = 0; n < size; ++n) {
            const T& r = rec.leading(n);
            const T& r1 = rec.leading(n + 1);
            const T& r2n = r2_[n];
            if (Pc_[n] == 0 || Pc_[n + 1] == 0) throw degenerate_point("christoffel ledger: P_n(c) vanishes");
            // (beta_n + gamma_n d_{n-1}/e_{n-1}) e_n (r^[2]_n/r_n)^2 - d_n (r^[2]_n/r_{n+1})^2
            T head = rec.beta(n);
            if (n > 0) head += rec.gamma(n) * d_[n - 1] / e_[n - 1];
            kappa_[n] = head * e_[n] * (r2n / r) * (r2n / r) - d_[n] * (r2n / r1) * (r2n / r1);

            // Expanded form in the p(c) ratios.
            const T& r2_next = rec.leading(n + 2);
            T tail = (r2n / r1) * (r2n / r2_next) * (pc_[n + 2] / pc_[n + 1]) + (r / r1) * (pc_[n] / pc_[n + 1]);
            T mid(0);
            if (n > 0) {
                const T& rm = rec.leading(n - 1);
                T q = r2_[n - 1] / rm;
                mid = rec.gamma(n) * (q * q * (r / r1) * (pc_[n + 1] / pc_[n]) + (r / rm) * (pc_[n - 1] / pc_[n]));
            }
            kappa_explicit_[n] = rec.beta(n) + mid - tail;

            if (n == 0) {
                // p_0^[2] = 1/sqrt(tau_0)
                tau_[0] = norm2_sq_[0];
                tau_prop_[0] = norm2_sq_[0];
                tau_scaled_[0] = norm2_sq_[0];
            } else {
                T q = r2_[n - 1] / r2n;
                tau_[n] = q * q;
                T s = r2_[n - 1] / r1;
                tau_prop_[n] = s * s * Kc_[n + 1] / Kc_[n];
                T u = r2_[n - 1] / r;
                tau_scaled_[n] = u * u * e_[n];
            }
            if (!(tau_[n] > 0)) throw numerical_failure("christoffel ledger: tau_n is not positive");
        }
    }

    std::size_t size() const { return d_.size(); }
    const T& c() const { return c_; }

    const T& d(std::size_t n) const { return d_.at(n); }
    /// e_n from the determinant formula.
    const T& e(std::size_t n) const { return e_.at(n); }
    /// e_n from the kernel ratio (r_n/r_{n+1})^2 K_{n+1}(c,c)/K_n(c,c).
    const T& e_kernel(std::size_t n) const { return e_kernel_.at(n); }
    const T& r2(std::size_t n) const { return r2_.at(n); }
    const T& norm2_sq(std::size_t n) const { return norm2_sq_.at(n); }
    const T& kappa(std::size_t n) const { return kappa_.at(n); }
    const T& kappa_explicit(std::size_t n) const { return kappa_explicit_.at(n); }
    /// tau_n = (r^[2]_{n-1}/r^[2]_n)^2; tau_0 = ||P_0^[2]||^2.
    const T& tau(std::size_t n) const { return tau_.at(n); }
    /// tau_n = (r^[2]_{n-1}/r_{n+1})^2 K_{n+1}(c,c)/K_n(c,c).
    const T& tau_prop(std::size_t n) const { return tau_prop_.at(n); }
    /// tau_n = (r^[2]_{n-1}/r_n)^2 e_n.
    const T& tau_scaled(std::size_t n) const { return tau_scaled_.at(n); }

    /// K_k(c,c) for k <= size.
    const T& kernel_cc(std::size_t k) const { return Kc_.at(k); }
    const T& monic_at_c(std::size_t k) const { return Pc_.at(k); }
    const T& monic_derivative_at_c(std::size_t k) const { return Pdc_.at(k); }
    const T& orthonormal_at_c(std::size_t k) const { return pc_.at(k); }

private:
    T c_;
    std::vector<T> Pc_, Pdc_, pc_, Kc_;
    std::vector<T> d_, e_, e_kernel_, r2_, norm2_sq_;
    std::vector<T> kappa_, kappa_explicit_, tau_, tau_prop_, tau_scaled_;
};

template <class T = Real>
struct IteratedRecurrence {
    T kappa;
    T tau;
    T tau_alt;
};

template <class T>
IteratedRecurrence<T> iterated_recurrence(const ChristoffelLedger<T>& ledger, std::size_t n) {
    if (n >= ledger.size()) throw index_error("iterated_recurrence: index beyond ledger");
    return {ledger.kappa(n), ledger.tau(n), ledger.tau_prop(n)};
}

enum class IteratedRoute { connection, recurrence };

/// Monic kernel polynomial P_n^[1](x) = ||P_n||^2 K_n(x,c) / P_n(c).
template <class T>
T eval_kernel_polynomial(const RecurrenceTable<T>& rec, std::size_t n, const T& x, const T& c) {
    T Pn = eval_jet(rec, n, c, 0).at(n, 0);
    if (Pn == 0) throw degenerate_point("kernel polynomial: P_n(c) vanishes");
    return T(rec.norm_sq(n) * kernel_at(rec, n, x, c) / Pn);
}

/// Orthonormal p_n^[2](x).
///
/// connection: divide r^[2]_n/r_{n+2} p_{n+2} - d_n r^[2]_n/r_{n+1} p_{n+1}
///             + e_n r^[2]_n/r_n p_n by (x-c)^2; undefined at x == c.
/// recurrence: sqrt(tau_{k+1}) p_{k+1} = (x - kappa_k) p_k - sqrt(tau_k) p_{k-1}.
template <class T>
T eval_iterated2(const RecurrenceTable<T>& rec, const ChristoffelLedger<T>& ledger, std::size_t n, const T& x,
                 IteratedRoute route = IteratedRoute::recurrence) {
    using std::sqrt;
    if (n >= ledger.size()) throw index_error("eval_iterated2: index beyond ledger");
    if (route == IteratedRoute::connection) {
        T h = x - ledger.c();
        if (h == 0) throw domain_error("eval_iterated2: connection route is singular at x == c");
        auto jx = eval_jet(rec, n + 2, x, 0);
        const T& r2n = ledger.r2(n);
        T v = r2n * jx.at(n + 2, 0) - ledger.d(n) * r2n * jx.at(n + 1, 0) + ledger.e(n) * r2n * jx.at(n, 0);
        return T(v / (h * h));
    }
    T prev(0);
    T cur = ledger.r2(0);
    for (std::size_t k = 0; k < n; ++k) {
        T sq_next = ledger.r2(k) / ledger.r2(k + 1);
        T back = k > 0 ? T(ledger.r2(k - 1) / ledger.r2(k)) : T(0);
        T next = ((x - ledger.kappa(k)) * cur - back * prev) / sq_next;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

/// Monic P_n^[2](x) = p_n^[2](x) / r_n^[2].
template <class T>
T eval_iterated2_monic(const RecurrenceTable<T>& rec, const ChristoffelLedger<T>& ledger, std::size_t n, const T& x,
                       IteratedRoute route = IteratedRoute::recurrence) {
    return T(eval_iterated2(rec, ledger, n, x, route) / ledger.r2(n));
}

/// k = 1: monic kernel polynomial P_n^[1](x); k = 2: orthonormal p_n^[2](x).
template <class T>
T eval_iterated(const RecurrenceTable<T>& rec, const ChristoffelLedger<T>& ledger, std::size_t n, const T& x, int k,
                IteratedRoute route = IteratedRoute::recurrence) {
    if (k == 1) return eval_kernel_polynomial(rec, n, x, ledger.c());
    if (k == 2) return eval_iterated2(rec, ledger, n, x, route);
    throw invalid_parameter("eval_iterated: only k = 1 and k = 2 are supported");
}

}  // namespace sobspec

#endif  // SOBSPEC_CHRISTOFFEL_HPP
