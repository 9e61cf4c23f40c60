#ifndef SOBSPEC_SOBOLEV_HPP
#define SOBSPEC_SOBOLEV_HPP

// Sobolev-type orthogonal polynomials for
//
//   <f,g>_S = int f g dmu + M f(c) g(c) + N f'(c) g'(c),
//
// their connection with the standard family P_n and with the 2-iterated
// family p_n^[2], and the coefficients of the five-term recurrence
//
//   (x-c)^2 s_n = a_{n+2} s_{n+2} + b_{n+1} s_{n+1} + c_n s_n + b_n s_{n-1} + a_n s_{n-2}.
//
// Derivative-index reading. Two formulas in the connection theory contain a
// derivative factor whose index is ambiguous:
//
//   * the expansion coefficient rho_{n,j} of S_n in P_j carries
//     N S_n'(c) P'(c) with P' taken at index j or n;
//   * gamma_{n-1,n} carries N s_n'(c) p'(c) with p' at index n-1 or n.
//
// Both readings are implemented (DerivativeReading). Only `corrected`
// (index j, resp. n-1) yields an expansion that is orthogonal under <.,.>_S
// and reproduces the exact Laguerre example; `as_printed` fails the exact
// rational checks as soon as N != 0. The ledger always uses `corrected`.

#include "sobspec/christoffel.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace sobspec {

enum class DerivativeReading { corrected, as_printed };

template <class T = Real>
struct SobolevBoundary {
    T value;       ///< S_n(c)
    T derivative;  ///< S_n'(c)
};

/// Solves
///   [1 + M K_{n-1}(c,c)     N K^{(0,1)}_{n-1}(c,c)  ] [S_n(c) ]   [P_n(c) ]
///   [M K^{(1,0)}_{n-1}(c,c) 1 + N K^{(1,1)}_{n-1}(c,c)] [S_n'(c)] = [P_n'(c)]
template <class T>
SobolevBoundary<T> sobolev_boundary(const RecurrenceTable<T>& rec, const SobolevSpec<T>& spec, std::size_t n) {
    if (n + 1 >= rec.size()) throw index_error("sobolev_boundary: table too small for index " + std::to_string(n));
    auto kc = kernel_confluents_before(rec, n, spec.c);
    auto jc = eval_jet(rec, n, spec.c, 1);
    const T& Pn = jc.at(n, 0);
    const T& Dn = jc.at(n, 1);
    T a11 = 1 + spec.M * kc.K;
    T a12 = spec.N * kc.K01;
    T a21 = spec.M * kc.K10;
    T a22 = 1 + spec.N * kc.K11;
    T det = a11 * a22 - a12 * a21;
    if (det == 0) throw degenerate_point("sobolev_boundary: singular 2x2 system");
    return {T((Pn * a22 - a12 * Dn) / det), T((a11 * Dn - a21 * Pn) / det)};
}

/// ||S_n||_S^2 = ||P_n||^2 + M S_n(c) P_n(c) + N S_n'(c) P_n'(c).
template <class T>
T sobolev_norm_sq(const RecurrenceTable<T>& rec, const SobolevSpec<T>& spec, std::size_t n,
                  const SobolevBoundary<T>& bnd) {
    auto jc = eval_jet(rec, n, spec.c, 1);
    T v = rec.norm_sq(n) + spec.M * bnd.value * jc.at(n, 0) + spec.N * bnd.derivative * jc.at(n, 1);
    if (!(v > 0)) throw numerical_failure("sobolev_norm_sq: nonpositive norm, precision exhausted");
    return v;
}

/// Per-index data of the Sobolev family, built from a recurrence and the
/// matching 2-iterated Christoffel ledger.
template <class T = Real>
class SobolevLedger {
public:
    /// `size` indices are filled; the recurrence must have size + 2 entries.
    SobolevLedger(const RecurrenceTable<T>& rec, const SobolevSpec<T>& spec, std::size_t size)
        : spec_(spec), chr_(rec, spec.c, size) {
        using std::sqrt;
        const std::size_t top = size + 1;
        auto jc = eval_jet(rec, top, spec.c, 1);
        before_.reserve(size);
        for (std::size_t n = 0; n < size; ++n) {
            before_.push_back(kernel_confluents_before(rec, n, spec.c));
            auto bnd = sobolev_boundary(rec, spec, n);
            Sc_.push_back(bnd.value);
            Sdc_.push_back(bnd.derivative);
            normS_sq_.push_back(sobolev_norm_sq(rec, spec, n, bnd));
            t_.push_back(1 / T(sqrt(normS_sq_.back())));
            sc_.push_back(t_.back() * Sc_.back());
            sdc_.push_back(t_.back() * Sdc_.back());
        }
        for (std::size_t k = 0; k <= top; ++k) {
            pc_.push_back(jc.at(k, 0) * rec.leading(k));
            pdc_.push_back(jc.at(k, 1) * rec.leading(k));
            r_.push_back(rec.leading(k));
        }
        for (std::size_t n = 0; n < size; ++n) {
            auto g = connection(n, DerivativeReading::corrected);
            g_nn_.push_back(g[0]);
            g_n1_.push_back(g[1]);
            g_n2_.push_back(g[2]);
            if (!(g_nn_.back() > 0)) throw numerical_failure("sobolev ledger: gamma_{n,n} is not positive");
        }
        for (std::size_t n = 0; n < size; ++n) {
            T an(0), bn(0);
            if (n >= 2) an = g_nn_[n - 2] * g_n2_[n];
            if (n >= 1) {
                bn = g_nn_[n - 1] * g_n1_[n];
                if (n >= 2) bn += g_n2_[n] * g_n1_[n - 1];
            }
            a_.push_back(an);
            b_.push_back(bn);
            cdiag_.push_back(g_nn_[n] * g_nn_[n] + g_n1_[n] * g_n1_[n] + g_n2_[n] * g_n2_[n]);
        }
    }

    std::size_t size() const { return t_.size(); }
    const SobolevSpec<T>& spec() const { return spec_; }
    const ChristoffelLedger<T>& christoffel() const { return chr_; }

    const T& Sc(std::size_t n) const { return Sc_.at(n); }
    const T& Sdc(std::size_t n) const { return Sdc_.at(n); }
    /// s_n(c) = t_n S_n(c)
    const T& sc(std::size_t n) const { return sc_.at(n); }
    const T& sdc(std::size_t n) const { return sdc_.at(n); }
    const T& normS_sq(std::size_t n) const { return normS_sq_.at(n); }
    const T& t(std::size_t n) const { return t_.at(n); }
    const KernelConfluents<T>& confluents_before(std::size_t n) const { return before_.at(n); }

    /// gamma_{n,n}, gamma_{n-1,n}, gamma_{n-2,n}; zero when the row index is negative.
    const T& gamma_nn(std::size_t n) const { return g_nn_.at(n); }
    const T& gamma_n1(std::size_t n) const { return g_n1_.at(n); }
    const T& gamma_n2(std::size_t n) const { return g_n2_.at(n); }

    /// a_n = rho_{n-2,n}, b_n = rho_{n-1,n}, c_n = rho_{n,n}.
    const T& a(std::size_t n) const { return a_.at(n); }
    const T& b(std::size_t n) const { return b_.at(n); }
    const T& cdiag(std::size_t n) const { return cdiag_.at(n); }

    /// gamma_{k,n} for any k, zero outside n-2 <= k <= n.
    T gamma(long k, std::size_t n) const {
        long d = static_cast<long>(n) - k;
        if (d == 0) return g_nn_.at(n);
        if (d == 1) return g_n1_.at(n);
        if (d == 2) return g_n2_.at(n);
        return T(0);
    }

    /// rho_{k,n}, the coefficient of s_k in (x-c)^2 s_n. Needs the ledger
    /// through index max(k, n).
    T rho(long k, std::size_t n) const {
        long d = k - static_cast<long>(n);
        if (k < 0) return T(0);
        auto ku = static_cast<std::size_t>(k);
        switch (d) {
            case -2: return a_.at(n);
            case -1: return b_.at(n);
            case 0: return cdiag_.at(n);
            case 1: return b_.at(ku);
            case 2: return a_.at(ku);
            default: return T(0);
        }
    }

    /// Connection coefficients of s_n in p^[2]_n, p^[2]_{n-1},
    /// p^[2]_{n-2}, under the chosen derivative reading.
    std::array<T, 3> connection(std::size_t n, DerivativeReading reading) const {
        using std::sqrt;
        const T& tn = t_.at(n);
        std::array<T, 3> g{tn / chr_.r2(n), T(0), T(0)};
        if (n >= 1) {
            const T& M = spec_.M;
            const T& N = spec_.N;
            const T& dprime = reading == DerivativeReading::corrected ? pdc_[n - 1] : pdc_[n];
            T bracket = M * sc_[n] * pc_[n - 1] + N * sdc_[n] * dprime;
            T ratio = sqrt(T(chr_.kernel_cc(n - 1) / chr_.kernel_cc(n)));
            g[1] = -ratio * (chr_.d(n - 1) * tn / r_[n] + chr_.e(n - 1) * r_[n] / r_[n - 1] * bracket);
        }
        if (n >= 2) g[2] = chr_.r2(n - 2) / tn;
        return g;
    }

    /// Expansion pair (alpha_{n+1,n}, alpha_{n,n}).
    std::array<T, 2> alpha_pair(std::size_t n) const {
        const T& M = spec_.M;
        const T& N = spec_.N;
        return {T(M * sc_.at(n) * pc_.at(n + 1) + N * sdc_.at(n) * pdc_.at(n + 1)),
                T(t_.at(n) / r_.at(n) + M * sc_.at(n) * pc_.at(n) + N * sdc_.at(n) * pdc_.at(n))};
    }

    /// Coefficients of p_n in p^[2]_n, p^[2]_{n-1}, p^[2]_{n-2}.
    std::array<T, 3> xi(std::size_t n) const {
        using std::sqrt;
        std::array<T, 3> x{T(sqrt(chr_.e(n))), T(0), T(0)};
        if (n >= 1) x[1] = -chr_.d(n - 1) * sqrt(T(chr_.kernel_cc(n - 1) / chr_.kernel_cc(n)));
        if (n >= 2) x[2] = chr_.r2(n - 2) / r_.at(n);
        return x;
    }

    const T& orthonormal_at_c(std::size_t k) const { return pc_.at(k); }
    const T& orthonormal_derivative_at_c(std::size_t k) const { return pdc_.at(k); }

private:
    SobolevSpec<T> spec_;
    ChristoffelLedger<T> chr_;
    std::vector<KernelConfluents<T>> before_;
    std::vector<T> Sc_, Sdc_, sc_, sdc_, normS_sq_, t_;
    std::vector<T> pc_, pdc_, r_;
    std::vector<T> g_nn_, g_n1_, g_n2_;
    std::vector<T> a_, b_, cdiag_;
};

template <class T = Real>
struct GammaConnection {
    T nn;  ///< gamma_{n,n}
    T n1;  ///< gamma_{n-1,n}
    T n2;  ///< gamma_{n-2,n}
};

template <class T>
GammaConnection<T> gamma_connection(const SobolevLedger<T>& ledger, std::size_t n,
                                    DerivativeReading reading = DerivativeReading::corrected) {
    auto g = ledger.connection(n, reading);
    return {g[0], g[1], g[2]};
}

template <class T = Real>
struct FiveTerm {
    T a;  ///< rho_{n-2,n}
    T b;  ///< rho_{n-1,n}
    T c;  ///< rho_{n,n}
};

template <class T>
FiveTerm<T> five_term_coeffs(const SobolevLedger<T>& ledger, std::size_t n) {
    return {ledger.a(n), ledger.b(n), ledger.cdiag(n)};
}

/// rho_{n+1,n} as gamma_{n,n} gamma_{n,n+1} + gamma_{n-1,n} gamma_{n-1,n+1}.
template <class T>
T rho_next(const SobolevLedger<T>& ledger, std::size_t n) {
    long k = static_cast<long>(n);
    return T(ledger.gamma(k, n) * ledger.gamma(k, n + 1) + ledger.gamma(k - 1, n) * ledger.gamma(k - 1, n + 1));
}

template <class T = Real>
struct AuxConnections {
    T alpha_next;  ///< alpha_{n+1,n}
    T alpha_same;  ///< alpha_{n,n}
    T xi_nn;
    T xi_n1;
    T xi_n2;
};

template <class T>
AuxConnections<T> aux_connections(const SobolevLedger<T>& ledger, std::size_t n) {
    auto a = ledger.alpha_pair(n);
    auto x = ledger.xi(n);
    return {a[0], a[1], x[0], x[1], x[2]};
}

/// Coefficients rho_{n,j}, j < n, of S_n = P_n + sum_j rho_{n,j} P_j.
template <class T>
std::vector<T> sobolev_expansion_coeffs(const RecurrenceTable<T>& rec, const SobolevLedger<T>& ledger, std::size_t n,
                                        DerivativeReading reading = DerivativeReading::corrected) {
    const auto& spec = ledger.spec();
    auto jc = eval_jet(rec, n, spec.c, 1);
    std::vector<T> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const T& dprime = reading == DerivativeReading::corrected ? jc.at(j, 1) : jc.at(n, 1);
        out[j] = -(spec.M * ledger.Sc(n) * jc.at(j, 0) + spec.N * ledger.Sdc(n) * dprime) / rec.norm_sq(j);
    }
    return out;
}

namespace detail {

template <class T>
std::array<T, 2> kernels_before_at(const RecurrenceTable<T>& rec, const SobolevLedger<T>& ledger, std::size_t n,
                                   const T& x) {
    if (n == 0) return {T(0), T(0)};
    const T& c = ledger.spec().c;
    T K = kernel_at(rec, n - 1, x, c);
    T K01 = x == c ? T(ledger.confluents_before(n).K01) : kernel_dy_at_c(rec, n - 1, x, c);
    return {K, K01};
}

}  // namespace detail

/// S_n(x) = P_n(x) - M S_n(c) K_{n-1}(x,c) - N S_n'(c) K^{(0,1)}_{n-1}(x,c);
/// `normalized` returns s_n(x) = t_n S_n(x).
template <class T>
T eval_sobolev(const RecurrenceTable<T>& rec, const SobolevLedger<T>& ledger, std::size_t n, const T& x,
               bool normalized = false) {
    if (n >= ledger.size()) throw index_error("eval_sobolev: index beyond ledger");
    const auto& spec = ledger.spec();
    T Pn = eval_jet(rec, n, x, 0).at(n, 0);
    auto k = detail::kernels_before_at(rec, ledger, n, x);
    T S = Pn - spec.M * ledger.Sc(n) * k[0] - spec.N * ledger.Sdc(n) * k[1];
    return normalized ? T(S * ledger.t(n)) : S;
}

/// S_n(x) as the ratio of the 3x3 bordered determinant and the 2x2
/// determinant of the boundary system.
template <class T>
T eval_sobolev_determinant(const RecurrenceTable<T>& rec, const SobolevLedger<T>& ledger, std::size_t n, const T& x) {
    if (n >= ledger.size()) throw index_error("eval_sobolev_determinant: index beyond ledger");
    const auto& spec = ledger.spec();
    const auto& kc = ledger.confluents_before(n);
    auto jc = eval_jet(rec, n, spec.c, 1);
    T Px = eval_jet(rec, n, x, 0).at(n, 0);
    auto k = detail::kernels_before_at(rec, ledger, n, x);
    const T& M = spec.M;
    const T& N = spec.N;
    T a11 = 1 + M * kc.K, a12 = N * kc.K01, a21 = M * kc.K10, a22 = 1 + N * kc.K11;
    T den = a11 * a22 - a12 * a21;
    T r0 = M * k[0], r1 = N * k[1];
    T num = Px * den - r0 * (jc.at(n, 0) * a22 - a12 * jc.at(n, 1)) + r1 * (jc.at(n, 0) * a21 - a11 * jc.at(n, 1));
    return T(num / den);
}

}  // namespace sobspec

#endif  // SOBSPEC_SOBOLEV_HPP
