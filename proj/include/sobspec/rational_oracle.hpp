#ifndef SOBSPEC_RATIONAL_ORACLE_HPP
#define SOBSPEC_RATIONAL_ORACLE_HPP

// Exact-rational reference: moment functionals for the standard, iterated
// Christoffel and Sobolev inner products, Gram-Schmidt over Q, and every
// matrix of the factorization chain in squared form.
//
// Orthonormal quantities involve square roots, so the oracle never forms
// them. An orthonormal-level entry <f_i, g_j> / (||f_i|| ||g_j||) is
// represented as (its square, its sign), both exactly rational.

#include "sobspec/banded_matrix.hpp"
#include "sobspec/errors.hpp"
#include "sobspec/precision.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace sobspec::oracle {

/// Coefficients in increasing degree.
using Poly = std::vector<Rational>;

inline void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    trim(out);
    return out;
}

/// a + s b
inline Poly poly_axpy(const Poly& a, const Rational& s, const Poly& b) {
    Poly out = a;
    if (out.size() < b.size()) out.resize(b.size(), Rational(0));
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += s * b[i];
    trim(out);
    return out;
}

inline Rational poly_eval(const Poly& p, const Rational& x) {
    Rational v(0);
    for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
    return v;
}

inline Poly poly_derivative(const Poly& p) {
    if (p.size() <= 1) return {};
    Poly d(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<long>(i);
    return d;
}

/// (s (x - c))^k
inline Poly shifted_power(const Rational& c, unsigned k, int s = 1) {
    Poly out{Rational(1)};
    Poly lin{Rational(-c * s), Rational(s)};
    for (unsigned i = 0; i < k; ++i) out = poly_mul(out, lin);
    return out;
}

inline Poly monomial(std::size_t n) {
    Poly p(n + 1, Rational(0));
    p[n] = 1;
    return p;
}

/// mu_n = (n + alpha)! for the Laguerre weight x^alpha e^{-x}, integer alpha >= 0.
inline std::vector<Rational> laguerre_moments(long alpha, std::size_t count) {
    if (alpha < 0) throw unsupported_by_oracle("laguerre_moments: alpha must be a nonnegative integer");
    if (count < 1) throw invalid_parameter("laguerre_moments: count must be positive");
    std::vector<Rational> mu(count);
    BigInt f(1);
    for (long k = 2; k <= alpha; ++k) f *= k;
    for (std::size_t n = 0; n < count; ++n) {
        if (n > 0) f *= static_cast<long>(n) + alpha;
        mu[n] = Rational(f);
    }
    return mu;
}

/// Laguerre moments for a real alpha that must be an exact nonnegative integer.
inline std::vector<Rational> laguerre_moments(double alpha, std::size_t count) {
    if (alpha < 0 || std::floor(alpha) != alpha) throw unsupported_by_oracle("laguerre_moments: non-integer alpha");
    return laguerre_moments(static_cast<long>(alpha), count);
}

/// Moments of the measure whose monic recurrence is (beta_n, gamma_n), mu_0
/// given. Needs beta/gamma through index count/2.
inline std::vector<Rational> moments_from_recurrence(const std::vector<Rational>& beta,
                                                     const std::vector<Rational>& gamma, const Rational& mu0,
                                                     std::size_t count) {
    // v holds x^k in the monic basis; mu_k = mu_0 v_0.
    std::vector<Rational> mu(count);
    std::vector<Rational> v{Rational(1)};
    for (std::size_t k = 0; k < count; ++k) {
        mu[k] = mu0 * v[0];
        std::vector<Rational> w(v.size() + 1, Rational(0));
        for (std::size_t n = 0; n < v.size(); ++n) {
            if (v[n] == 0) continue;
            if (n >= beta.size()) throw index_error("moments_from_recurrence: recurrence too short");
            w[n + 1] += v[n];
            w[n] += beta[n] * v[n];
            if (n > 0) w[n - 1] += gamma[n] * v[n];
        }
        // components above the remaining step count never reach index 0
        w.resize(std::min(w.size(), count - k));
        v = std::move(w);
    }
    return mu;
}

enum class FunctionalKind { standard, iterated, sobolev };

/// A bilinear form on polynomials, defined by exact moments of the base
/// measure and, depending on the kind, a polynomial weight (s(x-c))^k or
/// the point terms M f(c) g(c) + N f'(c) g'(c).
class MomentFunctional {
public:
    static MomentFunctional standard(std::vector<Rational> moments) {
        MomentFunctional f;
        f.kind_ = FunctionalKind::standard;
        f.mu_ = std::move(moments);
        f.weight_ = {Rational(1)};
        return f;
    }

    /// Weight (s (x - c))^k with s = +1 or -1 (s = -1 when c is right of the support).
    static MomentFunctional iterated(std::vector<Rational> moments, unsigned k, Rational c, int s = 1) {
        MomentFunctional f;
        f.kind_ = FunctionalKind::iterated;
        f.mu_ = std::move(moments);
        f.c_ = c;
        f.k_ = k;
        f.weight_ = shifted_power(c, k, s);
        return f;
    }

    static MomentFunctional sobolev(std::vector<Rational> moments, Rational c, Rational M, Rational N) {
        if (M < 0 || N < 0) throw invalid_parameter("sobolev functional: M and N must be nonnegative");
        MomentFunctional f;
        f.kind_ = FunctionalKind::sobolev;
        f.mu_ = std::move(moments);
        f.weight_ = {Rational(1)};
        f.c_ = std::move(c);
        f.M_ = std::move(M);
        f.N_ = std::move(N);
        return f;
    }

    FunctionalKind kind() const { return kind_; }
    const Rational& c() const { return c_; }
    unsigned k() const { return k_; }
    std::size_t moment_count() const { return mu_.size(); }

    /// int f g w dmu (+ point terms for the Sobolev kind).
    Rational operator()(const Poly& f, const Poly& g) const {
        Poly fg = poly_mul(poly_mul(f, g), weight_);
        if (fg.size() > mu_.size())
            throw index_error("moment functional: needs " + std::to_string(fg.size()) + " moments, have " +
                              std::to_string(mu_.size()));
        Rational v(0);
        for (std::size_t i = 0; i < fg.size(); ++i) v += fg[i] * mu_[i];
        if (kind_ == FunctionalKind::sobolev) {
            v += M_ * poly_eval(f, c_) * poly_eval(g, c_);
            v += N_ * poly_eval(poly_derivative(f), c_) * poly_eval(poly_derivative(g), c_);
        }
        return v;
    }

private:
    MomentFunctional() = default;

    FunctionalKind kind_ = FunctionalKind::standard;
    std::vector<Rational> mu_;
    Poly weight_;
    Rational c_{0}, M_{0}, N_{0};
    unsigned k_ = 0;
};

/// Monic orthogonal polynomials of degree 0..n with exact squared norms.
struct RationalPolySystem {
    std::vector<Poly> polys;
    std::vector<Rational> norm_sq;

    std::size_t size() const { return polys.size(); }
};

inline constexpr std::size_t default_degree_cap = 12;

/// Classical Gram-Schmidt on 1, x, x^2, ... under `f`.
inline RationalPolySystem gram_schmidt(const MomentFunctional& f, std::size_t n) {
    RationalPolySystem sys;
    for (std::size_t k = 0; k <= n; ++k) {
        Poly p = monomial(k);
        Poly xk = p;
        for (std::size_t j = 0; j < k; ++j) p = poly_axpy(p, Rational(-f(xk, sys.polys[j]) / sys.norm_sq[j]), sys.polys[j]);
        Rational nsq = f(p, p);
        if (!(nsq > 0))
            throw not_positive_definite("gram_schmidt: nonpositive squared norm at degree " + std::to_string(k));
        sys.polys.push_back(std::move(p));
        sys.norm_sq.push_back(std::move(nsq));
    }
    return sys;
}

/// Monic recurrence coefficients (beta_n, gamma_n) of a system; gamma_0 = 0.
inline std::pair<std::vector<Rational>, std::vector<Rational>> recurrence_of(const RationalPolySystem& sys,
                                                                             const MomentFunctional& f) {
    std::vector<Rational> beta, gamma;
    const Poly x{Rational(0), Rational(1)};
    for (std::size_t n = 0; n + 1 < sys.size(); ++n) {
        beta.push_back(f(poly_mul(x, sys.polys[n]), sys.polys[n]) / sys.norm_sq[n]);
        gamma.push_back(n == 0 ? Rational(0) : Rational(sys.norm_sq[n] / sys.norm_sq[n - 1]));
    }
    return {beta, gamma};
}

/// Gram matrix [f(P_i, P_j)].
inline std::vector<std::vector<Rational>> gram_matrix(const RationalPolySystem& sys, const MomentFunctional& f) {
    std::vector<std::vector<Rational>> G(sys.size(), std::vector<Rational>(sys.size()));
    for (std::size_t i = 0; i < sys.size(); ++i)
        for (std::size_t j = 0; j < sys.size(); ++j) G[i][j] = f(sys.polys[i], sys.polys[j]);
    return G;
}

/// Square and sign of a real number known exactly through its square.
struct SquaredEntry {
    Rational square{0};
    int sign = 0;

    friend bool operator==(const SquaredEntry&, const SquaredEntry&) = default;
};

/// inner / sqrt(na * nb) in squared form.
inline SquaredEntry normalized_entry(const Rational& inner, const Rational& na, const Rational& nb) {
    SquaredEntry e;
    e.square = inner * inner / (na * nb);
    e.sign = inner > 0 ? 1 : (inner < 0 ? -1 : 0);
    return e;
}

/// Exact configuration: base measure through its moments, rational c, M, N.
struct ExactSpec {
    std::function<std::vector<Rational>(std::size_t)> moments;
    Rational c;
    Rational M;
    Rational N;
    int side_sign = 1;  ///< +1 when c is left of the support, -1 when right

    static ExactSpec laguerre(long alpha, Rational c, Rational M, Rational N) {
        return {[alpha](std::size_t count) { return laguerre_moments(alpha, count); }, std::move(c), std::move(M),
                std::move(N), 1};
    }
};

/// Every orthogonal family of the construction up to degree `degree`, with
/// squared-form matrix entries.
class ExactPipeline {
public:
    ExactPipeline(const ExactSpec& spec, std::size_t degree) : spec_(spec), degree_(degree) {
        const std::size_t count = 2 * degree + 8;
        auto mu = spec.moments(count);
        f0_ = MomentFunctional::standard(mu);
        f1_ = MomentFunctional::iterated(mu, 1, spec.c, spec.side_sign);
        f2_ = MomentFunctional::iterated(mu, 2, spec.c, 1);
        fs_ = MomentFunctional::sobolev(mu, spec.c, spec.M, spec.N);
        P_ = gram_schmidt(f0_, degree + 1);
        P1_ = gram_schmidt(f1_, degree + 1);
        P2_ = gram_schmidt(f2_, degree + 1);
        S_ = gram_schmidt(fs_, degree + 1);
    }

    std::size_t degree() const { return degree_; }
    const ExactSpec& spec() const { return spec_; }
    const MomentFunctional& standard() const { return f0_; }
    const MomentFunctional& once() const { return f1_; }
    const MomentFunctional& twice() const { return f2_; }
    const MomentFunctional& sobolev() const { return fs_; }
    const RationalPolySystem& P() const { return P_; }
    const RationalPolySystem& P1() const { return P1_; }
    const RationalPolySystem& P2() const { return P2_; }
    const RationalPolySystem& S() const { return S_; }

    /// Squared-form entry (i, j) of the named matrix: J, J1, J2, L, L1, Q,
    /// R, T, H, or J2sq for (J2 - cI)^2. Zero outside the structural band.
    SquaredEntry entry(const std::string& name, std::size_t i, std::size_t j) const {
        if (i > degree_ || j > degree_) throw index_error("oracle entry: index beyond oracle degree");
        const Poly x{Rational(0), Rational(1)};
        const Poly w2 = shifted_power(spec_.c, 2);
        if (name == "J") return jacobi_entry(P_, f0_, i, j);
        if (name == "J1") return jacobi_entry(P1_, f1_, i, j);
        if (name == "J2") return jacobi_entry(P2_, f2_, i, j);
        if (name == "L") {
            if (j > i) return {};
            return normalized_entry(f1_(P_.polys[i], P1_.polys[j]), P_.norm_sq[i], P1_.norm_sq[j]);
        }
        if (name == "L1") {
            if (j > i) return {};
            return normalized_entry(f2_(P1_.polys[i], P2_.polys[j]), P1_.norm_sq[i], P2_.norm_sq[j]);
        }
        if (name == "Q") {
            if (i > j + 1) return {};
            return normalized_entry(f1_(P_.polys[i], P2_.polys[j]), P_.norm_sq[i], P2_.norm_sq[j]);
        }
        if (name == "R") {
            if (j < i) return {};
            return normalized_entry(f2_(P_.polys[j], P2_.polys[i]), P_.norm_sq[j], P2_.norm_sq[i]);
        }
        if (name == "T") {
            if (j > i) return {};
            return normalized_entry(f2_(S_.polys[i], P2_.polys[j]), S_.norm_sq[i], P2_.norm_sq[j]);
        }
        if (name == "H")
            return normalized_entry(fs_(poly_mul(w2, S_.polys[i]), S_.polys[j]), S_.norm_sq[i], S_.norm_sq[j]);
        if (name == "J2sq")
            return normalized_entry(f2_(poly_mul(w2, P2_.polys[i]), P2_.polys[j]), P2_.norm_sq[i], P2_.norm_sq[j]);
        throw invalid_parameter("oracle entry: unknown matrix " + name);
    }

private:
    static SquaredEntry jacobi_entry(const RationalPolySystem& sys, const MomentFunctional& f, std::size_t i,
                                     std::size_t j) {
        const Poly x{Rational(0), Rational(1)};
        return normalized_entry(f(poly_mul(x, sys.polys[i]), sys.polys[j]), sys.norm_sq[i], sys.norm_sq[j]);
    }

    ExactSpec spec_;
    std::size_t degree_;
    MomentFunctional f0_ = MomentFunctional::standard({Rational(1)});
    MomentFunctional f1_ = f0_, f2_ = f0_, fs_ = f0_;
    RationalPolySystem P_, P1_, P2_, S_;
};

}  // namespace sobspec::oracle

#endif  // SOBSPEC_RATIONAL_ORACLE_HPP
