#ifndef SOBSPEC_SPECTRAL_CORE_HPP
#define SOBSPEC_SPECTRAL_CORE_HPP

// Measures, monic three-term recurrences and evaluation of the monic and
// orthonormal families with derivatives up to order three.

#include "sobspec/errors.hpp"
#include "sobspec/precision.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sobspec {

enum class MeasureFamily { laguerre, custom };

/// Interval hull of the support. An empty optional is an infinite endpoint.
template <class T>
struct Support {
    std::optional<T> lower;
    std::optional<T> upper;

    /// True when `c` lies strictly between the endpoints.
    bool interior_contains(const T& c) const {
        bool above = !lower || c > *lower;
        bool below = !upper || c < *upper;
        return above && below;
    }
};

template <class T>
class RecurrenceTable;

/// The base measure dmu. Laguerre carries its closed-form recurrence;
/// Custom measures carry caller-supplied (beta_n, gamma_n) and mu_0.
template <class T = Real>
class MeasureSpec {
public:
    static MeasureSpec laguerre(T alpha) {
        if (!(alpha > -1)) throw invalid_parameter("laguerre: alpha must exceed -1");
        MeasureSpec m;
        m.family_ = MeasureFamily::laguerre;
        m.alpha_ = std::move(alpha);
        m.support_ = Support<T>{T(0), std::nullopt};
        return m;
    }

    /// `gamma[0]` is ignored; `gamma[n] > 0` is required for n >= 1.
    static MeasureSpec custom(std::vector<T> beta, std::vector<T> gamma, T mu0, Support<T> support) {
        if (beta.empty() || beta.size() != gamma.size())
            throw invalid_parameter("custom measure: beta and gamma must be nonempty and of equal length");
        if (!(mu0 > 0)) throw invalid_parameter("custom measure: mu_0 must be positive");
        for (std::size_t n = 1; n < gamma.size(); ++n)
            if (!(gamma[n] > 0)) throw invalid_parameter("custom measure: gamma_n must be positive for n >= 1");
        MeasureSpec m;
        m.family_ = MeasureFamily::custom;
        m.beta_ = std::move(beta);
        m.gamma_ = std::move(gamma);
        m.gamma_[0] = T(0);
        m.mu0_ = std::move(mu0);
        m.support_ = std::move(support);
        return m;
    }

    MeasureFamily family() const { return family_; }
    const T& alpha() const { return alpha_; }
    const Support<T>& support() const { return support_; }

    /// Largest table size this measure can produce, or nullopt if unbounded.
    std::optional<std::size_t> max_size() const {
        if (family_ == MeasureFamily::laguerre) return std::nullopt;
        return beta_.size();
    }

    RecurrenceTable<T> recurrence(std::size_t size) const;

private:
    MeasureSpec() = default;

    MeasureFamily family_ = MeasureFamily::laguerre;
    T alpha_{0};
    std::vector<T> beta_, gamma_;
    T mu0_{1};
    Support<T> support_;
};

/// Discrete Sobolev data: <f,g>_S = int f g dmu + M f(c) g(c) + N f'(c) g'(c).
template <class T = Real>
struct SobolevSpec {
    MeasureSpec<T> base;
    T c;
    T M;
    T N;

    SobolevSpec(MeasureSpec<T> base_, T c_, T M_, T N_)
        : base(std::move(base_)), c(std::move(c_)), M(std::move(M_)), N(std::move(N_)) {
        if (M < 0) throw invalid_parameter("sobolev: M must be nonnegative");
        if (N < 0) throw invalid_parameter("sobolev: N must be nonnegative");
        if (base.support().interior_contains(c))
            throw invalid_parameter("sobolev: the mass point c must lie outside the support");
    }
};

/// Monic recurrence x P_n = P_{n+1} + beta_n P_n + gamma_n P_{n-1} together
/// with ||P_n||^2 and the orthonormal leading coefficients r_n = 1/||P_n||.
template <class T = Real>
class RecurrenceTable {
public:
    RecurrenceTable(std::vector<T> beta, std::vector<T> gamma, const T& mu0)
        : beta_(std::move(beta)), gamma_(std::move(gamma)) {
        using std::sqrt;
        if (beta_.empty() || beta_.size() != gamma_.size())
            throw invalid_parameter("recurrence: beta and gamma must be nonempty and of equal length");
        if (!(mu0 > 0)) throw invalid_parameter("recurrence: mu_0 must be positive");
        gamma_[0] = T(0);
        norm_sq_.resize(beta_.size());
        leading_.resize(beta_.size());
        norm_sq_[0] = mu0;
        for (std::size_t n = 1; n < beta_.size(); ++n) {
            if (!(gamma_[n] > 0)) throw invalid_parameter("recurrence: gamma_n must be positive for n >= 1");
            norm_sq_[n] = gamma_[n] * norm_sq_[n - 1];
        }
        for (std::size_t n = 0; n < beta_.size(); ++n) leading_[n] = 1 / T(sqrt(norm_sq_[n]));
    }

    std::size_t size() const { return beta_.size(); }
    const T& beta(std::size_t n) const { return checked(beta_, n); }
    const T& gamma(std::size_t n) const { return checked(gamma_, n); }
    const T& norm_sq(std::size_t n) const { return checked(norm_sq_, n); }
    /// r_n, leading coefficient of the orthonormal p_n.
    const T& leading(std::size_t n) const { return checked(leading_, n); }

private:
    const T& checked(const std::vector<T>& v, std::size_t n) const {
        if (n >= v.size())
            throw index_error("recurrence: index " + std::to_string(n) + " beyond table of size " +
                              std::to_string(v.size()));
        return v[n];
    }

    std::vector<T> beta_, gamma_, norm_sq_, leading_;
};

template <class T>
RecurrenceTable<T> laguerre_recurrence(const T& alpha, std::size_t size) {
    using boost::multiprecision::tgamma;
    using std::tgamma;
    if (!(alpha > -1)) throw invalid_parameter("laguerre: alpha must exceed -1");
    if (size < 1) throw invalid_parameter("laguerre: size must be at least 1");
    std::vector<T> beta(size), gamma(size);
    for (std::size_t n = 0; n < size; ++n) {
        T tn(static_cast<unsigned long>(n));
        beta[n] = 2 * tn + 1 + alpha;
        gamma[n] = tn * (tn + alpha);
    }
    return RecurrenceTable<T>(std::move(beta), std::move(gamma), T(tgamma(T(alpha + 1))));
}

template <class T>
RecurrenceTable<T> MeasureSpec<T>::recurrence(std::size_t size) const {
    if (family_ == MeasureFamily::laguerre) return laguerre_recurrence(alpha_, size);
    if (size < 1 || size > beta_.size())
        throw index_error("custom measure: requested " + std::to_string(size) + " coefficients, " +
                          std::to_string(beta_.size()) + " supplied");
    return RecurrenceTable<T>(std::vector<T>(beta_.begin(), beta_.begin() + size),
                              std::vector<T>(gamma_.begin(), gamma_.begin() + size), mu0_);
}

inline constexpr int max_jet_order = 3;

/// Values and derivatives of P_0..P_n at one point: at(k, j) = P_k^{(j)}(x).
template <class T = Real>
class PolyJet {
public:
    PolyJet(T x, int order, std::vector<std::array<T, 4>> rows)
        : x_(std::move(x)), order_(order), rows_(std::move(rows)) {}

    const T& x() const { return x_; }
    int order() const { return order_; }
    std::size_t degree() const { return rows_.size() - 1; }
    const T& at(std::size_t k, int j) const {
        if (j < 0 || j > order_) throw index_error("jet: derivative order not computed");
        return rows_.at(k)[static_cast<std::size_t>(j)];
    }

private:
    T x_;
    int order_;
    std::vector<std::array<T, 4>> rows_;
};

/// Forward recurrence for P_k and the j-times differentiated recurrence
/// P^{(j)}_{k+1} = (x - beta_k) P^{(j)}_k + j P^{(j-1)}_k - gamma_k P^{(j)}_{k-1}.
template <class T>
PolyJet<T> eval_jet(const RecurrenceTable<T>& rec, std::size_t n, const T& x, int order = 0) {
    if (n >= rec.size())
        throw index_error("eval_jet: degree " + std::to_string(n) + " needs a table of size > " + std::to_string(n));
    if (order < 0 || order > max_jet_order) throw invalid_parameter("eval_jet: order must be in 0..3");
    std::vector<std::array<T, 4>> rows(n + 1);
    for (auto& r : rows) r.fill(T(0));
    rows[0][0] = 1;
    for (std::size_t k = 0; k < n; ++k) {
        T shift = x - rec.beta(k);
        for (int j = 0; j <= order; ++j) {
            auto ju = static_cast<std::size_t>(j);
            T v = shift * rows[k][ju];
            if (j > 0) v += j * rows[k][ju - 1];
            if (k > 0) v -= rec.gamma(k) * rows[k - 1][ju];
            rows[k + 1][ju] = std::move(v);
        }
    }
    return PolyJet<T>(x, order, std::move(rows));
}

/// p_n(x) = r_n P_n(x).
template <class T>
T orthonormal_value(const RecurrenceTable<T>& rec, std::size_t n, const T& x) {
    return eval_jet(rec, n, x, 0).at(n, 0) * rec.leading(n);
}

/// p_k^{(j)}(x) for k <= n as rows of the returned vector.
template <class T>
std::vector<std::array<T, 4>> orthonormal_jet(const RecurrenceTable<T>& rec, std::size_t n, const T& x,
                                              int order) {
    auto jet = eval_jet(rec, n, x, order);
    std::vector<std::array<T, 4>> out(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        out[k].fill(T(0));
        for (int j = 0; j <= order; ++j) out[k][static_cast<std::size_t>(j)] = jet.at(k, j) * rec.leading(k);
    }
    return out;
}

}  // namespace sobspec

#endif  // SOBSPEC_SPECTRAL_CORE_HPP
