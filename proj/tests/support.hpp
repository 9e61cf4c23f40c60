#ifndef SOBSPEC_TESTS_SUPPORT_HPP
#define SOBSPEC_TESTS_SUPPORT_HPP

#include "sobspec/precision.hpp"
#include "sobspec/spectral_core.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace sobspec::testing {

inline Real rel_err(const Real& a, const Real& b) {
    using std::abs;
    Real scale = std::max(Real(abs(a)), Real(abs(b)));
    if (scale == 0) return Real(0);
    return Real(abs(a - b) / scale);
}

inline Real q(long p, long den = 1) { return Real(p) / Real(den); }

inline Real tol(const char* s = "1e-30") { return Real(s); }

/// Fixed-seed uniform samples in [lo, hi].
inline std::vector<Real> sample_points(std::size_t count, double lo, double hi, unsigned seed = 20240531u) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<Real> xs;
    for (std::size_t k = 0; k < count; ++k) xs.emplace_back(dist(gen));
    return xs;
}

/// Legendre on [-1, 1]: beta_n = 0, gamma_n = n^2 / (4n^2 - 1), mu_0 = 2.
inline MeasureSpec<Real> legendre(std::size_t size) {
    std::vector<Real> beta(size, Real(0)), gamma(size, Real(0));
    for (std::size_t n = 1; n < size; ++n) {
        Real m(static_cast<long>(n));
        gamma[n] = m * m / (4 * m * m - 1);
    }
    return MeasureSpec<Real>::custom(beta, gamma, Real(2), Support<Real>{Real(-1), Real(1)});
}

/// Fixture holding the working precision for one test.
class Precise : public ::testing::Test {
protected:
    PrecisionScope prec_{256};
};

}  // namespace sobspec::testing

#define EXPECT_REL(a, b, t) EXPECT_LE(::sobspec::testing::rel_err((a), (b)), (t)) << (a) << " vs " << (b)

#endif  // SOBSPEC_TESTS_SUPPORT_HPP
