#ifndef SOBSPEC_PRECISION_HPP
#define SOBSPEC_PRECISION_HPP

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdio>
#include <ios>
#include <string>
#include <type_traits>

namespace sobspec {

/// Default working type: MPFR-backed binary float with run-time precision.
using Real = boost::multiprecision::mpfr_float;
/// Exact rational used by the oracle.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

inline constexpr unsigned default_precision_bits = 256;

inline unsigned bits_to_digits10(unsigned bits) {
    // ceil(bits * log10(2)); the MPFR backend rounds the digit count up
    // to at least this many bits.
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120));
}

/// Sets the default precision of newly constructed `Real` values for the
/// lifetime of the object. Values created before keep their own precision.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits = default_precision_bits)
        : saved_(Real::default_precision()) {
        Real::default_precision(bits_to_digits10(bits));
    }
    ~PrecisionScope() { Real::default_precision(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

/// Number of significant decimal digits matching the active precision.
inline unsigned active_digits10() { return Real::default_precision(); }

template <class T>
T from_rational(const Rational& q) {
    if constexpr (std::is_floating_point_v<T>) {
        return q.template convert_to<T>();
    } else {
        return T(T(numerator(q)) / T(denominator(q)));
    }
}

/// Scientific decimal rendering with `digits` significant digits.
inline std::string to_decimal(const Real& v, unsigned digits) {
    return v.str(static_cast<std::streamsize>(digits), std::ios_base::scientific);
}

inline std::string to_decimal(double v, unsigned digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", static_cast<int>(digits > 0 ? digits - 1 : 0), v);
    return buf;
}

}  // namespace sobspec

#endif  // SOBSPEC_PRECISION_HPP
