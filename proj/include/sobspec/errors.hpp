#ifndef SOBSPEC_ERRORS_HPP
#define SOBSPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sobspec {

/// Base of every error thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter is outside its admissible range (alpha <= -1, M < 0, ...).
class invalid_parameter : public error {
public:
    using error::error;
};

/// An index exceeds what a table or ledger was built for.
class index_error : public error {
public:
    using error::error;
};

/// The operation is not defined at the requested point (e.g. x == c for a
/// divided-difference formula).
class domain_error : public error {
public:
    using error::error;
};

/// A formula's denominator vanishes, e.g. P_n(c) == 0.
class degenerate_point : public error {
public:
    using error::error;
};

/// A Cholesky pivot or Gram-Schmidt squared norm is not strictly positive.
class not_positive_definite : public error {
public:
    using error::error;
};

/// A quantity that must be positive came out nonpositive, which signals
/// that the working precision is exhausted.
class numerical_failure : public error {
public:
    using error::error;
};

/// Truncation bookkeeping would read entries that are not exact.
class internal_consistency : public error {
public:
    using error::error;
};

/// The exact-rational oracle does not support the requested configuration.
class unsupported_by_oracle : public error {
public:
    using error::error;
};

}  // namespace sobspec

#endif  // SOBSPEC_ERRORS_HPP
