#pragma once

#include <stdexcept>
#include <string>

namespace ngstate {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the analytic domain of a kernel (pole, branch cut, n = 0).
class domain_error : public error {
 public:
  using error::error;
};

/// Measured two-point data with F K - R^2 < 1/4.
class heisenberg_violation : public error {
 public:
  using error::error;
};

class non_positive_a : public error {
 public:
  using error::error;
};

/// Requested C4/2F^2 lies outside the range reachable by any x >= 0.
class unreachable : public error {
 public:
  using error::error;
};

/// Peak quantities requested for a state without an off-origin maximum.
class regime_error : public error {
 public:
  using error::error;
};

class quadrature_non_positive : public error {
 public:
  using error::error;
};

/// Finite-N Bessel quadrature lost all significant digits to cancellation.
class quadrature_unresolved : public error {
 public:
  using error::error;
};

class not_converged : public error {
 public:
  using error::error;
};

class asymptotic_regime_violation : public error {
 public:
  using error::error;
};

class invalid_config : public error {
 public:
  using error::error;
};

}  // namespace ngstate
