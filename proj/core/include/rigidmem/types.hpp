#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace rigidmem {

/// Three real coordinates: x^1..x^3, or the angular velocity / momentum
/// components of a body under the Euler-Poincare identifications.
using State3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;
using Complex = std::complex<double>;

/// Invalid parameters or arguments outside an operation's domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The integrated state left the divergence ball ||x|| <= 1e8.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double last_valid_time)
      : std::runtime_error(what), last_valid_time_(last_valid_time) {}

  double last_valid_time() const noexcept { return last_valid_time_; }

 private:
  double last_valid_time_;
};

/// A delayed quantity was requested at a time the stored history does not cover.
class HistoryCoverageError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

inline bool is_finite(const State3& x) { return x.allFinite(); }

}  // namespace rigidmem
