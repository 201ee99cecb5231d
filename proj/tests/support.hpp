#pragma once

// Generators and independent oracles shared by the test binaries.

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "su11/algebra.hpp"

namespace testing {

using su11::AlgebraElement;
using su11::GroupElement;
using su11::Mat2c;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  AlgebraElement element(double r = 10.0) { return {uniform(-r, r), uniform(-r, r), uniform(-r, r)}; }

  /// Integer coefficients, so forms and brackets are exact.
  AlgebraElement integer_element(int r = 20) {
    return {double(integer(-r, r)), double(integer(-r, r)), double(integer(-r, r))};
  }

  AlgebraElement hyperbolic(double r = 5.0) {
    for (;;) {
      const AlgebraElement m = element(r);
      if (su11::indefinite_form(m, m) > 1e-3 * su11::inner_product(m, m)) return m;
    }
  }

  /// margin bounds -<M,M> / |M|^2 from below; small margins sit near the light cone.
  AlgebraElement elliptic(double r = 5.0, double margin = 1e-3) {
    for (;;) {
      const AlgebraElement m = element(r);
      if (su11::indefinite_form(m, m) < -margin * su11::inner_product(m, m)) return m;
    }
  }

  /// a = sqrt(1 + |b|^2) e^{i phi}, |b| <= r.
  GroupElement group(double r = 2.0) {
    const std::complex<double> b = std::polar(uniform(0.0, r), uniform(-M_PI, M_PI));
    const std::complex<double> a = std::polar(std::sqrt(1.0 + std::norm(b)), uniform(-M_PI, M_PI));
    return GroupElement::from_ab(a, b);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Taylor series of exp(tM) summed until terms stop contributing.
inline Mat2c series_exp(const AlgebraElement& m, double t) {
  const Mat2c x = t * m.matrix();
  Mat2c term = Mat2c::Identity();
  Mat2c sum = Mat2c::Identity();
  for (int k = 1; k < 200; ++k) {
    term = term * x / double(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18 * sum.cwiseAbs().maxCoeff() && k > 10) break;
  }
  return sum;
}

inline double max_abs(const Mat2c& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing
