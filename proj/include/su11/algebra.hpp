#pragma once

// Coefficient-level arithmetic on su(1,1) and SU(1,1).
//
// An algebra element is stored as its real coefficients over the basis
//
//   Kx = 1/2 [[0, -i], [i, 0]],  Ky = 1/2 [[0, -1], [-1, 0]],  Kz = 1/2 [[-i, 0], [0, i]]
//
// with [Kx, Ky] = -Kz, [Ky, Kz] = Kx, [Kz, Kx] = Ky. A group element is stored as
// the real quadruple (x1, x2, x3, x4) of
//
//   X = [[x1 + i x2, x3 - i x4], [x3 + i x4, x1 - i x2]],  x1^2 + x2^2 - x3^2 - x4^2 = 1.
//
// Matrices are derived views; coefficients are canonical.

#include <complex>
#include <string>

#include <Eigen/Core>

namespace su11 {

using cplx = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;

struct AlgebraElement {
  double kx = 0.0;
  double ky = 0.0;
  double kz = 0.0;

  static constexpr AlgebraElement Kx() { return {1.0, 0.0, 0.0}; }
  static constexpr AlgebraElement Ky() { return {0.0, 1.0, 0.0}; }
  static constexpr AlgebraElement Kz() { return {0.0, 0.0, 1.0}; }

  bool is_finite() const;
  bool is_zero() const { return kx == 0.0 && ky == 0.0 && kz == 0.0; }

  /// Euclidean norm of the coefficient triple (= sqrt(inner_product(M, M))).
  double norm() const;

  /// 2x2 complex realization kx*Kx + ky*Ky + kz*Kz.
  Mat2c matrix() const;

  /// Expansion coefficients <M, K_alpha> = 2 Re Tr(M K_alpha^dagger). Components
  /// outside su(1,1) are discarded.
  static AlgebraElement from_matrix(const Mat2c& m);

  friend constexpr AlgebraElement operator+(AlgebraElement a, AlgebraElement b) {
    return {a.kx + b.kx, a.ky + b.ky, a.kz + b.kz};
  }
  friend constexpr AlgebraElement operator-(AlgebraElement a, AlgebraElement b) {
    return {a.kx - b.kx, a.ky - b.ky, a.kz - b.kz};
  }
  friend constexpr AlgebraElement operator-(AlgebraElement a) { return {-a.kx, -a.ky, -a.kz}; }
  friend constexpr AlgebraElement operator*(double s, AlgebraElement a) {
    return {s * a.kx, s * a.ky, s * a.kz};
  }
  friend constexpr AlgebraElement operator*(AlgebraElement a, double s) { return s * a; }
  friend constexpr bool operator==(const AlgebraElement&, const AlgebraElement&) = default;
};

struct GroupElement {
  double x1 = 1.0;
  double x2 = 0.0;
  double x3 = 0.0;
  double x4 = 0.0;

  static constexpr GroupElement identity() { return {1.0, 0.0, 0.0, 0.0}; }

  /// Builds from a = x1 + i x2 and b = x3 - i x4.
  static GroupElement from_ab(cplx a, cplx b) { return {a.real(), a.imag(), b.real(), -b.imag()}; }

  /// Reads (a, b) off the first row; the second row is assumed to be (conj b, conj a).
  static GroupElement from_matrix(const Mat2c& m) { return from_ab(m(0, 0), m(0, 1)); }

  cplx a() const { return {x1, x2}; }
  cplx b() const { return {x3, -x4}; }

  Mat2c matrix() const;

  /// x1^2 + x2^2 - x3^2 - x4^2 - 1.
  double residual() const { return x1 * x1 + x2 * x2 - x3 * x3 - x4 * x4 - 1.0; }

  bool is_finite() const;

  friend constexpr GroupElement operator-(GroupElement g) { return {-g.x1, -g.x2, -g.x3, -g.x4}; }
  friend constexpr bool operator==(const GroupElement&, const GroupElement&) = default;
};

enum class ClassKindTag { Elliptic, Hyperbolic, Parabolic };

const char* to_string(ClassKindTag kind);

struct ClassKind {
  ClassKindTag kind;
  double form_value;  // indefinite_form(M, M), unrounded
  double tolerance;   // the tau the decision used
};

// Forms and brackets. All reject non-finite input with ErrorKind::NonFinite.

/// Positive-definite product 2 Tr(M N^dagger) = kx kx' + ky ky' + kz kz'.
double inner_product(const AlgebraElement& m, const AlgebraElement& n);

/// Signature (2,1) form <M, N^dagger> = m1 n1 + m2 n2 - m3 n3 used for classification.
double indefinite_form(const AlgebraElement& m, const AlgebraElement& n);
/// indefinite_form(m, m) with compensated summation, accurate to a few ulps of the result
/// even when the three squares nearly cancel.
double self_form_accurate(const AlgebraElement& m);

AlgebraElement commutator(const AlgebraElement& m, const AlgebraElement& n);

/// tau = rel * max(1, ||M||^2).
double classification_tolerance(const AlgebraElement& m, double rel = 1e-10);

/// Elliptic iff form < -tau, Hyperbolic iff form > tau, Parabolic otherwise (including M = 0).
ClassKind classify(const AlgebraElement& m, double rel = 1e-10);

/// exp(t M) in closed form. Throws ErrorKind::Overflow when the hyperbolic branch
/// leaves the representable range.
GroupElement exp_element(const AlgebraElement& m, double t);

/// Rejects elements whose pseudo-unitarity residual exceeds 1e-6 * max(1, |x|^2).
void require_group_element(const GroupElement& x, const char* what = "group element");

GroupElement group_mul(const GroupElement& x, const GroupElement& y);
GroupElement group_inv(const GroupElement& x);

/// Frobenius norm of the 2x2 matrix difference.
double group_dist(const GroupElement& x, const GroupElement& y);

/// Adjoint action X M X^{-1}, expanded back into coefficients.
AlgebraElement adjoint(const GroupElement& x, const AlgebraElement& m);

std::string to_string(const AlgebraElement& m);
std::string to_string(const GroupElement& x);

}  // namespace su11
