#include "su11/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "su11/errors.hpp"

namespace su11 {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::DependentInputs: return "DependentInputs";
    case ErrorKind::NotHyperbolic: return "NotHyperbolic";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::NotControllable: return "NotControllable";
    case ErrorKind::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NotConverged: return "NotConverged";
  }
  return "Unknown";
}

const char* to_string(ClassKindTag kind) {
  switch (kind) {
    case ClassKindTag::Elliptic: return "Elliptic";
    case ClassKindTag::Hyperbolic: return "Hyperbolic";
    case ClassKindTag::Parabolic: return "Parabolic";
  }
  return "Unknown";
}

namespace {

const cplx I{0.0, 1.0};

void require_finite(const AlgebraElement& m) {
  if (!m.is_finite()) throw Error(ErrorKind::NonFinite, "algebra element " + to_string(m));
}

}  // namespace

bool AlgebraElement::is_finite() const {
  return std::isfinite(kx) && std::isfinite(ky) && std::isfinite(kz);
}

double AlgebraElement::norm() const { return std::sqrt(kx * kx + ky * ky + kz * kz); }

Mat2c AlgebraElement::matrix() const {
  Mat2c m;
  m(0, 0) = -0.5 * I * kz;
  m(0, 1) = 0.5 * (-I * kx - ky);
  m(1, 0) = 0.5 * (I * kx - ky);
  m(1, 1) = 0.5 * I * kz;
  return m;
}

AlgebraElement AlgebraElement::from_matrix(const Mat2c& m) {
  static const Mat2c kx = AlgebraElement::Kx().matrix();
  static const Mat2c ky = AlgebraElement::Ky().matrix();
  static const Mat2c kz = AlgebraElement::Kz().matrix();
  auto coeff = [&m](const Mat2c& k) { return 2.0 * (m * k.adjoint()).trace().real(); };
  return {coeff(kx), coeff(ky), coeff(kz)};
}

Mat2c GroupElement::matrix() const {
  Mat2c m;
  m(0, 0) = a();
  m(0, 1) = b();
  m(1, 0) = std::conj(b());
  m(1, 1) = std::conj(a());
  return m;
}

bool GroupElement::is_finite() const {
  return std::isfinite(x1) && std::isfinite(x2) && std::isfinite(x3) && std::isfinite(x4);
}

double inner_product(const AlgebraElement& m, const AlgebraElement& n) {
  require_finite(m);
  require_finite(n);
  return m.kx * n.kx + m.ky * n.ky + m.kz * n.kz;
}

double indefinite_form(const AlgebraElement& m, const AlgebraElement& n) {
  require_finite(m);
  require_finite(n);
  return m.kx * n.kx + m.ky * n.ky - m.kz * n.kz;
}

double self_form_accurate(const AlgebraElement& m) {
  require_finite(m);
  // Dot2: error-free products via fma and error-free sums, then add the collected errors.
  const double x[3] = {m.kx, m.ky, m.kz};
  const double sign[3] = {1.0, 1.0, -1.0};
  double sum = 0.0, err = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double p = sign[i] * x[i] * x[i];
    const double pe = std::fma(sign[i] * x[i], x[i], -p);
    const double t = sum + p;
    const double z = t - sum;
    err += (sum - (t - z)) + (p - z) + pe;
    sum = t;
  }
  return sum + err;
}

AlgebraElement commutator(const AlgebraElement& m, const AlgebraElement& n) {
  require_finite(m);
  require_finite(n);
  return {m.ky * n.kz - m.kz * n.ky, m.kz * n.kx - m.kx * n.kz, -(m.kx * n.ky - m.ky * n.kx)};
}

double classification_tolerance(const AlgebraElement& m, double rel) {
  return rel * std::max(1.0, inner_product(m, m));
}

ClassKind classify(const AlgebraElement& m, double rel) {
  const double form = indefinite_form(m, m);
  const double tau = classification_tolerance(m, rel);
  ClassKindTag tag = ClassKindTag::Parabolic;
  if (form < -tau) {
    tag = ClassKindTag::Elliptic;
  } else if (form > tau) {
    tag = ClassKindTag::Hyperbolic;
  }
  return {tag, form, tau};
}

GroupElement exp_element(const AlgebraElement& m, double t) {
  require_finite(m);
  if (!std::isfinite(t)) throw Error(ErrorKind::NonFinite, "exp time is not finite");

  // M^2 = (kappa / 4) I, so exp(tM) = c I + s M with (c, s) the even/odd parts of the
  // scalar exponential at omega = sqrt(|kappa|) / 2.
  const double kappa = self_form_accurate(m);
  double c = 1.0;
  double s = t;
  if (std::abs(kappa) < 1e-12) {
    // Series in z = kappa t^2 / 4: c = sum z^n/(2n)!, s = t sum z^n/(2n+1)!.
    const double z = 0.25 * kappa * t * t;
    double term_c = 1.0;
    double term_s = 1.0;
    double sum_s = 1.0;
    for (int n = 1; n < 60; ++n) {
      term_c *= z / ((2.0 * n - 1.0) * (2.0 * n));
      term_s *= z / ((2.0 * n) * (2.0 * n + 1.0));
      c += term_c;
      sum_s += term_s;
      if (std::abs(term_c) < 1e-18 * std::abs(c) && std::abs(term_s) < 1e-18 * std::abs(sum_s)) break;
    }
    s = t * sum_s;
  } else if (kappa < 0.0) {
    const double omega = 0.5 * std::sqrt(-kappa);
    c = std::cos(omega * t);
    s = std::sin(omega * t) / omega;
  } else {
    const double omega = 0.5 * std::sqrt(kappa);
    const double arg = omega * t;
    // cosh overflows past log(DBL_MAX) ~ 709.78
    if (std::abs(arg) > std::log(std::numeric_limits<double>::max())) {
      std::ostringstream os;
      os << "cosh argument " << arg << " exceeds the representable range";
      throw Error(ErrorKind::Overflow, os.str());
    }
    c = std::cosh(arg);
    s = std::sinh(arg) / omega;
  }
  GroupElement g{c, -0.5 * s * m.kz, -0.5 * s * m.ky, 0.5 * s * m.kx};
  if (!g.is_finite()) throw Error(ErrorKind::Overflow, "exp_element produced a non-finite entry");
  return g;
}

void require_group_element(const GroupElement& x, const char* what) {
  if (!x.is_finite()) throw Error(ErrorKind::NonFinite, std::string(what) + " " + to_string(x));
  const double size = x.x1 * x.x1 + x.x2 * x.x2 + x.x3 * x.x3 + x.x4 * x.x4;
  if (std::abs(x.residual()) > 1e-6 * std::max(1.0, size)) {
    std::ostringstream os;
    os << what << " " << to_string(x) << " violates x1^2+x2^2-x3^2-x4^2=1 (residual "
       << x.residual() << ")";
    throw Error(ErrorKind::InvariantViolation, os.str());
  }
}

GroupElement group_mul(const GroupElement& x, const GroupElement& y) {
  require_group_element(x);
  require_group_element(y);
  const cplx a = x.a(), b = x.b(), c = y.a(), d = y.b();
  return GroupElement::from_ab(a * c + b * std::conj(d), a * d + b * std::conj(c));
}

GroupElement group_inv(const GroupElement& x) {
  require_group_element(x);
  return GroupElement::from_ab(std::conj(x.a()), -x.b());
}

double group_dist(const GroupElement& x, const GroupElement& y) {
  const double da = std::norm(x.a() - y.a());
  const double db = std::norm(x.b() - y.b());
  return std::sqrt(2.0 * (da + db));
}

AlgebraElement adjoint(const GroupElement& x, const AlgebraElement& m) {
  require_group_element(x);
  require_finite(m);
  const Mat2c xm = x.matrix();
  const Mat2c xinv = group_inv(x).matrix();
  return AlgebraElement::from_matrix(xm * m.matrix() * xinv);
}

std::string to_string(const AlgebraElement& m) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << m.kx << ", " << m.ky << ", " << m.kz << ")";
  return os.str();
}

std::string to_string(const GroupElement& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << x.x1 << ", " << x.x2 << ", " << x.x3 << ", " << x.x4 << ")";
  return os.str();
}

}  // namespace su11
