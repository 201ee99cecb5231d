#include "su11/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "su11/controllability.hpp"
#include "su11/errors.hpp"

namespace su11 {

NormalizationResult normalize_hyperbolic(const AlgebraElement& b) {
  const ClassKind kind = classify(b);
  if (kind.kind != ClassKindTag::Hyperbolic) {
    throw Error(ErrorKind::NotHyperbolic,
                "B = " + to_string(b) + " is " + to_string(kind.kind) + ", expected Hyperbolic");
  }
  // Rotate (x, y) onto the Ky axis, then boost the Kz component away.
  const double scale = std::sqrt(kind.form_value);
  NormalizationResult r;
  r.alpha = std::atan2(b.kx, b.ky);
  r.beta = std::asinh(b.kz / scale);
  r.frame = group_mul(exp_element(AlgebraElement::Kx(), r.beta), exp_element(AlgebraElement::Kz(), r.alpha));
  r.scale = scale;
  return r;
}

CanonicalSystem reduce_single(const AlgebraElement& a, const AlgebraElement& b) {
  auto fail = [](const std::string& predicate) {
    throw Error(ErrorKind::PreconditionViolated, predicate);
  };
  const ClassKind bk = classify(b);
  if (bk.kind != ClassKindTag::Hyperbolic) {
    fail(std::string("classify(B) = Hyperbolic (got ") + to_string(bk.kind) + ")");
  }
  if (!linearly_independent(a, b)) fail("A, B linearly independent");
  const OmegaSet omega = omega_set(a, b);
  if (!omega.empty()) fail(std::string("omega_set(A, B) = Empty (got ") + to_string(omega.shape) + ")");
  if (classify(commutator(a, b)).kind == ClassKindTag::Parabolic) fail("[A, B] not parabolic");

  const NormalizationResult norm = normalize_hyperbolic(b);
  const AlgebraElement at = adjoint(norm.frame, a);
  const double offset = inner_product(at, AlgebraElement::Ky());
  const double ax = at.kx;
  const double az = at.kz;

  CanonicalSystem sys;
  sys.epsilon = ax > 0.0 ? 1 : -1;
  sys.time_scale = std::abs(ax);
  sys.a = az / sys.time_scale;
  sys.control_offset = offset;
  sys.control_scale = norm.scale;
  sys.frame = norm.frame;
  if (!(std::abs(sys.a) < 1.0)) {
    std::ostringstream os;
    os << "|a| < 1 after reduction (got a = " << sys.a << ")";
    fail(os.str());
  }
  return sys;
}

double monotone_value(const GroupElement& x) {
  const double p = x.x1 - x.x4;
  const double m = x.x2 - x.x3;
  return p * p - m * m;
}

namespace {

double max_coeff(const AlgebraElement& m) { return std::max({std::abs(m.kx), std::abs(m.ky), std::abs(m.kz)}); }

// Among representable controls near the root u, the one whose rounded A + uB has
// kappa closest to the target. Stays above floor_u.
double snap_to_period(const AlgebraElement& a, const AlgebraElement& b, const TracePolynomial& q, double u,
                      double target, double floor_u) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  auto miss = [&](double v) { return std::abs(self_form_accurate(a + v * b) - target); };
  const double slope = std::abs(2.0 * q.p2 * u + q.p1);
  const double mmax = max_coeff(a + u * b);
  const double noise = 4.0 * eps * 3.0 * mmax * mmax;
  const double step = std::max(std::nextafter(u, INFINITY) - u,
                               (std::nextafter(mmax, INFINITY) - mmax) / std::max(max_coeff(b), 1e-300));
  const double good_enough = 4.0 * eps * std::abs(target);
  double best_u = u, best = miss(u);
  for (int j = 1; j <= 65536 && best > good_enough && slope * step * j < 3.0 * noise; ++j) {
    for (const double v : {u + j * step, u - j * step}) {
      if (!(v > floor_u)) continue;
      const double e = miss(v);
      if (e < best) {
        best = e;
        best_u = v;
      }
    }
  }
  return best_u;
}

}  // namespace

PeriodicControl periodic_control(const AlgebraElement& a, const AlgebraElement& b, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorKind::InvalidArgument, "epsilon must be positive and finite");
  }
  const ClassKind bk = classify(b);
  if (bk.kind != ClassKindTag::Elliptic) {
    throw Error(ErrorKind::PreconditionViolated,
                std::string("classify(B) = Elliptic (got ") + to_string(bk.kind) + ")");
  }
  const TracePolynomial q = trace_polynomial(a, b);
  const double neg_p2 = -q.p2;
  // Largest root of q; q < 0 beyond it.
  const double uc = (q.p1 + std::sqrt(std::max(0.0, q.p1 * q.p1 + 4.0 * neg_p2 * q.p0))) / (2.0 * neg_p2);
  const double floor_u = std::max(uc, 0.0);

  // -q(u) = (4 pi n / epsilon)^2 puts the eigenvalues of epsilon (A + uB) at +-2 pi n i.
  for (int n = 1; n < 1'000'000; ++n) {
    const double k = 4.0 * std::numbers::pi * n / epsilon;
    const double disc = q.p1 * q.p1 + 4.0 * neg_p2 * (q.p0 + k * k);
    const double u = (q.p1 + std::sqrt(disc)) / (2.0 * neg_p2);
    if (u > floor_u) return {snap_to_period(a, b, q, u, -k * k, floor_u), n, epsilon};
  }
  throw Error(ErrorKind::NotConverged, "no periodic control found");
}

}  // namespace su11
