#include "su11/steering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "su11/controllability.hpp"
#include "su11/errors.hpp"

namespace su11 {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// A compact interval of controls on which A + uB is strictly elliptic.
struct OperatingInterval {
  double lo = 0.0;
  double hi = 0.0;
  double witness = 0.0;

  double control(double phi) const { return lo + (hi - lo) * 0.5 * (1.0 + std::sin(phi)); }
  double phase(double u) const {
    const double s = std::clamp(2.0 * (u - lo) / (hi - lo) - 1.0, -1.0, 1.0);
    return std::asin(s);
  }
};

OperatingInterval operating_interval(const OmegaSet& omega, std::optional<double> bound, double witness) {
  double box = 0.0;
  if (bound) {
    box = *bound;
  } else {
    // Unbounded pieces are cut to a box a little wider than the finite endpoints.
    double extent = std::abs(witness);
    if (std::isfinite(omega.lo)) extent = std::max(extent, std::abs(omega.lo));
    if (std::isfinite(omega.hi)) extent = std::max(extent, std::abs(omega.hi));
    box = 2.0 * extent + 2.0;
  }
  const auto pieces = bounded_pieces(omega, box);
  const ControlInterval* best = &pieces.front();
  for (const auto& p : pieces) {
    if (p.length() >= best->length()) best = &p;
  }
  // Open ends sit on the light cone where periods diverge; pull them in.
  const double margin = 0.025 * best->length();
  OperatingInterval op;
  op.lo = best->lo + (best->lo_closed ? 0.0 : margin);
  op.hi = best->hi - (best->hi_closed ? 0.0 : margin);
  op.witness = std::clamp(witness, op.lo, op.hi);
  return op;
}

// Parameters: (theta_k, phi_k) per factor. The factor is exp(T M) at rotation angle
// 2 pi theta, i.e. T = theta * period(u), which is smooth across whole periods.
class ProductModel {
 public:
  ProductModel(const AlgebraElement& a, const AlgebraElement& b, const OperatingInterval& op)
      : a_(a), b_(b), op_(op) {}

  struct Factor {
    double u;
    double duration;
    GroupElement g;
  };

  Factor factor(double theta, double phi) const {
    const double u = op_.control(phi);
    const AlgebraElement m = a_ + u * b_;
    const double omega = 0.5 * std::sqrt(std::max(-indefinite_form(m, m), 1e-300));
    const double angle = kTwoPi * theta;
    const double c = std::cos(angle);
    const double s = std::sin(angle) / omega;
    double frac = theta - std::floor(theta);
    return {u, frac * kTwoPi / omega, GroupElement{c, -0.5 * s * m.kz, -0.5 * s * m.ky, 0.5 * s * m.kx}};
  }

  GroupElement product(const Eigen::VectorXd& p) const {
    GroupElement x = GroupElement::identity();
    for (Eigen::Index k = 0; k < p.size() / 2; ++k) {
      const GroupElement f = factor(p(2 * k), p(2 * k + 1)).g;
      const cplx fa = f.a(), fb = f.b(), xa = x.a(), xb = x.b();
      x = GroupElement::from_ab(fa * xa + fb * std::conj(xb), fa * xb + fb * std::conj(xa));
    }
    return x;
  }

  ControlSchedule schedule(const Eigen::VectorXd& p) const {
    ControlSchedule s;
    for (Eigen::Index k = 0; k < p.size() / 2; ++k) {
      const Factor f = factor(p(2 * k), p(2 * k + 1));
      if (f.duration > 0.0) s.segments.push_back({f.duration, {f.u}});
    }
    return s;
  }

 private:
  AlgebraElement a_;
  AlgebraElement b_;
  OperatingInterval op_;
};

Eigen::Vector4d residual(const GroupElement& x, const GroupElement& target) {
  const cplx da = x.a() - target.a();
  const cplx db = x.b() - target.b();
  return std::sqrt(2.0) * Eigen::Vector4d(da.real(), da.imag(), db.real(), db.imag());
}

struct LmResult {
  Eigen::VectorXd params;
  double error = 0.0;
  int iterations = 0;
};

// Levenberg-Marquardt on the 4 real residuals, finite-difference Jacobian.
LmResult levenberg_marquardt(const ProductModel& model, const GroupElement& target, Eigen::VectorXd p,
                             double tol, int max_iterations) {
  auto eval = [&](const Eigen::VectorXd& q) { return residual(model.product(q), target); };
  Eigen::Vector4d r = eval(p);
  double err = r.norm();
  double lambda = 1e-3;
  int it = 0;
  const Eigen::Index n = p.size();
  Eigen::MatrixXd jac(4, n);
  for (; it < max_iterations && err > 0.1 * tol; ++it) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double h = 1e-7;
      Eigen::VectorXd plus = p, minus = p;
      plus(j) += h;
      minus(j) -= h;
      jac.col(j) = (eval(plus) - eval(minus)) / (2.0 * h);
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    bool improved = false;
    while (lambda < 1e12) {
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal().array() += lambda * (1.0 + jtj.diagonal().array());
      const Eigen::VectorXd step = lhs.ldlt().solve(-jtr);
      const Eigen::VectorXd trial = p + step;
      const Eigen::Vector4d rt = eval(trial);
      if (rt.allFinite() && rt.norm() < err) {
        p = trial;
        r = rt;
        err = rt.norm();
        lambda = std::max(lambda / 3.0, 1e-12);
        improved = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!improved) break;
  }
  return {p, err, it};
}

// Exact one-factor solution when the target lies on some exp(t (A + uB)), t >= 0.
std::optional<Segment> single_factor(const AlgebraElement& a, const AlgebraElement& b,
                                     const GroupElement& target, std::optional<double> bound,
                                     std::optional<double> elliptic_u) {
  const Eigen::Vector3d traceless(2.0 * target.x4, -2.0 * target.x3, -2.0 * target.x2);
  const double scale = std::max(1.0, std::abs(target.x1) + traceless.norm());
  auto admissible = [&](double u) { return !bound || std::abs(u) <= *bound; };

  if (traceless.norm() <= 1e-14 * scale) {
    // +-I: -I is half a period of any elliptic factor.
    if (target.x1 < 0.0 && elliptic_u && admissible(*elliptic_u)) {
      const AlgebraElement m = a + *elliptic_u * b;
      const double omega = 0.5 * std::sqrt(-indefinite_form(m, m));
      return Segment{std::numbers::pi / omega, {*elliptic_u}};
    }
    return std::nullopt;
  }

  Eigen::Matrix<double, 3, 2> basis;
  basis << a.kx, b.kx, a.ky, b.ky, a.kz, b.kz;
  const Eigen::Vector2d coef = basis.colPivHouseholderQr().solve(traceless);
  if ((basis * coef - traceless).norm() > 1e-10 * scale) return std::nullopt;
  const double s = coef(0);
  if (s == 0.0) return std::nullopt;
  const double u = coef(1) / s;
  if (!admissible(u)) return std::nullopt;

  const AlgebraElement m = a + u * b;
  const ClassKind kind = classify(m);
  double t = 0.0;
  if (kind.kind == ClassKindTag::Elliptic) {
    const double omega = 0.5 * std::sqrt(-kind.form_value);
    double angle = std::atan2(s * omega, target.x1);
    if (angle < 0.0) angle += kTwoPi;
    t = angle / omega;
  } else if (kind.kind == ClassKindTag::Hyperbolic) {
    if (s < 0.0) return std::nullopt;
    const double omega = 0.5 * std::sqrt(kind.form_value);
    t = std::asinh(s * omega) / omega;
  } else {
    if (s < 0.0) return std::nullopt;
    t = s;
  }
  return Segment{t, {u}};
}

}  // namespace

SteeringPlan plan(const AlgebraElement& a, const AlgebraElement& b, const GroupElement& target,
                  const SteeringOptions& options) {
  require_group_element(target, "target");
  if (!(options.tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
  const Verdict verdict = options.bound ? verdict_single_bounded(a, b, *options.bound) : verdict_single(a, b);
  if (verdict.decision != Decision::Controllable) {
    throw Error(ErrorKind::NotControllable,
                std::string("verdict is ") + to_string(verdict.decision) + "; no plan is attempted");
  }
  const double witness = *verdict.witness();

  SteeringPlan best;
  best.target = target;
  auto finish = [&](SteeringPlan& p) {
    p.achieved = propagate(a, {b}, p.schedule).final_state();
    p.error = group_dist(p.achieved, target);
    p.converged = p.error <= options.tol;
    return p;
  };

  best.achieved = GroupElement::identity();
  best.error = group_dist(best.achieved, target);
  best.converged = best.error <= options.tol;
  if (best.converged) return best;

  if (auto seg = single_factor(a, b, target, options.bound, witness)) {
    SteeringPlan p;
    p.target = target;
    p.schedule.segments.push_back(*seg);
    p.factors = 1;
    finish(p);
    if (p.converged) return p;
    if (p.error < best.error) best = p;
  }

  const OperatingInterval op = operating_interval(*verdict.omega, options.bound, witness);
  const ProductModel model(a, b, op);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, 0.35);

  int total_iterations = 0;
  for (int q = std::max(1, options.initial_factors); q <= options.max_factors; q *= 2) {
    for (int r = 0; r < options.restarts; ++r) {
      Eigen::VectorXd p(2 * q);
      for (int k = 0; k < q; ++k) {
        p(2 * k) = unit(rng);
        // Seeds around the witness control.
        p(2 * k + 1) = op.phase(op.witness) + jitter(rng) * std::numbers::pi;
      }
      const LmResult lm = levenberg_marquardt(model, target, p, options.tol, options.max_iterations);
      total_iterations += lm.iterations;
      SteeringPlan cand;
      cand.target = target;
      cand.schedule = model.schedule(lm.params);
      cand.factors = q;
      finish(cand);
      cand.iterations = total_iterations;
      // Deterministic reduction: lowest error, then fewest factors.
      if (cand.error < best.error || (cand.error == best.error && cand.factors < best.factors)) best = cand;
      if (best.converged) {
        best.iterations = total_iterations;
        return best;
      }
    }
  }
  best.iterations = total_iterations;
  return best;
}

}  // namespace su11
