#include "su11/controllability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "su11/errors.hpp"

namespace su11 {

const char* to_string(OmegaShape shape) {
  switch (shape) {
    case OmegaShape::Empty: return "Empty";
    case OmegaShape::OpenInterval: return "OpenInterval";
    case OmegaShape::HalfLineBelow: return "HalfLineBelow";
    case OmegaShape::HalfLineAbove: return "HalfLineAbove";
    case OmegaShape::TwoRays: return "TwoRays";
    case OmegaShape::AllReals: return "AllReals";
  }
  return "Unknown";
}

const char* to_string(Decision decision) {
  switch (decision) {
    case Decision::Controllable: return "Controllable";
    case Decision::Uncontrollable: return "Uncontrollable";
    case Decision::StrongControllable: return "StrongControllable";
    case Decision::NotStrongControllable: return "NotStrongControllable";
    case Decision::STLCSufficient: return "STLCSufficient";
    case Decision::STLCUnknown: return "STLCUnknown";
  }
  return "Unknown";
}

bool OmegaSet::contains(double u) const {
  switch (shape) {
    case OmegaShape::Empty: return false;
    case OmegaShape::OpenInterval: return lo < u && u < hi;
    case OmegaShape::HalfLineBelow: return u < hi;
    case OmegaShape::HalfLineAbove: return u > lo;
    case OmegaShape::TwoRays: return u < lo || u > hi;
    case OmegaShape::AllReals: return true;
  }
  return false;
}

std::optional<double> Verdict::witness() const {
  if (const auto* w = std::get_if<cert::WitnessControl>(&certificate)) {
    if (w->controls.size() == 1) return w->controls.front();
  }
  return std::nullopt;
}

namespace {

// Sign tests shared by the Omega solver and the table rows.
struct FormSigns {
  TracePolynomial q;
  double tau_b;     // tolerance on p2 = <B,B>
  double tau_ab;    // tolerance on <A,B>
  double tau_aa;    // tolerance on <A,A>
  double disc;      // <[A,B],[A,B]>
  double tau_disc;  // tolerance on disc
};

FormSigns form_signs(const AlgebraElement& a, const AlgebraElement& b) {
  const AlgebraElement bracket = commutator(a, b);
  FormSigns s;
  s.q = trace_polynomial(a, b);
  s.tau_b = classification_tolerance(b);
  s.tau_aa = classification_tolerance(a);
  s.tau_ab = 1e-10 * std::max(1.0, a.norm() * b.norm());
  // The cross-product route is more accurate than p1^2/4 - p2 p0 near the light cone.
  s.disc = indefinite_form(bracket, bracket);
  s.tau_disc = classification_tolerance(bracket);
  return s;
}

void require_independent(const AlgebraElement& a, const AlgebraElement& b) {
  if (!linearly_independent(a, b)) {
    throw Error(ErrorKind::DependentInputs,
                "A = " + to_string(a) + " and B = " + to_string(b) + " are linearly dependent");
  }
}

// Pushes a ray witness outward until A + uB classifies as elliptic.
template <class Elliptic>
std::optional<double> ray_witness(const Elliptic& elliptic, double endpoint, double direction) {
  double step = 1.0;
  for (int i = 0; i < 64; ++i) {
    const double u = endpoint + direction * step;
    if (std::isfinite(u) && elliptic(u)) return u;
    step *= 2.0;
  }
  return std::nullopt;
}

cert::WitnessControl single_witness(const AlgebraElement& a, const AlgebraElement& b, double u,
                                    std::string source) {
  const AlgebraElement e = a + u * b;
  return {{u}, e, indefinite_form(e, e), std::move(source)};
}

Certificate uncontrollable_certificate(const AlgebraElement& a, const AlgebraElement& b) {
  const AlgebraElement bracket = commutator(a, b);
  const ClassKind kind = classify(bracket);
  if (kind.kind == ClassKindTag::Parabolic) {
    return cert::ParabolicBracket{bracket, kind.form_value};
  }
  const TracePolynomial q = trace_polynomial(a, b);
  try {
    return cert::HyperbolicFamily{q, kind.form_value, reduce_single(a, b)};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::PreconditionViolated) throw;
    return cert::Marginal{q, e.what()};
  }
}

Certificate dependent_certificate(const AlgebraElement& a, const AlgebraElement& b) {
  std::vector<AlgebraElement> gens;
  if (!a.is_zero()) gens.push_back(a);
  if (!b.is_zero()) gens.push_back(b);
  SubalgebraBasis alg;
  if (!gens.empty()) {
    alg = generated_subalgebra(gens);
  }
  return cert::RankDeficiency{alg, "A and B are dependent; reachable set lies in a one-parameter subgroup"};
}

}  // namespace

bool linearly_independent(const AlgebraElement& a, const AlgebraElement& b) {
  const double m1 = std::abs(a.ky * b.kz - a.kz * b.ky);
  const double m2 = std::abs(a.kz * b.kx - a.kx * b.kz);
  const double m3 = std::abs(a.kx * b.ky - a.ky * b.kx);
  return std::max({m1, m2, m3}) > 1e-12 * a.norm() * b.norm();
}

bool linearly_independent(const AlgebraElement& a, const AlgebraElement& b, const AlgebraElement& c) {
  const double det = a.kx * (b.ky * c.kz - b.kz * c.ky) - a.ky * (b.kx * c.kz - b.kz * c.kx) +
                     a.kz * (b.kx * c.ky - b.ky * c.kx);
  return std::abs(det) > 1e-12 * a.norm() * b.norm() * c.norm();
}

TracePolynomial trace_polynomial(const AlgebraElement& a, const AlgebraElement& b) {
  return {indefinite_form(b, b), 2.0 * indefinite_form(a, b), indefinite_form(a, a)};
}

OmegaSet omega_set(const AlgebraElement& a, const AlgebraElement& b) {
  require_independent(a, b);
  const FormSigns s = form_signs(a, b);
  const TracePolynomial& q = s.q;
  const double half = 0.5 * q.p1;
  auto elliptic = [&](double u) { return classify(a + u * b).kind == ClassKindTag::Elliptic; };

  OmegaSet out;
  auto roots = [&]() {
    // Cancellation-free quadratic roots with the bracket-form discriminant.
    const double sq = std::sqrt(std::max(s.disc, 0.0));
    const double t = -(half + std::copysign(sq, half));
    double r1 = t / q.p2;
    double r2 = t != 0.0 ? q.p0 / t : r1;
    return std::pair{std::min(r1, r2), std::max(r1, r2)};
  };

  if (q.p2 > s.tau_b) {
    if (s.disc > s.tau_disc) {
      auto [lo, hi] = roots();
      // The vertex is where A + uB is most elliptic.
      const double vertex = std::clamp(-half / q.p2, lo, hi);
      if (elliptic(vertex)) {
        out.shape = OmegaShape::OpenInterval;
        out.lo = lo;
        out.hi = hi;
        out.witness = vertex;
      }
    }
    return out;
  }

  if (q.p2 < -s.tau_b) {
    double lo, hi;
    if (s.disc > s.tau_disc) {
      std::tie(lo, hi) = roots();
    } else {
      // Degenerate apex; only the vertex itself is excluded.
      lo = hi = -half / q.p2;
    }
    out.shape = OmegaShape::TwoRays;
    out.lo = lo;
    out.hi = hi;
    out.witness = ray_witness(elliptic, hi, +1.0);
    if (!out.witness) out = OmegaSet{};
    return out;
  }

  // p2 treated as zero: q is affine.
  if (std::abs(half) > s.tau_ab) {
    const double c = -q.p0 / q.p1;
    if (q.p1 > 0.0) {
      out.shape = OmegaShape::HalfLineBelow;
      out.hi = c;
      out.witness = ray_witness(elliptic, c, -1.0);
    } else {
      out.shape = OmegaShape::HalfLineAbove;
      out.lo = c;
      out.witness = ray_witness(elliptic, c, +1.0);
    }
    if (!out.witness) out = OmegaSet{};
    return out;
  }
  if (q.p0 < -s.tau_aa && elliptic(0.0)) {
    out.shape = OmegaShape::AllReals;
    out.witness = 0.0;
  }
  return out;
}

std::vector<ControlInterval> bounded_pieces(const OmegaSet& omega, double bound) {
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    throw Error(ErrorKind::InvalidArgument, "control bound C must be positive and finite");
  }
  std::vector<ControlInterval> out;
  // Omega's finite endpoints are open; box endpoints are closed.
  auto clip = [&](double lo, bool lo_open_inf, double hi, bool hi_open_inf) {
    ControlInterval piece;
    if (lo_open_inf || lo < -bound) {
      piece.lo = -bound;
      piece.lo_closed = true;
    } else {
      piece.lo = lo;
      piece.lo_closed = false;
    }
    if (hi_open_inf || hi > bound) {
      piece.hi = bound;
      piece.hi_closed = true;
    } else {
      piece.hi = hi;
      piece.hi_closed = false;
    }
    if (piece.lo < piece.hi) out.push_back(piece);
  };
  switch (omega.shape) {
    case OmegaShape::Empty: break;
    case OmegaShape::OpenInterval: clip(omega.lo, false, omega.hi, false); break;
    case OmegaShape::HalfLineBelow: clip(0.0, true, omega.hi, false); break;
    case OmegaShape::HalfLineAbove: clip(omega.lo, false, 0.0, true); break;
    case OmegaShape::TwoRays:
      clip(0.0, true, omega.lo, false);
      clip(omega.hi, false, 0.0, true);
      break;
    case OmegaShape::AllReals: clip(0.0, true, 0.0, true); break;
  }
  return out;
}

Verdict verdict_single(const AlgebraElement& a, const AlgebraElement& b) {
  if (!linearly_independent(a, b)) {
    return {Decision::Uncontrollable, dependent_certificate(a, b), std::nullopt};
  }
  const OmegaSet omega = omega_set(a, b);
  if (!omega.empty()) {
    return {Decision::Controllable, single_witness(a, b, *omega.witness, "omega_set"), omega};
  }
  return {Decision::Uncontrollable, uncontrollable_certificate(a, b), omega};
}

Verdict table_row(const AlgebraElement& a, const AlgebraElement& b) {
  require_independent(a, b);
  const FormSigns s = form_signs(a, b);
  const double bb = s.q.p2;
  const double ab = 0.5 * s.q.p1;
  // The table's own discriminant expression, kept separate from the Omega solver.
  const double disc = ab * ab - indefinite_form(a, a) * bb;

  // Witnesses come from each row's closed form, not from omega_set.
  std::optional<double> u;
  int row = 0;
  if (bb < -s.tau_b && std::abs(disc) > s.tau_disc) {
    u = -ab / bb + std::sqrt(std::abs(disc)) / std::abs(bb) + 1.0;
    row = 1;
  } else if (std::abs(bb) <= s.tau_b && std::abs(ab) > s.tau_ab) {
    u = -(s.q.p0 + 1.0) / s.q.p1;
    row = 2;
  } else if (bb > s.tau_b && disc > s.tau_disc) {
    u = -ab / bb;
    row = 3;
  }
  auto elliptic = [&](double v) { return classify(a + v * b).kind == ClassKindTag::Elliptic; };
  if (u && !elliptic(*u) && row != 3) {
    // Near the tolerance floor the closed form can land too close to the light cone.
    const double direction = row == 1 || s.q.p1 < 0.0 ? 1.0 : -1.0;
    u = ray_witness(elliptic, *u, direction);
  }
  if (u && elliptic(*u)) {
    return {Decision::Controllable, single_witness(a, b, *u, "table_row_" + std::to_string(row)), std::nullopt};
  }
  return {Decision::Uncontrollable, uncontrollable_certificate(a, b), std::nullopt};
}

Verdict verdict_single_bounded(const AlgebraElement& a, const AlgebraElement& b, double bound) {
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    throw Error(ErrorKind::InvalidArgument, "control bound C must be positive and finite");
  }
  if (!linearly_independent(a, b)) {
    return {Decision::Uncontrollable, dependent_certificate(a, b), std::nullopt};
  }
  const OmegaSet omega = omega_set(a, b);
  if (omega.empty()) {
    return {Decision::Uncontrollable, uncontrollable_certificate(a, b), omega};
  }
  const auto pieces = bounded_pieces(omega, bound);
  if (pieces.empty()) {
    return {Decision::Uncontrollable, cert::BoundedObstruction{omega, bound}, omega};
  }
  // Longest piece wins; ties go to the upper piece.
  const ControlInterval* best = &pieces.front();
  for (const auto& p : pieces) {
    if (p.length() >= best->length()) best = &p;
  }
  const double u = best->midpoint();
  return {Decision::Controllable, single_witness(a, b, u, "bounded_omega"), omega};
}

Verdict stlc_verdict(const AlgebraElement& a, const AlgebraElement& b) {
  if (classify(b).kind == ClassKindTag::Elliptic) {
    return {Decision::STLCSufficient, cert::Periodic{periodic_control(a, b, 1.0)}, std::nullopt};
  }
  return {Decision::STLCUnknown, std::monostate{}, std::nullopt};
}

Verdict strong_verdict_single(const AlgebraElement& /*a*/, const AlgebraElement& b) {
  return {Decision::NotStrongControllable, cert::OneParameterContainment{b}, std::nullopt};
}

namespace {

// Constant controls (u1, u2) making A + u1 B1 + u2 B2 elliptic when A, B1, B2 span su(1,1).
cert::WitnessControl two_input_witness(const AlgebraElement& a, const AlgebraElement& b1,
                                       const AlgebraElement& b2) {
  Eigen::Matrix2d g;
  g << indefinite_form(b1, b1), indefinite_form(b1, b2), indefinite_form(b1, b2),
      indefinite_form(b2, b2);
  const Eigen::Vector2d lin(indefinite_form(a, b1), indefinite_form(a, b2));
  const double c = indefinite_form(a, a);
  auto q = [&](const Eigen::Vector2d& u) { return c + 2.0 * lin.dot(u) + u.dot(g * u); };

  std::vector<Eigen::Vector2d> candidates;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(g);
  for (int i = 0; i < 2; ++i) {
    const double lambda = eig.eigenvalues()(i);
    const Eigen::Vector2d v = eig.eigenvectors().col(i);
    const double slope = lin.dot(v);
    const double sign = slope > 0.0 ? -1.0 : 1.0;
    if (lambda < 0.0) {
      const double m = std::sqrt((std::max(c, 0.0) + 1.0) / -lambda);
      candidates.push_back(sign * m * v);
    }
    if (slope != 0.0) {
      candidates.push_back(-(std::max(c, 0.0) + 1.0) / (2.0 * slope) * v);
    }
  }
  if (eig.eigenvalues()(0) > 0.0) {
    candidates.push_back(-g.ldlt().solve(lin));
  }

  // Rank by q relative to the classification scale, so huge controls do not win by size alone.
  auto score = [&](const Eigen::Vector2d& u) {
    const AlgebraElement e = a + u(0) * b1 + u(1) * b2;
    return q(u) / std::max(1.0, inner_product(e, e));
  };
  Eigen::Vector2d best = Eigen::Vector2d::Zero();
  double best_score = score(best);
  for (const auto& u : candidates) {
    if (u.allFinite() && score(u) < best_score) {
      best = u;
      best_score = score(u);
    }
  }
  const AlgebraElement e = a + best(0) * b1 + best(1) * b2;
  if (classify(e).kind != ClassKindTag::Elliptic) {
    throw Error(ErrorKind::NotConverged, "no elliptic two-input witness found");
  }
  return {{best(0), best(1)}, e, indefinite_form(e, e), "two_input_quadratic"};
}

}  // namespace

Verdict verdict_multi(const AlgebraElement& a, const std::vector<AlgebraElement>& bs) {
  if (bs.empty() || bs.size() > 3) {
    throw Error(ErrorKind::InvalidArgument, "between 1 and 3 control directions are required");
  }
  if (bs.size() == 1) return verdict_single(a, bs.front());
  if (bs.size() == 3) {
    if (!linearly_independent(bs[0], bs[1], bs[2])) {
      throw Error(ErrorKind::DependentInputs, "control directions B1, B2, B3 are dependent");
    }
    return {Decision::StrongControllable, cert::FullAlgebra{generated_subalgebra(bs)}, std::nullopt};
  }

  const AlgebraElement& b1 = bs[0];
  const AlgebraElement& b2 = bs[1];
  if (!linearly_independent(b1, b2)) {
    throw Error(ErrorKind::DependentInputs, "control directions B1, B2 are dependent");
  }
  const AlgebraElement bracket = commutator(b1, b2);
  const ClassKind bracket_kind = classify(bracket);
  const bool parabolic = bracket_kind.kind == ClassKindTag::Parabolic;

  if (!linearly_independent(a, b1, b2)) {
    if (parabolic) {
      return {Decision::Uncontrollable,
              cert::RankDeficiency{generated_subalgebra({a, b1, b2}),
                                   "A lies in span(B1, B2) and [B1, B2] is parabolic"},
              std::nullopt};
    }
    return {Decision::StrongControllable, cert::FullAlgebra{generated_subalgebra(bs)}, std::nullopt};
  }
  if (!parabolic) {
    return {Decision::StrongControllable, cert::FullAlgebra{generated_subalgebra(bs)}, std::nullopt};
  }
  return {Decision::Controllable, two_input_witness(a, b1, b2), std::nullopt};
}

SubalgebraBasis generated_subalgebra(const std::vector<AlgebraElement>& generators) {
  double scale = 0.0;
  for (const auto& g : generators) {
    if (!g.is_finite()) throw Error(ErrorKind::NonFinite, "generator " + to_string(g));
    scale = std::max(scale, g.norm());
  }
  if (scale == 0.0) throw Error(ErrorKind::InvalidArgument, "all generators are zero");

  SubalgebraBasis out;
  out.generators = generators;
  std::vector<Eigen::Vector3d> ortho;

  // Gram-Schmidt acceptance relative to the candidate's own size, with an absolute
  // floor so vanishing brackets of near-parallel elements do not count.
  auto try_add = [&](const AlgebraElement& m) {
    if (ortho.size() == 3) return false;
    Eigen::Vector3d v(m.kx, m.ky, m.kz);
    const double n0 = v.norm();
    if (n0 <= 1e-12 * scale * scale || n0 == 0.0) return false;
    for (const auto& e : ortho) v -= e.dot(v) * e;
    if (v.norm() <= 1e-10 * n0) return false;
    ortho.push_back(v.normalized());
    out.basis.push_back(m);
    return true;
  };

  for (const auto& g : generators) try_add(g);
  bool grew = true;
  while (grew && out.basis.size() < 3) {
    grew = false;
    const auto current = out.basis;
    for (std::size_t i = 0; i < current.size(); ++i) {
      for (std::size_t j = i + 1; j < current.size(); ++j) {
        if (try_add(commutator(current[i], current[j]))) grew = true;
      }
    }
  }
  out.dim = static_cast<int>(out.basis.size());
  return out;
}

}  // namespace su11
