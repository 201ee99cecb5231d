#pragma once

// Controllability decisions for X' = (A + sum u_l B_l) X on SU(1,1).

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "su11/algebra.hpp"
#include "su11/canonical.hpp"

namespace su11 {

/// q(u) = p2 u^2 + p1 u + p0 = indefinite_form(A + uB, A + uB).
struct TracePolynomial {
  double p2 = 0.0;
  double p1 = 0.0;
  double p0 = 0.0;

  double operator()(double u) const { return (p2 * u + p1) * u + p0; }
  /// p1^2/4 - p2 p0, equal to indefinite_form([A,B], [A,B]).
  double discriminant() const { return 0.25 * p1 * p1 - p2 * p0; }
};

enum class OmegaShape { Empty, OpenInterval, HalfLineBelow, HalfLineAbove, TwoRays, AllReals };

const char* to_string(OmegaShape shape);

/// Solution set of q(u) < 0. Endpoints follow the shape:
///   OpenInterval (lo, hi); HalfLineBelow (-inf, hi); HalfLineAbove (lo, +inf);
///   TwoRays (-inf, lo) u (hi, +inf); AllReals and Empty ignore lo/hi.
struct OmegaSet {
  OmegaShape shape = OmegaShape::Empty;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::optional<double> witness;

  bool empty() const { return shape == OmegaShape::Empty; }
  bool contains(double u) const;
};

/// A closed/open interval piece of Omega intersected with [-C, C].
struct ControlInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = false;
  bool hi_closed = false;

  double midpoint() const { return 0.5 * (lo + hi); }
  double length() const { return hi - lo; }
};

struct SubalgebraBasis {
  std::vector<AlgebraElement> generators;
  std::vector<AlgebraElement> basis;
  int dim = 0;
};

enum class Decision {
  Controllable,
  Uncontrollable,
  StrongControllable,
  NotStrongControllable,
  STLCSufficient,
  STLCUnknown,
};

const char* to_string(Decision decision);

namespace cert {

/// Constant controls making A + sum u_l B_l elliptic.
struct WitnessControl {
  std::vector<double> controls;
  AlgebraElement element;
  double form_value = 0.0;
  std::string source;
};

/// Span of the generators does not reach su(1,1).
struct RankDeficiency {
  SubalgebraBasis algebra;
  std::string reason;
};

struct ParabolicBracket {
  AlgebraElement bracket;
  double form_value = 0.0;
};

/// A + uB hyperbolic for every u; the canonical system carries the monotone function.
struct HyperbolicFamily {
  TracePolynomial q;
  double discriminant = 0.0;
  CanonicalSystem canonical;
};

/// Omega is nonempty but misses the admissible box [-C, C].
struct BoundedObstruction {
  OmegaSet omega;
  double bound = 0.0;
};

/// q(u) < 0 somewhere, but A + uB never clears the classification tolerance.
struct Marginal {
  TracePolynomial q;
  std::string reason;
};

/// Small-time limits of trajectories lie in {exp(sB)}.
struct OneParameterContainment {
  AlgebraElement b;
};

struct FullAlgebra {
  SubalgebraBasis algebra;
};

struct Periodic {
  PeriodicControl control;
};

}  // namespace cert

using Certificate = std::variant<std::monostate, cert::WitnessControl, cert::RankDeficiency,
                                 cert::ParabolicBracket, cert::HyperbolicFamily,
                                 cert::BoundedObstruction, cert::Marginal, cert::OneParameterContainment,
                                 cert::FullAlgebra, cert::Periodic>;

struct Verdict {
  Decision decision = Decision::Uncontrollable;
  Certificate certificate;
  std::optional<OmegaSet> omega;

  /// Single-input witness control, if the certificate carries one.
  std::optional<double> witness() const;
};

/// Largest 2x2 minor of the coefficient matrix against 1e-12 * |A| |B|.
bool linearly_independent(const AlgebraElement& a, const AlgebraElement& b);
/// |det| against 1e-12 * |A| |B| |C|.
bool linearly_independent(const AlgebraElement& a, const AlgebraElement& b, const AlgebraElement& c);

TracePolynomial trace_polynomial(const AlgebraElement& a, const AlgebraElement& b);

/// Throws DependentInputs when A and B are proportional.
OmegaSet omega_set(const AlgebraElement& a, const AlgebraElement& b);

/// Pieces of omega within the closed box [-C, C], in increasing order.
std::vector<ControlInterval> bounded_pieces(const OmegaSet& omega, double bound);

Verdict verdict_single(const AlgebraElement& a, const AlgebraElement& b);

/// Rows of the sign table on (<B,B>, <A,B>^2 - <A,A><B,B>). Throws DependentInputs.
Verdict table_row(const AlgebraElement& a, const AlgebraElement& b);

Verdict verdict_single_bounded(const AlgebraElement& a, const AlgebraElement& b, double bound);

Verdict stlc_verdict(const AlgebraElement& a, const AlgebraElement& b);

/// Single-input systems are never strongly controllable.
Verdict strong_verdict_single(const AlgebraElement& a, const AlgebraElement& b);

Verdict verdict_multi(const AlgebraElement& a, const std::vector<AlgebraElement>& bs);

SubalgebraBasis generated_subalgebra(const std::vector<AlgebraElement>& generators);

}  // namespace su11
