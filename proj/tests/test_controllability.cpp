#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "su11/controllability.hpp"
#include "su11/errors.hpp"

using namespace su11;
using testing::Gen;

namespace {

const AlgebraElement Kx = AlgebraElement::Kx();
const AlgebraElement Ky = AlgebraElement::Ky();
const AlgebraElement Kz = AlgebraElement::Kz();

bool elliptic_at(const AlgebraElement& a, const AlgebraElement& b, double u) {
  return classify(a + u * b).kind == ClassKindTag::Elliptic;
}

void check_witness(const Verdict& v, const AlgebraElement& a, const std::vector<AlgebraElement>& bs) {
  const auto* w = std::get_if<cert::WitnessControl>(&v.certificate);
  REQUIRE(w != nullptr);
  REQUIRE(w->controls.size() == bs.size());
  AlgebraElement e = a;
  for (std::size_t l = 0; l < bs.size(); ++l) e = e + w->controls[l] * bs[l];
  CHECK(classify(e).kind == ClassKindTag::Elliptic);
  CHECK((e - w->element).norm() <= 1e-12 * (1.0 + e.norm()));
}

// Random pairs drawn to hit every shape, not only the generic ones.
std::pair<AlgebraElement, AlgebraElement> random_pair(Gen& g) {
  switch (g.integer(0, 4)) {
    case 0: return {g.element(), g.element()};
    case 1: return {g.element(), g.elliptic()};
    case 2: return {g.element(), g.hyperbolic()};
    case 3: {
      // Null B.
      const double phi = g.uniform(0.0, 2.0 * std::numbers::pi), r = g.uniform(0.1, 3.0);
      return {g.element(), AlgebraElement{r * std::cos(phi), r * std::sin(phi), r}};
    }
    default: return {g.integer_element(3), g.integer_element(3)};
  }
}

}  // namespace

TEST_CASE("trace polynomial and discriminant") {
  Gen g(31);
  for (int i = 0; i < 2000; ++i) {
    const auto a = g.element(), b = g.element();
    const auto q = trace_polynomial(a, b);
    for (double u : {-3.0, -0.5, 0.0, 1.25, 7.0}) {
      const auto e = a + u * b;
      CHECK(std::abs(q(u) - indefinite_form(e, e)) < 1e-10 * (1.0 + inner_product(e, e)));
    }
    const auto c = commutator(a, b);
    const double scale = std::max(1.0, 0.25 * q.p1 * q.p1 + std::abs(q.p2 * q.p0));
    CHECK(std::abs(q.discriminant() - indefinite_form(c, c)) < 1e-10 * scale);
  }
}

TEST_CASE("omega set against a brute-force grid") {
  Gen g(32);
  for (int i = 0; i < 3000; ++i) {
    const auto [a, b] = random_pair(g);
    if (!linearly_independent(a, b)) continue;
    const OmegaSet omega = omega_set(a, b);
    const auto q = trace_polynomial(a, b);
    if (!omega.empty()) {
      REQUIRE(omega.witness.has_value());
      CHECK(omega.contains(*omega.witness));
      CHECK(q(*omega.witness) < 0.0);
      CHECK(elliptic_at(a, b, *omega.witness));
    }
    bool any = false;
    for (int k = -400; k <= 400; ++k) {
      const double u = 0.125 * k;
      const auto e = a + u * b;
      const double form = indefinite_form(e, e);
      if (std::abs(form) < 1e-6 * (1.0 + inner_product(e, e))) continue;
      CHECK_MESSAGE(omega.contains(u) == (form < 0.0), "u = ", u, " shape ", to_string(omega.shape));
      any = any || form < 0.0;
    }
    if (any) CHECK(!omega.empty());
  }
}

TEST_CASE("omega shapes") {
  SUBCASE("elliptic drift, hyperbolic control: bounded interval") {
    const auto om = omega_set(Kz, Kx);
    CHECK(om.shape == OmegaShape::OpenInterval);
    CHECK(om.lo == doctest::Approx(-1.0));
    CHECK(om.hi == doctest::Approx(1.0));
    CHECK(*om.witness == 0.0);
  }
  SUBCASE("hyperbolic drift, elliptic control: two rays") {
    const auto om = omega_set(Kx, Kz);
    CHECK(om.shape == OmegaShape::TwoRays);
    CHECK(om.lo == doctest::Approx(-1.0));
    CHECK(om.hi == doctest::Approx(1.0));
    CHECK(om.contains(1.5));
    CHECK(!om.contains(1.0));
    CHECK(!om.contains(0.0));
  }
  SUBCASE("null control: half line") {
    const auto om = omega_set(Kz, Kx + Kz);
    CHECK(om.shape == OmegaShape::HalfLineAbove);
    CHECK(om.lo == doctest::Approx(-0.5));
    const auto below = omega_set(Kz, -(Kx + Kz));
    CHECK(below.shape == OmegaShape::HalfLineBelow);
    CHECK(below.hi == doctest::Approx(0.5));
  }
  SUBCASE("hyperbolic pair with hyperbolic bracket: empty") {
    CHECK(omega_set(Kx, Ky).empty());
  }
  SUBCASE("dependent inputs are rejected") {
    CHECK_THROWS_AS(omega_set(Kx, 2.0 * Kx), Error);
    try {
      omega_set(Kx, 2.0 * Kx);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DependentInputs);
    }
  }
}

TEST_CASE("single-input verdict examples") {
  for (double w0 : {0.1, 1.0, 10.0}) {
    const auto v = verdict_single(w0 * Kz, Kx);
    CHECK(v.decision == Decision::Controllable);
    CHECK(*v.witness() == 0.0);
    check_witness(v, w0 * Kz, {Kx});
    CHECK(std::get<cert::WitnessControl>(v.certificate).source == "omega_set");
  }
  const auto hyp = verdict_single(Kx, Ky);
  CHECK(hyp.decision == Decision::Uncontrollable);
  const auto* fam = std::get_if<cert::HyperbolicFamily>(&hyp.certificate);
  REQUIRE(fam != nullptr);
  CHECK(fam->canonical.epsilon == 1);
  CHECK(fam->discriminant < 0.0);

  const auto par = verdict_single(Kx + Kz, Ky);
  CHECK(par.decision == Decision::Uncontrollable);
  CHECK(std::holds_alternative<cert::ParabolicBracket>(par.certificate));

  const auto dep = verdict_single(Kx, -3.0 * Kx);
  CHECK(dep.decision == Decision::Uncontrollable);
  CHECK(std::holds_alternative<cert::RankDeficiency>(dep.certificate));
  CHECK(verdict_single(AlgebraElement{}, Ky).decision == Decision::Uncontrollable);
}

TEST_CASE("verdict certificates are well formed") {
  Gen g(33);
  for (int i = 0; i < 5000; ++i) {
    const auto [a, b] = random_pair(g);
    const auto v = verdict_single(a, b);
    if (v.decision == Decision::Controllable) {
      check_witness(v, a, {b});
    } else {
      REQUIRE(v.decision == Decision::Uncontrollable);
      const bool ok = std::holds_alternative<cert::RankDeficiency>(v.certificate) ||
                      std::holds_alternative<cert::HyperbolicFamily>(v.certificate) ||
                      std::holds_alternative<cert::ParabolicBracket>(v.certificate) ||
                      std::holds_alternative<cert::Marginal>(v.certificate);
      CHECK(ok);
    }
  }
}

TEST_CASE("table rows agree with the omega solver") {
  Gen g(34);
  int rows[4] = {0, 0, 0, 0};
  for (int i = 0; i < 20000; ++i) {
    const auto [a, b] = random_pair(g);
    if (!linearly_independent(a, b)) continue;
    const auto t = table_row(a, b);
    const auto v = verdict_single(a, b);
    REQUIRE(t.decision == v.decision);
    if (t.decision == Decision::Controllable) {
      check_witness(t, a, {b});
      const auto& src = std::get<cert::WitnessControl>(t.certificate).source;
      rows[src.back() - '0']++;
    } else {
      rows[0]++;
    }
  }
  // Every row is exercised.
  for (int r : rows) CHECK(r > 0);
}

TEST_CASE("bounded verdicts") {
  SUBCASE("hyperbolic drift, elliptic control needs C > 1") {
    for (double c : {1.01, 2.0, 10.0}) {
      const auto v = verdict_single_bounded(Kx, Kz, c);
      CHECK(v.decision == Decision::Controllable);
      CHECK(std::abs(*v.witness()) <= c);
      check_witness(v, Kx, {Kz});
    }
    for (double c : {0.5, 1.0}) {
      const auto v = verdict_single_bounded(Kx, Kz, c);
      CHECK(v.decision == Decision::Uncontrollable);
      CHECK(std::holds_alternative<cert::BoundedObstruction>(v.certificate));
    }
  }
  SUBCASE("ties go to the upper piece") {
    const auto v = verdict_single_bounded(Kx, Kz, 3.0);
    CHECK(*v.witness() == doctest::Approx(2.0));
  }
  SUBCASE("invalid bound") {
    CHECK_THROWS_AS(verdict_single_bounded(Kx, Kz, 0.0), Error);
    CHECK_THROWS_AS(verdict_single_bounded(Kx, Kz, -1.0), Error);
    CHECK_THROWS_AS(verdict_single_bounded(Kx, Kz, INFINITY), Error);
  }
  SUBCASE("against a brute-force grid") {
    Gen g(35);
    for (int i = 0; i < 3000; ++i) {
      const auto [a, b] = random_pair(g);
      const double c = g.uniform(0.1, 5.0);
      // Dependent pairs stay on one one-parameter subgroup whatever the elliptic type.
      if (!linearly_independent(a, b)) continue;
      const auto v = verdict_single_bounded(a, b, c);
      if (v.decision == Decision::Controllable) {
        CHECK(std::abs(*v.witness()) <= c);
        check_witness(v, a, {b});
        continue;
      }
      for (int k = -200; k <= 200; ++k) {
        const double u = c * k / 200.0;
        const auto e = a + u * b;
        const double form = indefinite_form(e, e);
        if (form < -1e-6 * (1.0 + inner_product(e, e))) FAIL_CHECK("elliptic control ", u, " inside bound ", c);
      }
    }
  }
}

TEST_CASE("bounded pieces") {
  OmegaSet rays{OmegaShape::TwoRays, -1.0, 1.0, 2.0};
  auto pieces = bounded_pieces(rays, 3.0);
  REQUIRE(pieces.size() == 2);
  CHECK(pieces[0].lo == -3.0);
  CHECK(pieces[0].lo_closed);
  CHECK(pieces[0].hi == -1.0);
  CHECK(!pieces[0].hi_closed);
  CHECK(pieces[1].lo == 1.0);
  CHECK(pieces[1].hi == 3.0);
  CHECK(bounded_pieces(rays, 1.0).empty());
  CHECK(bounded_pieces(rays, 0.5).empty());

  OmegaSet interval{OmegaShape::OpenInterval, -0.5, 4.0, 1.0};
  pieces = bounded_pieces(interval, 1.0);
  REQUIRE(pieces.size() == 1);
  CHECK(pieces[0].lo == -0.5);
  CHECK(pieces[0].hi == 1.0);
  CHECK(pieces[0].hi_closed);
  CHECK(bounded_pieces(OmegaSet{}, 1.0).empty());
}

TEST_CASE("small-time local controllability") {
  const auto v = stlc_verdict(Kx, Kz);
  CHECK(v.decision == Decision::STLCSufficient);
  const auto* p = std::get_if<cert::Periodic>(&v.certificate);
  REQUIRE(p != nullptr);
  CHECK(p->control.u == doctest::Approx(std::sqrt(1.0 + 16.0 * std::numbers::pi * std::numbers::pi)));
  CHECK(group_dist(exp_element(Kx + p->control.u * Kz, 1.0), GroupElement::identity()) < 1e-9);
  CHECK(stlc_verdict(Kz, Kx).decision == Decision::STLCUnknown);
  CHECK(strong_verdict_single(Kz, Kx).decision == Decision::NotStrongControllable);
}

TEST_CASE("multi-input verdicts") {
  CHECK(verdict_multi(Kz, {Kx, Ky, Kz}).decision == Decision::StrongControllable);
  CHECK(verdict_multi(Kz, {Kx, Ky}).decision == Decision::StrongControllable);
  CHECK(verdict_multi(Kx, {Kz}).decision == verdict_single(Kx, Kz).decision);

  // [Ky, Kx + Kz] = Kx + Kz is parabolic.
  const auto n = Kx + Kz;
  const auto ctrl = verdict_multi(Kz, {Ky, n});
  CHECK(ctrl.decision == Decision::Controllable);
  check_witness(ctrl, Kz, {Ky, n});

  const auto inside = verdict_multi(Ky + 2.0 * n, {Ky, n});
  CHECK(inside.decision == Decision::Uncontrollable);
  CHECK(std::holds_alternative<cert::RankDeficiency>(inside.certificate));

  CHECK_THROWS_AS(verdict_multi(Kz, {Kx, 2.0 * Kx}), Error);
  CHECK_THROWS_AS(verdict_multi(Kz, {}), Error);
  CHECK_THROWS_AS(verdict_multi(Kz, {Kx, Ky, Kx + Ky}), Error);

  Gen g(36);
  for (int i = 0; i < 1000; ++i) {
    // Parabolic bracket pairs are a conjugate of (Ky, Kx + Kz).
    const auto x = g.group(1.0);
    const auto b1 = adjoint(x, Ky), b2 = adjoint(x, n);
    const auto a = g.element();
    const auto v = verdict_multi(a, {b1, b2});
    if (v.decision == Decision::Controllable) check_witness(v, a, {b1, b2});
  }
}

TEST_CASE("generated subalgebra") {
  CHECK(generated_subalgebra({Kz}).dim == 1);
  CHECK(generated_subalgebra({Kx, Ky}).dim == 3);
  CHECK(generated_subalgebra({Ky, Kx + Kz}).dim == 2);
  CHECK(generated_subalgebra({Kx, 2.0 * Kx}).dim == 1);
  CHECK_THROWS_AS(generated_subalgebra({AlgebraElement{}}), Error);

  Gen g(37);
  for (int i = 0; i < 300; ++i) {
    const auto x = g.group(1.0);
    const auto alg = generated_subalgebra({adjoint(x, Ky), adjoint(x, Kx + Kz)});
    REQUIRE(alg.dim == 2);
    // Closure: the bracket of the basis lies in its span.
    const auto c = commutator(alg.basis[0], alg.basis[1]);
    CHECK(!linearly_independent(alg.basis[0], alg.basis[1], c));
  }
}

TEST_CASE("omega witnesses make the trace polynomial negative") {
  Gen g(38);
  int witnessed = 0;
  for (int i = 0; i < 5000; ++i) {
    const auto [a, b] = random_pair(g);
    if (!linearly_independent(a, b)) continue;
    const auto omega = omega_set(a, b);
    if (omega.empty()) continue;
    REQUIRE(omega.witness.has_value());
    CHECK(trace_polynomial(a, b)(*omega.witness) < 0.0);
    CHECK(omega.contains(*omega.witness));
    ++witnessed;
  }
  CHECK(witnessed > 1000);
}

TEST_CASE("empty omega with a non-parabolic bracket leaves every member hyperbolic") {
  Gen g(39);
  int checked = 0;
  for (int i = 0; i < 20000 && checked < 300; ++i) {
    const auto a = g.element(), b = g.hyperbolic();
    if (!linearly_independent(a, b) || !omega_set(a, b).empty()) continue;
    if (classify(commutator(a, b)).kind == ClassKindTag::Parabolic) continue;
    ++checked;
    for (int k = 0; k < 100; ++k) {
      const double u = g.uniform(-50.0, 50.0);
      CHECK(classify(a + u * b).kind == ClassKindTag::Hyperbolic);
    }
  }
  CHECK(checked >= 100);
}

TEST_CASE("discriminant signs forced by the class of B") {
  Gen g(40);
  for (int i = 0; i < 2000; ++i) {
    const auto a = g.element();
    // Elliptic B: the bracket is orthogonal to a timelike vector, so it is spacelike.
    const auto be = g.elliptic();
    const auto qe = trace_polynomial(a, be);
    const double se = std::pow(1.0 + a.norm() * be.norm(), 2);
    CHECK(qe.discriminant() > -1e-10 * se);
    if (linearly_independent(a, be)) CHECK(omega_set(a, be).shape != OmegaShape::Empty);

    // Null B and A orthogonal to it: A is spacelike or null.
    const double phi = g.uniform(0.0, 2.0 * std::numbers::pi), r = g.uniform(0.1, 3.0);
    const AlgebraElement bp{r * std::cos(phi), r * std::sin(phi), r};
    const AlgebraElement side{-std::sin(phi), std::cos(phi), 0.0};
    const auto ap = g.uniform(-5.0, 5.0) * bp + g.uniform(-5.0, 5.0) * side;
    const double sp = 1.0 + ap.norm() * ap.norm();
    CHECK(std::abs(indefinite_form(ap, bp)) < 1e-12 * sp * r);
    CHECK(indefinite_form(ap, ap) > -1e-12 * sp);
    const auto qp = trace_polynomial(a, bp);
    CHECK(qp.discriminant() > -1e-10 * std::pow(1.0 + a.norm() * bp.norm(), 2));
  }
}

TEST_CASE("subalgebra dimension is invariant under recombination") {
  Gen g(41);
  for (int i = 0; i < 1000; ++i) {
    const auto a = (i % 2 == 0) ? g.element() : Ky;
    const auto b = (i % 2 == 0) ? g.element() : Kx + Kz;
    const double c11 = g.uniform(-3.0, 3.0), c12 = g.uniform(-3.0, 3.0);
    const double c21 = g.uniform(-3.0, 3.0), c22 = g.uniform(-3.0, 3.0);
    if (std::abs(c11 * c22 - c12 * c21) < 0.1) continue;
    const int dim = generated_subalgebra({a, b}).dim;
    CHECK(generated_subalgebra({c11 * a + c12 * b, c21 * a + c22 * b}).dim == dim);
  }
}
