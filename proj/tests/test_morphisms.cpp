#include <doctest.h>

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "support.hpp"
#include "su11/controllability.hpp"
#include "su11/errors.hpp"
#include "su11/morphisms.hpp"
#include "su11/simulator.hpp"

using namespace su11;
using testing::Gen;

namespace {

const AlgebraElement basis[3] = {AlgebraElement::Kx(), AlgebraElement::Ky(), AlgebraElement::Kz()};

template <class M>
M bracket(const M& a, const M& b) {
  return a * b - b * a;
}

// 2 Tr(MN) evaluated on sl(2,R) images.
double mapped_form(const AlgebraElement& m, const AlgebraElement& n) {
  return 2.0 * (rho2_algebra(m) * rho2_algebra(n)).trace();
}

}  // namespace

TEST_CASE("generator matrices") {
  Eigen::Matrix3d ox, oy, oz;
  ox << 0, 0, 0, 0, 0, 1, 0, 1, 0;
  oy << 0, 0, 1, 0, 0, 0, 1, 0, 0;
  oz << 0, 1, 0, -1, 0, 0, 0, 0, 0;
  CHECK(so21_generator(0) == ox);
  CHECK(so21_generator(1) == oy);
  CHECK(so21_generator(2) == oz);
  Eigen::Matrix2d lx, ly, lz;
  lx << -0.5, 0, 0, 0.5;
  ly << 0, -0.5, -0.5, 0;
  lz << 0, -0.5, 0.5, 0;
  CHECK(sl2r_generator(0) == lx);
  CHECK(sl2r_generator(1) == ly);
  CHECK(sl2r_generator(2) == lz);
}

TEST_CASE("algebra maps preserve brackets exactly on the basis") {
  for (const auto& m : basis) {
    for (const auto& n : basis) {
      const auto c = commutator(m, n);
      CHECK(rho1_algebra(c) == bracket(rho1_algebra(m), rho1_algebra(n)));
      CHECK(rho2_algebra(c) == bracket(rho2_algebra(m), rho2_algebra(n)));
    }
  }
}

TEST_CASE("algebra maps preserve brackets on random pairs") {
  Gen g(51);
  for (int i = 0; i < 1000; ++i) {
    const auto m = g.element(), n = g.element();
    const double scale = 1e-12 * (1.0 + m.norm() * n.norm());
    const auto c = commutator(m, n);
    CHECK((rho1_algebra(c) - bracket(rho1_algebra(m), rho1_algebra(n))).cwiseAbs().maxCoeff() < scale);
    CHECK((rho2_algebra(c) - bracket(rho2_algebra(m), rho2_algebra(n))).cwiseAbs().maxCoeff() < scale);
  }
}

TEST_CASE("intertwiner carries K onto L") {
  const Mat2c& w = sl2r_intertwiner();
  CHECK(testing::max_abs(w * w.adjoint() - Mat2c::Identity()) < 1e-15);
  for (int j = 0; j < 3; ++j) {
    const Mat2c image = w * basis[j].matrix() * w.adjoint();
    CHECK(testing::max_abs(image - sl2r_generator(j).cast<cplx>()) < 1e-15);
  }
}

TEST_CASE("group maps commute with the exponential") {
  Gen g(52);
  for (int i = 0; i < 1000; ++i) {
    const auto m = g.element(3.0);
    const double t = g.uniform(-1.0, 1.0) * 4.0 / m.norm();
    const auto x = exp_element(m, t);
    const Eigen::Matrix3d e1 = (t * rho1_algebra(m)).exp();
    const Eigen::Matrix2d e2 = (t * rho2_algebra(m)).exp();
    CHECK((rho1_group(x).r - e1).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, e1.cwiseAbs().maxCoeff()));
    CHECK((rho2_group(x).z - e2).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, e2.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("group maps are homomorphisms") {
  Gen g(53);
  for (int i = 0; i < 1000; ++i) {
    const auto x = g.group(1.5), y = g.group(1.5);
    const auto xy = group_mul(x, y);
    CHECK((rho1_group(xy).r - rho1_group(x).r * rho1_group(y).r).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((rho2_group(xy).z - rho2_group(x).z * rho2_group(y).z).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(rho1_group(x).residual() < 1e-10);
    CHECK(std::abs(rho2_group(x).residual()) < 1e-10);
    CHECK((rho1_group(x).r - rho1_group(-x).r).cwiseAbs().maxCoeff() == 0.0);
    CHECK((rho2_group(x).z + rho2_group(-x).z).cwiseAbs().maxCoeff() < 1e-15 * 100.0);
  }
  CHECK(rho1_group(GroupElement::identity()).r == Eigen::Matrix3d::Identity());
  CHECK((rho2_group(GroupElement::identity()).z - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("group maps validate their input") {
  CHECK_THROWS_AS(rho1_group(GroupElement{3.0, 0.0, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(rho2_group(GroupElement{3.0, 0.0, 0.0, 0.0}), Error);
}

TEST_CASE("hyperboloid orbits") {
  Gen g(54);
  std::vector<So21Element> path;
  for (int i = 0; i < 50; ++i) path.push_back(rho1_group(g.group(1.0)));
  for (const Eigen::Vector3d& p0 : {Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0.6, 0.8, 0.0)}) {
    const auto pts = hyperboloid_orbit(path, p0);
    REQUIRE(pts.size() == path.size());
    for (const auto& p : pts) CHECK(std::abs(hyperboloid_form(p) - hyperboloid_form(p0)) < 1e-10 * (1.0 + p.squaredNorm()));
  }
  CHECK_THROWS_AS(hyperboloid_orbit(path, Eigen::Vector3d(1, 1, 0)), Error);
  CHECK_THROWS_AS(hyperboloid_orbit(path, Eigen::Vector3d(NAN, 0, 1)), Error);
  CHECK(hyperboloid_orbit({}, Eigen::Vector3d(0, 0, 1)).empty());
}

TEST_CASE("exponential examples through the maps") {
  for (double t : {0.1, 1.0, 3.0}) {
    const Eigen::Matrix3d expect = (t * so21_generator(2)).exp();
    CHECK((rho1_group(exp_element(basis[2], t)).r - expect).cwiseAbs().maxCoeff() < 1e-12);
  }
  const Eigen::Matrix2d expect = sl2r_generator(1).exp();
  CHECK((rho2_group(exp_element(basis[1], 1.0)).z - expect).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(rho1_algebra(basis[0]) == so21_generator(0));
  CHECK(rho1_algebra(basis[2]) == so21_generator(2));
  CHECK(rho1_algebra(commutator(basis[0], basis[1])) == -so21_generator(2));
}

TEST_CASE("trajectories intertwine") {
  Gen g(55);
  std::mt19937_64 rng(55);
  for (int i = 0; i < 100; ++i) {
    const auto a = g.element(1.5), b = g.element(1.5);
    const auto sched = random_schedule(rng, 1, 20, 4.0, 2.0);
    const auto traj = propagate(a, {b}, sched);
    Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
    Eigen::Matrix2d z = Eigen::Matrix2d::Identity();
    for (std::size_t k = 0; k < sched.segments.size(); ++k) {
      const auto m = segment_element(a, {b}, sched.segments[k].controls);
      const double t = sched.segments[k].duration;
      r = (t * rho1_algebra(m)).exp() * r;
      z = (t * rho2_algebra(m)).exp() * z;
      const auto& x = traj.states[k + 1];
      const double scale = std::max(1.0, std::norm(x.a()));
      CHECK((rho1_group(x).r - r).cwiseAbs().maxCoeff() < 1e-8 * scale);
      CHECK((rho2_group(x).z - z).cwiseAbs().maxCoeff() < 1e-8 * scale);
    }
  }
}

TEST_CASE("controllability transfers through the forms") {
  Gen g(56);
  int compared = 0;
  for (int i = 0; i < 5000; ++i) {
    const auto a = g.element(), b = g.element();
    const auto q = trace_polynomial(a, b);
    const double p2 = mapped_form(b, b), p1 = 2.0 * mapped_form(a, b), p0 = mapped_form(a, a);
    const double scale = 1.0 + a.norm() * a.norm() + b.norm() * b.norm();
    CHECK(std::abs(p2 - q.p2) < 1e-12 * scale);
    CHECK(std::abs(p1 - q.p1) < 1e-12 * scale);
    CHECK(std::abs(p0 - q.p0) < 1e-12 * scale);
    const double disc = p1 * p1 - 4.0 * p2 * p0;
    if (std::abs(p2) < 1e-6 * scale || std::abs(disc) < 1e-6 * scale * scale) continue;
    const bool nonempty = p2 < 0.0 || disc > 0.0;
    CHECK(nonempty == (verdict_single(a, b).decision == Decision::Controllable));
    ++compared;
  }
  CHECK(compared > 4000);
}

TEST_CASE("orbit examples") {
  const std::vector<So21Element> constant(5, So21Element{});
  for (const auto& p : hyperboloid_orbit(constant, Eigen::Vector3d(1, 0, 0))) CHECK(p == Eigen::Vector3d(1, 0, 0));

  std::vector<So21Element> circle;
  for (int i = 0; i <= 64; ++i) circle.push_back(rho1_group(exp_element(basis[2], 2.0 * M_PI * i / 64.0)));
  for (const auto& p : hyperboloid_orbit(circle, Eigen::Vector3d(1, 0, 0))) {
    CHECK(std::abs(p.z()) < 1e-12);
    CHECK(std::hypot(p.x(), p.y()) == doctest::Approx(1.0).epsilon(1e-12));
  }

  // Elliptic generator: the orbit closes after one period.
  const AlgebraElement m{0.6, -0.3, 1.4};
  const double period = 4.0 * M_PI / std::sqrt(-indefinite_form(m, m));
  const Eigen::Vector3d p0(0.6, 0.8, 0.0);
  std::vector<So21Element> path;
  for (int i = 0; i <= 100; ++i) path.push_back(rho1_group(exp_element(m, period * i / 100.0)));
  const auto pts = hyperboloid_orbit(path, p0);
  CHECK((pts.back() - p0).norm() < 1e-6);
  // -I maps to the identity, so the SO(2,1) orbit already closes at half the period.
  CHECK((pts[50] - p0).norm() < 1e-6);
  CHECK((pts[25] - p0).norm() > 1e-3);
}
