#include "su11/morphisms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "su11/errors.hpp"

namespace su11 {

namespace {

Eigen::Matrix3d make_o(int axis) {
  Eigen::Matrix3d o = Eigen::Matrix3d::Zero();
  switch (axis) {
    case 0: o(1, 2) = 1.0; o(2, 1) = 1.0; break;
    case 1: o(0, 2) = 1.0; o(2, 0) = 1.0; break;
    default: o(0, 1) = 1.0; o(1, 0) = -1.0; break;
  }
  return o;
}

Eigen::Matrix2d make_l(int axis) {
  Eigen::Matrix2d l;
  switch (axis) {
    case 0: l << -0.5, 0.0, 0.0, 0.5; break;
    case 1: l << 0.0, -0.5, -0.5, 0.0; break;
    default: l << 0.0, -0.5, 0.5, 0.0; break;
  }
  return l;
}

const Eigen::Matrix3d kEta = Eigen::Vector3d(1.0, 1.0, -1.0).asDiagonal();

}  // namespace

double So21Element::residual() const {
  const double metric = (r.transpose() * kEta * r - kEta).cwiseAbs().maxCoeff();
  return std::max(metric, std::abs(r.determinant() - 1.0));
}

const Eigen::Matrix3d& so21_generator(int axis) {
  static const Eigen::Matrix3d o[3] = {make_o(0), make_o(1), make_o(2)};
  return o[std::clamp(axis, 0, 2)];
}

const Eigen::Matrix2d& sl2r_generator(int axis) {
  static const Eigen::Matrix2d l[3] = {make_l(0), make_l(1), make_l(2)};
  return l[std::clamp(axis, 0, 2)];
}

Eigen::Matrix3d rho1_algebra(const AlgebraElement& m) {
  return m.kx * so21_generator(0) + m.ky * so21_generator(1) + m.kz * so21_generator(2);
}

Eigen::Matrix2d rho2_algebra(const AlgebraElement& m) {
  return m.kx * sl2r_generator(0) + m.ky * sl2r_generator(1) + m.kz * sl2r_generator(2);
}

So21Element rho1_group(const GroupElement& x) {
  require_group_element(x);
  // Column j of Ad_X holds the coefficients of X K_j X^{-1}. The raw adjoint sends
  // Kx to -O_x; conjugating by D aligns it with the O matrices.
  Eigen::Matrix3d ad;
  const AlgebraElement basis[3] = {AlgebraElement::Kx(), AlgebraElement::Ky(), AlgebraElement::Kz()};
  for (int j = 0; j < 3; ++j) {
    const AlgebraElement c = adjoint(x, basis[j]);
    ad.col(j) << c.kx, c.ky, c.kz;
  }
  const Eigen::Matrix3d d = Eigen::Vector3d(-1.0, 1.0, -1.0).asDiagonal();
  return {d * ad * d};
}

const Mat2c& sl2r_intertwiner() {
  static const Mat2c w = [] {
    const double h = 1.0 / std::sqrt(2.0);
    Mat2c m;
    m << cplx(h, 0.0), cplx(0.0, h), cplx(0.0, h), cplx(h, 0.0);
    return m;
  }();
  return w;
}

Sl2rElement rho2_group(const GroupElement& x) {
  require_group_element(x);
  const Mat2c& w = sl2r_intertwiner();
  const Mat2c z = w * x.matrix() * w.adjoint();
  const double scale = std::max(1.0, z.cwiseAbs().maxCoeff());
  const double imag = z.imag().cwiseAbs().maxCoeff();
  if (imag > 1e-8 * scale) {
    std::ostringstream os;
    os << "SL(2,R) image has imaginary residual " << imag;
    throw Error(ErrorKind::InvariantViolation, os.str());
  }
  return {z.real()};
}

double hyperboloid_form(const Eigen::Vector3d& p) { return p.x() * p.x() + p.y() * p.y() - p.z() * p.z(); }

std::vector<Eigen::Vector3d> hyperboloid_orbit(const std::vector<So21Element>& path,
                                               const Eigen::Vector3d& p0) {
  if (!p0.allFinite()) throw Error(ErrorKind::NonFinite, "orbit start point");
  const double f = hyperboloid_form(p0);
  if (std::abs(std::abs(f) - 1.0) > 1e-8) {
    std::ostringstream os;
    os << "start point has x^2+y^2-z^2 = " << f << ", expected +-1";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  std::vector<Eigen::Vector3d> out;
  out.reserve(path.size());
  for (const auto& r : path) out.push_back(r.r * p0);
  return out;
}

}  // namespace su11
