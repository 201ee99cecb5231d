#pragma once

// Maps from su(1,1) / SU(1,1) into so(2,1) / SO(2,1) and sl(2,R) / SL(2,R).

#include <vector>

#include <Eigen/Dense>

#include "su11/algebra.hpp"

namespace su11 {

/// Element of SO(2,1): preserves eta = diag(1, 1, -1), det 1.
struct So21Element {
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();

  /// max |R^T eta R - eta| and |det R - 1|, whichever is larger.
  double residual() const;
};

/// Element of SL(2,R).
struct Sl2rElement {
  Eigen::Matrix2d z = Eigen::Matrix2d::Identity();

  double residual() const { return z.determinant() - 1.0; }
};

const Eigen::Matrix3d& so21_generator(int axis);  // O_x, O_y, O_z for axis 0, 1, 2
const Eigen::Matrix2d& sl2r_generator(int axis);  // L_x, L_y, L_z

/// kx O_x + ky O_y + kz O_z.
Eigen::Matrix3d rho1_algebra(const AlgebraElement& m);
/// kx L_x + ky L_y + kz L_z.
Eigen::Matrix2d rho2_algebra(const AlgebraElement& m);

/// Two-to-one cover SU(1,1) -> SO(2,1): D Ad_X D with D = diag(-1, 1, -1).
So21Element rho1_group(const GroupElement& x);

/// Isomorphism SU(1,1) -> SL(2,R): W X W^{-1} with W = (1/sqrt 2) [[1, i], [i, 1]].
Sl2rElement rho2_group(const GroupElement& x);

/// The fixed intertwiner W, satisfying W K_alpha W^{-1} = L_alpha.
const Mat2c& sl2r_intertwiner();

/// Applies each matrix of the path to p0. p0 must lie on x^2 + y^2 - z^2 = +-1.
std::vector<Eigen::Vector3d> hyperboloid_orbit(const std::vector<So21Element>& path,
                                               const Eigen::Vector3d& p0);

/// x^2 + y^2 - z^2.
double hyperboloid_form(const Eigen::Vector3d& p);

}  // namespace su11
