#pragma once

// Numerical planner for X_f = exp(T_Q (A + u_Q B)) ... exp(T_1 (A + u_1 B)).

#include <cstdint>
#include <optional>

#include "su11/algebra.hpp"
#include "su11/simulator.hpp"

namespace su11 {

struct SteeringOptions {
  std::optional<double> bound;  // |u| <= C when set
  double tol = 1e-6;
  std::uint64_t seed = 0;
  int initial_factors = 3;
  int max_factors = 24;
  int restarts = 6;          // per factor count
  int max_iterations = 150;  // per restart
};

struct SteeringPlan {
  ControlSchedule schedule;
  GroupElement achieved;
  GroupElement target;
  double error = 0.0;  // group_dist(achieved, target)
  int iterations = 0;
  int factors = 0;
  bool converged = false;
};

/// Throws NotControllable unless the (bounded) single-input verdict is Controllable.
/// A plan that misses `tol` is returned with converged = false.
SteeringPlan plan(const AlgebraElement& a, const AlgebraElement& b, const GroupElement& target,
                  const SteeringOptions& options = {});

}  // namespace su11
