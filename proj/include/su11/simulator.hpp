#pragma once

// Propagation of right-invariant systems X' = (A + sum u_l B_l) X by exact
// exponential factors.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "su11/algebra.hpp"

namespace su11 {

struct Segment {
  double duration = 0.0;
  std::vector<double> controls;
};

struct ControlSchedule {
  std::vector<Segment> segments;

  double total_duration() const;
  /// Durations finite and >= 0; every segment carries exactly `control_count` controls.
  void validate(std::size_t control_count) const;
};

struct StateMonitor {
  double residual = 0.0;
  double monotone = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<GroupElement> states;
  std::vector<StateMonitor> monitors;

  const GroupElement& final_state() const { return states.back(); }
  double max_residual() const;
};

struct PropagateOptions {
  GroupElement initial = GroupElement::identity();
  /// When positive, also store states every `monitor_dt` inside each segment.
  double monitor_dt = 0.0;
  /// Largest |T| * ||M|| handed to a single exponential factor.
  double max_factor_size = 10.0;
};

/// A + sum_l controls[l] * B_l.
AlgebraElement segment_element(const AlgebraElement& a, const std::vector<AlgebraElement>& bs,
                               const std::vector<double>& controls);

Trajectory propagate(const AlgebraElement& a, const std::vector<AlgebraElement>& bs,
                     const ControlSchedule& schedule, const PropagateOptions& options = {});

using ControlSignal = std::function<std::vector<double>(double)>;

/// Midpoint-samples `u` on steps of length dt (last step shortened) and propagates.
Trajectory propagate_sampled(const AlgebraElement& a, const std::vector<AlgebraElement>& bs,
                             const ControlSignal& u, double t_final, double dt,
                             const PropagateOptions& options = {});

ControlSchedule sample_schedule(const ControlSignal& u, std::size_t control_count, double t_final,
                                double dt);

enum class CertificateKind { MonotoneNonincreasing, MonotoneNondecreasing, GroupResidual };

const char* to_string(CertificateKind kind);

struct CertificateReport {
  CertificateKind kind = CertificateKind::GroupResidual;
  double max_violation = 0.0;
  double tolerance = 0.0;
  std::size_t steps_checked = 0;
  bool pass = true;
};

/// Checks (x1-x4)^2 - (x2-x3)^2 along every trajectory of X' = (A + uB) X. Reports the
/// largest per-step increase (nonincreasing) or decrease (nondecreasing).
CertificateReport certify_monotone(const AlgebraElement& a, const AlgebraElement& b,
                                   CertificateKind direction,
                                   const std::vector<ControlSchedule>& schedules,
                                   double tolerance = 1e-9, double monitor_dt = 0.05);

/// Canonical system eps Kx + a Kz + w Ky: nonincreasing for eps = +1, nondecreasing for -1.
CertificateReport certify_monotone(int epsilon, double a, const std::vector<ControlSchedule>& schedules,
                                   double tolerance = 1e-9, double monitor_dt = 0.05);

CertificateReport certify_residual(const std::vector<Trajectory>& trajectories, double tolerance = 1e-9);

struct SampleOptions {
  std::size_t n_schedules = 100;
  std::size_t max_segments = 10;
  double horizon = 1.0;
  double control_scale = 1.0;
  std::uint64_t seed = 0;
};

/// Random schedule: `segments` pieces, durations uniform in [0, horizon / segments],
/// controls uniform in [-scale, scale].
ControlSchedule random_schedule(std::mt19937_64& rng, std::size_t control_count, std::size_t segments,
                                double horizon, double control_scale);

/// Final states of random schedules with a uniformly drawn segment count in [1, max_segments].
std::vector<GroupElement> reachable_sample(const AlgebraElement& a, const std::vector<AlgebraElement>& bs,
                                           const SampleOptions& options);

}  // namespace su11
