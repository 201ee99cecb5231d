#include "su11/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "su11/canonical.hpp"
#include "su11/errors.hpp"

namespace su11 {

const char* to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::MonotoneNonincreasing: return "MonotoneNonincreasing";
    case CertificateKind::MonotoneNondecreasing: return "MonotoneNondecreasing";
    case CertificateKind::GroupResidual: return "GroupResidual";
  }
  return "Unknown";
}

double ControlSchedule::total_duration() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

void ControlSchedule::validate(std::size_t control_count) const {
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (!std::isfinite(s.duration) || s.duration < 0.0) {
      std::ostringstream os;
      os << "segment " << i << " has invalid duration " << s.duration;
      throw Error(ErrorKind::InvalidArgument, os.str());
    }
    if (s.controls.size() != control_count) {
      std::ostringstream os;
      os << "segment " << i << " has " << s.controls.size() << " controls, system has " << control_count;
      throw Error(ErrorKind::InvalidArgument, os.str());
    }
    for (double u : s.controls) {
      if (!std::isfinite(u)) throw Error(ErrorKind::NonFinite, "segment control value");
    }
  }
  if (!std::isfinite(total_duration())) throw Error(ErrorKind::InvalidArgument, "total duration is not finite");
}

double Trajectory::max_residual() const {
  double r = 0.0;
  for (const auto& m : monitors) r = std::max(r, std::abs(m.residual));
  return r;
}

AlgebraElement segment_element(const AlgebraElement& a, const std::vector<AlgebraElement>& bs,
                               const std::vector<double>& controls) {
  AlgebraElement m = a;
  for (std::size_t l = 0; l < bs.size(); ++l) m = m + controls[l] * bs[l];
  return m;
}

namespace {

void record(Trajectory& traj, double t, const GroupElement& x) {
  if (!x.is_finite()) throw Error(ErrorKind::Overflow, "state left the representable range");
  traj.times.push_back(t);
  traj.states.push_back(x);
  traj.monitors.push_back({x.residual(), monotone_value(x)});
}

// Left-multiplies x by exp(dt M) in factors no larger than max_size.
GroupElement advance(const AlgebraElement& m, double dt, const GroupElement& x, double max_size) {
  const double size = std::abs(dt) * m.norm();
  const auto pieces = static_cast<long>(std::max(1.0, std::ceil(size / max_size)));
  const double h = dt / static_cast<double>(pieces);
  const GroupElement step = exp_element(m, h);
  GroupElement out = x;
  for (long i = 0; i < pieces; ++i) {
    out = group_mul(step, out);
    if (!out.is_finite()) throw Error(ErrorKind::Overflow, "state left the representable range");
  }
  return out;
}

}  // namespace

Trajectory propagate(const AlgebraElement& a, const std::vector<AlgebraElement>& bs,
                     const ControlSchedule& schedule, const PropagateOptions& options) {
  schedule.validate(bs.size());
  require_group_element(options.initial, "initial state");

  Trajectory traj;
  GroupElement x = options.initial;
  double t = 0.0;
  record(traj, t, x);
  for (const auto& seg : schedule.segments) {
    const AlgebraElement m = segment_element(a, bs, seg.controls);
    if (options.monitor_dt > 0.0 && seg.duration > options.monitor_dt) {
      const auto n = static_cast<long>(std::ceil(seg.duration / options.monitor_dt));
      const double h = seg.duration / static_cast<double>(n);
      for (long i = 1; i <= n; ++i) {
        x = advance(m, h, x, options.max_factor_size);
        record(traj, t + h * static_cast<double>(i), x);
      }
    } else {
      x = advance(m, seg.duration, x, options.max_factor_size);
      record(traj, t + seg.duration, x);
    }
    t += seg.duration;
  }
  return traj;
}

ControlSchedule sample_schedule(const ControlSignal& u, std::size_t control_count, double t_final,
                                double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
    throw Error(ErrorKind::InvalidArgument, "t_f must be nonnegative");
  }
  ControlSchedule sched;
  const auto steps = static_cast<long>(std::ceil(t_final / dt - 1e-12));
  for (long k = 0; k < steps; ++k) {
    const double t0 = dt * static_cast<double>(k);
    const double h = std::min(dt, t_final - t0);
    if (h <= 0.0) break;
    auto controls = u(t0 + 0.5 * h);
    if (controls.size() != control_count) {
      throw Error(ErrorKind::InvalidArgument, "control signal returned the wrong number of controls");
    }
    sched.segments.push_back({h, std::move(controls)});
  }
  return sched;
}

Trajectory propagate_sampled(const AlgebraElement& a, const std::vector<AlgebraElement>& bs,
                             const ControlSignal& u, double t_final, double dt,
                             const PropagateOptions& options) {
  return propagate(a, bs, sample_schedule(u, bs.size(), t_final, dt), options);
}

CertificateReport certify_monotone(const AlgebraElement& a, const AlgebraElement& b,
                                   CertificateKind direction,
                                   const std::vector<ControlSchedule>& schedules, double tolerance,
                                   double monitor_dt) {
  if (direction == CertificateKind::GroupResidual) {
    throw Error(ErrorKind::InvalidArgument, "certify_monotone needs a monotone direction");
  }
  const double sign = direction == CertificateKind::MonotoneNonincreasing ? 1.0 : -1.0;
  CertificateReport rep;
  rep.kind = direction;
  rep.tolerance = tolerance;
  PropagateOptions opts;
  opts.monitor_dt = monitor_dt;
  for (const auto& sched : schedules) {
    const Trajectory traj = propagate(a, {b}, sched, opts);
    for (std::size_t i = 1; i < traj.monitors.size(); ++i) {
      const double step = sign * (traj.monitors[i].monotone - traj.monitors[i - 1].monotone);
      rep.max_violation = std::max(rep.max_violation, step);
      ++rep.steps_checked;
    }
  }
  rep.pass = rep.max_violation <= tolerance;
  return rep;
}

CertificateReport certify_monotone(int epsilon, double a, const std::vector<ControlSchedule>& schedules,
                                   double tolerance, double monitor_dt) {
  if (epsilon != 1 && epsilon != -1) throw Error(ErrorKind::InvalidArgument, "epsilon must be +-1");
  if (!(std::abs(a) < 1.0)) throw Error(ErrorKind::PreconditionViolated, "|a| < 1");
  const AlgebraElement drift{static_cast<double>(epsilon), 0.0, a};
  const auto dir = epsilon == 1 ? CertificateKind::MonotoneNonincreasing : CertificateKind::MonotoneNondecreasing;
  return certify_monotone(drift, AlgebraElement::Ky(), dir, schedules, tolerance, monitor_dt);
}

CertificateReport certify_residual(const std::vector<Trajectory>& trajectories, double tolerance) {
  CertificateReport rep;
  rep.kind = CertificateKind::GroupResidual;
  rep.tolerance = tolerance;
  for (const auto& t : trajectories) {
    rep.max_violation = std::max(rep.max_violation, t.max_residual());
    rep.steps_checked += t.monitors.size();
  }
  rep.pass = rep.max_violation <= tolerance;
  return rep;
}

ControlSchedule random_schedule(std::mt19937_64& rng, std::size_t control_count, std::size_t segments,
                                double horizon, double control_scale) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double max_duration = segments > 0 ? horizon / static_cast<double>(segments) : 0.0;
  ControlSchedule sched;
  sched.segments.reserve(segments);
  for (std::size_t k = 0; k < segments; ++k) {
    Segment s;
    s.duration = max_duration * unit(rng);
    for (std::size_t l = 0; l < control_count; ++l) s.controls.push_back(control_scale * (2.0 * unit(rng) - 1.0));
    sched.segments.push_back(std::move(s));
  }
  return sched;
}

std::vector<GroupElement> reachable_sample(const AlgebraElement& a, const std::vector<AlgebraElement>& bs,
                                           const SampleOptions& options) {
  if (options.n_schedules == 0 || options.max_segments == 0 || !(options.horizon >= 0.0) ||
      !std::isfinite(options.horizon) || !(options.control_scale >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "sampling parameters must be positive");
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> count(1, options.max_segments);
  std::vector<GroupElement> out;
  out.reserve(options.n_schedules);
  for (std::size_t i = 0; i < options.n_schedules; ++i) {
    const auto sched = random_schedule(rng, bs.size(), count(rng), options.horizon, options.control_scale);
    out.push_back(propagate(a, bs, sched).final_state());
  }
  return out;
}

}  // namespace su11
