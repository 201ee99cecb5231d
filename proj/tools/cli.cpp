#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "su11/algebra.hpp"
#include "su11/canonical.hpp"
#include "su11/controllability.hpp"
#include "su11/errors.hpp"
#include "su11/json_io.hpp"
#include "su11/morphisms.hpp"
#include "su11/representation.hpp"
#include "su11/simulator.hpp"
#include "su11/steering.hpp"

namespace reach {

namespace {

using su11::io::json;
using su11::Error;
using su11::ErrorKind;

struct Options {
  std::string format;
  std::uint64_t seed = 0;

  std::string m, n, a, target, element, schedule, initial, point, alpha;
  std::vector<std::string> bs;
  std::string method = "omega";
  std::string to;
  std::string kind = "monotone";
  std::optional<double> bound;
  double rel_tol = 1e-10;
  double tol = 1e-9;
  double steer_tol = 1e-6;
  double check_tol = 1e-10;
  double monitor_dt = 0.0;
  std::size_t count = 200;
  std::size_t segments = 50;
  double horizon = 5.0;
  double scale = 1.0;
  int max_factors = 24;
  int restarts = 6;
  double k = 0.5;
  int dim = 40;
  bool check = false;
};

su11::AlgebraElement algebra_arg(const std::string& text, const char* what) {
  return su11::io::algebra_from_json(su11::io::parse_argument(text, what));
}

std::vector<su11::AlgebraElement> controls_arg(const Options& o) {
  std::vector<su11::AlgebraElement> out;
  for (const auto& s : o.bs) out.push_back(algebra_arg(s, "--b"));
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "at least one --b is required");
  return out;
}

su11::AlgebraElement single_control(const Options& o) {
  if (o.bs.size() != 1) throw Error(ErrorKind::InvalidArgument, "this command takes exactly one --b");
  return algebra_arg(o.bs.front(), "--b");
}

std::string format_for(const Options& o, const char* fallback) { return o.format.empty() ? fallback : o.format; }

void write_json(std::ostream& out, const json& j) { out << j.dump() << '\n'; }

template <class Matrix>
json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

// "a+bi", "a-bi", "a", "bi".
su11::cplx parse_complex(std::string s) {
  std::erase(s, ' ');
  auto fail = [&] { return Error(ErrorKind::InvalidArgument, "cannot parse complex number \"" + s + "\""); };
  if (s.empty()) throw fail();
  auto to_double = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw fail();
    }
    if (used != t.size()) throw fail();
    return v;
  };
  if (s.back() != 'i' && s.back() != 'j') return {to_double(s), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, to_double(s)};
  return {to_double(s.substr(0, split)), to_double(s.substr(split))};
}

std::ostream& csv(std::ostream& out) { return out << std::setprecision(17); }

int cmd_classify(const Options& o, std::ostream& out, std::ostream& err) {
  const auto m = algebra_arg(o.m, "--m");
  const auto c = su11::classify(m, o.rel_tol);
  json j = su11::io::to_json(c);
  if (m.is_zero()) {
    j["warning"] = "zero element";
    err << "warning: zero element classified as Parabolic\n";
  }
  write_json(out, j);
  return 0;
}

int cmd_forms(const Options& o, std::ostream& out) {
  const auto m = algebra_arg(o.m, "--m");
  const auto n = algebra_arg(o.n, "--n");
  write_json(out, {{"inner_product", su11::inner_product(m, n)},
                   {"indefinite_form", su11::indefinite_form(m, n)},
                   {"commutator", su11::io::to_json(su11::commutator(m, n))}});
  return 0;
}

int cmd_verdict(const Options& o, std::ostream& out) {
  const auto a = algebra_arg(o.a, "--a");
  const auto b = single_control(o);
  su11::Verdict v;
  if (o.method == "omega") {
    v = su11::verdict_single(a, b);
  } else if (o.method == "table") {
    v = su11::table_row(a, b);
  } else if (o.method == "stlc") {
    v = su11::stlc_verdict(a, b);
  } else {
    v = su11::strong_verdict_single(a, b);
  }
  write_json(out, su11::io::to_json(v));
  return 0;
}

int cmd_verdict_bounded(const Options& o, std::ostream& out) {
  write_json(out, su11::io::to_json(su11::verdict_single_bounded(algebra_arg(o.a, "--a"), single_control(o), *o.bound)));
  return 0;
}

int cmd_verdict_multi(const Options& o, std::ostream& out) {
  write_json(out, su11::io::to_json(su11::verdict_multi(algebra_arg(o.a, "--a"), controls_arg(o))));
  return 0;
}

int cmd_omega(const Options& o, std::ostream& out) {
  const auto a = algebra_arg(o.a, "--a");
  const auto b = single_control(o);
  const auto omega = su11::omega_set(a, b);
  json j = {{"polynomial", su11::io::to_json(su11::trace_polynomial(a, b))}, {"omega", su11::io::to_json(omega)}};
  if (o.bound) {
    json pieces = json::array();
    for (const auto& p : su11::bounded_pieces(omega, *o.bound)) pieces.push_back(su11::io::to_json(p));
    j["bound"] = *o.bound;
    j["pieces"] = pieces;
  }
  write_json(out, j);
  return 0;
}

int cmd_normalize(const Options& o, std::ostream& out) {
  write_json(out, su11::io::to_json(su11::normalize_hyperbolic(single_control(o))));
  return 0;
}

int cmd_canonical(const Options& o, std::ostream& out) {
  write_json(out, su11::io::to_json(su11::reduce_single(algebra_arg(o.a, "--a"), single_control(o))));
  return 0;
}

int cmd_map(const Options& o, std::ostream& out) {
  const json input = su11::io::parse_argument(o.element, "--element");
  json j = {{"to", o.to}};
  if (su11::io::looks_like_group(input)) {
    const auto x = su11::io::group_from_json(input);
    if (o.to == "so21") {
      const auto r = su11::rho1_group(x);
      j["matrix"] = matrix_json(r.r);
      j["residual"] = r.residual();
    } else {
      const auto z = su11::rho2_group(x);
      j["matrix"] = matrix_json(z.z);
      j["residual"] = z.residual();
    }
  } else {
    const auto m = algebra_arg(o.element, "--element");
    if (o.to == "so21") {
      j["matrix"] = matrix_json(su11::rho1_algebra(m));
    } else {
      j["matrix"] = matrix_json(su11::rho2_algebra(m));
    }
  }
  write_json(out, j);
  return 0;
}

Eigen::Vector3d parse_point(const std::string& text) {
  std::stringstream ss(text);
  std::string item;
  std::vector<double> v;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "--point must be three comma-separated numbers");
    }
  }
  if (v.size() != 3) throw Error(ErrorKind::InvalidArgument, "--point must be three comma-separated numbers");
  return {v[0], v[1], v[2]};
}

int cmd_orbit(const Options& o, std::ostream& out) {
  const auto a = algebra_arg(o.a, "--a");
  const auto bs = controls_arg(o);
  const auto sched = su11::io::schedule_from_json(su11::io::parse_argument(o.schedule, "--schedule"));
  su11::PropagateOptions popt;
  popt.monitor_dt = o.monitor_dt > 0.0 ? o.monitor_dt : 0.05;
  const auto traj = su11::propagate(a, bs, sched, popt);
  std::vector<su11::So21Element> path;
  for (const auto& x : traj.states) path.push_back(su11::rho1_group(x));
  const auto pts = su11::hyperboloid_orbit(path, parse_point(o.point));
  if (format_for(o, "csv") == "csv") {
    csv(out) << "t,x,y,z\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      out << traj.times[i] << ',' << pts[i].x() << ',' << pts[i].y() << ',' << pts[i].z() << '\n';
    }
  } else {
    json rows = json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) rows.push_back({traj.times[i], pts[i].x(), pts[i].y(), pts[i].z()});
    write_json(out, {{"columns", {"t", "x", "y", "z"}}, {"rows", rows}});
  }
  return 0;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const auto a = algebra_arg(o.a, "--a");
  const auto bs = controls_arg(o);
  const auto sched = su11::io::schedule_from_json(su11::io::parse_argument(o.schedule, "--schedule"));
  su11::PropagateOptions popt;
  popt.monitor_dt = o.monitor_dt;
  if (!o.initial.empty()) popt.initial = su11::io::group_from_json(su11::io::parse_argument(o.initial, "--initial"));
  const auto traj = su11::propagate(a, bs, sched, popt);
  if (format_for(o, "json") == "csv") {
    csv(out) << "t,x1,x2,x3,x4,residual,monotone\n";
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      const auto& x = traj.states[i];
      out << traj.times[i] << ',' << x.x1 << ',' << x.x2 << ',' << x.x3 << ',' << x.x4 << ','
          << traj.monitors[i].residual << ',' << traj.monitors[i].monotone << '\n';
    }
  } else {
    json states = json::array();
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      json s = su11::io::to_json(traj.states[i]);
      s["t"] = traj.times[i];
      s["residual"] = traj.monitors[i].residual;
      s["monotone"] = traj.monitors[i].monotone;
      states.push_back(s);
    }
    write_json(out, {{"final", su11::io::to_json(traj.final_state())},
                     {"max_residual", traj.max_residual()},
                     {"states", states}});
  }
  return 0;
}

int cmd_certify(const Options& o, std::ostream& out) {
  const auto a = algebra_arg(o.a, "--a");
  const auto b = single_control(o);
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<std::size_t> pieces(1, std::max<std::size_t>(1, o.segments));
  std::vector<su11::ControlSchedule> schedules;
  for (std::size_t i = 0; i < o.count; ++i) {
    schedules.push_back(su11::random_schedule(rng, 1, pieces(rng), o.horizon, o.scale));
  }
  json j;
  if (o.kind == "monotone") {
    const auto cs = su11::reduce_single(a, b);
    const double monitor = o.monitor_dt > 0.0 ? o.monitor_dt : 0.05;
    const auto rep = su11::certify_monotone(cs.epsilon, cs.a, schedules, o.tol, monitor);
    j = {{"canonical", su11::io::to_json(cs)}, {"report", su11::io::to_json(rep)}};
  } else {
    std::vector<su11::Trajectory> trajs;
    su11::PropagateOptions popt;
    popt.monitor_dt = o.monitor_dt;
    for (const auto& s : schedules) trajs.push_back(su11::propagate(a, {b}, s, popt));
    j = {{"report", su11::io::to_json(su11::certify_residual(trajs, o.tol))}};
  }
  write_json(out, j);
  return j["report"]["pass"].get<bool>() ? 0 : 3;
}

int cmd_sample(const Options& o, std::ostream& out) {
  su11::SampleOptions sopt;
  sopt.n_schedules = o.count;
  sopt.max_segments = o.segments;
  sopt.horizon = o.horizon;
  sopt.control_scale = o.scale;
  sopt.seed = o.seed;
  const auto samples = su11::reachable_sample(algebra_arg(o.a, "--a"), controls_arg(o), sopt);
  if (format_for(o, "json") == "csv") {
    csv(out) << "x1,x2,x3,x4,residual,monotone\n";
    for (const auto& x : samples) {
      out << x.x1 << ',' << x.x2 << ',' << x.x3 << ',' << x.x4 << ',' << x.residual() << ','
          << su11::monotone_value(x) << '\n';
    }
  } else {
    json arr = json::array();
    for (const auto& x : samples) arr.push_back(su11::io::to_json(x));
    write_json(out, {{"seed", o.seed}, {"samples", arr}});
  }
  return 0;
}

int cmd_steer(const Options& o, std::ostream& out, std::ostream& err) {
  su11::SteeringOptions sopt;
  sopt.bound = o.bound;
  sopt.tol = o.steer_tol;
  sopt.seed = o.seed;
  sopt.max_factors = o.max_factors;
  sopt.restarts = o.restarts;
  const auto target = su11::io::group_from_json(su11::io::parse_argument(o.target, "--target"));
  const auto p = su11::plan(algebra_arg(o.a, "--a"), single_control(o), target, sopt);
  write_json(out, su11::io::to_json(p));
  if (!p.converged) {
    err << "error: " << su11::to_string(ErrorKind::NotConverged) << ": best plan misses the target by " << p.error
        << '\n';
    return 3;
  }
  return 0;
}

int cmd_rep(const Options& o, std::ostream& out) {
  const auto rep = su11::build_rep(o.k, o.dim);
  json j = {{"k", rep.k}, {"n", rep.n}};
  if (o.check) {
    const auto r = su11::interior_residuals(rep);
    const double worst = std::max({r.casimir, r.kz_kp, r.kz_km, r.kp_km, r.kx_ky});
    j["residuals"] = su11::io::to_json(r);
    j["tolerance"] = o.check_tol;
    j["pass"] = worst <= o.check_tol;
    write_json(out, j);
    return worst <= o.check_tol ? 0 : 3;
  }
  j["kp"] = matrix_json(rep.kp);
  j["kz"] = matrix_json(rep.kz);
  write_json(out, j);
  return 0;
}

int cmd_coherent(const Options& o, std::ostream& out) {
  const auto cs = su11::coherent_state(parse_complex(o.alpha), o.k, o.dim);
  if (format_for(o, "json") == "csv") {
    csv(out) << "m,re,im,abs2\n";
    for (Eigen::Index m = 0; m < cs.amplitudes.size(); ++m) {
      const auto c = cs.amplitudes(m);
      out << m << ',' << c.real() << ',' << c.imag() << ',' << std::norm(c) << '\n';
    }
    return 0;
  }
  json amps = json::array();
  for (Eigen::Index m = 0; m < cs.amplitudes.size(); ++m) amps.push_back(su11::io::to_json(cs.amplitudes(m)));
  write_json(out, {{"alpha", su11::io::to_json(cs.alpha)},
                   {"zeta", su11::io::to_json(su11::coherent_label(cs.alpha))},
                   {"k", cs.k},
                   {"n", o.dim},
                   {"deficit", cs.deficit},
                   {"closed_form_error", cs.closed_form_error},
                   {"amplitudes", amps}});
  return 0;
}

std::uint64_t env_seed() {
  const char* s = std::getenv("REACH_SEED");
  if (s == nullptr || *s == '\0') return 0;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidArgument, "REACH_SEED must be a nonnegative integer");
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Controllability, simulation and steering for bilinear systems on SU(1,1)", "reach"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", o.seed, "Seed for randomized commands (default: REACH_SEED or 0)");

  auto need = [](CLI::App* sub, const char* name, std::string& target, const char* help) {
    sub->add_option(name, target, help)->required();
  };

  auto* classify = app.add_subcommand("classify", "Elliptic / hyperbolic / parabolic type of M");
  need(classify, "--m", o.m, "AlgebraElement JSON");
  classify->add_option("--rel-tol", o.rel_tol, "Relative classification tolerance")->capture_default_str();

  auto* forms = app.add_subcommand("forms", "Inner product, indefinite form and commutator");
  need(forms, "--m", o.m, "AlgebraElement JSON");
  need(forms, "--n", o.n, "AlgebraElement JSON");

  auto* verdict = app.add_subcommand("verdict", "Single-input controllability verdict");
  need(verdict, "--a", o.a, "Drift AlgebraElement JSON");
  verdict->add_option("--b", o.bs, "Control AlgebraElement JSON")->required();
  verdict->add_option("--method", o.method, "omega, table, stlc or strong")
      ->check(CLI::IsMember({"omega", "table", "stlc", "strong"}))
      ->capture_default_str();

  auto* bounded = app.add_subcommand("verdict-bounded", "Verdict with controls restricted to |u| <= C");
  need(bounded, "--a", o.a, "Drift AlgebraElement JSON");
  bounded->add_option("--b", o.bs, "Control AlgebraElement JSON")->required();
  bounded->add_option("--bound", o.bound, "C")->required();

  auto* multi = app.add_subcommand("verdict-multi", "Verdict for several control directions");
  need(multi, "--a", o.a, "Drift AlgebraElement JSON");
  multi->add_option("--b", o.bs, "Control AlgebraElement JSON, repeatable")->required();

  auto* omega = app.add_subcommand("omega", "Controls making A + uB elliptic");
  need(omega, "--a", o.a, "Drift AlgebraElement JSON");
  omega->add_option("--b", o.bs, "Control AlgebraElement JSON")->required();
  omega->add_option("--bound", o.bound, "Also list the pieces inside [-C, C]");

  auto* normalize = app.add_subcommand("normalize", "Frame P with P B P^-1 proportional to Ky");
  normalize->add_option("--b", o.bs, "Hyperbolic AlgebraElement JSON")->required();

  auto* canonical = app.add_subcommand("canonical", "Canonical form of an all-hyperbolic system");
  need(canonical, "--a", o.a, "Drift AlgebraElement JSON");
  canonical->add_option("--b", o.bs, "Control AlgebraElement JSON")->required();

  auto* map = app.add_subcommand("map", "Image in so(2,1)/SO(2,1) or sl(2,R)/SL(2,R)");
  map->add_option("--to", o.to, "so21 or sl2r")->required()->check(CLI::IsMember({"so21", "sl2r"}));
  need(map, "--element", o.element, "AlgebraElement or GroupElement JSON");

  auto* orbit = app.add_subcommand("orbit", "Hyperboloid orbit of a point under a trajectory (CSV t,x,y,z)");
  need(orbit, "--a", o.a, "Drift AlgebraElement JSON");
  orbit->add_option("--b", o.bs, "Control AlgebraElement JSON, repeatable")->required();
  need(orbit, "--schedule", o.schedule, "Schedule JSON or @file");
  need(orbit, "--point", o.point, "x,y,z on x^2 + y^2 - z^2 = +-1");
  orbit->add_option("--monitor-dt", o.monitor_dt, "Sampling step inside segments (default 0.05)");

  auto* simulate = app.add_subcommand("simulate", "Propagate a piecewise-constant schedule");
  need(simulate, "--a", o.a, "Drift AlgebraElement JSON");
  simulate->add_option("--b", o.bs, "Control AlgebraElement JSON, repeatable")->required();
  need(simulate, "--schedule", o.schedule, "Schedule JSON or @file (a steering plan is accepted)");
  simulate->add_option("--initial", o.initial, "Initial GroupElement JSON (default identity)");
  simulate->add_option("--monitor-dt", o.monitor_dt, "Also record states inside segments");

  auto* certify = app.add_subcommand("certify", "Check the monotone or residual certificate on random schedules");
  need(certify, "--a", o.a, "Drift AlgebraElement JSON");
  certify->add_option("--b", o.bs, "Control AlgebraElement JSON")->required();
  certify->add_option("--kind", o.kind, "monotone or residual")
      ->check(CLI::IsMember({"monotone", "residual"}))
      ->capture_default_str();
  certify->add_option("--count", o.count, "Number of schedules")->capture_default_str();
  certify->add_option("--segments", o.segments, "Largest segment count")->capture_default_str();
  certify->add_option("--horizon", o.horizon, "Total duration bound")->capture_default_str();
  certify->add_option("--scale", o.scale, "Controls drawn from [-scale, scale]")->capture_default_str();
  certify->add_option("--tol", o.tol, "Per-step tolerance")->capture_default_str();
  certify->add_option("--monitor-dt", o.monitor_dt, "Check spacing inside segments (monotone default 0.05)");

  auto* sample = app.add_subcommand("sample", "Final states of random schedules");
  need(sample, "--a", o.a, "Drift AlgebraElement JSON");
  sample->add_option("--b", o.bs, "Control AlgebraElement JSON, repeatable")->required();
  sample->add_option("--count", o.count, "Number of samples")->capture_default_str();
  sample->add_option("--segments", o.segments, "Largest segment count")->capture_default_str();
  sample->add_option("--horizon", o.horizon, "Total duration bound")->capture_default_str();
  sample->add_option("--scale", o.scale, "Controls drawn from [-scale, scale]")->capture_default_str();

  auto* steer = app.add_subcommand("steer", "Plan a schedule from the identity to a target");
  need(steer, "--a", o.a, "Drift AlgebraElement JSON");
  steer->add_option("--b", o.bs, "Control AlgebraElement JSON")->required();
  need(steer, "--target", o.target, "GroupElement JSON");
  steer->add_option("--bound", o.bound, "Control bound C");
  steer->add_option("--tol", o.steer_tol, "Target distance")->capture_default_str();
  steer->add_option("--max-factors", o.max_factors, "Largest factor count")->capture_default_str();
  steer->add_option("--restarts", o.restarts, "Restarts per factor count")->capture_default_str();

  auto* rep = app.add_subcommand("rep", "Truncated discrete-series representation");
  rep->add_option("--k", o.k, "Bargmann index")->required();
  rep->add_option("--n", o.dim, "Truncation dimension")->required();
  rep->add_flag("--check", o.check, "Print interior residuals instead of matrices");
  rep->add_option("--tol", o.check_tol, "Residual tolerance for --check")->capture_default_str();

  auto* coherent = app.add_subcommand("coherent", "Coherent state amplitudes");
  need(coherent, "--alpha", o.alpha, "Complex label a+bi");
  coherent->add_option("--k", o.k, "Bargmann index")->capture_default_str();
  coherent->add_option("--n", o.dim, "Truncation dimension")->capture_default_str();

  try {
    o.seed = env_seed();
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (classify->parsed()) return cmd_classify(o, out, err);
    if (forms->parsed()) return cmd_forms(o, out);
    if (verdict->parsed()) return cmd_verdict(o, out);
    if (bounded->parsed()) return cmd_verdict_bounded(o, out);
    if (multi->parsed()) return cmd_verdict_multi(o, out);
    if (omega->parsed()) return cmd_omega(o, out);
    if (normalize->parsed()) return cmd_normalize(o, out);
    if (canonical->parsed()) return cmd_canonical(o, out);
    if (map->parsed()) return cmd_map(o, out);
    if (orbit->parsed()) return cmd_orbit(o, out);
    if (simulate->parsed()) return cmd_simulate(o, out);
    if (certify->parsed()) return cmd_certify(o, out);
    if (sample->parsed()) return cmd_sample(o, out);
    if (steer->parsed()) return cmd_steer(o, out, err);
    if (rep->parsed()) return cmd_rep(o, out);
    if (coherent->parsed()) return cmd_coherent(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return su11::is_numerical(e.kind()) ? 3 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace reach
