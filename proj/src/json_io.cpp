#include "su11/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "su11/errors.hpp"

namespace su11::io {

namespace {

double number(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " is missing \"" + key + "\"");
  }
  const json& v = j.at(key);
  if (!v.is_number()) throw Error(ErrorKind::InvalidArgument, std::string(what) + " field \"" + key + "\" must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw Error(ErrorKind::NonFinite, std::string(what) + " field \"" + key + "\"");
  return d;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

json parse_argument(const std::string& text, const char* what) {
  std::string body = text;
  if (!text.empty() && text.front() == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw Error(ErrorKind::InvalidArgument, std::string("cannot read ") + what + " file " + text.substr(1));
    std::ostringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " is not valid JSON: " + e.what());
  }
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json to_json(const AlgebraElement& m) { return {{"kx", m.kx}, {"ky", m.ky}, {"kz", m.kz}}; }

json to_json(const GroupElement& x) { return {{"x1", x.x1}, {"x2", x.x2}, {"x3", x.x3}, {"x4", x.x4}}; }

json to_json(const ClassKind& c) {
  return {{"kind", to_string(c.kind)}, {"form", c.form_value}, {"tolerance", c.tolerance}};
}

json to_json(const TracePolynomial& q) {
  return {{"p2", q.p2}, {"p1", q.p1}, {"p0", q.p0}, {"discriminant", q.discriminant()}};
}

json to_json(const OmegaSet& omega) {
  json j = {{"shape", to_string(omega.shape)}, {"lo", number_or_null(omega.lo)}, {"hi", number_or_null(omega.hi)}};
  j["witness"] = omega.witness ? json(*omega.witness) : json(nullptr);
  return j;
}

json to_json(const ControlInterval& piece) {
  return {{"lo", piece.lo}, {"hi", piece.hi}, {"lo_closed", piece.lo_closed}, {"hi_closed", piece.hi_closed}};
}

json to_json(const SubalgebraBasis& algebra) {
  json gens = json::array(), basis = json::array();
  for (const auto& g : algebra.generators) gens.push_back(to_json(g));
  for (const auto& b : algebra.basis) basis.push_back(to_json(b));
  return {{"dim", algebra.dim}, {"generators", gens}, {"basis", basis}};
}

json to_json(const Certificate& cert) {
  return std::visit(
      overloaded{
          [](const std::monostate&) { return json(nullptr); },
          [](const cert::WitnessControl& c) {
            return json{{"type", "WitnessControl"},
                        {"controls", c.controls},
                        {"element", to_json(c.element)},
                        {"form", c.form_value},
                        {"source", c.source}};
          },
          [](const cert::RankDeficiency& c) {
            return json{{"type", "RankDeficiency"}, {"algebra", to_json(c.algebra)}, {"reason", c.reason}};
          },
          [](const cert::ParabolicBracket& c) {
            return json{{"type", "ParabolicBracket"}, {"bracket", to_json(c.bracket)}, {"form", c.form_value}};
          },
          [](const cert::HyperbolicFamily& c) {
            return json{{"type", "HyperbolicFamily"},
                        {"polynomial", to_json(c.q)},
                        {"discriminant", c.discriminant},
                        {"canonical", to_json(c.canonical)}};
          },
          [](const cert::BoundedObstruction& c) {
            return json{{"type", "BoundedObstruction"}, {"omega", to_json(c.omega)}, {"bound", c.bound}};
          },
          [](const cert::Marginal& c) {
            return json{{"type", "Marginal"}, {"polynomial", to_json(c.q)}, {"reason", c.reason}};
          },
          [](const cert::OneParameterContainment& c) {
            return json{{"type", "OneParameterContainment"}, {"b", to_json(c.b)}};
          },
          [](const cert::FullAlgebra& c) { return json{{"type", "FullAlgebra"}, {"algebra", to_json(c.algebra)}}; },
          [](const cert::Periodic& c) { return json{{"type", "Periodic"}, {"control", to_json(c.control)}}; },
      },
      cert);
}

json to_json(const Verdict& verdict) {
  json j = {{"decision", to_string(verdict.decision)}};
  if (auto w = verdict.witness()) j["witness"] = *w;
  j["certificate"] = to_json(verdict.certificate);
  if (verdict.omega) j["omega"] = to_json(*verdict.omega);
  return j;
}

json to_json(const NormalizationResult& n) {
  return {{"alpha", n.alpha}, {"beta", n.beta}, {"scale", n.scale}, {"frame", to_json(n.frame)}};
}

json to_json(const CanonicalSystem& c) {
  return {{"epsilon", c.epsilon},
          {"a", c.a},
          {"time_scale", c.time_scale},
          {"control_offset", c.control_offset},
          {"control_scale", c.control_scale},
          {"frame", to_json(c.frame)}};
}

json to_json(const PeriodicControl& p) { return {{"u", p.u}, {"n", p.n}, {"epsilon", p.epsilon}}; }

json to_json(const ControlSchedule& s) {
  json segs = json::array();
  for (const auto& seg : s.segments) segs.push_back({{"duration", seg.duration}, {"controls", seg.controls}});
  return {{"segments", segs}};
}

json to_json(const CertificateReport& r) {
  return {{"kind", to_string(r.kind)},
          {"max_violation", r.max_violation},
          {"tolerance", r.tolerance},
          {"steps_checked", r.steps_checked},
          {"pass", r.pass}};
}

json to_json(const SteeringPlan& p) {
  return {{"schedule", to_json(p.schedule)},
          {"achieved", to_json(p.achieved)},
          {"target", to_json(p.target)},
          {"error", p.error},
          {"iterations", p.iterations},
          {"factors", p.factors},
          {"converged", p.converged}};
}

json to_json(const InteriorResiduals& r) {
  return {{"casimir", r.casimir}, {"kz_kp", r.kz_kp}, {"kz_km", r.kz_km}, {"kp_km", r.kp_km}, {"kx_ky", r.kx_ky}};
}

json to_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

AlgebraElement algebra_from_json(const json& j) {
  return {number(j, "kx", "algebra element"), number(j, "ky", "algebra element"), number(j, "kz", "algebra element")};
}

GroupElement group_from_json(const json& j) {
  const GroupElement x{number(j, "x1", "group element"), number(j, "x2", "group element"),
                       number(j, "x3", "group element"), number(j, "x4", "group element")};
  require_group_element(x);
  return x;
}

ControlSchedule schedule_from_json(const json& j) {
  if (j.is_object() && !j.contains("segments") && j.contains("schedule")) return schedule_from_json(j.at("schedule"));
  if (!j.is_object() || !j.contains("segments") || !j.at("segments").is_array()) {
    throw Error(ErrorKind::InvalidArgument, "schedule needs a \"segments\" array");
  }
  ControlSchedule s;
  for (const auto& seg : j.at("segments")) {
    Segment out;
    out.duration = number(seg, "duration", "segment");
    if (!seg.contains("controls") || !seg.at("controls").is_array()) {
      throw Error(ErrorKind::InvalidArgument, "segment needs a \"controls\" array");
    }
    for (const auto& u : seg.at("controls")) {
      if (!u.is_number()) throw Error(ErrorKind::InvalidArgument, "segment controls must be numbers");
      out.controls.push_back(u.get<double>());
    }
    s.segments.push_back(std::move(out));
  }
  return s;
}

bool looks_like_group(const json& j) { return j.is_object() && j.contains("x1"); }

}  // namespace su11::io
