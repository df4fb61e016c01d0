#include "sipcert/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace sipcert::io {

namespace {

std::string number_text(double d) {
  if (!std::isfinite(d)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

bool scalar(const Json& v) { return !v.is_object() && !v.is_array(); }

void write(std::ostringstream& out, const Json& v, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  switch (v.type()) {
    case Json::value_t::number_float:
      out << number_text(v.get<double>());
      return;
    case Json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [k, x] : v.items()) {
        if (!first) out << ",\n";
        first = false;
        out << pad << Json(k).dump() << ": ";
        write(out, x, depth + 1);
      }
      out << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      bool flat = true;
      for (const auto& x : v) flat = flat && (scalar(x) || (x.is_array() && std::all_of(x.begin(), x.end(), scalar)));
      if (flat) {
        out << "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out << ", ";
          write(out, v[i], depth + 1);
        }
        out << "]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ",\n";
        out << pad;
        write(out, v[i], depth + 1);
      }
      out << "\n" << close << "]";
      return;
    }
    default:
      out << v.dump();
  }
}

template <class T>
void put_opt(Json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
void get(const Json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it != j.end() && !it->is_null()) out = it->template get<T>();
}

template <class T>
void get_opt(const Json& j, const char* key, std::optional<T>& out) {
  auto it = j.find(key);
  out = (it != j.end() && !it->is_null()) ? std::optional<T>(it->template get<T>()) : std::nullopt;
}

}  // namespace

void to_json(Json& j, const TaggedVector& v) {
  j = Json::object();
  j["tag"] = v.tag;
  j["vector"] = v.vector;
  if (!v.param.empty()) j["param"] = v.param;
  if (v.limit) j["limit"] = true;
  j["weight"] = v.weight;
}
void from_json(const Json& j, TaggedVector& v) {
  get(j, "tag", v.tag);
  get(j, "vector", v.vector);
  get(j, "param", v.param);
  get(j, "limit", v.limit);
  get(j, "weight", v.weight);
}

void to_json(Json& j, const LadderRow& r) { j = Json{{"eps", r.eps}, {"generators", r.generators}, {"gap", r.gap}}; }
void from_json(const Json& j, LadderRow& r) {
  get(j, "eps", r.eps);
  get(j, "generators", r.generators);
  get(j, "gap", r.gap);
}

void to_json(Json& j, const SipBlock& s) {
  j = Json{{"lambda0", s.lambda0},   {"weights", s.weights},   {"params", s.params},
           {"tags", s.tags},         {"residual", s.residual}, {"lambda0_nonzero", s.lambda0_nonzero}};
}
void from_json(const Json& j, SipBlock& s) {
  get(j, "lambda0", s.lambda0);
  get(j, "weights", s.weights);
  get(j, "params", s.params);
  get(j, "tags", s.tags);
  get(j, "residual", s.residual);
  get(j, "lambda0_nonzero", s.lambda0_nonzero);
}

void to_json(Json& j, const JacobianBlock& b) {
  j = Json{{"rank", b.rank}, {"tol_rank", b.tol_rank}, {"pivots", b.pivots}, {"kernel_basis", b.kernel_basis}};
  if (!b.left_null.empty()) j["left_null"] = b.left_null;
}
void from_json(const Json& j, JacobianBlock& b) {
  get(j, "rank", b.rank);
  get(j, "tol_rank", b.tol_rank);
  get(j, "pivots", b.pivots);
  get(j, "kernel_basis", b.kernel_basis);
  get(j, "left_null", b.left_null);
}

void to_json(Json& j, const ConvexSetBlock& c) {
  j = Json{{"pass", c.pass},       {"dual_ok", c.dual_ok},     {"dual_margin", c.dual_margin},
           {"min_ok", c.min_ok},   {"unbounded", c.unbounded}};
  put_opt(j, "min_value", c.min_value);
  j["value_at_point"] = c.value_at_point;
  j["point_in_set"] = c.point_in_set;
  if (!c.ray.empty()) j["ray"] = c.ray;
}
void from_json(const Json& j, ConvexSetBlock& c) {
  get(j, "pass", c.pass);
  get(j, "dual_ok", c.dual_ok);
  get(j, "dual_margin", c.dual_margin);
  get(j, "min_ok", c.min_ok);
  get(j, "unbounded", c.unbounded);
  get_opt(j, "min_value", c.min_value);
  get(j, "value_at_point", c.value_at_point);
  get(j, "point_in_set", c.point_in_set);
  get(j, "ray", c.ray);
}

void to_json(Json& j, const DeterminationRow& d) {
  j = Json{{"tag", d.tag}, {"direction", d.direction}};
  put_opt(j, "infimum", d.infimum);
}
void from_json(const Json& j, DeterminationRow& d) {
  get(j, "tag", d.tag);
  get(j, "direction", d.direction);
  get_opt(j, "infimum", d.infimum);
}

void to_json(Json& j, const AdmissibleBlock& a) {
  j = Json::object();
  j["point"] = a.point;
  j["member_count"] = a.member_count;
  j["zero_in_full_hull"] = a.zero_in_full_hull;
  j["full_hull_distance"] = a.full_hull_distance;
  j["admissible_style"] = a.admissible_style;
  j["weak_admissible_only"] = a.weak_admissible_only;
  j["active_count"] = a.active_count;
  j["zero_in_active_hull"] = a.zero_in_active_hull;
  j["lipschitz"] = a.lipschitz;
  if (!a.determination.empty()) {
    j["determination"] = a.determination;
    j["determination_zero_free"] = a.determination_zero_free;
  }
  put_opt(j, "cone_interior_nonempty", a.cone_interior_nonempty);
  put_opt(j, "cone_margin", a.cone_margin);
  if (!a.cone_witness.empty()) j["cone_witness"] = a.cone_witness;
}
void from_json(const Json& j, AdmissibleBlock& a) {
  get(j, "point", a.point);
  get(j, "member_count", a.member_count);
  get(j, "zero_in_full_hull", a.zero_in_full_hull);
  get(j, "full_hull_distance", a.full_hull_distance);
  get(j, "admissible_style", a.admissible_style);
  get(j, "weak_admissible_only", a.weak_admissible_only);
  get(j, "active_count", a.active_count);
  get(j, "zero_in_active_hull", a.zero_in_active_hull);
  get(j, "lipschitz", a.lipschitz);
  get(j, "determination", a.determination);
  get(j, "determination_zero_free", a.determination_zero_free);
  get_opt(j, "cone_interior_nonempty", a.cone_interior_nonempty);
  get_opt(j, "cone_margin", a.cone_margin);
  get(j, "cone_witness", a.cone_witness);
}

void to_json(Json& j, const ScanCandidate& c) {
  j = Json{{"point", c.point}, {"objective", c.objective}, {"infimum", c.infimum}};
}
void from_json(const Json& j, ScanCandidate& c) {
  get(j, "point", c.point);
  get(j, "objective", c.objective);
  get(j, "infimum", c.infimum);
}

int exit_code(const CertificateReport& r) {
  if (r.verdict == "NoCertificate") return 2;
  if (r.verdict == "Infeasible") return 3;
  if (r.verdict == "InputError") return 4;
  return 0;
}

Json to_json(const CertificateReport& r) {
  Json j = Json::object();
  j["command"] = r.command;
  j["verdict"] = r.verdict;
  j["exit_code"] = exit_code(r);
  if (!r.pipeline.empty()) j["pipeline"] = r.pipeline;
  if (!r.message.empty()) j["message"] = r.message;
  if (!r.candidate.empty()) j["candidate"] = r.candidate;
  if (!r.objective_gradient.empty()) j["objective_gradient"] = r.objective_gradient;
  const bool certificate = r.command == "certify" && r.verdict != "InputError" && r.verdict != "Infeasible";
  if (certificate) {
    j["multipliers"] = Json{{"lambda", r.lambda}, {"beta", r.beta}};
    put_opt(j["multipliers"], "kkt_beta", r.kkt_beta);
    put_opt(j["multipliers"], "lambda0", r.lambda0);
    if (!r.z0.empty()) j["multipliers"]["z0"] = r.z0;
    if (!r.w0.empty()) j["multipliers"]["w0"] = r.w0;
    j["witness"] = r.witness;
    if (!r.y_star.empty()) j["y_star"] = r.y_star;
    j["coefficients"] = r.coefficients;
    j["residual"] = r.residual;
    j["segment_distance"] = r.segment_distance;
    j["zero_not_in_tc"] = r.zero_not_in_tc;
    j["approximate"] = r.approximate;
  }
  if (!r.branch.empty()) j["branch"] = r.branch;
  if (r.jacobian) j["jacobian"] = *r.jacobian;
  if (r.infimum || !r.argmin_tag.empty() || !r.violated.empty()) {
    Json f = Json::object();
    put_opt(f, "infimum", r.infimum);
    if (!r.argmin_tag.empty()) f["argmin_tag"] = r.argmin_tag;
    f["violated"] = r.violated;
    j["feasibility"] = f;
  }
  if (!r.ladder.empty() || !r.final_generators.empty() || r.interior) {
    Json t = Json::object();
    t["ladder"] = r.ladder;
    t["final_generators"] = r.final_generators;
    t["converged"] = r.converged;
    t["interior"] = r.interior;
    t["shortcut"] = r.shortcut;
    j["tc"] = t;
  }
  if (r.sip) j["sip"] = *r.sip;
  if (!r.convex_set.empty()) j["convex_set"] = r.convex_set;
  if (r.admissible) j["admissible"] = *r.admissible;
  if (!r.candidates.empty()) j["candidates"] = r.candidates;
  j["assumptions"] = r.assumptions;
  j["timings_ms"] = r.timings_ms;
  return j;
}

CertificateReport report_from_json(const Json& j) {
  CertificateReport r;
  get(j, "command", r.command);
  get(j, "verdict", r.verdict);
  get(j, "pipeline", r.pipeline);
  get(j, "message", r.message);
  get(j, "candidate", r.candidate);
  get(j, "objective_gradient", r.objective_gradient);
  if (auto m = j.find("multipliers"); m != j.end()) {
    get(*m, "lambda", r.lambda);
    get(*m, "beta", r.beta);
    get_opt(*m, "kkt_beta", r.kkt_beta);
    get_opt(*m, "lambda0", r.lambda0);
    get(*m, "z0", r.z0);
    get(*m, "w0", r.w0);
  }
  get(j, "witness", r.witness);
  get(j, "y_star", r.y_star);
  get(j, "coefficients", r.coefficients);
  get(j, "residual", r.residual);
  get(j, "segment_distance", r.segment_distance);
  get(j, "zero_not_in_tc", r.zero_not_in_tc);
  get(j, "approximate", r.approximate);
  get(j, "branch", r.branch);
  get_opt(j, "jacobian", r.jacobian);
  if (auto f = j.find("feasibility"); f != j.end()) {
    get_opt(*f, "infimum", r.infimum);
    get(*f, "argmin_tag", r.argmin_tag);
    get(*f, "violated", r.violated);
  }
  if (auto t = j.find("tc"); t != j.end()) {
    get(*t, "ladder", r.ladder);
    get(*t, "final_generators", r.final_generators);
    get(*t, "converged", r.converged);
    get(*t, "interior", r.interior);
    get(*t, "shortcut", r.shortcut);
  }
  get_opt(j, "sip", r.sip);
  get(j, "convex_set", r.convex_set);
  get_opt(j, "admissible", r.admissible);
  get(j, "candidates", r.candidates);
  get(j, "assumptions", r.assumptions);
  get(j, "timings_ms", r.timings_ms);
  return r;
}

std::string dump(const Json& doc) {
  std::ostringstream out;
  write(out, doc, 0);
  out << "\n";
  return out.str();
}

std::string emit(const CertificateReport& r) { return dump(to_json(r)); }

CertificateReport parse_report(std::string_view text) { return report_from_json(Json::parse(text)); }

namespace {

std::string vec_text(const std::vector<double>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v[i]);
    s += (i ? ", " : "") + std::string(buf);
  }
  return s + ")";
}

}  // namespace

std::string render_text(const CertificateReport& r) {
  std::ostringstream o;
  o << r.command << ": " << r.verdict << " (exit " << exit_code(r) << ")\n";
  if (!r.message.empty()) o << "  " << r.message << "\n";
  if (!r.pipeline.empty()) o << "  pipeline: " << r.pipeline << (r.branch.empty() ? "" : ", branch " + r.branch) << "\n";
  if (!r.candidate.empty()) o << "  candidate: " << vec_text(r.candidate) << "\n";
  if (r.infimum) o << "  inf of constraints: " << *r.infimum << (r.argmin_tag.empty() ? "" : " at " + r.argmin_tag) << "\n";
  for (const auto& v : r.violated) o << "  violated: " << v << "\n";
  if (r.command == "certify" && exit_code(r) != 4 && exit_code(r) != 3) {
    o << "  grad f: " << vec_text(r.objective_gradient) << "\n";
    o << "  lambda = " << r.lambda << ", beta = " << r.beta;
    if (r.kkt_beta) o << ", KKT beta = " << *r.kkt_beta;
    o << "\n";
    if (r.lambda0) o << "  lambda0 = " << *r.lambda0 << "\n";
    if (!r.z0.empty()) o << "  z0 = " << vec_text(r.z0) << "\n";
    if (!r.w0.empty()) o << "  w0 = " << vec_text(r.w0) << "\n";
    if (!r.witness.empty()) o << "  witness x* = " << vec_text(r.witness) << "\n";
    if (!r.y_star.empty()) o << "  y* = " << vec_text(r.y_star) << "\n";
    for (const auto& c : r.coefficients) o << "    " << c.weight << " x " << vec_text(c.vector) << "  [" << c.tag << "]\n";
    o << "  residual = " << r.residual << (r.approximate ? "  (ladder did not stabilize)" : "") << "\n";
  }
  if (r.jacobian) {
    o << "  equality Jacobian rank " << r.jacobian->rank << ", pivots " << vec_text(r.jacobian->pivots) << "\n";
    if (!r.jacobian->left_null.empty()) o << "  left null vector " << vec_text(r.jacobian->left_null) << "\n";
  }
  if (!r.ladder.empty()) {
    o << "  ladder (eps, generators, gap):\n";
    for (const auto& s : r.ladder) o << "    " << s.eps << "  " << s.generators << "  " << s.gap << "\n";
  }
  if (r.interior) o << "  candidate is interior; the multiplier set is empty\n";
  if (!r.final_generators.empty()) {
    o << "  final generators" << (r.converged ? "" : " (not stabilized)") << ":\n";
    for (const auto& g : r.final_generators) o << "    " << vec_text(g.vector) << "  [" << g.tag << "]\n";
  }
  if (r.sip) {
    o << "  lambda0 = " << r.sip->lambda0 << "\n";
    for (std::size_t i = 0; i < r.sip->weights.size(); ++i)
      o << "    lambda" << i + 1 << " = " << r.sip->weights[i] << "  [" << r.sip->tags[i] << "]\n";
  }
  for (const auto& c : r.convex_set)
    o << "  convex-set check: " << (c.pass ? "pass" : "fail") << " (dual " << (c.dual_ok ? "ok" : "fails")
      << ", minimum " << (c.min_ok ? "attained" : "not attained") << ")\n";
  if (r.admissible) {
    const auto& a = *r.admissible;
    o << "  members " << a.member_count << ", active " << a.active_count << "\n";
    o << "  0 in hull of all gradients: " << (a.zero_in_full_hull ? "yes" : "no") << " (distance "
      << a.full_hull_distance << ")\n";
    o << "  " << (a.admissible_style ? "admissible" : "weak-admissible only") << "\n";
    o << "  Lipschitz estimate " << a.lipschitz << "\n";
    for (const auto& d : a.determination) o << "    " << d.tag << " " << vec_text(d.direction) << "\n";
    if (a.cone_interior_nonempty) o << "  cone interior " << (*a.cone_interior_nonempty ? "nonempty" : "empty") << "\n";
  }
  for (const auto& c : r.candidates) o << "  " << vec_text(c.point) << "  f = " << c.objective << "\n";
  for (const auto& a : r.assumptions) o << "  assumes: " << a << "\n";
  return o.str();
}

}  // namespace sipcert::io
