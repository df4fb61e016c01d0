#include "sipcert/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace sipcert::io {

namespace {

std::string child(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string item(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void only_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw InputError(path, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items())
    if (!ok.count(k)) throw InputError(child(path, k), "unknown key");
}

const Json& required(const Json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(child(path, key), "missing required key");
  return *it;
}

double number(const Json& v, const std::string& path) {
  if (!v.is_number()) throw InputError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw InputError(path, "expected a finite number");
  return d;
}

int integer(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) throw InputError(path, "expected an integer");
  const auto i = v.get<long long>();
  if (i < -1000000000LL || i > 1000000000LL) throw InputError(path, "integer out of range");
  return static_cast<int>(i);
}

Vector vector_of(const Json& v, const std::string& path, std::optional<int> size = std::nullopt) {
  if (!v.is_array()) throw InputError(path, "expected an array of numbers");
  if (size && static_cast<int>(v.size()) != *size)
    throw InputError(path, "expected " + std::to_string(*size) + " numbers, got " + std::to_string(v.size()));
  Vector out(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<int>(i)) = number(v[i], item(path, i));
  return out;
}

expr::ExprFn expression(const Json& v, const std::string& path, int arity_x, int arity_t, bool allow_k = false) {
  if (!v.is_string()) throw InputError(path, "expected an expression string");
  try {
    return expr::parse(v.get<std::string>(), arity_x, arity_t, {.allow_sequence_index = allow_k});
  } catch (const expr::ParseError& e) {
    throw InputError(path, std::string(e.what()));
  }
}

std::vector<expr::ExprFn> expression_list(const Json& v, const std::string& path, int arity_x, bool allow_k = false) {
  if (!v.is_array() || v.empty()) throw InputError(path, "expected a nonempty array of expressions");
  std::vector<expr::ExprFn> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(expression(v[i], item(path, i), arity_x, 0, allow_k));
  return out;
}

model::ConstraintFamily constraints(const Json& v, const std::string& path, int q) {
  only_keys(v, path, {"finite", "parametric", "polyhedral"});
  if (v.size() != 1) throw InputError(path, "expected exactly one of finite, parametric, polyhedral");
  try {
    if (v.contains("finite")) {
      return model::ConstraintFamily::finite(q, expression_list(v["finite"], child(path, "finite"), q, true));
    }
    if (v.contains("parametric")) {
      const std::string pp = child(path, "parametric");
      const Json& par = v["parametric"];
      only_keys(par, pp, {"h", "t_dim", "box", "grid"});
      const int m = integer(required(par, pp, "t_dim"), child(pp, "t_dim"));
      if (m < 1) throw InputError(child(pp, "t_dim"), "must be at least 1");
      const std::string bp = child(pp, "box");
      const Json& box = required(par, pp, "box");
      only_keys(box, bp, {"lower", "upper"});
      Vector lower = vector_of(required(box, bp, "lower"), child(bp, "lower"), m);
      Vector upper = vector_of(required(box, bp, "upper"), child(bp, "upper"), m);
      for (int i = 0; i < m; ++i)
        if (lower(i) > upper(i)) throw InputError(bp, "lower bound exceeds upper bound on axis " + std::to_string(i + 1));
      int grid = 101;
      if (par.contains("grid")) grid = integer(par["grid"], child(pp, "grid"));
      if (grid < 2) throw InputError(child(pp, "grid"), "must be at least 2");
      auto h = expression(required(par, pp, "h"), child(pp, "h"), q, m);
      return model::ConstraintFamily::parametric(std::move(h), model::IndexSet::box(lower, upper, grid));
    }
    const std::string pp = child(path, "polyhedral");
    const Json& poly = v["polyhedral"];
    only_keys(poly, pp, {"normals", "offsets"});
    const Json& normals = required(poly, pp, "normals");
    if (!normals.is_array() || normals.empty()) throw InputError(child(pp, "normals"), "expected a nonempty array");
    std::vector<Vector> rows;
    for (std::size_t j = 0; j < normals.size(); ++j) rows.push_back(vector_of(normals[j], item(child(pp, "normals"), j), q));
    Vector off = vector_of(required(poly, pp, "offsets"), child(pp, "offsets"), static_cast<int>(rows.size()));
    std::vector<double> offsets(off.data(), off.data() + off.size());
    return model::ConstraintFamily::polyhedral(geometry::Polyhedron(q, std::move(rows), std::move(offsets)));
  } catch (const std::invalid_argument& e) {
    throw InputError(path, e.what());
  }
}

void options(const Json& v, const std::string& path, model::Options& o) {
  only_keys(v, path,
            {"tol", "tol_lp", "tol_feas", "tol_hull", "tol_kink", "eps0", "shrink", "max_steps", "refine_depth", "k_max",
             "grid", "strict_active_only"});
  auto real = [&](const char* key, double& out) {
    if (v.contains(key)) out = number(v[key], child(path, key));
  };
  auto whole = [&](const char* key, int& out) {
    if (v.contains(key)) out = integer(v[key], child(path, key));
  };
  real("tol", o.tol);
  real("tol_lp", o.tol_lp);
  real("tol_feas", o.tol_feas);
  real("tol_hull", o.tol_hull);
  real("tol_kink", o.tol_kink);
  real("eps0", o.eps0);
  real("shrink", o.shrink);
  whole("max_steps", o.max_steps);
  whole("refine_depth", o.refine_depth);
  whole("k_max", o.k_max);
  whole("grid", o.grid_override);
  if (v.contains("strict_active_only")) {
    if (!v["strict_active_only"].is_boolean()) throw InputError(child(path, "strict_active_only"), "expected a boolean");
    o.strict_active_only = v["strict_active_only"].get<bool>();
  }
}

}  // namespace

model::Problem problem_from_json(const Json& doc) {
  only_keys(doc, "",
            {"name", "description", "dimension", "objective", "constraints", "inner_map", "equality", "candidate",
             "options"});
  for (const char* key : {"name", "description"})
    if (doc.contains(key) && !doc[key].is_string()) throw InputError(key, "expected a string");
  model::Problem prob;
  prob.p = integer(required(doc, "", "dimension"), "dimension");
  if (prob.p < 1) throw InputError("dimension", "must be at least 1");
  prob.objective = expression(required(doc, "", "objective"), "objective", prob.p, 0);
  if (doc.contains("inner_map")) prob.inner_map = expression_list(doc["inner_map"], "inner_map", prob.p);
  if (doc.contains("equality")) prob.equality = expression_list(doc["equality"], "equality", prob.p);
  const int q = prob.inner_map.empty() ? prob.p : static_cast<int>(prob.inner_map.size());
  if (doc.contains("constraints")) prob.inequality = constraints(doc["constraints"], "constraints", q);
  if (!prob.inner_map.empty() && !prob.inequality) throw InputError("inner_map", "requires constraints");
  if (doc.contains("candidate")) prob.candidate = vector_of(doc["candidate"], "candidate", prob.p);
  if (doc.contains("options")) options(doc["options"], "options", prob.options);
  try {
    prob.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError("", e.what());
  }
  return prob;
}

model::Problem parse_problem(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError("", std::string("malformed JSON: ") + e.what());
  }
  return problem_from_json(doc);
}

model::Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

void apply_overrides(model::Options& opts, const OptionOverrides& o) {
  if (o.tol) opts.tol = *o.tol;
  if (o.eps0) opts.eps0 = *o.eps0;
  if (o.shrink) opts.shrink = *o.shrink;
  if (o.max_steps) opts.max_steps = *o.max_steps;
  if (o.grid) opts.grid_override = *o.grid;
  if (o.refine) opts.refine_depth = *o.refine;
  if (o.k_max) opts.k_max = *o.k_max;
}

}  // namespace sipcert::io
