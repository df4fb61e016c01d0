#include "sipcert/model.hpp"

#include <cmath>
#include <cstdio>

namespace sipcert::model {

geometry::SimplexOptions Options::lp() const {
  geometry::SimplexOptions o;
  o.tol_lp = tol_lp;
  return o;
}

void Options::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  positive(tol, "tol");
  positive(tol_lp, "tol_lp");
  positive(tol_feas, "tol_feas");
  positive(tol_hull, "tol_hull");
  positive(tol_kink, "tol_kink");
  positive(eps0, "eps0");
  if (!(shrink > 0 && shrink < 1)) throw std::invalid_argument("shrink must lie in (0, 1)");
  if (max_steps < 0) throw std::invalid_argument("max_steps must be nonnegative");
  if (refine_depth < 0) throw std::invalid_argument("refine_depth must be nonnegative");
  if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
  if (grid_override != 0 && grid_override < 2) throw std::invalid_argument("grid must be at least 2");
}

IndexSet IndexSet::finite(std::vector<Vector> points) {
  if (points.empty()) throw std::invalid_argument("finite index set is empty");
  for (const auto& t : points)
    if (t.size() != points.front().size()) throw std::invalid_argument("index points differ in dimension");
  IndexSet s;
  s.kind = Kind::Finite;
  s.points = std::move(points);
  return s;
}

IndexSet IndexSet::box(Vector lower, Vector upper, int base_grid) {
  if (lower.size() != upper.size() || lower.size() == 0) throw std::invalid_argument("box bounds mismatch");
  for (int i = 0; i < lower.size(); ++i)
    if (!(lower(i) <= upper(i))) throw std::invalid_argument("box lower bound exceeds upper bound");
  if (base_grid < 2) throw std::invalid_argument("box grid needs at least 2 points per axis");
  IndexSet s;
  s.kind = Kind::Box;
  s.lower = std::move(lower);
  s.upper = std::move(upper);
  s.base_grid = base_grid;
  return s;
}

int IndexSet::dim() const {
  if (kind == Kind::Finite) return points.empty() ? 0 : static_cast<int>(points.front().size());
  return static_cast<int>(lower.size());
}

Vector IndexSet::cell_width(int grid_override) const {
  if (kind == Kind::Finite) return Vector::Zero(dim());
  const int n = grid_override > 0 ? grid_override : base_grid;
  return (upper - lower) / static_cast<double>(n - 1);
}

std::vector<Vector> IndexSet::grid(int grid_override) const {
  if (kind == Kind::Finite) return points;
  const int n = grid_override > 0 ? grid_override : base_grid;
  const int m = dim();
  std::vector<Vector> out;
  std::vector<int> idx(m, 0);
  while (true) {
    Vector t(m);
    for (int i = 0; i < m; ++i) {
      // Endpoints are hit exactly.
      t(i) = idx[i] == n - 1 ? upper(i) : lower(i) + (upper(i) - lower(i)) * idx[i] / (n - 1);
    }
    out.push_back(t);
    int axis = m - 1;
    while (axis >= 0 && ++idx[axis] == n) idx[axis--] = 0;
    if (axis < 0) break;
  }
  return out;
}

ConstraintFamily ConstraintFamily::finite(int dim, std::vector<expr::ExprFn> members) {
  ConstraintFamily f;
  f.kind = FamilyKind::Finite;
  f.dim = dim;
  f.members = std::move(members);
  f.validate();
  return f;
}

ConstraintFamily ConstraintFamily::parametric(expr::ExprFn h, IndexSet index) {
  ConstraintFamily f;
  f.kind = FamilyKind::Parametric;
  f.dim = h.arity_x();
  f.h = std::move(h);
  f.index = std::move(index);
  f.validate();
  return f;
}

ConstraintFamily ConstraintFamily::polyhedral(geometry::Polyhedron a) {
  ConstraintFamily f;
  f.kind = FamilyKind::Polyhedral;
  f.dim = a.dim;
  f.prefix = "a";
  f.polyhedron = std::move(a);
  return f;
}

void ConstraintFamily::validate() const {
  switch (kind) {
    case FamilyKind::Finite:
      if (members.empty()) throw std::invalid_argument("finite family has no members");
      for (const auto& m : members) {
        if (m.arity_x() != dim) throw std::invalid_argument("family member has wrong x-arity");
        if (m.arity_t() != (m.uses_sequence_index() ? 1 : 0))
          throw std::invalid_argument("finite family members may not use t-variables");
      }
      break;
    case FamilyKind::Parametric:
      if (!h.valid()) throw std::invalid_argument("parametric family has no expression");
      if (h.arity_t() != index.dim()) throw std::invalid_argument("t-arity does not match the index set");
      if (h.uses_sequence_index()) throw std::invalid_argument("parametric constraint may not use k");
      break;
    case FamilyKind::Polyhedral:
      if (polyhedron.dim != dim) throw std::invalid_argument("polyhedron dimension mismatch");
      break;
  }
}

std::vector<expr::ExprFn> ConstraintFamily::expressions() const {
  using namespace expr;
  if (kind == FamilyKind::Finite) return members;
  if (kind != FamilyKind::Polyhedral) throw std::logic_error("parametric family has no finite expression list");
  std::vector<ExprFn> out;
  for (int j = 0; j < polyhedron.rows(); ++j) {
    const Vector& a = polyhedron.normals[j];
    NodePtr sum;
    for (int i = 0; i < dim; ++i) {
      if (a(i) == 0) continue;
      NodePtr term = binary(Op::Mul, constant(a(i)), var_x(i));
      sum = sum ? binary(Op::Add, sum, term) : term;
    }
    out.emplace_back(binary(Op::Sub, sum, constant(polyhedron.offsets[j])), dim, 0);
  }
  return out;
}

bool ConstraintFamily::has_countable_members() const {
  if (kind != FamilyKind::Finite) return false;
  for (const auto& m : members)
    if (m.uses_sequence_index()) return true;
  return false;
}

ConstraintFamily compose(const ConstraintFamily& family, std::span<const expr::ExprFn> g, int p) {
  if (static_cast<int>(g.size()) != family.dim)
    throw std::invalid_argument("inner map output dimension does not match the constraint family");
  std::vector<expr::NodePtr> repl;
  for (const auto& gi : g) {
    if (gi.arity_x() != p || gi.arity_t() != 0) throw std::invalid_argument("inner map component has wrong arity");
    repl.push_back(gi.root_ptr());
  }
  ConstraintFamily out;
  out.dim = p;
  if (family.kind == FamilyKind::Parametric) {
    out.kind = FamilyKind::Parametric;
    out.h = expr::substitute_x(family.h, repl, p);
    out.index = family.index;
    return out;
  }
  out.kind = FamilyKind::Finite;
  out.prefix = family.prefix;
  for (const auto& m : family.expressions()) out.members.push_back(expr::substitute_x(m, repl, p));
  return out;
}

void Problem::validate() const {
  if (p < 1) throw std::invalid_argument("dimension must be positive");
  if (!objective.valid() || objective.arity_x() != p || objective.arity_t() != 0)
    throw std::invalid_argument("objective must be an expression in x1..xp");
  for (const auto& g : inner_map)
    if (g.arity_x() != p || g.arity_t() != 0) throw std::invalid_argument("inner map component has wrong arity");
  for (const auto& h : equality)
    if (h.arity_x() != p || h.arity_t() != 0) throw std::invalid_argument("equality component has wrong arity");
  if (inequality) {
    inequality->validate();
    const int expected = inner_map.empty() ? p : static_cast<int>(inner_map.size());
    if (inequality->dim != expected) throw std::invalid_argument("constraint family acts on the wrong dimension");
  } else if (!inner_map.empty()) {
    throw std::invalid_argument("inner map given without constraints");
  }
  if (candidate && candidate->size() != p) throw std::invalid_argument("candidate has wrong dimension");
  options.validate();
}

std::optional<ConstraintFamily> Problem::effective_family() const {
  if (!inequality) return std::nullopt;
  if (inner_map.empty()) return inequality;
  return compose(*inequality, inner_map, p);
}

Vector Problem::image(const Vector& x) const {
  if (inner_map.empty()) return x;
  Vector y(static_cast<int>(inner_map.size()));
  for (std::size_t i = 0; i < inner_map.size(); ++i) y(static_cast<int>(i)) = inner_map[i].eval(x);
  return y;
}

std::string format_param_tag(const Vector& t) {
  std::string out = "t=(";
  for (int i = 0; i < t.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", t(i));
    if (i) out += ",";
    out += buf;
  }
  return out + ")";
}

}  // namespace sipcert::model
