#include "sipcert/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace sipcert::model {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector scalar(double v) {
  Vector t(1);
  t(0) = v;
  return t;
}

// Evaluation failures are reported with the member they came from.
template <class Fn>
auto tagged(const std::string& tag, Fn&& fn) {
  try {
    return fn();
  } catch (const expr::KinkError& e) {
    throw expr::KinkError(std::string(e.what()) + " [" + tag + "]");
  } catch (const expr::EvalError& e) {
    throw expr::EvalError(std::string(e.what()) + " [" + tag + "]");
  }
}

}  // namespace

std::vector<std::string> ActiveSet::tags() const {
  std::vector<std::string> out;
  for (const auto& e : entries) out.push_back(e.tag);
  for (const auto& e : limits) out.push_back(e.tag);
  return out;
}

geometry::Hull ActiveSet::hull(bool with_limits) const {
  geometry::Hull h;
  for (const auto& e : entries) h.add(e.grad, e.tag);
  if (with_limits)
    for (const auto& e : limits) h.add(e.grad, e.tag);
  return h;
}

PointEvaluation::PointEvaluation(ConstraintFamily family, Vector point, Options options)
    : family_(std::move(family)), point_(std::move(point)), opts_(options) {
  if (point_.size() != family_.dim) throw std::invalid_argument("point has wrong dimension for the family");
  if (family_.kind == FamilyKind::Parametric) {
    width_ = family_.index.cell_width(opts_.grid_override);
    for (const auto& t : family_.index.grid(opts_.grid_override)) {
      Sample s;
      s.tag = format_param_tag(t);
      s.param = t;
      s.value = tagged(s.tag, [&] { return family_.h.eval(point_, t); });
      base_.push_back(std::move(s));
    }
  } else {
    exprs_ = family_.expressions();
    for (std::size_t i = 0; i < exprs_.size(); ++i) {
      const auto& m = exprs_[i];
      const std::string name = family_.prefix + std::to_string(i);
      if (!m.uses_sequence_index()) {
        Sample s;
        s.tag = name;
        s.member = static_cast<int>(i);
        s.value = tagged(name, [&] { return m.eval(point_); });
        base_.push_back(std::move(s));
        continue;
      }
      for (int k = 1; k <= opts_.k_max; ++k) {
        Sample s;
        s.tag = name + "[k=" + std::to_string(k) + "]";
        s.member = static_cast<int>(i);
        s.param = scalar(k);
        s.value = tagged(s.tag, [&] { return m.eval(point_, s.param); });
        base_.push_back(std::move(s));
      }
      // The limit member is kept when the sequence visibly converges.
      try {
        const double at_inf = m.eval(point_, scalar(kInf));
        const double far = m.eval(point_, scalar(1e8));
        if (std::isfinite(at_inf) && std::abs(at_inf - far) <= 1e-6 * (1 + std::abs(at_inf))) {
          Sample s;
          s.tag = name + "[k=inf]";
          s.member = static_cast<int>(i);
          s.param = scalar(kInf);
          s.limit = true;
          s.value = at_inf;
          base_.push_back(std::move(s));
        }
      } catch (const expr::EvalError&) {
      }
    }
  }

  infimum_ = kInf;
  for (std::size_t i = 0; i < base_.size(); ++i) {
    if (base_[i].value < infimum_) {
      infimum_ = base_[i].value;
      argmin_ = i;
      argmin_tag_ = base_[i].tag;
    }
  }
  if (family_.kind == FamilyKind::Parametric && !base_.empty()) {
    const Sample r = refine(argmin_);
    if (r.value < infimum_) {
      infimum_ = r.value;
      argmin_tag_ = r.tag;
    }
  }
}

double PointEvaluation::eval_at(const Vector& t) const {
  return tagged(format_param_tag(t), [&] { return family_.h.eval(point_, t); });
}

// Coordinate descent with halving steps, starting from a grid point.
Sample PointEvaluation::refine(std::size_t start) {
  if (auto it = refined_.find(start); it != refined_.end()) return it->second;
  Vector t = base_[start].param;
  double value = base_[start].value;
  if (family_.index.kind == IndexSet::Kind::Box) {
    Vector step = width_;
    const IndexSet& box = family_.index;
    for (int level = 1; level <= opts_.refine_depth; ++level) {
      step /= 2;
      for (int axis = 0; axis < t.size(); ++axis) {
        Vector best_t = t;
        double best = value;
        for (double dir : {-1.0, 1.0}) {
          Vector c = t;
          c(axis) = std::clamp(c(axis) + dir * step(axis), box.lower(axis), box.upper(axis));
          if (c(axis) == t(axis)) continue;
          const double v = eval_at(c);
          if (v >= -opts_.tol_feas && v < best) {
            best = v;
            best_t = c;
          }
        }
        t = best_t;
        value = best;
      }
    }
  }
  Sample s;
  s.tag = format_param_tag(t);
  s.param = t;
  s.value = value;
  refined_.emplace(start, s);
  return s;
}

void PointEvaluation::fill_grad(Sample& s) const {
  if (auto it = grads_.find(s.tag); it != grads_.end()) {
    s.grad = it->second;
    return;
  }
  s.grad = tagged(s.tag, [&] {
    if (family_.kind == FamilyKind::Parametric) return family_.h.grad(point_, s.param, opts_.tol_kink);
    const auto& m = exprs_[static_cast<std::size_t>(s.member)];
    return m.uses_sequence_index() ? m.grad(point_, s.param, opts_.tol_kink) : m.grad(point_, Vector(), opts_.tol_kink);
  });
  grads_.emplace(s.tag, s.grad);
}

std::vector<std::string> PointEvaluation::violated() const {
  std::vector<std::string> out;
  // A negative limit means members with large k are violated.
  for (const auto& s : base_)
    if (s.value < -opts_.tol_feas) out.push_back(s.tag);
  if (infimum_ < -opts_.tol_feas && std::find(out.begin(), out.end(), argmin_tag_) == out.end())
    out.push_back(argmin_tag_);
  return out;
}

ActiveSet PointEvaluation::active_set(double eps) {
  if (infimum_ < -opts_.tol_feas)
    throw InfeasibleError("candidate is infeasible: constraint " + argmin_tag_ + " is violated", argmin_tag_);
  ActiveSet out;
  out.eps = eps;
  std::set<std::string> seen;
  for (const auto& s : base_) {
    if (s.value > eps) continue;
    Sample e = s;
    e.value = std::max(0.0, e.value);
    fill_grad(e);
    seen.insert(e.tag);
    (e.limit ? out.limits : out.entries).push_back(std::move(e));
  }
  if (family_.kind == FamilyKind::Parametric) {
    for (std::size_t i = 0; i < base_.size(); ++i) {
      if (base_[i].value > eps && i != argmin_) continue;
      Sample r = refine(i);
      if (r.value > eps || seen.count(r.tag)) continue;
      r.value = std::max(0.0, r.value);
      fill_grad(r);
      seen.insert(r.tag);
      out.entries.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<Sample> PointEvaluation::all_members() {
  std::vector<Sample> out;
  for (const auto& s : base_) {
    Sample e = s;
    fill_grad(e);
    out.push_back(std::move(e));
  }
  return out;
}

FeasibilityReport feasibility(const Problem& prob, const Vector& x, const Options& opts) {
  if (x.size() != prob.p) throw std::invalid_argument("candidate has wrong dimension");
  FeasibilityReport r;
  for (std::size_t i = 0; i < prob.equality.size(); ++i) {
    const double v = tagged("h" + std::to_string(i), [&] { return prob.equality[i].eval(x); });
    r.equality_residual = std::max(r.equality_residual, std::abs(v));
  }
  if (r.equality_residual > opts.tol_feas) r.violated.push_back("equality");
  r.infimum = kInf;
  if (auto fam = prob.effective_family()) {
    r.has_family = true;
    r.countable_truncated = fam->has_countable_members();
    PointEvaluation pe(*fam, x, opts);
    r.infimum = pe.infimum();
    r.argmin_tag = pe.argmin_tag();
    for (auto& t : pe.violated()) r.violated.push_back(std::move(t));
  }
  r.feasible = r.violated.empty();
  r.boundary = r.has_family && std::abs(r.infimum) <= opts.tol_feas;
  r.interior = r.infimum > opts.tol_feas;
  return r;
}

ActiveSet active_set(const Problem& prob, const Vector& x, double eps, const Options& opts) {
  auto fam = prob.effective_family();
  if (!fam) throw std::invalid_argument("problem has no inequality constraints");
  PointEvaluation pe(*fam, x, opts);
  return pe.active_set(eps);
}

}  // namespace sipcert::model
