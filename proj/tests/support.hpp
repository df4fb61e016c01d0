#pragma once

#include "sipcert/model.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace testing_support {

using sipcert::Vector;
namespace model = sipcert::model;
namespace expr = sipcert::expr;

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<int>(v.size()));
  int i = 0;
  for (double d : v) out(i++) = d;
  return out;
}

inline std::vector<expr::ExprFn> exprs(std::initializer_list<const char*> src, int arity) {
  std::vector<expr::ExprFn> out;
  for (const char* s : src) out.push_back(expr::parse(s, arity, 0, {.allow_sequence_index = true}));
  return out;
}

inline model::Problem finite_problem(int p, const char* objective, std::initializer_list<const char*> members) {
  model::Problem prob;
  prob.p = p;
  prob.objective = expr::parse(objective, p, 0);
  prob.inequality = model::ConstraintFamily::finite(p, exprs(members, p));
  return prob;
}

// f = -x1^2 - x2 with x1 >= 0 and x2 + 1/k >= 0 for k = 1..10.
inline model::Problem countable_example() { return finite_problem(2, "-x1^2 - x2", {"x1", "x2 + 1/k"}); }

// h(x, t) = 1 - t x1 - (1 - t) x2 >= 0 for t in [0, 1], f = x1 + x2.
inline model::Problem linear_sip(int grid = 1025) {
  model::Problem prob;
  prob.p = 2;
  prob.objective = expr::parse("x1 + x2", 2, 0);
  prob.inequality = model::ConstraintFamily::parametric(expr::parse("1 - t1*x1 - (1-t1)*x2", 2, 1),
                                                        model::IndexSet::box(vec({0}), vec({1}), grid));
  return prob;
}

}  // namespace testing_support
