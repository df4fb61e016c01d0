#include "sipcert/expr.hpp"

#include <cmath>

namespace sipcert::expr {

namespace {

double finite_or_throw(double v, const char* what) {
  if (!std::isfinite(v)) throw EvalError(std::string("non-finite result in ") + what);
  return v;
}

double eval_value(const Node& n, const Vector& x, const Vector& t) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::VarX: return x(n.index);
    case Op::VarT: return t(n.index);
    case Op::SeqIndex: return t(0);
    default: break;
  }
  const double a = eval_value(*n.lhs, x, t);
  switch (n.op) {
    case Op::Neg: return -a;
    case Op::Sin: return finite_or_throw(std::sin(a), "sin");
    case Op::Cos: return finite_or_throw(std::cos(a), "cos");
    case Op::Exp: return finite_or_throw(std::exp(a), "exp");
    case Op::Log:
      if (!(a > 0)) throw EvalError("log of nonpositive value");
      return std::log(a);
    case Op::Sqrt:
      if (a < 0) throw EvalError("sqrt of negative value");
      return std::sqrt(a);
    case Op::Abs: return std::abs(a);
    default: break;
  }
  const double b = eval_value(*n.rhs, x, t);
  switch (n.op) {
    case Op::Add: return finite_or_throw(a + b, "addition");
    case Op::Sub: return finite_or_throw(a - b, "subtraction");
    case Op::Mul: return finite_or_throw(a * b, "multiplication");
    case Op::Div:
      if (b == 0) throw EvalError("division by zero");
      return finite_or_throw(a / b, "division");
    case Op::Pow: return finite_or_throw(std::pow(a, b), "pow");
    case Op::Min: return std::min(a, b);
    case Op::Max: return std::max(a, b);
    default: break;
  }
  throw EvalError("unknown operator");
}

class DualEvaluator {
 public:
  DualEvaluator(const Vector& x, const Vector& t, double tol_kink)
      : x_(x), t_(t), tol_kink_(tol_kink) {}

  Dual eval(const Node& n) const {
    Dual r = eval_raw(n);
    // Leaves may hold k = infinity; operator results must be finite.
    if (n.lhs && (!std::isfinite(r.value) || !r.partials.allFinite()))
      throw EvalError("non-finite value or derivative");
    return r;
  }

 private:
  Dual lift(double v) const { return {v, Vector::Zero(x_.size())}; }

  // c * d, treating a zero derivative as exact so an infinite constant
  // subtree (k -> infinity) does not produce inf * 0.
  Vector weighted(double c, const Vector& d) const {
    if (d.isZero(0)) return Vector::Zero(x_.size());
    return c * d;
  }

  Dual eval_raw(const Node& n) const {
    switch (n.op) {
      case Op::Const: return lift(n.value);
      case Op::VarX: {
        Dual d = lift(x_(n.index));
        d.partials(n.index) = 1.0;
        return d;
      }
      case Op::VarT: return lift(t_(n.index));
      case Op::SeqIndex: return lift(t_(0));
      default: break;
    }
    Dual a = eval(*n.lhs);
    switch (n.op) {
      case Op::Neg: return {-a.value, -a.partials};
      case Op::Sin: return {std::sin(a.value), std::cos(a.value) * a.partials};
      case Op::Cos: return {std::cos(a.value), -std::sin(a.value) * a.partials};
      case Op::Exp: {
        const double e = std::exp(a.value);
        return {e, e * a.partials};
      }
      case Op::Log:
        if (!(a.value > 0)) throw EvalError("log of nonpositive value");
        return {std::log(a.value), a.partials / a.value};
      case Op::Sqrt: {
        if (a.value < 0) throw EvalError("sqrt of negative value");
        const double s = std::sqrt(a.value);
        if (s == 0) {
          if (a.partials.isZero(0)) return lift(0.0);
          throw EvalError("sqrt is not differentiable at 0");
        }
        return {s, a.partials / (2 * s)};
      }
      case Op::Abs:
        if (std::abs(a.value) <= tol_kink_) {
          if (a.partials.isZero(0)) return {std::abs(a.value), a.partials};
          throw KinkError("abs evaluated at its kink");
        }
        return {std::abs(a.value), (a.value > 0 ? 1.0 : -1.0) * a.partials};
      default: break;
    }
    Dual b = eval(*n.rhs);
    switch (n.op) {
      case Op::Add: return {a.value + b.value, a.partials + b.partials};
      case Op::Sub: return {a.value - b.value, a.partials - b.partials};
      case Op::Mul: return {a.value * b.value, weighted(b.value, a.partials) + weighted(a.value, b.partials)};
      case Op::Div:
        if (b.value == 0) throw EvalError("division by zero");
        return {a.value / b.value,
                weighted(1.0 / b.value, a.partials) - weighted(a.value / (b.value * b.value), b.partials)};
      case Op::Pow: return pow(a, b);
      case Op::Min:
      case Op::Max: {
        if (std::abs(a.value - b.value) <= tol_kink_) {
          if ((a.partials - b.partials).lpNorm<Eigen::Infinity>() <= tol_kink_) return a;
          throw KinkError(n.op == Op::Min ? "min evaluated at a tie" : "max evaluated at a tie");
        }
        const bool take_a = n.op == Op::Min ? a.value < b.value : a.value > b.value;
        return take_a ? a : b;
      }
      default: break;
    }
    throw EvalError("unknown operator");
  }

  Dual pow(const Dual& a, const Dual& b) const {
    const double v = std::pow(a.value, b.value);
    if (!std::isfinite(v)) throw EvalError("pow domain error");
    Vector d = Vector::Zero(x_.size());
    if (!a.partials.isZero(0)) d += b.value * std::pow(a.value, b.value - 1) * a.partials;
    if (!b.partials.isZero(0)) {
      if (!(a.value > 0)) throw EvalError("pow with variable exponent needs a positive base");
      d += v * std::log(a.value) * b.partials;
    }
    return {v, d};
  }

  const Vector& x_;
  const Vector& t_;
  double tol_kink_;
};

}  // namespace

void ExprFn::check_dims(const Vector& x, const Vector& t) const {
  if (!root_) throw std::logic_error("evaluating an empty expression");
  if (x.size() != arity_x_ || t.size() != arity_t_)
    throw std::invalid_argument("argument dimension does not match expression arity");
}

double ExprFn::eval(const Vector& x, const Vector& t) const {
  check_dims(x, t);
  return finite_or_throw(eval_value(*root_, x, t), "expression");
}

Dual ExprFn::eval_dual(const Vector& x, const Vector& t, double tol_kink) const {
  check_dims(x, t);
  return DualEvaluator(x, t, tol_kink).eval(*root_);
}

Vector ExprFn::grad(const Vector& x, const Vector& t, double tol_kink) const {
  return eval_dual(x, t, tol_kink).partials;
}

}  // namespace sipcert::expr
