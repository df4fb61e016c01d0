#pragma once

#include <Eigen/Core>

#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sipcert {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

namespace expr {

enum class Op {
  Const,
  VarX,      // x_{index+1}
  VarT,      // t_{index+1}
  SeqIndex,  // k, the index of a countable member (stored in t[0])
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Sin,
  Cos,
  Exp,
  Log,
  Sqrt,
  Abs,
  Min,
  Max,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::Const;
  double value = 0.0;
  int index = 0;
  NodePtr lhs;
  NodePtr rhs;
};

bool equal(const Node& a, const Node& b);

/// Raised on malformed input. `offset` is the byte position in the source
/// where parsing stopped; `expected` lists what would have been accepted.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset, std::set<std::string> expected);
  std::size_t offset() const { return offset_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::set<std::string> expected_;
};

/// Domain violation during evaluation (log of nonpositive, division by zero,
/// any non-finite intermediate result).
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// abs/min/max evaluated where the one-sided derivatives disagree.
class KinkError : public EvalError {
 public:
  using EvalError::EvalError;
};

/// First-order dual number: value plus partials with respect to x.
struct Dual {
  double value = 0.0;
  Vector partials;
};

struct ParseOptions {
  /// Accept the identifier `k` as the index of a countable member.
  bool allow_sequence_index = false;
};

inline constexpr double kDefaultKinkTolerance = 1e-12;

/// Immutable parsed scalar expression over x1..xp and t1..tm.
class ExprFn {
 public:
  ExprFn() = default;
  ExprFn(NodePtr root, int arity_x, int arity_t);

  int arity_x() const { return arity_x_; }
  int arity_t() const { return arity_t_; }
  const Node& root() const { return *root_; }
  NodePtr root_ptr() const { return root_; }
  bool valid() const { return root_ != nullptr; }
  bool uses_sequence_index() const;

  double eval(const Vector& x, const Vector& t = Vector()) const;
  Vector grad(const Vector& x, const Vector& t = Vector(),
              double tol_kink = kDefaultKinkTolerance) const;
  Dual eval_dual(const Vector& x, const Vector& t = Vector(),
                 double tol_kink = kDefaultKinkTolerance) const;

  /// Fully parenthesised source text; parse(to_string()) rebuilds the same tree.
  std::string to_string() const;

  friend bool operator==(const ExprFn& a, const ExprFn& b);

 private:
  void check_dims(const Vector& x, const Vector& t) const;

  NodePtr root_;
  int arity_x_ = 0;
  int arity_t_ = 0;
};

ExprFn parse(std::string_view src, int arity_x, int arity_t, ParseOptions options = {});

// Tree builders, used for composing and scaling expressions.
NodePtr constant(double v);
NodePtr var_x(int index);
NodePtr unary(Op op, NodePtr a);
NodePtr binary(Op op, NodePtr a, NodePtr b);

/// Replace every x_i in `f` by `replacements[i]`; the result has
/// `new_arity_x` x-variables and keeps the t-variables of `f`.
ExprFn substitute_x(const ExprFn& f, std::span<const NodePtr> replacements, int new_arity_x);

/// c * f as a new expression.
ExprFn scaled(const ExprFn& f, double c);

}  // namespace expr
}  // namespace sipcert
