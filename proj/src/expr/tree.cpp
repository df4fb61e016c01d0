#include "sipcert/expr.hpp"

#include <cstdio>
#include <functional>

namespace sipcert::expr {

bool equal(const Node& a, const Node& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::Const:
      return a.value == b.value;
    case Op::VarX:
    case Op::VarT:
      return a.index == b.index;
    case Op::SeqIndex:
      return true;
    default:
      break;
  }
  if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
  if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
  if (a.lhs && !equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !equal(*a.rhs, *b.rhs)) return false;
  return true;
}

NodePtr constant(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = v;
  return n;
}

NodePtr var_x(int index) {
  auto n = std::make_shared<Node>();
  n->op = Op::VarX;
  n->index = index;
  return n;
}

NodePtr unary(Op op, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  return n;
}

NodePtr binary(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

namespace {

void visit(const Node& n, const std::function<void(const Node&)>& fn) {
  fn(n);
  if (n.lhs) visit(*n.lhs, fn);
  if (n.rhs) visit(*n.rhs, fn);
}

const char* function_name(Op op) {
  switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    case Op::Abs: return "abs";
    case Op::Min: return "min";
    case Op::Max: return "max";
    default: return nullptr;
  }
}

const char* infix_symbol(Op op) {
  switch (op) {
    case Op::Add: return " + ";
    case Op::Sub: return " - ";
    case Op::Mul: return " * ";
    case Op::Div: return " / ";
    case Op::Pow: return " ^ ";
    default: return nullptr;
  }
}

void print(const Node& n, std::string& out) {
  switch (n.op) {
    case Op::Const: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      if (n.value < 0) {
        out += "(";
        out += buf;
        out += ")";
      } else {
        out += buf;
      }
      return;
    }
    case Op::VarX:
      out += "x" + std::to_string(n.index + 1);
      return;
    case Op::VarT:
      out += "t" + std::to_string(n.index + 1);
      return;
    case Op::SeqIndex:
      out += "k";
      return;
    case Op::Neg:
      out += "(-";
      print(*n.lhs, out);
      out += ")";
      return;
    default:
      break;
  }
  if (const char* sym = infix_symbol(n.op)) {
    out += "(";
    print(*n.lhs, out);
    out += sym;
    print(*n.rhs, out);
    out += ")";
    return;
  }
  out += function_name(n.op);
  out += "(";
  print(*n.lhs, out);
  if (n.rhs) {
    out += ", ";
    print(*n.rhs, out);
  }
  out += ")";
}

NodePtr substitute(const NodePtr& n, std::span<const NodePtr> replacements) {
  if (n->op == Op::VarX) return replacements[static_cast<std::size_t>(n->index)];
  if (!n->lhs) return n;
  NodePtr lhs = substitute(n->lhs, replacements);
  NodePtr rhs = n->rhs ? substitute(n->rhs, replacements) : nullptr;
  auto copy = std::make_shared<Node>(*n);
  copy->lhs = std::move(lhs);
  copy->rhs = std::move(rhs);
  return copy;
}

}  // namespace

ExprFn::ExprFn(NodePtr root, int arity_x, int arity_t)
    : root_(std::move(root)), arity_x_(arity_x), arity_t_(arity_t) {
  if (!root_) throw std::invalid_argument("null expression tree");
  visit(*root_, [&](const Node& n) {
    if (n.op == Op::VarX && (n.index < 0 || n.index >= arity_x_))
      throw std::invalid_argument("x-variable index exceeds arity");
    if (n.op == Op::VarT && (n.index < 0 || n.index >= arity_t_))
      throw std::invalid_argument("t-variable index exceeds arity");
    if (n.op == Op::SeqIndex && arity_t_ < 1)
      throw std::invalid_argument("sequence index needs one t-slot");
  });
}

bool ExprFn::uses_sequence_index() const {
  if (!root_) return false;
  bool found = false;
  visit(*root_, [&](const Node& n) { found = found || n.op == Op::SeqIndex; });
  return found;
}

std::string ExprFn::to_string() const {
  std::string out;
  if (root_) print(*root_, out);
  return out;
}

bool operator==(const ExprFn& a, const ExprFn& b) {
  if (a.arity_x_ != b.arity_x_ || a.arity_t_ != b.arity_t_) return false;
  if (!a.root_ || !b.root_) return a.root_ == b.root_;
  return equal(*a.root_, *b.root_);
}

ExprFn substitute_x(const ExprFn& f, std::span<const NodePtr> replacements, int new_arity_x) {
  if (static_cast<int>(replacements.size()) != f.arity_x())
    throw std::invalid_argument("substitute_x: need one replacement per x-variable");
  return ExprFn(substitute(f.root_ptr(), replacements), new_arity_x, f.arity_t());
}

ExprFn scaled(const ExprFn& f, double c) {
  return ExprFn(binary(Op::Mul, constant(c), f.root_ptr()), f.arity_x(), f.arity_t());
}

}  // namespace sipcert::expr
