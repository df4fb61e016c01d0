#include "sipcert/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

namespace sipcert::expr {

ParseError::ParseError(const std::string& what, std::size_t offset, std::set<std::string> expected)
    : std::runtime_error(what + " at offset " + std::to_string(offset)),
      offset_(offset),
      expected_(std::move(expected)) {}

namespace {

const std::set<std::string> kOperandStart = {"number", "variable", "function", "(", "-", "+"};

struct FunctionSpec {
  std::string_view name;
  Op op;
  int args;
};

constexpr FunctionSpec kFunctions[] = {
    {"sin", Op::Sin, 1},   {"cos", Op::Cos, 1},   {"exp", Op::Exp, 1}, {"log", Op::Log, 1},
    {"sqrt", Op::Sqrt, 1}, {"abs", Op::Abs, 1},   {"min", Op::Min, 2}, {"max", Op::Max, 2},
    {"pow", Op::Pow, 2},
};

// Recursive descent over
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?
//   primary := number | variable | 'pi' | function '(' expr (',' expr)? ')' | '(' expr ')'
class Parser {
 public:
  Parser(std::string_view src, int arity_x, int arity_t, ParseOptions options)
      : src_(src), arity_x_(arity_x), arity_t_(arity_t), options_(options) {}

  NodePtr parse_all() {
    skip_space();
    if (pos_ >= src_.size()) fail("empty expression", kOperandStart);
    NodePtr root = parse_expr();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected trailing input", {"+", "-", "*", "/", "^", "end of input"});
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::set<std::string> expected) const {
    throw ParseError(what, pos_, std::move(expected));
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'", {std::string(1, c)});
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (true) {
      if (accept('+')) {
        lhs = binary(Op::Add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = binary(Op::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    while (true) {
      if (accept('*')) {
        lhs = binary(Op::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = binary(Op::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return unary(Op::Neg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return binary(Op::Pow, base, parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input", kOperandStart);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail(std::string("unexpected character '") + c + "'", kOperandStart);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    if (text == ".") {
      pos_ = start;
      fail("malformed number", {"number"});
    }
    const double v = std::strtod(text.c_str(), nullptr);
    if (!std::isfinite(v)) {
      pos_ = start;
      fail("number out of range", {"number"});
    }
    return constant(v);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);

    for (const auto& fn : kFunctions) {
      if (name != fn.name) continue;
      expect('(');
      NodePtr a = parse_expr();
      if (fn.args == 2) {
        expect(',');
        NodePtr b = parse_expr();
        expect(')');
        return binary(fn.op, a, b);
      }
      expect(')');
      return unary(fn.op, a);
    }
    if (name == "pi") return constant(std::numbers::pi);
    if (name == "k" && options_.allow_sequence_index) {
      auto n = std::make_shared<Node>();
      n->op = Op::SeqIndex;
      return n;
    }
    if (name.size() >= 2 && (name[0] == 'x' || name[0] == 't')) {
      bool digits = true;
      for (char d : name.substr(1)) digits = digits && std::isdigit(static_cast<unsigned char>(d));
      if (digits && name[1] != '0') {
        const int idx = std::stoi(std::string(name.substr(1))) - 1;
        const int arity = name[0] == 'x' ? arity_x_ : arity_t_;
        if (idx >= arity) {
          pos_ = start;
          fail("variable '" + std::string(name) + "' exceeds declared arity " + std::to_string(arity),
               {"variable"});
        }
        if (name[0] == 'x') return var_x(idx);
        auto n = std::make_shared<Node>();
        n->op = Op::VarT;
        n->index = idx;
        return n;
      }
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(name) + "'", {"number", "variable", "function", "("});
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int arity_x_;
  int arity_t_;
  ParseOptions options_;
};

}  // namespace

ExprFn parse(std::string_view src, int arity_x, int arity_t, ParseOptions options) {
  if (arity_x < 0 || arity_t < 0) throw std::invalid_argument("negative arity");
  if (options.allow_sequence_index && arity_t != 0)
    throw std::invalid_argument("countable members cannot also use t-variables");
  Parser parser(src, arity_x, arity_t, options);
  NodePtr root = parser.parse_all();
  // The sequence index occupies the first t-slot.
  ExprFn probe(root, arity_x, 1);
  return ExprFn(root, arity_x, probe.uses_sequence_index() ? 1 : arity_t);
}

}  // namespace sipcert::expr
