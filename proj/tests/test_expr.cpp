#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sipcert/expr.hpp"

#include <cmath>
#include <limits>

using namespace sipcert;
using namespace sipcert::expr;

namespace {
Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<int>(v.size()));
  int i = 0;
  for (double d : v) out(i++) = d;
  return out;
}
}  // namespace

TEST_CASE("parse builds the expected tree for a sum") {
  ExprFn f = parse("x1 + x2", 2, 0);
  REQUIRE(f.root().op == Op::Add);
  CHECK(f.root().lhs->op == Op::VarX);
  CHECK(f.root().lhs->index == 0);
  CHECK(f.root().rhs->index == 1);
}

TEST_CASE("unknown identifier reports offset 0") {
  try {
    parse("y + 1/k", 2, 0);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 0);
    CHECK(e.expected().count("variable") == 1);
  }
}

TEST_CASE("parametric expression parses and evaluates") {
  ExprFn h = parse("1 - t1*x1 - (1-t1)*x2", 2, 1);
  CHECK(h.eval(vec({1, 1}), vec({0.3})) == doctest::Approx(0.0).epsilon(1e-15));
  Vector g = h.grad(vec({1, 1}), vec({0.3}));
  CHECK(g(0) == doctest::Approx(-0.3));
  CHECK(g(1) == doctest::Approx(-0.7));
}

TEST_CASE("countable-family members") {
  ExprFn f = parse("-x1^2 - x2", 2, 0);
  CHECK(f.eval(vec({0, 0})) == 0.0);
  Vector g = f.grad(vec({0, 0}));
  CHECK(g(0) == 0.0);
  CHECK(g(1) == -1.0);

  ExprFn phi0 = parse("x1", 2, 0);
  CHECK(phi0.eval(vec({0, 0})) == 0.0);
  CHECK(phi0.grad(vec({3, -2}))(0) == 1.0);
  CHECK(phi0.grad(vec({3, -2}))(1) == 0.0);

  ExprFn phik = parse("x2 + 1/k", 2, 0, {.allow_sequence_index = true});
  CHECK(phik.arity_t() == 1);
  CHECK(phik.eval(vec({0, 0}), vec({3})) == doctest::Approx(1.0 / 3.0));
  CHECK(phik.eval(vec({0, 0}), vec({std::numeric_limits<double>::infinity()})) == 0.0);
}

TEST_CASE("precedence and associativity") {
  CHECK(parse("2^3^2", 0, 0).eval(Vector()) == 512.0);
  CHECK(parse("-2^2", 0, 0).eval(Vector()) == -4.0);
  CHECK(parse("2*3+4", 0, 0).eval(Vector()) == 10.0);
  CHECK(parse("2*(3+4)", 0, 0).eval(Vector()) == 14.0);
  CHECK(parse("8/4/2", 0, 0).eval(Vector()) == 1.0);
  CHECK(parse("1-2-3", 0, 0).eval(Vector()) == -4.0);
  CHECK(parse("2^-1", 0, 0).eval(Vector()) == 0.5);
  CHECK(parse("pow(2, 10) + max(1, 3) - min(1, 3)", 0, 0).eval(Vector()) == 1026.0);
  CHECK(parse("1.5e2", 0, 0).eval(Vector()) == 150.0);
}

TEST_CASE("syntax errors carry offsets") {
  auto offset_of = [](const char* src) -> std::size_t {
    try {
      parse(src, 2, 0);
    } catch (const ParseError& e) {
      return e.offset();
    }
    return std::string::npos;
  };
  CHECK(offset_of("x1 +") == 4);
  CHECK(offset_of("(x1") == 3);
  CHECK(offset_of("x1 x2") == 3);
  CHECK(offset_of("x3") == 0);
  CHECK(offset_of("") == 0);
  CHECK(offset_of("sin x1") == 4);
  CHECK(offset_of("x1 + t1") == 5);
  CHECK(offset_of("k") == 0);
}

TEST_CASE("domain errors are raised, never NaN") {
  CHECK_THROWS_AS(parse("log(x1)", 1, 0).eval(vec({0})), EvalError);
  CHECK_THROWS_AS(parse("sqrt(x1)", 1, 0).eval(vec({-1})), EvalError);
  CHECK_THROWS_AS(parse("1/x1", 1, 0).eval(vec({0})), EvalError);
  CHECK_THROWS_AS(parse("exp(x1)", 1, 0).eval(vec({1000})), EvalError);
  CHECK_THROWS_AS(parse("x1^0.5", 1, 0).eval(vec({-1})), EvalError);
  CHECK_THROWS_AS(parse("x1", 1, 0).eval(vec({0, 1})), std::invalid_argument);
}

TEST_CASE("kinks raise KinkError") {
  CHECK_THROWS_AS(parse("abs(x1)", 1, 0).grad(vec({0})), KinkError);
  CHECK_THROWS_AS(parse("max(x1, x2)", 2, 0).grad(vec({1, 1})), KinkError);
  CHECK_THROWS_AS(parse("min(x1, 0)", 1, 0).grad(vec({0})), KinkError);
  CHECK(parse("abs(x1)", 1, 0).grad(vec({-2}))(0) == -1.0);
  CHECK(parse("max(x1, x2)", 2, 0).grad(vec({2, 1}))(0) == 1.0);
  // Identical branches are not a kink.
  CHECK(parse("max(x1, x1)", 1, 0).grad(vec({1}))(0) == 1.0);
}

TEST_CASE("gradients of all smooth primitives match central differences") {
  const char* sources[] = {
      "sin(x1)*cos(x2)", "exp(x1 - x2) / (1 + x1^2)", "log(2 + x1*x2)", "sqrt(3 + x1^2 + x2^2)",
      "pow(x1, 3) - x2^4", "(1 + x1^2)^x2", "-x1 / (2 + sin(x2))",
  };
  const Vector x = vec({0.4, -0.7});
  for (const char* src : sources) {
    ExprFn f = parse(src, 2, 0);
    Vector g = f.grad(x);
    for (int i = 0; i < 2; ++i) {
      Vector xp = x, xm = x;
      xp(i) += 1e-6;
      xm(i) -= 1e-6;
      const double fd = (f.eval(xp) - f.eval(xm)) / 2e-6;
      CHECK_MESSAGE(std::abs(fd - g(i)) <= 1e-6 * (1 + std::abs(g(i))), src);
    }
  }
}

TEST_CASE("print then parse reproduces the tree") {
  const char* sources[] = {"x1 + x2", "-x1^2 - x2", "1 - t1*x1 - (1-t1)*x2", "2^3^2", "-(-3)",
                           "max(x1, -2.5e-3) * sin(pi*x2)", "1/3 + x1", "abs(x1) - (x2 - 1)"};
  for (const char* src : sources) {
    ExprFn f = parse(src, 2, 1);
    ExprFn g = parse(f.to_string(), 2, 1);
    CHECK_MESSAGE(f == g, src);
  }
  ExprFn k = parse("x2 + 1/k", 2, 0, {.allow_sequence_index = true});
  CHECK(parse(k.to_string(), 2, 0, {.allow_sequence_index = true}) == k);
}

TEST_CASE("substitution and scaling") {
  ExprFn phi = parse("x1 - 2*x2", 2, 0);
  std::vector<NodePtr> g = {parse("x1 + x2", 2, 0).root_ptr(), parse("x1 - x2", 2, 0).root_ptr()};
  ExprFn comp = substitute_x(phi, g, 2);
  CHECK(comp.eval(vec({1, 2})) == doctest::Approx(3 - 2 * (-1)));
  Vector grad = comp.grad(vec({0, 0}));
  CHECK(grad(0) == doctest::Approx(-1));
  CHECK(grad(1) == doctest::Approx(3));
  CHECK(scaled(phi, 10).eval(vec({1, 0})) == 10.0);
}
