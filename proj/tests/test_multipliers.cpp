#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sipcert/multipliers.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <set>

using namespace sipcert;
using namespace sipcert::multipliers;
using namespace testing_support;

namespace {

bool contains_point(const geometry::Hull& h, const Vector& v, double tol) {
  for (const auto& g : h.generators)
    if ((g - v).lpNorm<Eigen::Infinity>() <= tol) return true;
  return false;
}

// max over hull generators of the distance to the segment [(-1,0),(0,-1)]
double distance_to_segment(const geometry::Hull& h) {
  geometry::Hull seg;
  seg.add(vec({-1, 0}), "a");
  seg.add(vec({0, -1}), "b");
  double worst = 0.0;
  for (const auto& g : h.generators) worst = std::max(worst, geometry::hull_member(g, seg, 1e-12).distance);
  return worst;
}

}  // namespace

TEST_CASE("countable example: final generators are (1,0) and (0,1)") {
  auto prob = countable_example();
  model::Options opts;
  auto tc = tc_approx(prob, vec({0, 0}), opts);
  CHECK_FALSE(tc.interior);
  CHECK(tc.final.size() == 2);
  CHECK(contains_point(tc.final, vec({1, 0}), 1e-9));
  CHECK(contains_point(tc.final, vec({0, 1}), 1e-9));
  for (std::size_t i = 1; i < tc.ladder.size(); ++i) CHECK(tc.ladder[i].eps < tc.ladder[i - 1].eps);
}

TEST_CASE("countable example: KKT with witness (0,1)") {
  auto prob = countable_example();
  model::Options opts;
  const auto start = std::chrono::steady_clock::now();
  auto c = certify_fj(prob, vec({0, 0}), opts);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(c.kind == Kind::KKT);
  CHECK(c.zero_not_in_tc);
  CHECK(c.lambda == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(c.beta == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(c.witness(0)) <= 1e-9);
  CHECK(std::abs(c.witness(1) - 1) <= 1e-9);
  CHECK(c.residual <= 1e-9);
  CHECK(c.kkt_beta == doctest::Approx(1.0));
  CHECK(secs < 0.1);
}

TEST_CASE("countable example: strictly active hull gives no certificate") {
  auto prob = countable_example();
  model::Options opts;
  opts.strict_active_only = true;
  auto tc = tc_approx(prob, vec({0, 0}), opts);
  REQUIRE(tc.final.size() == 1);
  CHECK(tc.final.generators[0](0) == 1.0);
  auto c = certify_fj(prob, vec({0, 0}), opts);
  CHECK(c.kind == Kind::NoCertificate);
}

TEST_CASE("interior point: empty multiplier set") {
  auto prob = countable_example();
  model::Options opts;
  auto tc = tc_approx(prob, vec({1, 1}), opts);
  CHECK(tc.interior);
  CHECK(tc.converged);
  CHECK(tc.final.empty());
  auto c = certify_fj(prob, vec({1, 1}), opts);
  CHECK(c.kind == Kind::NoCertificate);

  auto flat = finite_problem(2, "-(x1-1)^2 - (x2-1)^2", {"x1", "x2"});
  auto u = certify_fj(flat, vec({1, 1}), opts);
  CHECK(u.kind == Kind::Unconstrained);
}

TEST_CASE("finite family shortcut") {
  auto prob = finite_problem(2, "-x1 - x2", {"x1", "x2"});
  model::Options opts;
  auto tc = tc_approx(prob, vec({0, 0}), opts);
  CHECK(tc.shortcut);
  CHECK(tc.converged);
  CHECK(tc.final.size() == 2);
  auto c = certify_fj(prob, vec({0, 0}), opts);
  CHECK(c.kind == Kind::KKT);
  CHECK(c.lambda == doctest::Approx(1.0 / 3));
  CHECK(c.residual <= 1e-12);
}

TEST_CASE("vanishing gradient on the boundary") {
  auto prob = finite_problem(1, "-x1^2", {"x1"});
  model::Options opts;
  auto c = certify_fj(prob, vec({0}), opts);
  CHECK(c.kind == Kind::KKT);
  CHECK(c.lambda == 1.0);
  CHECK(c.beta == 0.0);
}

TEST_CASE("infeasible candidate raises") {
  auto prob = countable_example();
  model::Options opts;
  CHECK_THROWS_AS(certify_fj(prob, vec({-1, 0}), opts), model::InfeasibleError);
  CHECK_THROWS_AS(tc_approx(prob, vec({-1, 0}), opts), model::InfeasibleError);
  CHECK_THROWS_AS(sip_multipliers(prob, vec({-1, 0}), opts), model::InfeasibleError);
}

TEST_CASE("linear SIP: final hull is the segment and multipliers are 1/3, 2/3") {
  auto prob = linear_sip(1025);
  model::Options opts;
  const auto start = std::chrono::steady_clock::now();
  auto tc = tc_approx(prob, vec({1, 1}), opts);
  CHECK(distance_to_segment(tc.final) <= 1e-6);
  CHECK(contains_point(tc.final, vec({-1, 0}), 1e-9));
  CHECK(contains_point(tc.final, vec({0, -1}), 1e-9));

  auto m = sip_multipliers(prob, vec({1, 1}), opts);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  REQUIRE(m.found);
  REQUIRE(m.weights.size() == 1);
  CHECK(m.weights.size() <= 2);
  CHECK(m.lambda0 == doctest::Approx(1.0 / 3).epsilon(1e-6));
  CHECK(m.weights[0] == doctest::Approx(2.0 / 3).epsilon(1e-6));
  CHECK(m.params[0](0) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(m.residual <= 1e-9);
  CHECK(m.lambda0_nonzero);
  CHECK(secs < 1.0);
}

TEST_CASE("countable example recast as a semi-infinite certificate") {
  auto prob = countable_example();
  model::Options opts;
  auto m = sip_multipliers(prob, vec({0, 0}), opts);
  REQUIRE(m.found);
  CHECK(m.lambda0 == doctest::Approx(0.5));
  REQUIRE(m.weights.size() == 1);
  CHECK(m.weights[0] == doctest::Approx(0.5));
  CHECK(m.gradients[0](1) == doctest::Approx(1.0));
}

TEST_CASE("trigonometric SIP matches the closed form") {
  // h(x,t) = 1 - cos(t) x1 - sin(t) x2 on [0, pi/2]; at x = (1,0) only t = 0 is active.
  model::Problem prob;
  prob.p = 2;
  prob.objective = expr::parse("x1", 2, 0);
  prob.inequality = model::ConstraintFamily::parametric(expr::parse("1 - cos(t1)*x1 - sin(t1)*x2", 2, 1),
                                                        model::IndexSet::box(vec({0}), vec({1.5707963267948966}), 513));
  model::Options opts;
  auto tc = tc_approx(prob, vec({1, 0}), opts);
  geometry::Hull expect;
  expect.add(vec({-1, 0}), "t0");
  for (const auto& g : tc.final.generators) CHECK(geometry::hull_member(g, expect, 1e-12).distance <= 1e-6);
  auto c = certify_fj(prob, vec({1, 0}), opts);
  CHECK(c.kind == Kind::KKT);
  CHECK(c.residual <= 1e-9);
}

TEST_CASE("ladder nesting on the fixtures") {
  model::Options opts;
  for (auto prob : {countable_example(), linear_sip(129)}) {
    const Vector x = prob.p == 2 && prob.inequality->kind == model::FamilyKind::Finite ? vec({0, 0}) : vec({1, 1});
    auto tc = tc_approx(prob, x, opts);
    for (std::size_t i = 1; i < tc.ladder.size(); ++i) {
      std::set<std::string> outer(tc.ladder[i - 1].hull.tags.begin(), tc.ladder[i - 1].hull.tags.end());
      for (const auto& t : tc.ladder[i].hull.tags) CHECK(outer.count(t) == 1);
      for (const auto& g : tc.ladder[i].hull.generators)
        CHECK(geometry::hull_member(g, tc.ladder[i - 1].hull, 1e-9).member);
    }
  }
}

TEST_CASE("objective scaling leaves the verdict and witness unchanged") {
  model::Options opts;
  for (const char* f : {"-x1^2 - x2", "x1 + x2"}) {
    const bool sip = std::string(f) == "x1 + x2";
    auto base = sip ? linear_sip(129) : countable_example();
    const Vector x = sip ? vec({1, 1}) : vec({0, 0});
    auto ref = certify_fj(base, x, opts);
    for (double c : {1e-3, 1.0, 1e3}) {
      auto prob = base;
      prob.objective = expr::scaled(base.objective, c);
      auto out = certify_fj(prob, x, opts);
      CHECK(out.kind == ref.kind);
      CHECK((out.witness - ref.witness).lpNorm<Eigen::Infinity>() <= 1e-8);
      CHECK(out.beta / out.lambda == doctest::Approx(c * ref.beta / ref.lambda).epsilon(1e-8));
    }
  }
}

TEST_CASE("certificate residual and support bounds") {
  auto prob = finite_problem(3, "-x1 - 2*x2 - 3*x3", {"x1", "x2", "x3", "x1 + x2 + x3", "2*x1 + x2"});
  model::Options opts;
  auto c = certify_fj(prob, vec({0, 0, 0}), opts);
  REQUIRE(is_certified(c));
  CHECK(c.coeffs.size() <= 4);
  CHECK(c.lambda + c.beta == doctest::Approx(1.0));
  double sum = 0.0;
  Vector r = c.lambda * c.objective_grad;
  for (const auto& w : c.coeffs) {
    sum += w.weight;
    r += c.beta * w.weight * w.generator;
  }
  CHECK(sum == doctest::Approx(1.0));
  CHECK(r.lpNorm<Eigen::Infinity>() <= opts.tol);
}
