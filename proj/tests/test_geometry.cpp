#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sipcert/geometry.hpp"

#include <cmath>
#include <random>

using namespace sipcert;
using namespace sipcert::geometry;

namespace {
Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<int>(v.size()));
  int i = 0;
  for (double d : v) out(i++) = d;
  return out;
}
Hull hull_of(std::initializer_list<Vector> gens) { return Hull(std::vector<Vector>(gens)); }
}  // namespace

TEST_CASE("simplex: small textbook LP") {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18
  LinearProgram lp(2);
  lp.objective = vec({-3, -5});
  lp.add_row(vec({1, 0}), Sense::LessEqual, 4);
  lp.add_row(vec({0, 2}), Sense::LessEqual, 12);
  lp.add_row(vec({3, 2}), Sense::LessEqual, 18);
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-36));
  CHECK(sol.point(0) == doctest::Approx(2));
  CHECK(sol.point(1) == doctest::Approx(6));
}

TEST_CASE("simplex: infeasible, unbounded, equality, free variables") {
  LinearProgram bad(1);
  bad.add_row(vec({1}), Sense::LessEqual, -1);
  CHECK(solve_lp(bad).status == LpStatus::Infeasible);

  LinearProgram open(1);
  open.objective = vec({-1});
  CHECK(solve_lp(open).status == LpStatus::Unbounded);

  LinearProgram eq(2);
  eq.objective = vec({1, 1});
  eq.free_vars = {true, true};
  eq.add_row(vec({1, -1}), Sense::Equal, -3);
  eq.add_row(vec({1, 0}), Sense::GreaterEqual, -5);
  eq.add_row(vec({0, 1}), Sense::GreaterEqual, -5);
  auto s = solve_lp(eq);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.point(0) == doctest::Approx(-5));
  CHECK(s.point(1) == doctest::Approx(-2));

  // Redundant equality rows survive phase one.
  LinearProgram red(2);
  red.objective = vec({1, 2});
  red.add_row(vec({1, 1}), Sense::Equal, 1);
  red.add_row(vec({2, 2}), Sense::Equal, 2);
  auto r = solve_lp(red);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.point(0) == doctest::Approx(1));
}

TEST_CASE("simplex: degenerate cycling example terminates under Bland") {
  // Beale's example cycles with the textbook largest-coefficient rule.
  LinearProgram lp(4);
  lp.objective = vec({-0.75, 150, -0.02, 6});
  lp.add_row(vec({0.25, -60, -0.04, 9}), Sense::LessEqual, 0);
  lp.add_row(vec({0.5, -90, -0.02, 3}), Sense::LessEqual, 0);
  lp.add_row(vec({0, 0, 1, 0}), Sense::LessEqual, 1);
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-0.05));
}

TEST_CASE("hull_member examples") {
  auto a = hull_member(vec({0, 0}), hull_of({vec({1, 0}), vec({0, 1}), vec({-1, -1})}), 1e-8);
  CHECK(a.member);
  for (int i = 0; i < 3; ++i) CHECK(a.coeffs(i) == doctest::Approx(1.0 / 3));

  auto b = hull_member(vec({0, 0}), hull_of({vec({0, -1}), vec({1, 0})}), 1e-8);
  CHECK_FALSE(b.member);
  CHECK(b.distance == doctest::Approx(0.5));

  auto c = hull_member(vec({0.25, 0.75}), hull_of({vec({1, 0}), vec({0, 1})}), 1e-8);
  CHECK(c.member);
  CHECK(c.coeffs(0) == doctest::Approx(0.25));
  CHECK(c.coeffs(1) == doctest::Approx(0.75));

  auto single = hull_member(vec({1, 1}), hull_of({vec({1, 1})}), 1e-8);
  CHECK(single.member);
  CHECK_THROWS_AS(hull_member(vec({1, 1, 1}), hull_of({vec({1, 1})}), 1e-8), std::invalid_argument);
  CHECK_THROWS_AS(hull_member(vec({1}), Hull(), 1e-8), std::invalid_argument);
}

TEST_CASE("hull_member is scale invariant") {
  Hull h = hull_of({vec({1, 0}), vec({0, 1}), vec({-1, -1})});
  const Vector t = vec({0.2, -0.1});
  auto base = hull_member(t, h, 1e-8);
  for (double c : {1e-3, 1e3}) {
    Hull hc;
    for (const auto& g : h.generators) hc.add(c * g);
    auto scaled = hull_member(c * t, hc, 1e-8 * c);
    CHECK(scaled.member == base.member);
    CHECK((scaled.coeffs - base.coeffs).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("segment_hull_member examples") {
  auto a = segment_hull_member(vec({0, 0}), vec({0, -1}), hull_of({vec({1, 0}), vec({0, 1})}), 1e-8);
  CHECK(a.member);
  CHECK(a.lambda == doctest::Approx(0.5));
  CHECK(a.coeffs(0) == doctest::Approx(0.0));
  CHECK(a.coeffs(1) == doctest::Approx(0.5));

  auto b = segment_hull_member(vec({3, 4}), vec({3, 4}), hull_of({vec({1, 0}), vec({0, 1})}), 1e-8);
  CHECK(b.member);
  CHECK(b.lambda == doctest::Approx(1.0));

  auto c = segment_hull_member(vec({1, 1}), vec({0, 0}), hull_of({vec({1, 0})}), 1e-8);
  CHECK_FALSE(c.member);

  // w coinciding with a generator needs no special handling.
  auto d = segment_hull_member(vec({0.5, 0}), vec({1, 0}), hull_of({vec({1, 0}), vec({0, 0})}), 1e-8);
  CHECK(d.member);
}

TEST_CASE("caratheodory_reduce examples") {
  Hull h = hull_of({vec({1, 0}), vec({0, 1}), vec({-1, 0}), vec({0, -1})});
  auto r = caratheodory_reduce(vec({0, 0}), h, vec({0.25, 0.25, 0.25, 0.25}));
  CHECK(r.indices.size() <= 3);
  CHECK(r.residual <= 1e-12);
  CHECK(r.coeffs.sum() == doctest::Approx(1.0));

  Hull tri = hull_of({vec({1, 0}), vec({0, 1}), vec({0, 0})});
  auto same = caratheodory_reduce(vec({0.25, 0.25}), tri, vec({0.25, 0.25, 0.5}));
  CHECK(same.indices == std::vector<int>{0, 1, 2});
  CHECK(same.coeffs(2) == doctest::Approx(0.5));

  Hull mid = hull_of({vec({1, 0}), vec({0, 1}), vec({0.5, 0.5})});
  auto one = caratheodory_reduce(vec({0.5, 0.5}), mid, vec({0.25, 0.25, 0.5}));
  REQUIRE(one.indices.size() == 1);
  CHECK(one.indices[0] == 2);
  CHECK(one.coeffs(0) == 1.0);
  CHECK(one.residual == 0.0);

  CHECK_THROWS_AS(caratheodory_reduce(vec({0.9, 0.9}), mid, vec({0.25, 0.25, 0.5})), std::invalid_argument);
  CHECK_THROWS_AS(caratheodory_reduce(vec({0.5, 0.5}), mid, vec({0.5, 0.5, 0.5})), std::invalid_argument);
}

TEST_CASE("caratheodory_reduce on random instances") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 2 + trial % 3;
    const int n = p + 2 + trial % 7;
    Hull h;
    Vector a(n);
    for (int i = 0; i < n; ++i) {
      Vector g(p);
      for (int j = 0; j < p; ++j) g(j) = u(rng);
      h.add(g);
      a(i) = u(rng) + 1.5;
    }
    a /= a.sum();
    Vector target = Vector::Zero(p);
    for (int i = 0; i < n; ++i) target += a(i) * h.generators[i];
    auto r = caratheodory_reduce(target, h, a);
    CHECK(static_cast<int>(r.indices.size()) <= p + 1);
    CHECK(r.residual <= 1e-9);
    CHECK(r.coeffs.minCoeff() >= 0);
    CHECK(std::abs(r.coeffs.sum() - 1) <= 1e-9);
  }
}

TEST_CASE("cone calculus examples") {
  Polyhedron a(2, {vec({1, 0}), vec({1, 1})}, {0, 1});
  Polyhedron rec = recession_cone(a);
  CHECK(rec.offsets == std::vector<double>{0, 0});
  CHECK(rec.normals[1] == vec({1, 1}));
  CHECK(recession_cone(Polyhedron(3, {}, {})).rows() == 0);
  CHECK_THROWS_AS(Polyhedron(2, {vec({0, 0})}, {0}), std::invalid_argument);

  auto orth = cone_interior_nonempty(Polyhedron(2, {vec({1, 0}), vec({0, 1})}, {0, 0}));
  CHECK(orth.nonempty);
  CHECK(orth.witness(0) == doctest::Approx(std::sqrt(0.5)));
  CHECK(orth.witness(1) == doctest::Approx(std::sqrt(0.5)));

  auto slab = cone_interior_nonempty(Polyhedron(2, {vec({1, 0}), vec({-1, 0})}, {0, 0}));
  CHECK_FALSE(slab.nonempty);

  auto wedge = cone_interior_nonempty(Polyhedron(2, {vec({1, 1}), vec({1, -1})}, {0, 0}));
  CHECK(wedge.nonempty);
  CHECK(wedge.margin == doctest::Approx(std::sqrt(0.5)));
  CHECK(wedge.witness(0) == doctest::Approx(1.0));
  CHECK(wedge.witness(1) == doctest::Approx(0.0));

  CHECK_THROWS_AS(cone_interior_nonempty(a), std::invalid_argument);

  Polyhedron d1 = dual_cone(hull_of({vec({1, 0}), vec({0, 1})}));
  CHECK(d1.contains(vec({2, 3}), 0));
  CHECK_FALSE(d1.contains(vec({-1, 3}), 0));
  Polyhedron d2 = dual_cone(hull_of({vec({1, 0}), vec({-1, 0}), vec({0, 1}), vec({0, -1})}));
  CHECK(d2.contains(vec({0, 0}), 0));
  CHECK_FALSE(d2.contains(vec({1e-3, 0}), 0));
  Polyhedron d3 = dual_cone(hull_of({vec({1, 1})}));
  CHECK(d3.contains(vec({2, -1}), 0));
  CHECK_FALSE(d3.contains(vec({-2, 1.5}), 0));
}

TEST_CASE("bidual of the orthant recovers orthant membership") {
  Polyhedron d = dual_cone(hull_of({vec({1, 0}), vec({0, 1})}));
  Polyhedron dd = dual_cone(Hull(d.normals));
  for (double x = -1; x <= 1; x += 0.25)
    for (double y = -1; y <= 1; y += 0.25) CHECK(dd.contains(vec({x, y}), 0) == (x >= 0 && y >= 0));
}

TEST_CASE("barrier cone and linear minimisation") {
  Polyhedron orth(2, {vec({1, 0}), vec({0, 1})}, {0, 0});
  Hull bar = barrier_cone_generators(orth);
  CHECK(cone_distance(vec({-1, -2}), bar) <= 1e-12);
  CHECK(cone_distance(vec({1, 0}), bar) == doctest::Approx(1.0));

  auto m = minimize_over(Polyhedron(2, {vec({1, 1}), vec({1, 0})}, {1, 0}), vec({1, 1}));
  REQUIRE(m.status == LpStatus::Optimal);
  CHECK(m.value == doctest::Approx(1.0));
  auto u = minimize_over(orth, vec({-1, 0}));
  CHECK(u.status == LpStatus::Unbounded);
  REQUIRE(u.ray.size() == 2);
  CHECK(u.ray(0) > 0);
}

TEST_CASE("segment hull over nested generator families") {
  // K3 is the innermost hull; membership in all [w, Kn] matches [w, K3].
  Hull k1 = hull_of({vec({2, 0}), vec({0, 2}), vec({-1, -1}), vec({1, 1})});
  Hull k2 = hull_of({vec({1.5, 0.5}), vec({0.5, 1.5}), vec({1, 1})});
  Hull k3 = hull_of({vec({1.5, 0.5}), vec({0.5, 1.5})});
  const Vector w = vec({-1, -1});
  for (double x = -1; x <= 2; x += 0.125) {
    for (double y = -1; y <= 2; y += 0.125) {
      const Vector t = vec({x, y});
      const bool all = segment_hull_member(t, w, k1, 1e-9).member && segment_hull_member(t, w, k2, 1e-9).member &&
                       segment_hull_member(t, w, k3, 1e-9).member;
      CHECK(all == segment_hull_member(t, w, k3, 1e-9).member);
    }
  }
}
