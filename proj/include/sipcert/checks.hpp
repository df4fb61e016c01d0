#pragma once

#include "sipcert/model.hpp"

#include <cstdint>
#include <string>

namespace sipcert::checks {

struct Outcome {
  bool pass = true;
  int instances = 0;
  int failures = 0;
  std::string detail;  // first failure, or a summary line
};

/// Forward-mode gradients of random smooth expressions against central
/// differences, relative error at most 1e-6.
Outcome gradient_vs_differences(int instances, std::uint64_t seed);

/// hull_member verdicts against a brute-force search over a grid of convex
/// weights. Instances where the grid cannot decide are redrawn.
Outcome hull_vs_grid_oracle(int instances, std::uint64_t seed);

/// Tag-set inclusion and hull containment between consecutive ladder steps.
Outcome ladder_nesting(const model::Problem& prob, const Vector& x, const model::Options& opts);
Outcome ladder_nesting_random(int instances, std::uint64_t seed);

/// Support at most p+1 and residual at most 1e-9.
Outcome caratheodory_random(int instances, std::uint64_t seed);

/// certify_fj on c*f for c in {1e-3, 1, 1e3}: same verdict and witness.
Outcome objective_scaling(const model::Problem& prob, const Vector& x, const model::Options& opts);

/// Random linear families in the plane (at most 5 constraints) against an
/// exhaustive search over about 1e4 (lambda, alpha) grid points.
Outcome fj_vs_grid_oracle(int instances, std::uint64_t seed);

/// cone_interior_nonempty against sampled unit directions in R^3. A false
/// "nonempty" always fails; a false "empty" is tolerated (and counted in
/// `detail`) only when the best sampled margin is below 10*tol.
Outcome cone_interior_vs_sampling(int cones, int directions, std::uint64_t seed, double tol = 1e-8);

/// Composed gradients against central differences of the literal composite.
Outcome compose_vs_differences(int instances, std::uint64_t seed);

}  // namespace sipcert::checks
