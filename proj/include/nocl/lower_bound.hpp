#pragma once

#include <cstddef>
#include <vector>

#include "nocl/game.hpp"
#include "nocl/hypothesis.hpp"
#include "nocl/noise_kernel.hpp"

namespace nocl {

// Hard instance on the shattered cube: 2^tau hypotheses over tau features,
// per-feature two-point laws Bern(1/2 -+ epsilon) separated by exactly
// gamma_h in squared Hellinger distance (epsilon solves
// 2 - 4*sqrt(1/4 - eps^2) = gamma_h), features played in tau epochs of
// horizon / tau rounds, truth drawn uniformly per run.  Any learner pays on
// the order of tau / gamma_h errors here.
struct LowerBoundInstance {
  HypothesisClass hclass;
  NoiseKernel kernel;
  AdversaryStrategy adversary;
  double epsilon = 0.0;
  double gamma_h = 0.0;
};

LowerBoundInstance build_lower_bound_instance(std::size_t tau, double gamma_h,
                                              std::size_t horizon);

// Two-hypothesis schedules with a step-dependent separation profile
// gamma_j ~ (j / (A T))^((1-alpha)/alpha), truth fixed to the second
// hypothesis (the side a silent tester starts out wrong on).
struct TwoHypothesisInstance {
  HypothesisClass hclass;  // all-zeros vs all-ones over T feature slots
  NoiseKernel kernel;
  AdversaryStrategy adversary;  // fixed sequence 0 .. T-1
  std::vector<double> gammas;   // per-step pair separation (squared Hellinger)
};

// Per-step singleton pairs Bern(1/2 -+ eps_t) with H^2 separation exactly
// gamma_t: the "soft gap" schedule.
TwoHypothesisInstance build_soft_gap_instance(double alpha, double amplitude,
                                              std::size_t horizon);

// Margin-noise schedule: per-step margin segments with the worst-case
// ascending margins for the given (alpha, amplitude).
TwoHypothesisInstance build_tsybakov_instance(double alpha, double amplitude,
                                              std::size_t horizon);

// Expected error-step count of the running-mean tester on the worst-case
// margin schedule: counts the steps whose accumulated margin mass is still
// below the sqrt(2 t log(T / delta)) deviation envelope.
std::size_t empirical_mean_error_budget(std::span<const double> lambdas, double delta);

}  // namespace nocl
