#pragma once

#include <string>
#include <vector>

#include "nocl/kernel_set.hpp"

namespace nocl {

enum class NoiseKernelKind {
  MassartBernoulli,
  TVBall,
  RandomizedResponse,
  Tsybakov,
  Singleton,
  Custom,
};

// Map from (feature, true label) to the convex set of observation laws the
// adversary may pick from.  Parametric families construct their sets on
// demand; table-backed kinds store them explicitly.
//
// Conventions baked in here:
//  * massart(eta):  label 0 -> segment from Bern(0) to Bern(eta),
//                   label 1 -> segment from Bern(1-eta) to Bern(1);
//                   binary labels and observations.
//  * randomized_response(eta, M): label y -> segment from the point mass e_y
//                   to (1-eta) e_y + eta * uniform; N = M.
//  * tsybakov(lambdas, A, alpha): binary; at step/feature t the set for label
//                   y is the segment of laws that agree with y with
//                   probability (1+lambda')/2 for lambda' in [lambda_t, 1].
//                   The lambda sequence must be nondecreasing and satisfy the
//                   margin-density condition count{lambda_t <= r} <=
//                   A * T * r^(alpha/(1-alpha)) (checked on the sequence's own
//                   values; the worst-case generator saturates it).
//  * tv_ball(canonical, eps): label y -> hull of the single-pair mass moves
//                   of size min(eps, canonical_y[j]) around canonical_y; these
//                   are exactly the extreme points whenever eps fits inside
//                   the simplex around the canonical law.
//  * singleton_table / custom: explicit per-(feature, label) tables.
class NoiseKernel {
 public:
  static NoiseKernel massart(double eta);
  static NoiseKernel randomized_response(double eta, std::size_t arity);
  static NoiseKernel tsybakov(std::vector<double> lambdas, double amplitude, double alpha);
  // Ascending worst-case margins lambda_j = (j / (A*T))^((1-alpha)/alpha).
  static NoiseKernel tsybakov_worst_case(double amplitude, double alpha, std::size_t horizon);
  static NoiseKernel tv_ball(std::vector<Distribution> canonical, double eps);
  static NoiseKernel singleton_table(std::vector<std::vector<Distribution>> table);
  static NoiseKernel custom_table(std::vector<std::vector<KernelSet>> table);

  NoiseKernelKind kind() const { return kind_; }
  std::size_t arity() const { return arity_; }          // observation symbols M
  std::size_t num_labels() const { return num_labels_; }  // labels N

  // Feature slots the kernel distinguishes.  Feature-invariant families
  // (massart, randomized response, tv ball) report 1 but accept any index;
  // table-backed and per-step kernels require feature < feature_slots().
  std::size_t feature_slots() const { return feature_slots_; }
  bool feature_invariant() const { return feature_invariant_; }

  KernelSet set_for(std::size_t feature, std::size_t label) const;

  // Parameter access for bound computations; throws when not applicable.
  double eta() const;
  double tsybakov_amplitude() const;
  double tsybakov_alpha() const;
  const std::vector<double>& tsybakov_lambdas() const;

  const std::string& name() const { return name_; }

 private:
  NoiseKernel() = default;

  NoiseKernelKind kind_ = NoiseKernelKind::Custom;
  std::size_t arity_ = 2;
  std::size_t num_labels_ = 2;
  std::size_t feature_slots_ = 1;
  bool feature_invariant_ = true;
  std::string name_;

  double eta_ = 0.0;
  double amplitude_ = 1.0;
  double alpha_ = 0.5;
  std::vector<double> lambdas_;
  std::vector<Distribution> canonical_;
  double eps_ = 0.0;
  std::vector<std::vector<KernelSet>> table_;
};

// Smallest pairwise separation over the given features and all label pairs.
struct MinGapReport {
  GapReport report;
  std::size_t feature = 0;
  std::size_t label_a = 0;
  std::size_t label_b = 1;
};

MinGapReport min_pairwise_gap(const NoiseKernel& kernel,
                              std::span<const std::size_t> features,
                              DivergenceKind d);

}  // namespace nocl
