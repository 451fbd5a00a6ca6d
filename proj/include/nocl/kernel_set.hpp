#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nocl/distribution.hpp"
#include "nocl/random_util.hpp"

namespace nocl {

enum class KernelSetKind { Singleton, Segment, Polytope };

// Convex, closed set of distributions represented as the hull of finitely
// many vertices.  Singleton and Segment are the common cases and get exact
// closed-form treatment in the solvers below; Polytope covers everything
// else (custom kernels, TV balls).
class KernelSet {
 public:
  static KernelSet singleton(Distribution d);
  static KernelSet segment(Distribution a, Distribution b);
  static KernelSet polytope(std::vector<Distribution> vertices);

  KernelSetKind kind() const { return kind_; }
  std::size_t arity() const { return vertices_.front().size(); }
  std::span<const Distribution> vertices() const { return vertices_; }

  // Convex combination of the vertices with the given weights (must form a
  // distribution over the vertex list).
  Distribution at_mixture(std::span<const double> weights) const;

  // Membership up to squared-L2 distance `tol` (exact for singleton/segment,
  // projection-based for polytopes).
  bool contains(const Distribution& p, double tol = 1e-9) const;

 private:
  KernelSet(KernelSetKind kind, std::vector<Distribution> vertices);

  KernelSetKind kind_;
  std::vector<Distribution> vertices_;
};

// --- projection ---------------------------------------------------------------

struct ProjectionResult {
  Distribution point = Distribution::uniform(2);  // closest element of the set
  double dist_sq = 0.0;                           // squared L2 distance to it
  std::size_t iterations = 0;
  bool converged = true;
};

// Euclidean projection of p onto the set.  Closed form for singletons and
// segments; accelerated projected gradient on the mixture weights otherwise
// (duality-gap certificate 1e-12, iteration cap 1e5).
ProjectionResult project_l2(const Distribution& p, const KernelSet& s);

// --- separation gap -----------------------------------------------------------

struct GapReport {
  DivergenceKind divergence = DivergenceKind::L2Sq;
  double value = 0.0;
  Distribution argmin_a = Distribution::uniform(2);  // witness in the first set
  Distribution argmin_b = Distribution::uniform(2);  // witness in the second set
  std::size_t iterations = 0;
  bool converged = true;
};

// Minimum divergence between two sets:
//   min over p in s1, q in s2 of d(p, q)
// for d in {L2Sq, HellingerSq, TV} (all jointly convex, so the minimum is a
// global one).  Pairs with at most two vertices per side solve exactly
// (quadratic over the unit square for L2, nested ternary search for
// Hellinger); TV reduces to a small linear program; the remaining polytope
// cases run accelerated projected gradient with a Frank-Wolfe gap
// certificate (tolerance 1e-9 on the reported value, cap 1e5 iterations,
// converged flag set honestly).  report.value always equals
// d(argmin_a, argmin_b) as evaluated on the returned witnesses.
GapReport gap(const KernelSet& s1, const KernelSet& s2, DivergenceKind d);

// --- adversary sampling --------------------------------------------------------

// How an adversary picks its per-round law from a kernel set.
//   Worst:          vertex closest in squared L2 to `target` (ties -> lowest
//                   vertex index); the adversarial extreme point aimed at the
//                   opposing hypothesis.
//   VertexIndex:    fixed vertex.
//   UniformMixture: mixture coefficients drawn uniformly (Dirichlet(1) for
//                   polytopes).
struct SampleStrategy {
  enum class Kind { Worst, VertexIndex, UniformMixture };
  Kind kind = Kind::UniformMixture;
  std::optional<Distribution> target;
  std::size_t vertex = 0;

  static SampleStrategy worst(Distribution target);
  static SampleStrategy vertex_index(std::size_t index);
  static SampleStrategy uniform_mixture();
};

Distribution sample_from(const KernelSet& s, const SampleStrategy& strategy, Rng& rng);

}  // namespace nocl
