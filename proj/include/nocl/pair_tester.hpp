#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "nocl/distribution.hpp"

namespace nocl {

// Smallest prefix of the separation sequence whose total reaches
// 2 * ln(2 / delta); infeasible when even the full sequence falls short, in
// which case callers fall back to testing over the whole horizon.
struct BudgetResult {
  bool feasible = false;
  std::size_t steps = 0;     // disagreement steps until a decision
  double total_gap = 0.0;    // separation accumulated over that prefix
};

BudgetResult disagreement_budget(std::span<const double> gammas, double delta);

// Sequential likelihood-ratio tester between two candidate laws fed one
// disagreement step at a time.  It stays silent (sides with 1) until its
// budget is exhausted, then freezes the sign of the accumulated
// log-likelihood ratio as its decision; steps after that are counted but
// ignored.  The budget is either a fixed number of disagreement steps or a
// target amount of accumulated separation (the two coincide when every step
// carries the same separation).
class LeCamBirgeTester {
 public:
  static LeCamBirgeTester with_step_budget(std::size_t budget);
  static LeCamBirgeTester with_gap_goal(double goal);

  // p / q: the side-1 / side-2 laws for this step's feature; gamma: the
  // step's separation (used by gap-goal budgets); obs: the observed symbol.
  void step(const Distribution& p, const Distribution& q, double gamma, std::size_t obs);

  bool decided() const { return decided_.has_value(); }
  int decision() const { return decided_.value_or(1); }  // 1 or 2
  double lr_log() const;
  std::size_t steps_seen() const { return steps_; }
  double gap_seen() const { return gap_seen_; }
  std::size_t steps_after_decision() const { return inert_steps_; }

 private:
  LeCamBirgeTester() = default;
  void maybe_decide();

  std::optional<std::size_t> budget_;
  std::optional<double> gap_goal_;
  double lr_finite_ = 0.0;
  int inf_balance_ = 0;  // +1 per impossible-under-q step, -1 per impossible-under-p
  double gap_seen_ = 0.0;
  std::size_t steps_ = 0;
  std::size_t inert_steps_ = 0;
  std::optional<int> decided_;
};

// Running-mean tester: decides 1 while the empirical mean of the
// agreement-with-side-2 bits stays at or below one half (an empty record
// counts as zero).  Never freezes; every step can flip the current decision.
class EmpiricalMeanTester {
 public:
  void step(int agrees_with_second);

  int decision() const;
  std::size_t count() const { return count_; }
  double sum() const { return sum_; }

 private:
  std::size_t count_ = 0;
  double sum_ = 0.0;
};

// Surrogate charge for one disagreement step: 1 when the labels differ and
// the tester's predicted label contradicts side i's label.
int surrogate_loss(std::size_t tester_label, std::size_t label_i, std::size_t label_j);

}  // namespace nocl
