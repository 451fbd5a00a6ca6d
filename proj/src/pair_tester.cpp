#include "nocl/pair_tester.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nocl {

BudgetResult disagreement_budget(std::span<const double> gammas, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  const double goal = 2.0 * std::log(2.0 / delta);
  BudgetResult out;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] >= 0.0)) throw std::invalid_argument("separations must be nonnegative");
    out.total_gap += gammas[i];
    if (out.total_gap >= goal - 1e-12) {
      out.feasible = true;
      out.steps = i + 1;
      return out;
    }
  }
  out.steps = gammas.size();
  return out;  // feasible == false: not enough separation in the sequence
}

LeCamBirgeTester LeCamBirgeTester::with_step_budget(std::size_t budget) {
  LeCamBirgeTester t;
  t.budget_ = budget;
  t.maybe_decide();  // budget 0 decides immediately (ties side with 1)
  return t;
}

LeCamBirgeTester LeCamBirgeTester::with_gap_goal(double goal) {
  if (!(goal >= 0.0)) throw std::invalid_argument("gap goal must be nonnegative");
  LeCamBirgeTester t;
  t.gap_goal_ = goal;
  t.maybe_decide();
  return t;
}

void LeCamBirgeTester::maybe_decide() {
  if (decided_) return;
  const bool budget_hit = budget_ && steps_ >= *budget_;
  const bool goal_hit = gap_goal_ && gap_seen_ >= *gap_goal_ - 1e-12;
  if (!budget_hit && !goal_hit) return;
  if (inf_balance_ != 0) {
    decided_ = inf_balance_ > 0 ? 1 : 2;
  } else {
    decided_ = lr_finite_ >= 0.0 ? 1 : 2;  // exact tie sides with 1
  }
}

void LeCamBirgeTester::step(const Distribution& p, const Distribution& q, double gamma,
                            std::size_t obs) {
  if (decided_) {
    ++inert_steps_;
    return;
  }
  const double pm = p[obs], qm = q[obs];
  if (pm > 0.0 && qm > 0.0) {
    lr_finite_ += std::log(pm) - std::log(qm);
  } else if (pm > 0.0 && qm == 0.0) {
    ++inf_balance_;
  } else if (pm == 0.0 && qm > 0.0) {
    --inf_balance_;
  }
  // both zero: the symbol is impossible under either side; no evidence
  gap_seen_ += std::max(gamma, 0.0);
  ++steps_;
  maybe_decide();
}

double LeCamBirgeTester::lr_log() const {
  if (inf_balance_ > 0) return std::numeric_limits<double>::infinity();
  if (inf_balance_ < 0) return -std::numeric_limits<double>::infinity();
  return lr_finite_;
}

void EmpiricalMeanTester::step(int agrees_with_second) {
  if (agrees_with_second != 0 && agrees_with_second != 1) {
    throw std::invalid_argument("agreement indicator must be 0 or 1");
  }
  ++count_;
  sum_ += agrees_with_second;
}

int EmpiricalMeanTester::decision() const {
  if (count_ == 0) return 1;
  return sum_ / static_cast<double>(count_) <= 0.5 ? 1 : 2;
}

int surrogate_loss(std::size_t tester_label, std::size_t label_i, std::size_t label_j) {
  return label_i != label_j && tester_label != label_i ? 1 : 0;
}

}  // namespace nocl
