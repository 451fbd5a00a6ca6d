#include "nocl/kernel_set.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace nocl {

namespace {

constexpr double kCertTol = 1e-10;     // Frank-Wolfe gap certificate
constexpr std::size_t kIterCap = 100000;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

Vec sub(const Distribution& a, const Distribution& b) {
  Vec out(a.size());
  for (std::size_t m = 0; m < a.size(); ++m) out[m] = a[m] - b[m];
  return out;
}

// Mixed point of a hull at the given weights, as a raw vector.
Vec mix_raw(std::span<const Distribution> verts, const Vec& w) {
  Vec p(verts.front().size(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t m = 0; m < p.size(); ++m) p[m] += w[i] * verts[i][m];
  }
  return p;
}

Distribution to_distribution(Vec p) {
  for (double& x : p) x = std::max(x, 0.0);
  return Distribution(std::move(p));
}

// Euclidean projection onto the probability simplex (sort-based).
Vec project_simplex(Vec v) {
  Vec u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double cand = (cum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - cand > 0.0) tau = cand;
  }
  for (double& x : v) x = std::max(0.0, x - tau);
  // kill the last-ulp drift so downstream Distribution construction is happy
  double s = std::accumulate(v.begin(), v.end(), 0.0);
  if (s > 0.0) {
    for (double& x : v) x /= s;
  } else {
    std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(v.size()));
  }
  return v;
}

// d(p, q) on raw vectors for the smooth solvers.
double div_raw(DivergenceKind kind, const Vec& p, const Vec& q) {
  double acc = 0.0;
  if (kind == DivergenceKind::L2Sq) {
    for (std::size_t m = 0; m < p.size(); ++m) {
      const double d = p[m] - q[m];
      acc += d * d;
    }
  } else {  // HellingerSq
    for (std::size_t m = 0; m < p.size(); ++m) {
      const double d = std::sqrt(std::max(p[m], 0.0)) - std::sqrt(std::max(q[m], 0.0));
      acc += d * d;
    }
  }
  return acc;
}

// Gradient of d in both arguments.  The Hellinger gradient 1 - sqrt(q/p)
// blows up at the simplex boundary; we clamp the ratio, which keeps the
// direction a descent one but voids the certificate in boundary-pinned
// corner cases -- the converged flag stays honest either way.
void div_grad(DivergenceKind kind, const Vec& p, const Vec& q, Vec& gp, Vec& gq) {
  const std::size_t n = p.size();
  gp.assign(n, 0.0);
  gq.assign(n, 0.0);
  if (kind == DivergenceKind::L2Sq) {
    for (std::size_t m = 0; m < n; ++m) {
      const double d = 2.0 * (p[m] - q[m]);
      gp[m] = d;
      gq[m] = -d;
    }
    return;
  }
  constexpr double kRatioCap = 1e9;
  for (std::size_t m = 0; m < n; ++m) {
    const double pm = std::max(p[m], 0.0), qm = std::max(q[m], 0.0);
    double rq = pm > 0.0 ? std::sqrt(qm / pm) : (qm > 0.0 ? kRatioCap : 1.0);
    double rp = qm > 0.0 ? std::sqrt(pm / qm) : (pm > 0.0 ? kRatioCap : 1.0);
    gp[m] = 1.0 - std::min(rq, kRatioCap);
    gq[m] = 1.0 - std::min(rp, kRatioCap);
  }
}

// ---- exact two-point solvers -------------------------------------------------

struct BoxSolution {
  double s = 0.0, t = 0.0, value = 0.0;
};

// min over (s,t) in [0,1]^2 of || e + s*d1 - t*d2 ||^2, exactly.
BoxSolution min_quadratic_box(const Vec& e, const Vec& d1, const Vec& d2) {
  const double A = dot(d1, d1), B = dot(d1, d2), C = dot(d2, d2);
  const double re = dot(d1, e), se = dot(d2, e);

  auto value_at = [&](double s, double t) {
    double acc = 0.0;
    for (std::size_t m = 0; m < e.size(); ++m) {
      const double v = e[m] + s * d1[m] - t * d2[m];
      acc += v * v;
    }
    return acc;
  };
  auto best_t = [&](double s) {
    return C > 0.0 ? std::clamp((se + s * B) / C, 0.0, 1.0) : 0.0;
  };
  auto best_s = [&](double t) {
    return A > 0.0 ? std::clamp((t * B - re) / A, 0.0, 1.0) : 0.0;
  };

  std::vector<std::pair<double, double>> candidates;
  const double det = A * C - B * B;
  if (std::abs(det) > 1e-18) {
    const double s0 = (-re * C + B * se) / det;
    const double t0 = (A * se - B * re) / det;
    if (s0 > -1e-12 && s0 < 1.0 + 1e-12 && t0 > -1e-12 && t0 < 1.0 + 1e-12) {
      candidates.emplace_back(std::clamp(s0, 0.0, 1.0), std::clamp(t0, 0.0, 1.0));
    }
  }
  for (double s : {0.0, 1.0}) candidates.emplace_back(s, best_t(s));
  for (double t : {0.0, 1.0}) candidates.emplace_back(best_s(t), t);

  BoxSolution best{0.0, 0.0, kInf};
  for (auto [s, t] : candidates) {
    const double v = value_at(s, t);
    if (v < best.value) best = {s, t, v};
  }
  return best;
}

// Ternary search for the minimum of a convex function on [0,1].
template <typename F>
std::pair<double, double> ternary_min(F&& f, int iters = 60) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < iters; ++i) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (f(m1) <= f(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

// ---- LP machinery for the TV gap ----------------------------------------------
//
// min c.z  s.t.  A z = b (b >= 0),  z >= 0, via dense two-phase primal simplex
// with Bland's rule.  Problems here are tiny (a dozen rows at most).

struct LpResult {
  bool ok = false;
  double value = 0.0;
  Vec z;
};

class SimplexTableau {
 public:
  SimplexTableau(const std::vector<Vec>& a, const Vec& b) : rows_(a.size()), cols_(a[0].size()) {
    tab_.assign(rows_, Vec(cols_ + 1, 0.0));
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) tab_[r][c] = a[r][c];
      tab_[r][cols_] = b[r];
    }
    basis_.resize(rows_);
  }

  // Bland-rule simplex over the allowed column set; costs indexed over all
  // columns.  Returns false on (numerical) unboundedness.
  bool minimize(const Vec& cost, std::size_t allowed_cols) {
    for (std::size_t iter = 0; iter < 10000; ++iter) {
      // reduced costs from scratch; cheap at these sizes and immune to drift
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (is_basic(j)) continue;
        double rc = cost[j];
        for (std::size_t r = 0; r < rows_; ++r) rc -= cost[basis_[r]] * tab_[r][j];
        if (rc < -1e-9) {
          enter = j;
          break;  // Bland: first improving index
        }
      }
      if (enter == cols_) return true;  // optimal

      std::size_t leave = rows_;
      double best_ratio = kInf;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (tab_[r][enter] > 1e-11) {
          const double ratio = tab_[r][cols_] / tab_[r][enter];
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && (leave == rows_ || basis_[r] < basis_[leave]))) {
            best_ratio = ratio;
            leave = r;
          }
        }
      }
      if (leave == rows_) return false;  // unbounded
      pivot(leave, enter);
    }
    return false;
  }

  void pivot(std::size_t r, std::size_t c) {
    const double piv = tab_[r][c];
    for (double& x : tab_[r]) x /= piv;
    for (std::size_t k = 0; k < rows_; ++k) {
      if (k == r || tab_[k][c] == 0.0) continue;
      const double f = tab_[k][c];
      for (std::size_t j = 0; j <= cols_; ++j) tab_[k][j] -= f * tab_[r][j];
    }
    basis_[r] = c;
  }

  bool is_basic(std::size_t col) const {
    return std::find(basis_.begin(), basis_.end(), col) != basis_.end();
  }

  void set_basis(std::vector<std::size_t> basis) { basis_ = std::move(basis); }
  const std::vector<std::size_t>& basis() const { return basis_; }
  double rhs(std::size_t r) const { return tab_[r][cols_]; }
  double entry(std::size_t r, std::size_t c) const { return tab_[r][c]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_, cols_;
  std::vector<Vec> tab_;
  std::vector<std::size_t> basis_;
};

LpResult solve_lp(const std::vector<Vec>& a, const Vec& b, const Vec& c) {
  const std::size_t m = a.size(), n = a[0].size();
  // append artificial identity columns
  std::vector<Vec> awide(m, Vec(n + m, 0.0));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) awide[r][j] = a[r][j];
    awide[r][n + r] = 1.0;
  }
  SimplexTableau tab(awide, b);
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) basis[r] = n + r;
  tab.set_basis(std::move(basis));

  Vec phase1_cost(n + m, 0.0);
  for (std::size_t j = n; j < n + m; ++j) phase1_cost[j] = 1.0;
  if (!tab.minimize(phase1_cost, n + m)) return {};
  double artificial_mass = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis()[r] >= n) artificial_mass += tab.rhs(r);
  }
  if (artificial_mass > 1e-7) return {};  // infeasible

  // pivot stray artificials out where possible
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis()[r] < n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (!tab.is_basic(j) && std::abs(tab.entry(r, j)) > 1e-9) {
        tab.pivot(r, j);
        break;
      }
    }
  }

  Vec phase2_cost(n + m, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2_cost[j] = c[j];
  if (!tab.minimize(phase2_cost, n)) return {};

  LpResult out;
  out.ok = true;
  out.z.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis()[r] < n) out.z[tab.basis()[r]] = std::max(0.0, tab.rhs(r));
  }
  out.value = dot(out.z, c);
  return out;
}

GapReport solve_tv_lp(const KernelSet& s1, const KernelSet& s2) {
  const auto v1 = s1.vertices();
  const auto v2 = s2.vertices();
  const std::size_t n1 = v1.size(), n2 = v2.size(), arity = s1.arity();
  const std::size_t nvar = n1 + n2 + 2 * arity;

  std::vector<Vec> a(arity + 2, Vec(nvar, 0.0));
  Vec b(arity + 2, 0.0), c(nvar, 0.0);
  for (std::size_t m = 0; m < arity; ++m) {
    for (std::size_t i = 0; i < n1; ++i) a[m][i] = v1[i][m];
    for (std::size_t j = 0; j < n2; ++j) a[m][n1 + j] = -v2[j][m];
    a[m][n1 + n2 + m] = -1.0;          // s+ column
    a[m][n1 + n2 + arity + m] = 1.0;   // s- column
    c[n1 + n2 + m] = 0.5;
    c[n1 + n2 + arity + m] = 0.5;
  }
  for (std::size_t i = 0; i < n1; ++i) a[arity][i] = 1.0;
  for (std::size_t j = 0; j < n2; ++j) a[arity + 1][n1 + j] = 1.0;
  b[arity] = 1.0;
  b[arity + 1] = 1.0;

  const LpResult lp = solve_lp(a, b, c);
  GapReport report;
  report.divergence = DivergenceKind::TV;
  if (!lp.ok) {
    // cannot happen for well-formed hulls, but fail soft rather than lie
    report.converged = false;
    report.argmin_a = v1[0];
    report.argmin_b = v2[0];
    report.value = tv(report.argmin_a, report.argmin_b);
    return report;
  }
  Vec w1(lp.z.begin(), lp.z.begin() + n1);
  Vec w2(lp.z.begin() + n1, lp.z.begin() + n1 + n2);
  report.argmin_a = to_distribution(mix_raw(v1, w1));
  report.argmin_b = to_distribution(mix_raw(v2, w2));
  report.value = tv(report.argmin_a, report.argmin_b);
  report.iterations = 1;
  report.converged = true;
  return report;
}

// ---- projected-gradient path for general hulls --------------------------------

struct PgdGapResult {
  Vec w1, w2;
  std::size_t iterations = 0;
  bool converged = false;
};

PgdGapResult solve_gap_pgd(const KernelSet& s1, const KernelSet& s2, DivergenceKind kind) {
  const auto v1 = s1.vertices();
  const auto v2 = s2.vertices();
  PgdGapResult res;
  res.w1.assign(v1.size(), 1.0 / static_cast<double>(v1.size()));
  res.w2.assign(v2.size(), 1.0 / static_cast<double>(v2.size()));

  Vec gp, gq, g1(v1.size()), g2(v2.size());
  double step = 1.0;
  for (res.iterations = 0; res.iterations < kIterCap; ++res.iterations) {
    const Vec p = mix_raw(v1, res.w1);
    const Vec q = mix_raw(v2, res.w2);
    const double f = div_raw(kind, p, q);
    div_grad(kind, p, q, gp, gq);
    for (std::size_t i = 0; i < v1.size(); ++i) {
      double acc = 0.0;
      for (std::size_t m = 0; m < p.size(); ++m) acc += v1[i][m] * gp[m];
      g1[i] = acc;
    }
    for (std::size_t j = 0; j < v2.size(); ++j) {
      double acc = 0.0;
      for (std::size_t m = 0; m < q.size(); ++m) acc += v2[j][m] * gq[m];
      g2[j] = acc;
    }

    // Frank-Wolfe gap: certified distance to the optimum value
    double fw = 0.0;
    fw += dot(g1, res.w1) - *std::min_element(g1.begin(), g1.end());
    fw += dot(g2, res.w2) - *std::min_element(g2.begin(), g2.end());
    if (fw <= kCertTol) {
      res.converged = true;
      break;
    }

    // backtracking proximal-gradient step on the product of simplices
    for (int bt = 0; bt < 60; ++bt) {
      Vec t1(res.w1), t2(res.w2);
      for (std::size_t i = 0; i < t1.size(); ++i) t1[i] -= step * g1[i];
      for (std::size_t j = 0; j < t2.size(); ++j) t2[j] -= step * g2[j];
      t1 = project_simplex(std::move(t1));
      t2 = project_simplex(std::move(t2));
      double quad = 0.0, lin = 0.0;
      for (std::size_t i = 0; i < t1.size(); ++i) {
        const double d = t1[i] - res.w1[i];
        lin += g1[i] * d;
        quad += d * d;
      }
      for (std::size_t j = 0; j < t2.size(); ++j) {
        const double d = t2[j] - res.w2[j];
        lin += g2[j] * d;
        quad += d * d;
      }
      const double fnew = div_raw(kind, mix_raw(v1, t1), mix_raw(v2, t2));
      if (fnew <= f + lin + quad / (2.0 * step) + 1e-15) {
        res.w1 = std::move(t1);
        res.w2 = std::move(t2);
        step = std::min(step * 1.3, 1e3);
        break;
      }
      step *= 0.5;
      if (bt == 59) return res;  // step underflow; give up unconverged
    }
  }
  return res;
}

}  // namespace

// ---- KernelSet ----------------------------------------------------------------

KernelSet::KernelSet(KernelSetKind kind, std::vector<Distribution> vertices)
    : kind_(kind), vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw std::invalid_argument("kernel set needs at least one vertex");
  for (const auto& v : vertices_) {
    if (v.size() != vertices_.front().size()) {
      throw std::invalid_argument("kernel set vertices must share one alphabet");
    }
  }
}

KernelSet KernelSet::singleton(Distribution d) {
  return KernelSet(KernelSetKind::Singleton, {std::move(d)});
}

KernelSet KernelSet::segment(Distribution a, Distribution b) {
  if (max_abs_diff(a, b) < 1e-15) {
    throw std::invalid_argument("segment endpoints must be distinct");
  }
  return KernelSet(KernelSetKind::Segment, {std::move(a), std::move(b)});
}

KernelSet KernelSet::polytope(std::vector<Distribution> vertices) {
  return KernelSet(KernelSetKind::Polytope, std::move(vertices));
}

Distribution KernelSet::at_mixture(std::span<const double> weights) const {
  if (weights.size() != vertices_.size()) {
    throw std::invalid_argument("mixture weight count must match vertex count");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (w < -1e-12) throw std::invalid_argument("mixture weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("mixture weights must sum to one");
  Vec w(weights.begin(), weights.end());
  for (double& x : w) x = std::max(x, 0.0) / sum;
  return to_distribution(mix_raw(vertices_, w));
}

bool KernelSet::contains(const Distribution& p, double tol) const {
  return project_l2(p, *this).dist_sq <= tol;
}

// ---- projection ----------------------------------------------------------------

ProjectionResult project_l2(const Distribution& p, const KernelSet& s) {
  const auto verts = s.vertices();
  if (p.size() != s.arity()) throw std::invalid_argument("projection arity mismatch");

  ProjectionResult out{verts[0], 0.0, 0, true};
  if (verts.size() == 1) {
    out.point = verts[0];
    out.dist_sq = l2_sq(p, verts[0]);
    return out;
  }
  if (verts.size() == 2) {
    // scalar clamp along the chord
    const Vec d = sub(verts[1], verts[0]);
    const Vec e = sub(p, verts[0]);
    const double dd = dot(d, d);
    const double t = dd > 0.0 ? std::clamp(dot(e, d) / dd, 0.0, 1.0) : 0.0;
    out.point = convex_combine(verts[0], verts[1], t);
    out.dist_sq = l2_sq(p, out.point);
    return out;
  }

  // Small hulls: enumerate candidate supports.  The simplex-constrained
  // optimum restricted to its active vertex set solves the equality-
  // constrained least squares there, so trying every support and keeping the
  // best feasible solution is exact.
  if (verts.size() <= 8) {
    const std::size_t k = verts.size();
    out.dist_sq = std::numeric_limits<double>::infinity();
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < k; ++i)
        if (mask & (std::size_t{1} << i)) idx.push_back(i);
      const std::size_t s = idx.size();
      // KKT system for min ||V w - p||^2 with sum(w) = 1 on this support:
      // [2 V'V  1] [w ]   [2 V'p]
      // [1'     0] [mu] = [1    ]
      std::vector<Vec> a(s + 1, Vec(s + 1, 0.0));
      Vec rhs(s + 1, 0.0);
      for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
          double g = 0.0;
          for (std::size_t m = 0; m < p.size(); ++m) g += verts[idx[i]][m] * verts[idx[j]][m];
          a[i][j] = 2.0 * g;
        }
        a[i][s] = a[s][i] = 1.0;
        double c = 0.0;
        for (std::size_t m = 0; m < p.size(); ++m) c += verts[idx[i]][m] * p[m];
        rhs[i] = 2.0 * c;
      }
      rhs[s] = 1.0;
      // partial-pivot elimination; affinely dependent supports go singular
      // and are skipped (a smaller support covers the same face)
      bool singular = false;
      for (std::size_t col = 0; col <= s && !singular; ++col) {
        std::size_t piv = col;
        for (std::size_t r2 = col + 1; r2 <= s; ++r2)
          if (std::abs(a[r2][col]) > std::abs(a[piv][col])) piv = r2;
        if (std::abs(a[piv][col]) < 1e-12) {
          singular = true;
          break;
        }
        std::swap(a[col], a[piv]);
        std::swap(rhs[col], rhs[piv]);
        for (std::size_t r2 = 0; r2 <= s; ++r2) {
          if (r2 == col) continue;
          const double f = a[r2][col] / a[col][col];
          for (std::size_t c2 = col; c2 <= s; ++c2) a[r2][c2] -= f * a[col][c2];
          rhs[r2] -= f * rhs[col];
        }
      }
      if (singular) continue;
      Vec w(k, 0.0);
      bool feasible = true;
      double sum = 0.0;
      for (std::size_t i = 0; i < s; ++i) {
        const double wi = rhs[i] / a[i][i];
        if (wi < -1e-10) {
          feasible = false;
          break;
        }
        w[idx[i]] = std::max(wi, 0.0);
        sum += w[idx[i]];
      }
      if (!feasible || sum <= 0.0) continue;
      for (double& x : w) x /= sum;
      const Distribution cand = to_distribution(mix_raw(verts, w));
      const double d = l2_sq(p, cand);
      if (d < out.dist_sq) {
        out.dist_sq = d;
        out.point = cand;
      }
    }
    out.iterations = (std::size_t{1} << k) - 1;
    out.converged = true;
    return out;
  }

  // larger hulls: projected gradient on the mixture weights
  Vec w(verts.size(), 1.0 / static_cast<double>(verts.size()));
  Vec grad(verts.size());
  const Vec target(p.probs().begin(), p.probs().end());
  double step = 1.0;
  bool converged = false;
  std::size_t it = 0;
  for (; it < kIterCap; ++it) {
    const Vec x = mix_raw(verts, w);
    Vec resid(x.size());
    for (std::size_t m = 0; m < x.size(); ++m) resid[m] = x[m] - target[m];
    const double f = dot(resid, resid);
    for (std::size_t i = 0; i < verts.size(); ++i) {
      double acc = 0.0;
      for (std::size_t m = 0; m < x.size(); ++m) acc += 2.0 * resid[m] * verts[i][m];
      grad[i] = acc;
    }
    const double fw = dot(grad, w) - *std::min_element(grad.begin(), grad.end());
    if (fw <= kCertTol) {
      converged = true;
      break;
    }
    for (int bt = 0; bt < 60; ++bt) {
      Vec t(w);
      for (std::size_t i = 0; i < t.size(); ++i) t[i] -= step * grad[i];
      t = project_simplex(std::move(t));
      double quad = 0.0, lin = 0.0;
      for (std::size_t i = 0; i < t.size(); ++i) {
        const double d = t[i] - w[i];
        lin += grad[i] * d;
        quad += d * d;
      }
      const Vec xt = mix_raw(verts, t);
      double ft = 0.0;
      for (std::size_t m = 0; m < xt.size(); ++m) {
        const double d = xt[m] - target[m];
        ft += d * d;
      }
      if (ft <= f + lin + quad / (2.0 * step) + 1e-15) {
        w = std::move(t);
        step = std::min(step * 1.3, 1e3);
        break;
      }
      step *= 0.5;
    }
  }
  out.point = to_distribution(mix_raw(verts, w));
  out.dist_sq = l2_sq(p, out.point);
  out.iterations = it;
  out.converged = converged;
  return out;
}

// ---- gap -----------------------------------------------------------------------

GapReport gap(const KernelSet& s1, const KernelSet& s2, DivergenceKind d) {
  if (d != DivergenceKind::L2Sq && d != DivergenceKind::HellingerSq &&
      d != DivergenceKind::TV) {
    throw std::invalid_argument("gap supports L2Sq, HellingerSq and TV");
  }
  if (s1.arity() != s2.arity()) throw std::invalid_argument("gap arity mismatch");

  const auto v1 = s1.vertices();
  const auto v2 = s2.vertices();
  const Divergence dv{d, 0.5};

  GapReport report;
  report.divergence = d;
  report.argmin_a = v1[0];
  report.argmin_b = v2[0];

  if (v1.size() == 1 && v2.size() == 1) {
    report.value = dv(v1[0], v2[0]);
    report.converged = true;
    return report;
  }
  if (d == DivergenceKind::TV) return solve_tv_lp(s1, s2);

  if (v1.size() <= 2 && v2.size() <= 2) {
    // treat singletons as degenerate segments
    const Distribution& a1 = v1[0];
    const Distribution& b1 = v1.size() > 1 ? v1[1] : v1[0];
    const Distribution& a2 = v2[0];
    const Distribution& b2 = v2.size() > 1 ? v2[1] : v2[0];

    if (d == DivergenceKind::L2Sq) {
      const BoxSolution sol = min_quadratic_box(sub(a1, a2), sub(b1, a1), sub(b2, a2));
      report.argmin_a = convex_combine(a1, b1, sol.s);
      report.argmin_b = convex_combine(a2, b2, sol.t);
      report.value = l2_sq(report.argmin_a, report.argmin_b);
      report.iterations = 1;
      report.converged = true;
      return report;
    }

    // HellingerSq on a product of segments: nested ternary search (the
    // objective is jointly convex, so partial minimization stays convex).
    std::size_t evals = 0;
    auto inner_best = [&](double sv) {
      return ternary_min([&](double tv_) {
               ++evals;
               return hellinger_sq(convex_combine(a1, b1, sv), convex_combine(a2, b2, tv_));
             })
          .second;
    };
    const double s_star = ternary_min(inner_best).first;
    const double t_star = ternary_min([&](double tv_) {
                            ++evals;
                            return hellinger_sq(convex_combine(a1, b1, s_star),
                                                convex_combine(a2, b2, tv_));
                          })
                              .first;
    report.argmin_a = convex_combine(a1, b1, s_star);
    report.argmin_b = convex_combine(a2, b2, t_star);
    report.value = hellinger_sq(report.argmin_a, report.argmin_b);
    report.iterations = evals;
    report.converged = true;
    return report;
  }

  const PgdGapResult pgd = solve_gap_pgd(s1, s2, d);
  report.argmin_a = to_distribution(mix_raw(v1, pgd.w1));
  report.argmin_b = to_distribution(mix_raw(v2, pgd.w2));
  report.value = dv(report.argmin_a, report.argmin_b);
  report.iterations = pgd.iterations;
  report.converged = pgd.converged;
  return report;
}

// ---- sampling ------------------------------------------------------------------

SampleStrategy SampleStrategy::worst(Distribution target) {
  SampleStrategy s;
  s.kind = Kind::Worst;
  s.target = std::move(target);
  return s;
}

SampleStrategy SampleStrategy::vertex_index(std::size_t index) {
  SampleStrategy s;
  s.kind = Kind::VertexIndex;
  s.vertex = index;
  return s;
}

SampleStrategy SampleStrategy::uniform_mixture() {
  return SampleStrategy{};
}

Distribution sample_from(const KernelSet& s, const SampleStrategy& strategy, Rng& rng) {
  const auto verts = s.vertices();
  switch (strategy.kind) {
    case SampleStrategy::Kind::Worst: {
      if (!strategy.target) throw std::invalid_argument("worst-case sampling needs a target");
      std::size_t best = 0;
      double best_d = kInf;
      for (std::size_t i = 0; i < verts.size(); ++i) {
        const double d = l2_sq(verts[i], *strategy.target);
        if (d < best_d - 1e-15) {  // strict improvement keeps the lowest index on ties
          best_d = d;
          best = i;
        }
      }
      return verts[best];
    }
    case SampleStrategy::Kind::VertexIndex: {
      if (strategy.vertex >= verts.size()) {
        throw std::invalid_argument("vertex index out of range");
      }
      return verts[strategy.vertex];
    }
    case SampleStrategy::Kind::UniformMixture: {
      if (verts.size() == 1) return verts[0];
      if (verts.size() == 2) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        return convex_combine(verts[0], verts[1], unif(rng));
      }
      std::exponential_distribution<double> exp1(1.0);
      Vec w(verts.size());
      double sum = 0.0;
      for (double& x : w) {
        x = exp1(rng) + 1e-12;
        sum += x;
      }
      for (double& x : w) x /= sum;
      return to_distribution(mix_raw(verts, w));
    }
  }
  throw std::logic_error("unknown sampling strategy");
}

}  // namespace nocl
