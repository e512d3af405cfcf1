#include "hcr/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace hcr::optim {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kReducedTol = 1e-9;
constexpr double kDegenerateStep = 1e-11;
constexpr int kBlandTrigger = 60;
constexpr int kRefactorEvery = 100;

/// Core problem in equality form over substituted variables:
///   min c'v,  A v = b,  lo <= v <= hi,  every lo finite.
/// User variables are shifted (finite lower bound), mirrored (upper bound
/// only) or split (free) so each core variable can rest on a finite bound.
struct BackMap {
  int plus = -1, minus = -1;
  double offset = 0.0, sign = 1.0;
};

struct Core {
  int m = 0, n = 0;
  std::vector<std::vector<std::pair<int, double>>> col;
  std::vector<double> lo, hi, c, b;
  double constant = 0.0;    // recovers the sense-adjusted user objective
  double sense_sign = 1.0;  // +1 minimize, -1 maximize
  std::vector<BackMap> back;
  int user_vars = 0;
};

Core build_core(const LinearModel& m, const std::vector<double>& lo_user,
                const std::vector<double>& hi_user) {
  m.validate();
  Core core;
  core.sense_sign = m.sense == Sense::minimize ? 1.0 : -1.0;
  core.user_vars = m.num_vars();
  core.back.resize(static_cast<std::size_t>(m.num_vars()));
  core.m = m.num_rows();

  for (int j = 0; j < m.num_vars(); ++j) {
    const double lo = lo_user[static_cast<std::size_t>(j)];
    const double hi = hi_user[static_cast<std::size_t>(j)];
    if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
      throw ValidationError("simplex: inconsistent bounds on variable " + std::to_string(j));
    }
    auto& bm = core.back[static_cast<std::size_t>(j)];
    if (lo > -kInf) {
      bm.plus = core.n++;
      bm.offset = lo;
      bm.sign = 1.0;
      core.lo.push_back(0.0);
      core.hi.push_back(hi < kInf ? hi - lo : kInf);
    } else if (hi < kInf) {
      bm.plus = core.n++;
      bm.offset = hi;
      bm.sign = -1.0;
      core.lo.push_back(0.0);
      core.hi.push_back(kInf);
    } else {
      bm.plus = core.n++;
      bm.minus = core.n++;
      core.lo.insert(core.lo.end(), {0.0, 0.0});
      core.hi.insert(core.hi.end(), {kInf, kInf});
    }
  }
  core.col.assign(static_cast<std::size_t>(core.n), {});
  core.c.assign(static_cast<std::size_t>(core.n), 0.0);
  for (int j = 0; j < m.num_vars(); ++j) {
    const auto& bm = core.back[static_cast<std::size_t>(j)];
    const double cj = core.sense_sign * m.obj[j];
    core.constant += cj * bm.offset;
    core.c[static_cast<std::size_t>(bm.plus)] += cj * bm.sign;
    if (bm.minus >= 0) core.c[static_cast<std::size_t>(bm.minus)] -= cj;
  }
  core.constant += core.sense_sign * m.objective_constant;

  core.b.resize(static_cast<std::size_t>(core.m));
  for (int i = 0; i < core.m; ++i) {
    const auto& row = m.rows[static_cast<std::size_t>(i)];
    double rhs = row.rhs;
    for (const auto& [j, a] : row.terms) {
      const auto& bm = core.back[static_cast<std::size_t>(j)];
      rhs -= a * bm.offset;
      core.col[static_cast<std::size_t>(bm.plus)].emplace_back(i, a * bm.sign);
      if (bm.minus >= 0) core.col[static_cast<std::size_t>(bm.minus)].emplace_back(i, -a);
    }
    if (row.rel != Rel::eq) {
      core.col.push_back({{i, row.rel == Rel::le ? 1.0 : -1.0}});
      core.c.push_back(0.0);
      core.lo.push_back(0.0);
      core.hi.push_back(kInf);
      ++core.n;
    }
    core.b[static_cast<std::size_t>(i)] = rhs;
  }
  for (auto& col : core.col) {
    std::sort(col.begin(), col.end());
    std::size_t w = 0;
    for (std::size_t r = 0; r < col.size(); ++r) {
      if (w > 0 && col[w - 1].first == col[r].first) {
        col[w - 1].second += col[r].second;
      } else {
        col[w++] = col[r];
      }
    }
    col.resize(w);
  }
  return core;
}

/// Bounded-variable revised primal simplex over a Core. One engine instance
/// runs one cold start (which appends its artificial columns at the current
/// end) and afterwards supports column appends plus warm re-solves. When a
/// warm basis turns out to be unusable the engine throws ValidationError and
/// the caller rebuilds from scratch.
class Engine {
 public:
  Engine(Core core, SimplexOptions opt) : core_(std::move(core)), opt_(opt) {}

  SolveStatus solve_from_scratch() {
    if (art_base_ >= 0) throw ValidationError("simplex: engine already started");
    art_base_ = core_.n;
    for (int i = 0; i < core_.m; ++i) {
      core_.col.push_back({{i, 1.0}});  // sign fixed in set_cold_start
      core_.c.push_back(0.0);
      core_.lo.push_back(0.0);
      core_.hi.push_back(kInf);
      ++core_.n;
    }
    set_cold_start();
    std::vector<double> saved_c = core_.c;
    for (int j = 0; j < art_base_; ++j) core_.c[static_cast<std::size_t>(j)] = 0.0;
    for (int j = art_base_; j < core_.n; ++j) core_.c[static_cast<std::size_t>(j)] = 1.0;
    SolveStatus st = iterate();
    if (st != SolveStatus::optimal) return st;
    double infeas = 0.0;
    for (int j = art_base_; j < core_.n; ++j) infeas += value_[static_cast<std::size_t>(j)];
    if (infeas > opt_.tol.feasibility) return SolveStatus::infeasible;
    pivot_out_artificials();
    for (int j = art_base_; j < core_.n; ++j) {
      core_.lo[static_cast<std::size_t>(j)] = core_.hi[static_cast<std::size_t>(j)] = 0.0;
      value_[static_cast<std::size_t>(j)] = 0.0;
    }
    core_.c = saved_c;
    return iterate();
  }

  bool has_basis() const { return !basic_.empty(); }

  /// Warm re-solve from the stored basis. Throws ValidationError when the
  /// basis cannot be reused (singular or primal infeasible).
  SolveStatus resolve() {
    refactor();
    recompute_values();
    for (int i = 0; i < core_.m; ++i) {
      const int bi = basic_[static_cast<std::size_t>(i)];
      const double v = value_[static_cast<std::size_t>(bi)];
      if (v < core_.lo[static_cast<std::size_t>(bi)] - 1e-7 ||
          v > core_.hi[static_cast<std::size_t>(bi)] + 1e-7) {
        throw ValidationError("simplex: warm basis not primal feasible");
      }
    }
    return iterate();
  }

  /// Append a column (post-start). The variable starts nonbasic at `lo`.
  /// Returns its index in the engine's column space.
  int append_column(double cost, std::vector<std::pair<int, double>> col, double lo, double hi) {
    std::sort(col.begin(), col.end());
    core_.col.push_back(std::move(col));
    core_.c.push_back(cost);
    core_.lo.push_back(lo);
    core_.hi.push_back(hi);
    ++core_.n;
    if (!value_.empty()) {
      value_.push_back(lo);
      at_upper_.push_back(0);
      in_basis_.push_back(0);
    }
    return core_.n - 1;
  }

  double core_objective() const {
    double v = 0.0;
    for (int j = 0; j < core_.n; ++j) {
      v += core_.c[static_cast<std::size_t>(j)] * value_[static_cast<std::size_t>(j)];
    }
    return v;
  }

  const std::vector<double>& values() const { return value_; }

  std::vector<double> duals() const {
    std::vector<double> y(static_cast<std::size_t>(core_.m), 0.0);
    for (int i = 0; i < core_.m; ++i) {
      const double cb = core_.c[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])];
      if (cb == 0.0) continue;
      for (int jc = 0; jc < core_.m; ++jc) {
        y[static_cast<std::size_t>(jc)] += cb * binv_[static_cast<std::size_t>(i) * core_.m + jc];
      }
    }
    return y;
  }

  long iterations() const { return iterations_; }
  bool used_bland() const { return used_bland_; }

 private:
  Core core_;
  SimplexOptions opt_;
  int art_base_ = -1;
  std::vector<int> basic_;
  std::vector<std::uint8_t> in_basis_;
  std::vector<std::uint8_t> at_upper_;
  std::vector<double> value_;
  std::vector<double> binv_;  // m x m row-major
  long iterations_ = 0;
  int updates_since_refactor_ = 0;
  int degenerate_run_ = 0;
  bool bland_ = false;
  bool used_bland_ = false;

  void set_cold_start() {
    value_.assign(static_cast<std::size_t>(core_.n), 0.0);
    at_upper_.assign(static_cast<std::size_t>(core_.n), 0);
    for (int j = 0; j < art_base_; ++j) {
      value_[static_cast<std::size_t>(j)] = core_.lo[static_cast<std::size_t>(j)];
    }
    std::vector<double> resid = core_.b;
    for (int j = 0; j < art_base_; ++j) {
      const double v = value_[static_cast<std::size_t>(j)];
      if (v == 0.0) continue;
      for (const auto& [i, a] : core_.col[static_cast<std::size_t>(j)]) {
        resid[static_cast<std::size_t>(i)] -= a * v;
      }
    }
    basic_.assign(static_cast<std::size_t>(core_.m), -1);
    in_basis_.assign(static_cast<std::size_t>(core_.n), 0);
    binv_.assign(static_cast<std::size_t>(core_.m) * core_.m, 0.0);
    for (int i = 0; i < core_.m; ++i) {
      const int art = art_base_ + i;
      const double sign = resid[static_cast<std::size_t>(i)] >= 0 ? 1.0 : -1.0;
      core_.col[static_cast<std::size_t>(art)] = {{i, sign}};
      basic_[static_cast<std::size_t>(i)] = art;
      in_basis_[static_cast<std::size_t>(art)] = 1;
      value_[static_cast<std::size_t>(art)] = std::fabs(resid[static_cast<std::size_t>(i)]);
      binv_[static_cast<std::size_t>(i) * core_.m + i] = sign;
    }
    updates_since_refactor_ = 0;
  }

  void refactor() {
    const int m = core_.m;
    std::vector<double> mat(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
      for (const auto& [r, a] :
           core_.col[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])]) {
        mat[static_cast<std::size_t>(r) * m + i] = a;
      }
    }
    std::vector<double> inv(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) inv[static_cast<std::size_t>(i) * m + i] = 1.0;
    for (int col = 0; col < m; ++col) {
      int piv = col;
      double best = std::fabs(mat[static_cast<std::size_t>(col) * m + col]);
      for (int r = col + 1; r < m; ++r) {
        const double v = std::fabs(mat[static_cast<std::size_t>(r) * m + col]);
        if (v > best) {
          best = v;
          piv = r;
        }
      }
      if (best < 1e-12) throw ValidationError("simplex: singular basis during refactor");
      if (piv != col) {
        for (int j = 0; j < m; ++j) {
          std::swap(mat[static_cast<std::size_t>(piv) * m + j],
                    mat[static_cast<std::size_t>(col) * m + j]);
          std::swap(inv[static_cast<std::size_t>(piv) * m + j],
                    inv[static_cast<std::size_t>(col) * m + j]);
        }
      }
      const double d = mat[static_cast<std::size_t>(col) * m + col];
      for (int j = 0; j < m; ++j) {
        mat[static_cast<std::size_t>(col) * m + j] /= d;
        inv[static_cast<std::size_t>(col) * m + j] /= d;
      }
      for (int r = 0; r < m; ++r) {
        if (r == col) continue;
        const double f = mat[static_cast<std::size_t>(r) * m + col];
        if (f == 0.0) continue;
        for (int j = 0; j < m; ++j) {
          mat[static_cast<std::size_t>(r) * m + j] -= f * mat[static_cast<std::size_t>(col) * m + j];
          inv[static_cast<std::size_t>(r) * m + j] -= f * inv[static_cast<std::size_t>(col) * m + j];
        }
      }
    }
    binv_ = std::move(inv);
    updates_since_refactor_ = 0;
  }

  void recompute_values() {
    std::vector<double> resid = core_.b;
    for (int j = 0; j < core_.n; ++j) {
      if (in_basis_[static_cast<std::size_t>(j)]) continue;
      const double v = at_upper_[static_cast<std::size_t>(j)]
                           ? core_.hi[static_cast<std::size_t>(j)]
                           : core_.lo[static_cast<std::size_t>(j)];
      value_[static_cast<std::size_t>(j)] = v;
      if (v == 0.0) continue;
      for (const auto& [i, a] : core_.col[static_cast<std::size_t>(j)]) {
        resid[static_cast<std::size_t>(i)] -= a * v;
      }
    }
    for (int i = 0; i < core_.m; ++i) {
      double v = 0.0;
      for (int r = 0; r < core_.m; ++r) {
        v += binv_[static_cast<std::size_t>(i) * core_.m + r] * resid[static_cast<std::size_t>(r)];
      }
      value_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])] = v;
    }
  }

  std::vector<double> ftran(int j) const {
    std::vector<double> w(static_cast<std::size_t>(core_.m), 0.0);
    for (const auto& [i, a] : core_.col[static_cast<std::size_t>(j)]) {
      for (int r = 0; r < core_.m; ++r) {
        w[static_cast<std::size_t>(r)] += binv_[static_cast<std::size_t>(r) * core_.m + i] * a;
      }
    }
    return w;
  }

  SolveStatus iterate() {
    while (iterations_ < opt_.max_iterations) {
      const std::vector<double> y = duals();
      int enter = -1;
      double enter_score = 0.0;
      bool enter_from_upper = false;
      for (int j = 0; j < core_.n; ++j) {
        if (in_basis_[static_cast<std::size_t>(j)]) continue;
        if (core_.lo[static_cast<std::size_t>(j)] == core_.hi[static_cast<std::size_t>(j)]) {
          continue;  // fixed (includes retired artificials)
        }
        double d = core_.c[static_cast<std::size_t>(j)];
        for (const auto& [i, a] : core_.col[static_cast<std::size_t>(j)]) {
          d -= y[static_cast<std::size_t>(i)] * a;
        }
        const bool upper = at_upper_[static_cast<std::size_t>(j)] != 0;
        double score = 0.0;
        if (!upper && d < -kReducedTol) score = -d;
        if (upper && d > kReducedTol) score = d;
        if (score <= 0.0) continue;
        if (bland_) {
          enter = j;
          enter_from_upper = upper;
          break;
        }
        if (score > enter_score + 1e-15) {
          enter = j;
          enter_score = score;
          enter_from_upper = upper;
        }
      }
      if (enter < 0) return SolveStatus::optimal;

      const double sigma = enter_from_upper ? -1.0 : 1.0;
      const std::vector<double> w = ftran(enter);

      // Ratio test: step along sigma until a basic variable hits one of its
      // bounds or the entering variable flips to its other bound.
      double step =
          core_.hi[static_cast<std::size_t>(enter)] - core_.lo[static_cast<std::size_t>(enter)];
      int leave_row = -1;
      bool leave_to_upper = false;
      for (int i = 0; i < core_.m; ++i) {
        const double dir = sigma * w[static_cast<std::size_t>(i)];
        const int bi = basic_[static_cast<std::size_t>(i)];
        const double xv = value_[static_cast<std::size_t>(bi)];
        double cand;
        bool to_upper;
        if (dir > kPivotTol) {
          cand = (xv - core_.lo[static_cast<std::size_t>(bi)]) / dir;
          to_upper = false;
        } else if (dir < -kPivotTol && core_.hi[static_cast<std::size_t>(bi)] < kInf) {
          cand = (core_.hi[static_cast<std::size_t>(bi)] - xv) / (-dir);
          to_upper = true;
        } else {
          continue;
        }
        if (cand < 0.0) cand = 0.0;
        if (cand < step - 1e-12) {
          step = cand;
          leave_row = i;
          leave_to_upper = to_upper;
        } else if (leave_row >= 0 && cand < step + 1e-12) {
          const int cur = basic_[static_cast<std::size_t>(leave_row)];
          const bool take = bland_ ? bi < cur
                                   : std::fabs(w[static_cast<std::size_t>(i)]) >
                                         std::fabs(w[static_cast<std::size_t>(leave_row)]) + 1e-15;
          if (take) {
            leave_row = i;
            leave_to_upper = to_upper;
          }
        }
      }
      if (!(step < kInf)) return SolveStatus::unbounded;

      ++iterations_;
      if (step <= kDegenerateStep) {
        if (++degenerate_run_ > kBlandTrigger && !bland_) {
          bland_ = true;
          used_bland_ = true;
        }
      } else {
        degenerate_run_ = 0;
        bland_ = false;
      }

      if (step != 0.0) {
        for (int i = 0; i < core_.m; ++i) {
          const int bi = basic_[static_cast<std::size_t>(i)];
          value_[static_cast<std::size_t>(bi)] -= sigma * step * w[static_cast<std::size_t>(i)];
        }
        value_[static_cast<std::size_t>(enter)] += sigma * step;
      }

      if (leave_row < 0) {
        // Bound flip; basis unchanged.
        at_upper_[static_cast<std::size_t>(enter)] = enter_from_upper ? 0 : 1;
        value_[static_cast<std::size_t>(enter)] = enter_from_upper
                                                      ? core_.lo[static_cast<std::size_t>(enter)]
                                                      : core_.hi[static_cast<std::size_t>(enter)];
        continue;
      }

      const int leaving = basic_[static_cast<std::size_t>(leave_row)];
      in_basis_[static_cast<std::size_t>(leaving)] = 0;
      at_upper_[static_cast<std::size_t>(leaving)] = leave_to_upper ? 1 : 0;
      value_[static_cast<std::size_t>(leaving)] =
          leave_to_upper ? core_.hi[static_cast<std::size_t>(leaving)]
                         : core_.lo[static_cast<std::size_t>(leaving)];
      basic_[static_cast<std::size_t>(leave_row)] = enter;
      in_basis_[static_cast<std::size_t>(enter)] = 1;

      update_inverse(w, leave_row);
      if (++updates_since_refactor_ >= kRefactorEvery) {
        refactor();
        recompute_values();
      }
    }
    return SolveStatus::iteration_limit;
  }

  void update_inverse(const std::vector<double>& w, int leave_row) {
    const double piv = w[static_cast<std::size_t>(leave_row)];
    for (int j = 0; j < core_.m; ++j) {
      binv_[static_cast<std::size_t>(leave_row) * core_.m + j] /= piv;
    }
    for (int i = 0; i < core_.m; ++i) {
      if (i == leave_row) continue;
      const double f = w[static_cast<std::size_t>(i)];
      if (f == 0.0) continue;
      for (int j = 0; j < core_.m; ++j) {
        binv_[static_cast<std::size_t>(i) * core_.m + j] -=
            f * binv_[static_cast<std::size_t>(leave_row) * core_.m + j];
      }
    }
  }

  void pivot_out_artificials() {
    for (int i = 0; i < core_.m; ++i) {
      if (basic_[static_cast<std::size_t>(i)] < art_base_) continue;
      int enter = -1;
      double best = 0.0;
      for (int j = 0; j < art_base_; ++j) {
        if (in_basis_[static_cast<std::size_t>(j)]) continue;
        double elem = 0.0;
        for (const auto& [r, a] : core_.col[static_cast<std::size_t>(j)]) {
          elem += binv_[static_cast<std::size_t>(i) * core_.m + r] * a;
        }
        if (std::fabs(elem) > std::fabs(best) + 1e-12) {
          best = elem;
          enter = j;
        }
      }
      if (enter < 0 || std::fabs(best) < 1e-8) continue;  // redundant row
      const std::vector<double> w = ftran(enter);
      const int leaving = basic_[static_cast<std::size_t>(i)];
      in_basis_[static_cast<std::size_t>(leaving)] = 0;
      at_upper_[static_cast<std::size_t>(leaving)] = 0;
      value_[static_cast<std::size_t>(leaving)] = 0.0;
      basic_[static_cast<std::size_t>(i)] = enter;
      in_basis_[static_cast<std::size_t>(enter)] = 1;
      update_inverse(w, i);
      recompute_values();
    }
  }
};

SolveResult extract(const Core& shape, Engine& eng, SolveStatus st) {
  SolveResult res;
  res.status = st;
  res.iterations = eng.iterations();
  res.used_fallback = eng.used_bland();
  if (st != SolveStatus::optimal) return res;
  const auto& v = eng.values();
  res.x.assign(static_cast<std::size_t>(shape.user_vars), 0.0);
  for (int j = 0; j < shape.user_vars; ++j) {
    const auto& bm = shape.back[static_cast<std::size_t>(j)];
    double val = bm.offset + bm.sign * v[static_cast<std::size_t>(bm.plus)];
    if (bm.minus >= 0) val -= v[static_cast<std::size_t>(bm.minus)];
    res.x[static_cast<std::size_t>(j)] = val;
  }
  res.objective = shape.sense_sign * (eng.core_objective() + shape.constant);
  const auto y = eng.duals();
  res.duals.assign(y.size(), 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) res.duals[i] = shape.sense_sign * y[i];
  return res;
}

}  // namespace

SolveResult solve_lp(const LinearModel& model, const SimplexOptions& opt) {
  return solve_lp_with_bounds(model, model.lo, model.hi, opt);
}

SolveResult solve_lp_with_bounds(const LinearModel& model, const std::vector<double>& lo,
                                 const std::vector<double>& hi, const SimplexOptions& opt) {
  Core core = build_core(model, lo, hi);
  Engine eng(core, opt);
  const SolveStatus st = eng.solve_from_scratch();
  return extract(core, eng, st);
}

struct IncrementalSimplex::Impl {
  LinearModel model;
  SimplexOptions opt;
  std::unique_ptr<Engine> engine;
  Core shape;

  void rebuild() {
    Core core = build_core(model, model.lo, model.hi);
    shape = core;
    engine = std::make_unique<Engine>(std::move(core), opt);
  }
};

IncrementalSimplex::IncrementalSimplex(const LinearModel& base, const SimplexOptions& opt)
    : impl_(std::make_unique<Impl>()) {
  impl_->model = base;
  impl_->opt = opt;
}

IncrementalSimplex::~IncrementalSimplex() = default;
IncrementalSimplex::IncrementalSimplex(IncrementalSimplex&&) noexcept = default;
IncrementalSimplex& IncrementalSimplex::operator=(IncrementalSimplex&&) noexcept = default;

int IncrementalSimplex::num_vars() const { return impl_->model.num_vars(); }

int IncrementalSimplex::add_column(double cost,
                                   const std::vector<std::pair<int, double>>& row_coeffs,
                                   double lower, double upper) {
  if (lower != 0.0) {
    throw ValidationError("incremental simplex: appended columns must have lower bound 0");
  }
  const int idx = impl_->model.add_var(lower, upper, cost);
  for (const auto& [row, a] : row_coeffs) {
    if (row < 0 || row >= impl_->model.num_rows()) {
      throw ValidationError("incremental simplex: column references unknown row");
    }
    impl_->model.rows[static_cast<std::size_t>(row)].terms.emplace_back(idx, a);
  }
  if (impl_->engine) {
    BackMap bm;
    bm.plus = impl_->engine->append_column(impl_->shape.sense_sign * cost, row_coeffs, 0.0, upper);
    impl_->shape.back.push_back(bm);
    impl_->shape.user_vars += 1;
  }
  return idx;
}

SolveResult IncrementalSimplex::solve() {
  if (!impl_->engine) {
    impl_->rebuild();
    const SolveStatus st = impl_->engine->solve_from_scratch();
    return extract(impl_->shape, *impl_->engine, st);
  }
  try {
    const SolveStatus st = impl_->engine->resolve();
    return extract(impl_->shape, *impl_->engine, st);
  } catch (const ValidationError&) {
    impl_->rebuild();
    const SolveStatus st = impl_->engine->solve_from_scratch();
    return extract(impl_->shape, *impl_->engine, st);
  }
}

}  // namespace hcr::optim
