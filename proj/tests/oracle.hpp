// Independent reference solvers used only by tests. Deliberately simple and
// slow: a dense full-tableau two-phase simplex with Bland's rule (upper
// bounds handled as explicit rows), exhaustive integer enumeration for MIPs,
// and permutation search for tours. Kept free of any production solver code
// so the two implementations can cross-check each other.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "hcr/linear_model.hpp"

namespace oracle {

enum class Status { optimal, infeasible, unbounded };

struct Result {
  Status status = Status::optimal;
  double objective = 0.0;
  std::vector<double> x;
};

namespace detail {

constexpr double kTol = 1e-9;

struct Standard {
  // min c'u, A u = b, u >= 0; mapping back to original variables.
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<double> c;
  double constant = 0.0;
  int orig_vars = 0;
  // per original var: (u index, +1) or (u index, -1 with offset) or split pair
  struct BackMap {
    int plus = -1, minus = -1;
    double offset = 0.0, sign = 1.0;
  };
  std::vector<BackMap> back;
};

inline Standard standardize(const hcr::optim::LinearModel& m) {
  using hcr::optim::Rel;
  const double inf = std::numeric_limits<double>::infinity();
  Standard s;
  s.orig_vars = m.num_vars();
  s.back.resize(m.num_vars());
  std::vector<std::vector<std::pair<int, double>>> cols(m.num_vars());

  const double sense = m.sense == hcr::optim::Sense::minimize ? 1.0 : -1.0;

  // Working rows: pair of (terms over u, rel, rhs).
  struct WRow {
    std::vector<std::pair<int, double>> terms;
    Rel rel;
    double rhs;
  };
  std::vector<WRow> wrows;
  for (const auto& row : m.rows) {
    wrows.push_back({{}, row.rel, row.rhs});
  }

  int u_count = 0;
  for (int j = 0; j < m.num_vars(); ++j) {
    const double lo = m.lo[j], hi = m.hi[j];
    auto& bm = s.back[static_cast<std::size_t>(j)];
    if (lo > -inf) {
      bm.plus = u_count++;
      bm.offset = lo;
      bm.sign = 1.0;
      if (hi < inf) wrows.push_back({{{bm.plus, 1.0}}, Rel::le, hi - lo});
    } else if (hi < inf) {
      bm.plus = u_count++;
      bm.offset = hi;
      bm.sign = -1.0;
    } else {
      bm.plus = u_count++;
      bm.minus = u_count++;
      bm.offset = 0.0;
      bm.sign = 1.0;
    }
  }

  s.c.assign(static_cast<std::size_t>(u_count), 0.0);
  for (int j = 0; j < m.num_vars(); ++j) {
    const auto& bm = s.back[static_cast<std::size_t>(j)];
    const double cj = sense * m.obj[j];
    s.constant += cj * bm.offset;
    s.c[static_cast<std::size_t>(bm.plus)] += cj * bm.sign;
    if (bm.minus >= 0) s.c[static_cast<std::size_t>(bm.minus)] -= cj;
  }
  s.constant += sense * m.objective_constant;

  // Expand model rows into u-space.
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    for (const auto& [j, aij] : m.rows[i].terms) {
      const auto& bm = s.back[static_cast<std::size_t>(j)];
      wrows[i].rhs -= aij * bm.offset;
      wrows[i].terms.emplace_back(bm.plus, aij * bm.sign);
      if (bm.minus >= 0) wrows[i].terms.emplace_back(bm.minus, -aij);
    }
  }

  // Equalities with slack columns appended.
  for (auto& wr : wrows) {
    std::vector<double> dense(static_cast<std::size_t>(u_count), 0.0);
    for (const auto& [u, a] : wr.terms) dense[static_cast<std::size_t>(u)] += a;
    if (wr.rel == Rel::le) {
      dense.push_back(1.0);
      s.c.push_back(0.0);
      ++u_count;
    } else if (wr.rel == Rel::ge) {
      dense.push_back(-1.0);
      s.c.push_back(0.0);
      ++u_count;
    }
    // Align earlier rows with the new column count.
    for (auto& prev : s.a) prev.resize(static_cast<std::size_t>(u_count), 0.0);
    dense.resize(static_cast<std::size_t>(u_count), 0.0);
    s.a.push_back(std::move(dense));
    s.b.push_back(wr.rhs);
  }
  for (auto& row : s.a) row.resize(static_cast<std::size_t>(u_count), 0.0);
  return s;
}

// Full-tableau simplex with Bland's rule on min c'u, Au = b, u >= 0.
// Returns status; on optimal fills u.
inline Status tableau_solve(std::vector<std::vector<double>> a, std::vector<double> b,
                            std::vector<double> c, std::vector<double>& u_out,
                            double& obj_out) {
  const int m = static_cast<int>(a.size());
  int n = m == 0 ? 0 : static_cast<int>(a[0].size());
  for (int i = 0; i < m; ++i) {
    if (b[static_cast<std::size_t>(i)] < 0) {
      b[static_cast<std::size_t>(i)] = -b[static_cast<std::size_t>(i)];
      for (auto& v : a[static_cast<std::size_t>(i)]) v = -v;
    }
  }
  // Append artificials.
  std::vector<int> basis(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    for (int r = 0; r < m; ++r) {
      a[static_cast<std::size_t>(r)].push_back(r == i ? 1.0 : 0.0);
    }
    basis[static_cast<std::size_t>(i)] = n + i;
  }
  const int total = n + m;

  // Bland-rule simplex over columns [0, allowed): entering variables are
  // restricted so phase 2 can shut artificials out.
  auto run = [&](const std::vector<double>& cost, int allowed) -> Status {
    for (long guard = 0; guard < 200000; ++guard) {
      int enter = -1;
      for (int j = 0; j < allowed; ++j) {
        double v = cost[static_cast<std::size_t>(j)];
        for (int i = 0; i < m; ++i) {
          v -= cost[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] *
               a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        if (v < -kTol) {
          enter = j;
          break;  // Bland: lowest index
        }
      }
      if (enter < 0) return Status::optimal;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double aij = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
        if (aij > kTol) {
          const double ratio = b[static_cast<std::size_t>(i)] / aij;
          if (ratio < best - kTol ||
              (ratio < best + kTol &&
               (leave < 0 || basis[static_cast<std::size_t>(i)] <
                                 basis[static_cast<std::size_t>(leave)]))) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return Status::unbounded;
      // Pivot.
      const double piv = a[static_cast<std::size_t>(leave)][static_cast<std::size_t>(enter)];
      for (auto& v : a[static_cast<std::size_t>(leave)]) v /= piv;
      b[static_cast<std::size_t>(leave)] /= piv;
      for (int i = 0; i < m; ++i) {
        if (i == leave) continue;
        const double f = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
        if (f == 0.0) continue;
        for (int j = 0; j < total; ++j) {
          a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
              f * a[static_cast<std::size_t>(leave)][static_cast<std::size_t>(j)];
        }
        b[static_cast<std::size_t>(i)] -= f * b[static_cast<std::size_t>(leave)];
      }
      basis[static_cast<std::size_t>(leave)] = enter;
    }
    return Status::unbounded;  // iteration guard tripped; should not happen with Bland
  };

  // Phase 1.
  std::vector<double> phase1(static_cast<std::size_t>(total), 0.0);
  for (int j = n; j < total; ++j) phase1[static_cast<std::size_t>(j)] = 1.0;
  if (run(phase1, total) == Status::unbounded) return Status::infeasible;
  double art = 0.0;
  for (int i = 0; i < m; ++i) {
    if (basis[static_cast<std::size_t>(i)] >= n) art += b[static_cast<std::size_t>(i)];
  }
  if (art > 1e-7) return Status::infeasible;
  // Pivot basic artificials out where possible.
  for (int i = 0; i < m; ++i) {
    if (basis[static_cast<std::size_t>(i)] < n) continue;
    int enter = -1;
    for (int j = 0; j < n; ++j) {
      if (std::fabs(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) > 1e-8) {
        enter = j;
        break;
      }
    }
    if (enter < 0) continue;  // redundant row, harmless
    const double piv = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
    for (auto& v : a[static_cast<std::size_t>(i)]) v /= piv;
    b[static_cast<std::size_t>(i)] /= piv;
    for (int r = 0; r < m; ++r) {
      if (r == i) continue;
      const double f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(enter)];
      if (f == 0.0) continue;
      for (int j = 0; j < total; ++j) {
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -=
            f * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(i)];
    }
    basis[static_cast<std::size_t>(i)] = enter;
  }

  // Phase 2: artificials are barred from entering; any still basic sit at
  // value 0 in redundant rows and are priced at 0.
  std::vector<double> phase2(static_cast<std::size_t>(total), 0.0);
  for (int j = 0; j < n; ++j) phase2[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)];
  const Status st = run(phase2, n);
  if (st != Status::optimal) return st;

  u_out.assign(static_cast<std::size_t>(n), 0.0);
  obj_out = 0.0;
  for (int i = 0; i < m; ++i) {
    if (basis[static_cast<std::size_t>(i)] < n) {
      u_out[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] =
          b[static_cast<std::size_t>(i)];
    }
  }
  for (int j = 0; j < n; ++j) {
    obj_out += c[static_cast<std::size_t>(j)] * u_out[static_cast<std::size_t>(j)];
  }
  return Status::optimal;
}

}  // namespace detail

/// Reference LP solve. Result objective is in the model's own sense.
inline Result solve_lp(const hcr::optim::LinearModel& m) {
  detail::Standard s = detail::standardize(m);
  Result r;
  std::vector<double> u;
  double obj = 0.0;
  const auto st = detail::tableau_solve(s.a, s.b, s.c, u, obj);
  if (st != Status::optimal) {
    r.status = st;
    return r;
  }
  r.status = Status::optimal;
  const double sense = m.sense == hcr::optim::Sense::minimize ? 1.0 : -1.0;
  r.objective = sense * (obj + s.constant);
  r.x.assign(static_cast<std::size_t>(m.num_vars()), 0.0);
  for (int j = 0; j < m.num_vars(); ++j) {
    const auto& bm = s.back[static_cast<std::size_t>(j)];
    double v = bm.offset + bm.sign * u[static_cast<std::size_t>(bm.plus)];
    if (bm.minus >= 0) v -= u[static_cast<std::size_t>(bm.minus)];
    r.x[static_cast<std::size_t>(j)] = v;
  }
  return r;
}

/// Reference MIP solve by exhaustive enumeration of all integer variables
/// (bounds must be finite; the scan is capped at `max_points` assignments).
inline Result solve_mip_enumerate(const hcr::optim::LinearModel& m,
                                  long long max_points = 4'000'000) {
  std::vector<int> ivars;
  for (int j = 0; j < m.num_vars(); ++j) {
    if (m.is_integer[j]) ivars.push_back(j);
  }
  long long points = 1;
  for (int j : ivars) {
    const double lo = std::ceil(m.lo[j] - 1e-9), hi = std::floor(m.hi[j] + 1e-9);
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      throw std::invalid_argument("enumeration oracle needs finite integer bounds");
    }
    points *= static_cast<long long>(hi - lo + 1);
    if (points > max_points) throw std::invalid_argument("enumeration oracle: too many points");
  }

  Result best;
  best.status = Status::infeasible;
  const double sign = m.sense == hcr::optim::Sense::minimize ? 1.0 : -1.0;

  std::vector<long long> value(ivars.size());
  std::function<void(std::size_t, hcr::optim::LinearModel&)> rec =
      [&](std::size_t pos, hcr::optim::LinearModel& fixed) {
        if (pos == ivars.size()) {
          const Result sub = oracle::solve_lp(fixed);
          if (sub.status != Status::optimal) return;
          if (best.status != Status::optimal ||
              sign * sub.objective < sign * best.objective - 1e-12) {
            best = sub;
          }
          return;
        }
        const int j = ivars[pos];
        const long long lo = static_cast<long long>(std::ceil(m.lo[j] - 1e-9));
        const long long hi = static_cast<long long>(std::floor(m.hi[j] + 1e-9));
        for (long long v = lo; v <= hi; ++v) {
          fixed.lo[j] = fixed.hi[j] = static_cast<double>(v);
          rec(pos + 1, fixed);
        }
        fixed.lo[j] = m.lo[j];
        fixed.hi[j] = m.hi[j];
      };
  hcr::optim::LinearModel scratch = m;
  rec(0, scratch);
  return best;
}

/// Shortest depot-anchored tour over nodes 1..n by permutation search
/// (n <= 8). d(i, j) with node 0 = depot.
inline double best_tour_brute(int n, const std::function<double(int, int)>& d) {
  if (n == 0) return 0.0;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  double best = std::numeric_limits<double>::infinity();
  do {
    double len = d(0, perm.front());
    for (int i = 0; i + 1 < n; ++i) {
      len += d(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(i) + 1]);
    }
    len += d(perm.back(), 0);
    best = std::min(best, len);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace oracle
