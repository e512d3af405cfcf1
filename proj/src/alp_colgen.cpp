#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hcr/alp.hpp"
#include "hcr/common.hpp"
#include "hcr/simplex.hpp"

namespace hcr::alp {

namespace {

struct MasterLayout {
  int eta_row = -1;
  std::vector<int> tau_rows;  ///< per slot, or per (k,l) when aggregated
  std::vector<int> rho_rows;  ///< per (k,l)
  bool aggregated = false;
};

std::vector<std::pair<int, double>> master_coefficients(
    const Column& col, const MasterLayout& lay, const StateSpace& space, double gamma,
    const std::vector<std::vector<std::vector<double>>>& delta) {
  std::vector<std::pair<int, double>> coeffs;
  coeffs.emplace_back(lay.eta_row, 1.0 - gamma);
  if (!lay.aggregated) {
    for (int i = 0; i < space.x_size(); ++i) {
      const double c = col.x_coeff[static_cast<std::size_t>(i)];
      if (c != 0.0) coeffs.emplace_back(lay.tau_rows[static_cast<std::size_t>(i)], c);
    }
  } else {
    std::vector<double> agg(static_cast<std::size_t>(space.kl_size()), 0.0);
    for (int i = 0; i < space.x_size(); ++i) {
      const XKey key = space.x_keys()[static_cast<std::size_t>(i)];
      agg[static_cast<std::size_t>(space.kl_index(key.k, key.l))] +=
          delta[static_cast<std::size_t>(key.k)][static_cast<std::size_t>(key.t)]
               [static_cast<std::size_t>(key.j)] *
          col.x_coeff[static_cast<std::size_t>(i)];
    }
    for (int kl = 0; kl < space.kl_size(); ++kl)
      if (agg[static_cast<std::size_t>(kl)] != 0.0)
        coeffs.emplace_back(lay.tau_rows[static_cast<std::size_t>(kl)],
                            agg[static_cast<std::size_t>(kl)]);
  }
  for (int kl = 0; kl < space.kl_size(); ++kl) {
    const double c = col.y_coeff[static_cast<std::size_t>(kl)];
    if (c != 0.0) coeffs.emplace_back(lay.rho_rows[static_cast<std::size_t>(kl)], c);
  }
  return coeffs;
}

std::string column_signature(const Column& col) {
  std::ostringstream sig;
  sig.precision(10);
  sig << col.cost;
  for (double v : col.x_coeff) sig << ',' << v;
  for (double v : col.y_coeff) sig << ';' << v;
  return sig.str();
}

ColumnGenResult run_column_generation(const ProblemInstance& inst, const StateSpace& space,
                                      const StateRelevanceWeights& weights, Variant inner,
                                      const ColumnGenOptions& opts) {
  const double g = inst.gamma;
  MasterLayout lay;
  lay.aggregated = inner == Variant::two_i;

  std::vector<std::vector<std::vector<double>>> delta;
  if (lay.aggregated) {
    delta.reserve(static_cast<std::size_t>(inst.K()));
    for (int k = 0; k < inst.K(); ++k) delta.push_back(delta_coefficients(inst, k));
  }

  const Column first = initial_column(inst, space, weights);

  optim::LinearModel master;
  master.sense = optim::Sense::minimize;
  const int v0 = master.add_var(0.0, kInf, first.cost, false, "col0");
  lay.eta_row = master.add_row({{v0, 1.0 - g}}, optim::Rel::eq, 1.0, "normalize");
  if (!lay.aggregated) {
    lay.tau_rows.resize(static_cast<std::size_t>(space.x_size()));
    for (int i = 0; i < space.x_size(); ++i)
      lay.tau_rows[static_cast<std::size_t>(i)] =
          master.add_row({{v0, first.x_coeff[static_cast<std::size_t>(i)]}}, optim::Rel::ge,
                         weights.x[static_cast<std::size_t>(i)]);
  } else {
    lay.tau_rows.resize(static_cast<std::size_t>(space.kl_size()));
    std::vector<double> coeff(static_cast<std::size_t>(space.kl_size()), 0.0);
    std::vector<double> rhs(static_cast<std::size_t>(space.kl_size()), 0.0);
    for (int i = 0; i < space.x_size(); ++i) {
      const XKey key = space.x_keys()[static_cast<std::size_t>(i)];
      const int kl = space.kl_index(key.k, key.l);
      const double d = delta[static_cast<std::size_t>(key.k)][static_cast<std::size_t>(key.t)]
                            [static_cast<std::size_t>(key.j)];
      coeff[static_cast<std::size_t>(kl)] += d * first.x_coeff[static_cast<std::size_t>(i)];
      rhs[static_cast<std::size_t>(kl)] += d * weights.x[static_cast<std::size_t>(i)];
    }
    for (int kl = 0; kl < space.kl_size(); ++kl)
      lay.tau_rows[static_cast<std::size_t>(kl)] =
          master.add_row({{v0, coeff[static_cast<std::size_t>(kl)]}}, optim::Rel::ge,
                         rhs[static_cast<std::size_t>(kl)]);
  }
  lay.rho_rows.resize(static_cast<std::size_t>(space.kl_size()));
  for (int kl = 0; kl < space.kl_size(); ++kl)
    lay.rho_rows[static_cast<std::size_t>(kl)] =
        master.add_row({{v0, first.y_coeff[static_cast<std::size_t>(kl)]}}, optim::Rel::ge,
                       weights.y[static_cast<std::size_t>(kl)]);

  optim::IncrementalSimplex simplex(master);
  std::set<std::string> seen{column_signature(first)};

  ColumnGenResult out;
  out.params.tau.assign(static_cast<std::size_t>(space.x_size()), 0.0);
  out.params.rho.assign(static_cast<std::size_t>(space.kl_size()), 0.0);
  out.columns = 1;
  long mip_nodes = opts.mip_max_nodes;

  while (true) {
    const optim::SolveResult res = simplex.solve();
    if (res.status != optim::SolveStatus::optimal) {
      std::ostringstream msg;
      msg << "restricted master LP did not solve to optimality (status "
          << static_cast<int>(res.status) << " at " << out.columns << " columns)";
      throw ValidationError(msg.str());
    }
    ++out.iterations;
    out.master_objective = res.objective;

    out.params.eta = res.duals[static_cast<std::size_t>(lay.eta_row)];
    if (!lay.aggregated) {
      for (int i = 0; i < space.x_size(); ++i)
        out.params.tau[static_cast<std::size_t>(i)] = std::max(
            0.0, res.duals[static_cast<std::size_t>(lay.tau_rows[static_cast<std::size_t>(i)])]);
    } else {
      for (int i = 0; i < space.x_size(); ++i) {
        const XKey key = space.x_keys()[static_cast<std::size_t>(i)];
        const int kl = space.kl_index(key.k, key.l);
        const double base = std::max(
            0.0, res.duals[static_cast<std::size_t>(lay.tau_rows[static_cast<std::size_t>(kl)])]);
        out.params.tau[static_cast<std::size_t>(i)] =
            delta[static_cast<std::size_t>(key.k)][static_cast<std::size_t>(key.t)]
                 [static_cast<std::size_t>(key.j)] *
            base;
      }
    }
    for (int kl = 0; kl < space.kl_size(); ++kl)
      out.params.rho[static_cast<std::size_t>(kl)] = std::max(
          0.0, res.duals[static_cast<std::size_t>(lay.rho_rows[static_cast<std::size_t>(kl)])]);

    SubproblemModel sub = build_subproblem(out.params, weights, inst,
                                           lay.aggregated ? Variant::two_i : Variant::full);
    std::vector<double> warm(static_cast<std::size_t>(sub.model.num_vars()), 0.0);
    for (int l = 0; l < inst.L(); ++l)
      warm[static_cast<std::size_t>(sub.f_var[static_cast<std::size_t>(l)])] =
          inst.geo.depot_dist(l);
    optim::MipOptions mip_opts;
    mip_opts.max_nodes = mip_nodes;
    mip_opts.initial_solution = &warm;
    const optim::SolveResult priced = optim::solve_mip(sub.model, mip_opts);
    if (priced.status != optim::SolveStatus::optimal &&
        priced.status != optim::SolveStatus::node_limit)
      throw ValidationError("pricing subproblem did not solve");

    if (priced.objective >= -opts.tolerance) {
      if (priced.status == optim::SolveStatus::optimal) {
        out.converged = true;
        break;
      }
      // The node budget ran out before proving anything better exists;
      // retry with more head-room a few times before accepting the result.
      if (mip_nodes < 16 * opts.mip_max_nodes) {
        mip_nodes *= 4;
        continue;
      }
      out.converged = false;
      break;
    }

    const Column col = decode_subproblem(sub, inst, space, priced.x);
    if (!seen.insert(column_signature(col)).second) {
      if (priced.objective < -1e-4)
        throw ValidationError("column generation stalled on a repeated column");
      out.converged = true;  // re-priced an existing column within noise
      break;
    }
    if (out.columns + 1 > opts.max_columns) {
      std::ostringstream msg;
      msg << "column budget of " << opts.max_columns << " exceeded before convergence";
      throw ValidationError(msg.str());
    }
    simplex.add_column(col.cost, master_coefficients(col, lay, space, g, delta), 0.0, kInf);
    ++out.columns;
  }
  return out;
}

}  // namespace

ColumnGenResult column_generation(const ProblemInstance& inst, double epsilon, Variant variant,
                                  const ColumnGenOptions& opts) {
  if (epsilon < 0.0) throw ValidationError("relevance weight epsilon must be nonnegative");
  const auto started = std::chrono::steady_clock::now();

  ColumnGenResult out;
  if (variant == Variant::one_d || variant == Variant::one_d_two_i) {
    const Projection1D proj = project_to_1d(inst);
    const StateSpace proxy_space(proj.proxy);
    StateRelevanceWeights w = StateRelevanceWeights::uniform(proj.proxy, proxy_space, epsilon);
    for (int i = 0; i < proxy_space.x_size(); ++i) {
      const XKey key = proxy_space.x_keys()[static_cast<std::size_t>(i)];
      w.x[static_cast<std::size_t>(i)] =
          epsilon *
          static_cast<double>(proj.members[static_cast<std::size_t>(key.l)].size());
    }
    const Variant inner =
        variant == Variant::one_d ? Variant::full : Variant::two_i;
    ColumnGenResult core = run_column_generation(proj.proxy, proxy_space, w, inner, opts);

    const StateSpace space(inst);
    out = core;
    out.params.tau.assign(static_cast<std::size_t>(space.x_size()), 0.0);
    out.params.rho.assign(static_cast<std::size_t>(space.kl_size()), 0.0);
    for (int i = 0; i < space.x_size(); ++i) {
      const XKey key = space.x_keys()[static_cast<std::size_t>(i)];
      const int proxy_idx = proxy_space.x_index(
          key.t, key.k, proj.class_of[static_cast<std::size_t>(key.l)], key.j);
      out.params.tau[static_cast<std::size_t>(i)] =
          core.params.tau[static_cast<std::size_t>(proxy_idx)];
    }
    for (int k = 0; k < inst.K(); ++k)
      for (int l = 0; l < inst.L(); ++l)
        out.params.rho[static_cast<std::size_t>(space.kl_index(k, l))] =
            core.params.rho[static_cast<std::size_t>(
                proxy_space.kl_index(k, proj.class_of[static_cast<std::size_t>(l)]))];
  } else {
    const StateSpace space(inst);
    const StateRelevanceWeights w = StateRelevanceWeights::uniform(inst, space, epsilon);
    out = run_column_generation(inst, space, w, variant, opts);
  }

  out.params.meta.variant = variant_name(variant);
  out.params.meta.epsilon = epsilon;
  out.params.meta.iterations = out.iterations;
  out.params.meta.columns = out.columns;
  out.params.meta.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

}  // namespace hcr::alp
