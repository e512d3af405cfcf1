#include "hcr/linear_model.hpp"

#include <cmath>
#include <sstream>

namespace hcr::optim {

int LinearModel::add_var(double lower, double upper, double cost, bool integer,
                         std::string name) {
  lo.push_back(lower);
  hi.push_back(upper);
  obj.push_back(cost);
  is_integer.push_back(integer ? 1 : 0);
  var_names.push_back(std::move(name));
  return num_vars() - 1;
}

int LinearModel::add_row(std::vector<std::pair<int, double>> terms, Rel rel, double rhs,
                         std::string name) {
  rows.push_back(Row{std::move(terms), rel, rhs, std::move(name)});
  return num_rows() - 1;
}

void LinearModel::validate() const {
  const int n = num_vars();
  for (int j = 0; j < n; ++j) {
    if (std::isnan(lo[j]) || std::isnan(hi[j]) || lo[j] > hi[j]) {
      throw ValidationError("model: inconsistent bounds on variable " + std::to_string(j));
    }
    if (!std::isfinite(obj[j])) {
      throw ValidationError("model: non-finite objective coefficient on variable " +
                            std::to_string(j));
    }
  }
  for (const auto& row : rows) {
    if (!std::isfinite(row.rhs)) throw ValidationError("model: non-finite right-hand side");
    for (const auto& [j, a] : row.terms) {
      if (j < 0 || j >= n) throw ValidationError("model: row references unknown variable");
      if (!std::isfinite(a)) throw ValidationError("model: non-finite row coefficient");
    }
  }
}

double LinearModel::objective_value(const std::vector<double>& x) const {
  double v = objective_constant;
  for (int j = 0; j < num_vars(); ++j) v += obj[j] * x[static_cast<std::size_t>(j)];
  return v;
}

double LinearModel::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (int j = 0; j < num_vars(); ++j) {
    worst = std::max(worst, lo[j] - x[static_cast<std::size_t>(j)]);
    worst = std::max(worst, x[static_cast<std::size_t>(j)] - hi[j]);
  }
  for (const auto& row : rows) {
    double lhs = 0.0;
    for (const auto& [j, a] : row.terms) lhs += a * x[static_cast<std::size_t>(j)];
    switch (row.rel) {
      case Rel::le: worst = std::max(worst, lhs - row.rhs); break;
      case Rel::ge: worst = std::max(worst, row.rhs - lhs); break;
      case Rel::eq: worst = std::max(worst, std::fabs(lhs - row.rhs)); break;
    }
  }
  return worst;
}

std::string LinearModel::to_lp_format() const {
  std::ostringstream os;
  auto vname = [&](int j) {
    return var_names[static_cast<std::size_t>(j)].empty()
               ? "x" + std::to_string(j)
               : var_names[static_cast<std::size_t>(j)];
  };
  os << (sense == Sense::minimize ? "Minimize\n obj:" : "Maximize\n obj:");
  for (int j = 0; j < num_vars(); ++j) {
    if (obj[j] == 0) continue;
    os << (obj[j] >= 0 ? " + " : " - ") << std::fabs(obj[j]) << " " << vname(j);
  }
  os << "\nSubject To\n";
  for (int i = 0; i < num_rows(); ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    os << " " << (row.name.empty() ? "c" + std::to_string(i) : row.name) << ":";
    for (const auto& [j, a] : row.terms) {
      os << (a >= 0 ? " + " : " - ") << std::fabs(a) << " " << vname(j);
    }
    switch (row.rel) {
      case Rel::le: os << " <= "; break;
      case Rel::ge: os << " >= "; break;
      case Rel::eq: os << " = "; break;
    }
    os << row.rhs << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < num_vars(); ++j) {
    os << " " << lo[j] << " <= " << vname(j) << " <= " << hi[j] << "\n";
  }
  if (!is_integer.empty()) {
    bool any = false;
    for (auto b : is_integer) any = any || b;
    if (any) {
      os << "General\n";
      for (int j = 0; j < num_vars(); ++j) {
        if (is_integer[j]) os << " " << vname(j);
      }
      os << "\n";
    }
  }
  os << "End\n";
  return os.str();
}

}  // namespace hcr::optim
