#include "hcr/layout.hpp"

#include <algorithm>

namespace hcr {

StateSpace::StateSpace(const ProblemInstance& inst)
    : T_(inst.horizon), K_(inst.K()), L_(inst.L()) {
  max_j_ = 1;
  for (const auto& s : inst.types) max_j_ = std::max(max_j_, s.max_visits());

  x_lookup_.assign(static_cast<std::size_t>(T_) * K_ * L_ * max_j_, -1);
  n_lookup_.assign(static_cast<std::size_t>(T_) * K_ * L_, -1);

  for (int t = 1; t <= T_; ++t) {
    for (int k = 0; k < K_; ++k) {
      const auto& svc = inst.types[static_cast<std::size_t>(k)];
      for (int l = 0; l < L_; ++l) {
        for (int j = 0; j < svc.max_visits(); ++j) {
          const bool live = (j >= 1 && t <= svc.h) || (j == 0 && t <= svc.wait_target - 1);
          if (!live) continue;
          const std::size_t flat =
              ((static_cast<std::size_t>(t - 1) * K_ + k) * L_ + l) * max_j_ + j;
          x_lookup_[flat] = static_cast<int>(x_keys_.size());
          x_keys_.push_back({t, k, l, j});
        }
        if (t <= svc.wait_target) {
          const std::size_t flat = (static_cast<std::size_t>(t - 1) * K_ + k) * L_ + l;
          n_lookup_[flat] = static_cast<int>(n_keys_.size());
          n_keys_.push_back({t, k, l});
        }
      }
    }
  }
}

int StateSpace::x_index(int t, int k, int l, int j) const {
  if (t < 1 || t > T_ || k < 0 || k >= K_ || l < 0 || l >= L_ || j < 0 || j >= max_j_) return -1;
  return x_lookup_[((static_cast<std::size_t>(t - 1) * K_ + k) * L_ + l) * max_j_ + j];
}

int StateSpace::n_index(int t, int k, int l) const {
  if (t < 1 || t > T_ || k < 0 || k >= K_ || l < 0 || l >= L_) return -1;
  return n_lookup_[(static_cast<std::size_t>(t - 1) * K_ + k) * L_ + l];
}

}  // namespace hcr
