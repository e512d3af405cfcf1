#pragma once

#include <vector>

#include "hcr/instance.hpp"

namespace hcr {

/// Key of one booked-visit slot: visits of type k in region l scheduled
/// t days ahead (t = 1 is today) for patients who have completed j visits.
struct XKey {
  int t, k, l, j;
};

/// Key of one assignment slot: referrals of type k in region l assigned to
/// start on day t (1 <= t <= wait target of k).
struct NKey {
  int t, k, l;
};

/// Dense indexer over the structurally meaningful part of the state.
///
/// A booked-visit coordinate (t,k,l,j) is live when (j >= 1 and t <= h_k) or
/// (j = 0 and t <= T_k - 1); every other coordinate is identically zero in
/// any reachable state and is excluded from the layout.
class StateSpace {
 public:
  explicit StateSpace(const ProblemInstance& inst);

  int horizon() const { return T_; }
  int K() const { return K_; }
  int L() const { return L_; }
  int max_j() const { return max_j_; }

  int x_size() const { return static_cast<int>(x_keys_.size()); }
  int n_size() const { return static_cast<int>(n_keys_.size()); }
  int kl_size() const { return K_ * L_; }

  /// Slot index of (t,k,l,j), or -1 when the coordinate is structurally zero.
  int x_index(int t, int k, int l, int j) const;
  /// Slot index of assignment (t,k,l), or -1 when t exceeds the wait target.
  int n_index(int t, int k, int l) const;
  int kl_index(int k, int l) const { return k * L_ + l; }

  bool x_live(int t, int k, int l, int j) const { return x_index(t, k, l, j) >= 0; }

  const std::vector<XKey>& x_keys() const { return x_keys_; }
  const std::vector<NKey>& n_keys() const { return n_keys_; }

 private:
  int T_, K_, L_, max_j_;
  std::vector<XKey> x_keys_;
  std::vector<NKey> n_keys_;
  std::vector<int> x_lookup_;  // dense (t,k,l,j) -> slot or -1
  std::vector<int> n_lookup_;  // dense (t,k,l) -> slot or -1
};

}  // namespace hcr
