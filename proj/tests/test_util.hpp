#pragma once

#include <cmath>
#include <vector>

#include "fragtree/stats.hpp"

namespace testutil {

inline fragtree::RunningStats summarize(const std::vector<double>& xs) {
  fragtree::RunningStats st;
  for (double x : xs) st.add(x);
  return st;
}

/// |mean - ref| <= k se.
inline bool within_se(const fragtree::RunningStats& st, double ref, double k = 3.0) {
  return std::abs(st.mean() - ref) <= k * st.se();
}

/// Two independent means agree within k combined standard errors.
inline bool means_agree(const fragtree::RunningStats& a, const fragtree::RunningStats& b,
                        double k = 3.0) {
  return std::abs(a.mean() - b.mean()) <= k * std::hypot(a.se(), b.se());
}

}  // namespace testutil
