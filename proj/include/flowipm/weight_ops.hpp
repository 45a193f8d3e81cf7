#pragma once

#include <vector>

#include "flowipm/central_path.hpp"

namespace flowipm {

// Gap-preserving weight increase realizing a requested resistance increase:
// on the short side (say s+ <= s-) set w'+ = r' s+^2 and balance with
// w'- = w'+ s-/s+.  Guarantees w'+/s+ - w'-/s- = 0 (gaps unchanged),
// w'+ + w'- <= 4 U r' min(s+,s-), and a resistance increase of at least r'.
WeightVector compute_weights(const Graph& g, const Vec& f, const Vec& r_extra);

// Smallest nonnegative weights with the same per-edge gradient contribution
// w+/s+ - w-/s- as the input at flow f; exactly one side is zero per edge.
WeightVector reduce_weights(const Graph& g, const Vec& f, const WeightVector& w);

// Adds one-sided weight so each selected edge becomes exactly centered:
// for gap g_e >= 0 add w'+ = s+ g_e, otherwise w'- = -s- g_e.  The addition
// on edge e is at most 2 U |g_e|.
WeightVector perfect_center(const Graph& g, const IPMPoint& p,
                            const std::vector<int>& edges);

}  // namespace flowipm
