#pragma once

#include "hbn/core/matrix.hpp"

namespace hbn::ff {

// One-hot layout of the tabular side: season takes 2 slots, each coded
// symptom 3 (no / yes / unobserved), 11 dimensions in total. The optional
// interaction part holds the outer products of the one-hot blocks for every
// variable pair, triple and the quadruple, blocks ordered lexicographically
// by variable tuple and row-major inside: 45 + 81 + 54 = 180 dimensions.
inline constexpr std::size_t kBaseDims = 11;
inline constexpr std::size_t kInteractionDims = 180;

struct TabularEncoding {
  Vec base;          // 11 dims
  Vec interactions;  // 180 dims, empty unless requested
};

// season in {0,1}; symptoms in {0,1} or -1 for unobserved.
TabularEncoding encode(int season, int dysp, int cough, int nasal,
                       bool with_interactions);

// Recomputes the interaction part from a base encoding (the layout is a pure
// function of it).
Vec interactions_from_base(const Vec& base);

}  // namespace hbn::ff
