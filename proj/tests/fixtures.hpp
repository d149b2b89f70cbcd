#pragma once

#include "terratree/terrain.hpp"

namespace terratree::fixtures {

// Cone: one peak over a pentagonal base. Contour tree is the single edge
// (infinity, peak).
Terrain single_peak();

// Two peaks p1 (height 5) and p2 (height 4) joined by the pass s (height 3)
// on an island over low ground. Tree: infinity--s, s--p1, s--p2; s is a red
// positive saddle. Ids: p1=1, p2=2, s=3, a=4, b=5.
Terrain two_peaks();

// Crater: square rim around two basins separated by a dam.
//   r1..r4 = 4..7 (heights 10..13), b1=1 (-5), b2=2 (-4), d=3 (0).
// d is a blue negative saddle (basins merge), r1 a red negative saddle
// (crater lake meets the outer slope), r4 the global maximum.
Terrain crater();

// Lake containing an island: rim square (very high), basin ring around a
// central hill. The water first encircles the hill at a blue positive
// saddle. Ids documented in fixtures.cpp.
Terrain island_in_lake();

}  // namespace terratree::fixtures
