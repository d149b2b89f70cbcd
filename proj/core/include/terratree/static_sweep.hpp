#pragma once

#include <unordered_map>
#include <utility>
#include <vector>

#include "terratree/snapshot.hpp"
#include "terratree/terrain.hpp"
#include "terratree/types.hpp"

namespace terratree::sweep {

// Independent from-scratch computation of the maintained state: contour tree
// by join/split sweep and merge, edge colors by geometric contour tracing,
// join/split trees with extremum pointers, persistence pairs by elder-rule
// union-find. Shares only the Terrain with the kinetic path.
//
// Everything here may be quadratic; it is the ground truth for tests, not a
// production path.

struct SweepState {
  StateSnapshot snapshot;
  // For every regular vertex, the reduced contour-tree edge containing it.
  std::unordered_map<VertexId, std::pair<VertexId, VertexId>> arc_of;
  std::unordered_map<VertexId, VertexClass> classes;
};

// Full state: tree, colors, merge trees, pointers, pairs.
SweepState compute_state(const Terrain& t);

// Contour tree and classes only (no colors, merge trees or pairs).
SweepState compute_tree(const Terrain& t);

// One traced contour at a level that passes through no vertex.
struct ContourCycle {
  // Crossed mesh edges in cyclic walk order, each as (below, above).
  std::vector<std::pair<VertexId, VertexId>> edges;
  bool touches_infinity = false;
};

// `level` must not equal any vertex key; seed edge (lo, hi) must straddle it.
ContourCycle trace_contour(const Terrain& t, HeightKey level, VertexId lo, VertexId hi);

// Blue iff points locally inside the cycle lie below the level.
Color contour_color(const Terrain& t, HeightKey level, const ContourCycle& cycle);

// Number of distinct contours at the given level.
int count_contours(const Terrain& t, HeightKey level);

// Level immediately above vertex v in the symbolic order.
HeightKey level_just_above(const Terrain& t, VertexId v);

// Elder-rule persistence pairs by union-find sweep (both directions).
std::vector<PairSnap> persistence_pairs(const Terrain& t);

}  // namespace terratree::sweep
