#pragma once

#include <string>
#include <vector>

#include "terratree/types.hpp"

namespace terratree {

// Canonical, order-normalized description of the maintained state: the
// contour tree with labels and edge colors, the join/split trees with their
// extremum pointers, and the persistence pairs. Two states are equivalent
// iff their snapshots compare equal field by field.
struct CtNodeSnap {
  VertexId label;
  VertexClass cls;
  friend bool operator==(const CtNodeSnap&, const CtNodeSnap&) = default;
};

struct CtEdgeSnap {
  VertexId lo, hi;  // lo strictly below hi in the symbolic order
  Color color;
  friend bool operator==(const CtEdgeSnap&, const CtEdgeSnap&) = default;
};

struct MergeEdgeSnap {
  VertexId child, parent;
  friend bool operator==(const MergeEdgeSnap&, const MergeEdgeSnap&) = default;
};

struct PointerSnap {
  VertexId saddle, extremum;
  friend bool operator==(const PointerSnap&, const PointerSnap&) = default;
};

struct PairSnap {
  VertexId creator, destroyer;
  friend bool operator==(const PairSnap&, const PairSnap&) = default;
};

struct StateSnapshot {
  std::vector<CtNodeSnap> nodes;        // sorted by label
  std::vector<CtEdgeSnap> edges;        // sorted by (lo, hi)
  std::vector<MergeEdgeSnap> join_edges;   // sorted by child
  std::vector<MergeEdgeSnap> split_edges;  // sorted by child
  std::vector<PointerSnap> join_lowest;    // per negative saddle, sorted
  std::vector<PointerSnap> split_highest;  // per positive saddle, sorted
  std::vector<PairSnap> pairs;          // sorted by (creator, destroyer)

  void normalize();
  friend bool operator==(const StateSnapshot&, const StateSnapshot&) = default;
};

// Byte-stable text form of the contour-tree part ("ct" snapshot format).
std::string format_contour_snapshot(const StateSnapshot& s);

// First divergence between two snapshots, empty string if equal.
std::string diff_snapshots(const StateSnapshot& expected, const StateSnapshot& actual);

}  // namespace terratree
