#pragma once

#include <functional>
#include <unordered_map>
#include <vector>

#include "terratree/link_cut_forest.hpp"
#include "terratree/snapshot.hpp"
#include "terratree/types.hpp"

namespace terratree {

// Join or split tree over the critical vertices, maintained in lock-step with
// the contour tree. The join tree holds minima (leaves) and negative saddles
// (internal, two children each); each saddle carries a pointer to the lowest
// minimum in its subtree, which realizes the elder rule implicitly. The split
// tree mirrors everything upside down (maxima, positive saddles, highest
// pointers).
class MergeTree {
 public:
  enum class Kind { Join, Split };

  explicit MergeTree(Kind kind) : kind_(kind) {}

  Kind kind() const { return kind_; }
  bool empty() const { return by_label_.empty(); }
  VertexId top() const { return top_; }
  bool contains(VertexId v) const { return by_label_.count(v) > 0; }

  void add_first_extremum(VertexId m, HeightKey key);
  // Initial construction from an edge list (child, parent).
  void bulk_build(const std::vector<VertexId>& members, const std::vector<MergeEdgeSnap>& edges,
                  const std::function<HeightKey(VertexId)>& key_of,
                  const std::function<bool(VertexId)>& is_saddle);
  // New saddle s absorbing new leaf m; the saddle's position is found on the
  // path from `from_extremum` (an existing leaf below it) toward the top.
  void insert_pair(VertexId s, HeightKey s_key, VertexId m, HeightKey m_key,
                   VertexId from_extremum);
  // Inverse: leaf m dies into its parent saddle s, which contracts away.
  void remove_pair(VertexId s, VertexId m);
  void relabel(VertexId old_label, VertexId new_label, HeightKey new_key);
  void refresh_key(VertexId v, HeightKey key);

  // Interchange rotation: saddle `lower` (a child of saddle `upper`) moves
  // above it; the child of `lower` whose subtree contains `migrating_hint`
  // (an extremum) becomes a child of `upper`.
  void rotate(VertexId lower, VertexId upper, VertexId migrating_hint);

  // The heights of two extrema swapped; `loser` was the better one (lower
  // minimum / higher maximum) and `winner` is better now. Updates pointers on
  // the LCA chain.
  void extremum_crossing(VertexId loser, VertexId winner);

  VertexId parent(VertexId v) const;
  std::vector<VertexId> children(VertexId v) const;
  bool is_saddle_node(VertexId v) const;
  // First node on the tree path from `node` toward `extremum`.
  VertexId child_toward(VertexId node, VertexId extremum);
  VertexId pointer(VertexId saddle) const;  // best extremum in the subtree
  // The extremum a saddle pairs with: the worse of its two children's bests.
  std::vector<PairSnap> pairs() const;

  void append_snapshot(std::vector<MergeEdgeSnap>& edges,
                       std::vector<PointerSnap>& pointers) const;
  // Full recomputation of every pointer by subtree scan; throws on mismatch.
  void validate_pointers() const;

  LinkCutForest& forest() { return forest_; }

 private:
  struct Node {
    VertexId label = kNoVertex;
    bool saddle = false;
    VertexId parent = kNoVertex;
    std::vector<VertexId> kids;  // saddles: 2, extrema: 0
    VertexId best = kNoVertex;   // saddles only
    LinkCutForest::Node fnode = LinkCutForest::none;
  };

  Kind kind_;
  LinkCutForest forest_;
  std::unordered_map<VertexId, Node> by_label_;
  std::unordered_map<int, VertexId> label_of_fnode_;
  VertexId top_ = kNoVertex;

  // true when a is a better extremum than b for this tree's direction.
  bool better(HeightKey a, HeightKey b) const {
    return kind_ == Kind::Join ? a < b : b < a;
  }
  Node& node(VertexId v);
  const Node& node(VertexId v) const;
  VertexId best_of(const Node& n) const { return n.saddle ? n.best : n.label; }
  void recompute_best(VertexId saddle);
  VertexId new_node(VertexId label, HeightKey key, bool saddle);
  void drop_node(VertexId label);
};

}  // namespace terratree
