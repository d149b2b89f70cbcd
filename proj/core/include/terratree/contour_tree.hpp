#pragma once

#include <unordered_map>
#include <vector>

#include "terratree/link_cut_forest.hpp"
#include "terratree/snapshot.hpp"
#include "terratree/terrain.hpp"
#include "terratree/types.hpp"

namespace terratree {

// The maintained contour tree: one node per critical vertex, per-edge colors,
// and a link-cut skeleton whose node costs are the labels' height keys so
// root-to-leaf paths support monotone search.
//
// Adjacency is mirrored explicitly (up/down neighbor lists, at most two per
// side) next to the dynamic-forest edges; every mutation goes through this
// class so the two stay in sync.
class ContourTree {
 public:
  using NodeId = int;
  static constexpr NodeId none = -1;

  explicit ContourTree(const Terrain& t) : terrain_(&t) {}

  NodeId create_node(VertexId label, VertexClass cls);
  void destroy_node(NodeId n);  // must be isolated

  void add_edge(NodeId a, NodeId b, Color color);  // orientation from current keys
  void remove_edge(NodeId a, NodeId b);
  bool has_edge(NodeId a, NodeId b) const;
  Color edge_color(NodeId a, NodeId b) const;
  void set_edge_color(NodeId a, NodeId b, Color c);

  void relabel(NodeId n, VertexId new_label);
  void swap_labels(NodeId a, NodeId b);
  void refresh_cost(NodeId n);  // after the label's key changed

  VertexId label(NodeId n) const { return nodes_[n].label; }
  VertexClass cls(NodeId n) const { return nodes_[n].cls; }
  void set_cls(NodeId n, VertexClass c) { nodes_[n].cls = c; }
  NodeId node_of(VertexId v) const;
  const std::vector<NodeId>& ups(NodeId n) const { return nodes_[n].up; }
  const std::vector<NodeId>& downs(NodeId n) const { return nodes_[n].down; }
  NodeId single_up(NodeId n) const;
  NodeId single_down(NodeId n) const;
  NodeId other_up(NodeId n, NodeId not_this) const;
  NodeId other_down(NodeId n, NodeId not_this) const;
  int degree(NodeId n) const;
  std::size_t node_count() const { return live_; }

  LinkCutForest& forest() { return forest_; }
  NodeId node_of_forest(LinkCutForest::Node f) const { return ct_of_fnode_[f]; }
  LinkCutForest::Node forest_node(NodeId n) const { return nodes_[n].fnode; }

  // Structural sign implied by the edge lists (two downs = negative).
  VertexClass structural_class(NodeId n) const;

  void validate() const;  // degree laws, Euler relation, color laws
  void append_snapshot(StateSnapshot& out) const;

 private:
  struct Node {
    VertexId label = kNoVertex;
    VertexClass cls = VertexClass::Regular;
    std::vector<NodeId> up, down;      // at most 2 each
    std::vector<Color> up_color;       // parallel to `up`
    LinkCutForest::Node fnode = LinkCutForest::none;
    bool alive = false;
  };

  const Terrain* terrain_;
  LinkCutForest forest_;
  std::vector<Node> nodes_;
  std::vector<NodeId> free_;
  std::vector<NodeId> ct_of_fnode_;
  std::unordered_map<VertexId, NodeId> by_label_;
  std::size_t live_ = 0;

  bool below(NodeId a, NodeId b) const {
    return terrain_->below(nodes_[a].label, nodes_[b].label);
  }
};

}  // namespace terratree
