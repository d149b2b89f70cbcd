#pragma once

#include <unordered_map>
#include <vector>

#include "terratree/link_cut_forest.hpp"
#include "terratree/terrain.hpp"
#include "terratree/types.hpp"

namespace terratree {

// One ascent or descent forest over all mesh vertices. Every non-root vertex
// has exactly one parent in its upper (ascent) or lower (descent) link; the
// roots are exactly the maxima (resp. minima), and each root is cross-linked
// to its leaf in the contour tree.
class VertexForest {
 public:
  enum class Dir { Ascent, Descent };

  VertexForest(const Terrain& t, Dir dir) : terrain_(&t), dir_(dir) {}

  Dir dir() const { return dir_; }

  void ensure_vertex(VertexId v);
  void remove_vertex(VertexId v);  // must have no children and no parent

  VertexId parent(VertexId v) const;
  void set_parent(VertexId v, VertexId w);  // replaces any existing parent
  void clear_parent(VertexId v);            // v becomes a root
  VertexId root_of(VertexId v);             // O(log n)

  // Cross-links root vertex <-> contour-tree leaf (stored as an opaque id).
  void set_leaf(VertexId root, int ct_node);
  void clear_leaf(VertexId root);
  int leaf_of(VertexId root) const;  // throws InconsistentCrossLink if absent
  bool has_leaf(VertexId root) const;

  LinkCutForest& forest() { return forest_; }

  // Every vertex has a valid parent (or is a root of the right class), and
  // every root carries exactly one leaf link. Throws on violation.
  void validate(const std::unordered_map<VertexId, VertexClass>& classes) const;

 private:
  const Terrain* terrain_;
  Dir dir_;
  LinkCutForest forest_;
  std::vector<LinkCutForest::Node> node_of_;
  std::vector<VertexId> vertex_of_node_;
  std::vector<VertexId> parent_;
  std::unordered_map<VertexId, int> leaf_of_root_;
};

}  // namespace terratree
