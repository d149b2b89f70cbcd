#include "terratree/vertex_forests.hpp"

#include <cassert>

namespace terratree {

void VertexForest::ensure_vertex(VertexId v) {
  if (v >= node_of_.size()) {
    node_of_.resize(v + 1, LinkCutForest::none);
    parent_.resize(v + 1, kNoVertex);
  }
  if (node_of_[v] == LinkCutForest::none) {
    node_of_[v] = forest_.make_node();
    if (static_cast<std::size_t>(node_of_[v]) >= vertex_of_node_.size())
      vertex_of_node_.resize(node_of_[v] + 1, kNoVertex);
    vertex_of_node_[node_of_[v]] = v;
    parent_[v] = kNoVertex;
  }
}

void VertexForest::remove_vertex(VertexId v) {
  if (parent_[v] != kNoVertex) throw InconsistentState("removing a vertex with a parent");
  forest_.destroy_node(node_of_[v]);  // throws if it still has children
  vertex_of_node_[node_of_[v]] = kNoVertex;
  node_of_[v] = LinkCutForest::none;
  leaf_of_root_.erase(v);
}

VertexId VertexForest::parent(VertexId v) const {
  return v < parent_.size() ? parent_[v] : kNoVertex;
}

void VertexForest::set_parent(VertexId v, VertexId w) {
  assert(w != kNoVertex);
  if (parent_[v] == w) return;
  if (parent_[v] != kNoVertex) forest_.cut_from_parent(node_of_[v]);
  forest_.link_rooted(node_of_[v], node_of_[w]);
  parent_[v] = w;
}

void VertexForest::clear_parent(VertexId v) {
  if (parent_[v] == kNoVertex) return;
  forest_.cut_from_parent(node_of_[v]);
  parent_[v] = kNoVertex;
}

VertexId VertexForest::root_of(VertexId v) {
  // Only rooted link/cut variants touch this forest, so the represented-tree
  // root is always the top of the parent chain.
  LinkCutForest::Node r = forest_.root(node_of_[v]);
  return vertex_of_node_[r];
}

void VertexForest::set_leaf(VertexId root, int ct_node) { leaf_of_root_[root] = ct_node; }

void VertexForest::clear_leaf(VertexId root) { leaf_of_root_.erase(root); }

int VertexForest::leaf_of(VertexId root) const {
  auto it = leaf_of_root_.find(root);
  if (it == leaf_of_root_.end())
    throw InconsistentCrossLink("forest root " + std::to_string(root) + " has no leaf link");
  return it->second;
}

bool VertexForest::has_leaf(VertexId root) const { return leaf_of_root_.count(root) > 0; }

void VertexForest::validate(const std::unordered_map<VertexId, VertexClass>& classes) const {
  VertexClass root_class = dir_ == Dir::Descent ? VertexClass::Minimum : VertexClass::Maximum;
  std::size_t roots = 0;
  for (VertexId v = 0; v < node_of_.size(); ++v) {
    if (node_of_[v] == LinkCutForest::none) continue;
    auto it = classes.find(v);
    if (it == classes.end()) throw InconsistentState("forest vertex missing from classes");
    VertexId p = parent_[v];
    if (p == kNoVertex) {
      ++roots;
      if (it->second != root_class)
        throw InconsistentState("forest root " + std::to_string(v) + " is not an extremum");
      if (!leaf_of_root_.count(v))
        throw InconsistentCrossLink("root " + std::to_string(v) + " lacks a leaf link");
    } else {
      bool p_ok = false;
      for (VertexId u : terrain_->link(v))
        if (u == p) p_ok = true;
      if (!p_ok) throw InconsistentState("forest parent is not a link neighbor");
      bool should_be_below = dir_ == Dir::Descent;
      if (terrain_->below(p, v) != should_be_below)
        throw InconsistentState("forest parent on the wrong side");
      if (it->second == root_class)
        throw InconsistentState("extremum has a forest parent");
    }
  }
  if (leaf_of_root_.size() != roots)
    throw InconsistentCrossLink("leaf links do not match the root set");
}

}  // namespace terratree
