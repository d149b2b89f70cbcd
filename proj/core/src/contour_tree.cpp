#include "terratree/contour_tree.hpp"

#include <algorithm>
#include <cassert>

namespace terratree {

ContourTree::NodeId ContourTree::create_node(VertexId label, VertexClass cls) {
  NodeId n;
  if (!free_.empty()) {
    n = free_.back();
    free_.pop_back();
    nodes_[n] = Node{};
  } else {
    n = static_cast<NodeId>(nodes_.size());
    nodes_.emplace_back();
  }
  Node& r = nodes_[n];
  r.label = label;
  r.cls = cls;
  r.alive = true;
  r.fnode = forest_.make_node(terrain_->key(label));
  if (static_cast<std::size_t>(r.fnode) >= ct_of_fnode_.size())
    ct_of_fnode_.resize(r.fnode + 1, none);
  ct_of_fnode_[r.fnode] = n;
  if (!by_label_.emplace(label, n).second)
    throw InconsistentState("vertex already has a contour-tree node");
  ++live_;
  return n;
}

void ContourTree::destroy_node(NodeId n) {
  Node& r = nodes_[n];
  if (!r.up.empty() || !r.down.empty())
    throw InconsistentState("destroying a connected contour-tree node");
  forest_.destroy_node(r.fnode);
  ct_of_fnode_[r.fnode] = none;
  by_label_.erase(r.label);
  r.alive = false;
  free_.push_back(n);
  --live_;
}

void ContourTree::add_edge(NodeId a, NodeId b, Color color) {
  NodeId lo = below(a, b) ? a : b;
  NodeId hi = lo == a ? b : a;
  Node& l = nodes_[lo];
  Node& h = nodes_[hi];
  if (l.up.size() >= 2 || h.down.size() >= 2)
    throw InconsistentState("contour-tree node degree overflow");
  l.up.push_back(hi);
  l.up_color.push_back(color);
  h.down.push_back(lo);
  forest_.link(l.fnode, h.fnode);
}

void ContourTree::remove_edge(NodeId a, NodeId b) {
  // The stored orientation may be stale while the mover's key is in flight,
  // so search both directions.
  NodeId lo = a, hi = b;
  Node* l = &nodes_[lo];
  auto it = std::find(l->up.begin(), l->up.end(), hi);
  if (it == l->up.end()) {
    std::swap(lo, hi);
    l = &nodes_[lo];
    it = std::find(l->up.begin(), l->up.end(), hi);
    if (it == l->up.end()) throw InconsistentState("contour-tree edge missing");
  }
  Node& h = nodes_[hi];
  l->up_color.erase(l->up_color.begin() + (it - l->up.begin()));
  l->up.erase(it);
  auto jt = std::find(h.down.begin(), h.down.end(), lo);
  assert(jt != h.down.end());
  h.down.erase(jt);
  forest_.cut(l->fnode, h.fnode);
}

bool ContourTree::has_edge(NodeId a, NodeId b) const {
  const Node& na = nodes_[a];
  return std::find(na.up.begin(), na.up.end(), b) != na.up.end() ||
         std::find(na.down.begin(), na.down.end(), b) != na.down.end();
}

Color ContourTree::edge_color(NodeId a, NodeId b) const {
  for (auto [lo, hi] : {std::pair{a, b}, std::pair{b, a}}) {
    const Node& l = nodes_[lo];
    auto it = std::find(l.up.begin(), l.up.end(), hi);
    if (it != l.up.end()) return l.up_color[it - l.up.begin()];
  }
  throw InconsistentState("contour-tree edge missing");
}

void ContourTree::set_edge_color(NodeId a, NodeId b, Color c) {
  for (auto [lo, hi] : {std::pair{a, b}, std::pair{b, a}}) {
    Node& l = nodes_[lo];
    auto it = std::find(l.up.begin(), l.up.end(), hi);
    if (it != l.up.end()) {
      l.up_color[it - l.up.begin()] = c;
      return;
    }
  }
  throw InconsistentState("contour-tree edge missing");
}

void ContourTree::relabel(NodeId n, VertexId new_label) {
  Node& r = nodes_[n];
  by_label_.erase(r.label);
  if (!by_label_.emplace(new_label, n).second)
    throw InconsistentState("relabel target already has a node");
  r.label = new_label;
  refresh_cost(n);
}

void ContourTree::swap_labels(NodeId a, NodeId b) {
  Node& ra = nodes_[a];
  Node& rb = nodes_[b];
  by_label_[ra.label] = b;
  by_label_[rb.label] = a;
  std::swap(ra.label, rb.label);
  refresh_cost(a);
  refresh_cost(b);
}

void ContourTree::refresh_cost(NodeId n) {
  forest_.set_cost(nodes_[n].fnode, terrain_->key(nodes_[n].label));
}

ContourTree::NodeId ContourTree::node_of(VertexId v) const {
  auto it = by_label_.find(v);
  return it == by_label_.end() ? none : it->second;
}

ContourTree::NodeId ContourTree::single_up(NodeId n) const {
  if (nodes_[n].up.size() != 1) throw InconsistentState("expected exactly one up neighbor");
  return nodes_[n].up[0];
}

ContourTree::NodeId ContourTree::single_down(NodeId n) const {
  if (nodes_[n].down.size() != 1) throw InconsistentState("expected exactly one down neighbor");
  return nodes_[n].down[0];
}

ContourTree::NodeId ContourTree::other_up(NodeId n, NodeId not_this) const {
  const auto& up = nodes_[n].up;
  if (up.size() != 2) throw InconsistentState("expected two up neighbors");
  return up[0] == not_this ? up[1] : up[0];
}

ContourTree::NodeId ContourTree::other_down(NodeId n, NodeId not_this) const {
  const auto& dn = nodes_[n].down;
  if (dn.size() != 2) throw InconsistentState("expected two down neighbors");
  return dn[0] == not_this ? dn[1] : dn[0];
}

int ContourTree::degree(NodeId n) const {
  return static_cast<int>(nodes_[n].up.size() + nodes_[n].down.size());
}

VertexClass ContourTree::structural_class(NodeId n) const {
  const Node& r = nodes_[n];
  if (r.label == kInfinityVertex) return VertexClass::Minimum;
  if (r.down.empty() && r.up.size() == 1) return VertexClass::Minimum;
  if (r.up.empty() && r.down.size() == 1) return VertexClass::Maximum;
  if (r.down.size() == 2 && r.up.size() == 1) return VertexClass::NegativeSaddle;
  if (r.down.size() == 1 && r.up.size() == 2) return VertexClass::PositiveSaddle;
  throw InconsistentState("contour-tree node with invalid degree pattern");
}

void ContourTree::validate() const {
  std::size_t minima = 0, maxima = 0, saddles = 0;
  for (NodeId n = 0; n < static_cast<NodeId>(nodes_.size()); ++n) {
    const Node& r = nodes_[n];
    if (!r.alive) continue;
    VertexClass sc = structural_class(n);
    if (sc != r.cls) throw InconsistentState("node class does not match edge structure");
    if (r.cls == VertexClass::Minimum) ++minima;
    if (r.cls == VertexClass::Maximum) ++maxima;
    if (is_saddle(r.cls)) ++saddles;
    for (NodeId u : r.up)
      if (!below(n, u))
        throw InconsistentState("up edge points downward: " + std::to_string(r.label) + "->" +
                                std::to_string(nodes_[u].label));
    // Color laws: a saddle's own color constrains its edge colors.
    if (r.cls == VertexClass::NegativeSaddle) {
      Color own = edge_color(n, r.up[0]);
      Color d0 = edge_color(r.down[0], n), d1 = edge_color(r.down[1], n);
      if (own == Color::Blue && (d0 != Color::Blue || d1 != Color::Blue))
        throw InconsistentState("blue negative saddle with a red down edge");
      if (own == Color::Red && d0 == d1)
        throw InconsistentState("red negative saddle needs one red and one blue down edge");
    }
    if (r.cls == VertexClass::PositiveSaddle) {
      Color own = edge_color(r.down[0], n);
      Color u0 = edge_color(n, r.up[0]), u1 = edge_color(n, r.up[1]);
      if (own == Color::Red && (u0 != Color::Red || u1 != Color::Red))
        throw InconsistentState("red positive saddle with a blue up edge");
      if (own == Color::Blue && u0 == u1)
        throw InconsistentState("blue positive saddle needs one blue and one red up edge");
    }
  }
  if (minima + maxima != saddles + 2)
    throw InconsistentState("Euler relation violated: min+max != saddles+2");
}

void ContourTree::append_snapshot(StateSnapshot& out) const {
  for (NodeId n = 0; n < static_cast<NodeId>(nodes_.size()); ++n) {
    const Node& r = nodes_[n];
    if (!r.alive) continue;
    out.nodes.push_back({r.label, r.cls});
    for (std::size_t i = 0; i < r.up.size(); ++i)
      out.edges.push_back({r.label, nodes_[r.up[i]].label, r.up_color[i]});
  }
}

}  // namespace terratree
