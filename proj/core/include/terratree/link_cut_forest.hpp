#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "terratree/types.hpp"

namespace terratree {

// Dynamic rooted forest with logarithmic link, cut, evert, root and path
// queries, backed by splay trees over preferred paths. Costs live on nodes;
// an edge cost is read off the deeper endpoint, which matches how the
// contour-tree skeleton stores its height intervals.
//
// Single-threaded. Handles stay valid until destroy_node.
class LinkCutForest {
 public:
  using Node = std::int32_t;
  static constexpr Node none = -1;

  struct Counters {
    std::uint64_t ops = 0;
    std::uint64_t rotations = 0;
  };

  Node make_node(HeightKey cost = {});
  void destroy_node(Node n);  // n must be isolated

  void set_cost(Node n, HeightKey cost) { rec(n).cost = cost; }
  HeightKey cost(Node n) const { return nodes_[n].cost; }

  void link(Node a, Node b);  // throws SameTree
  void cut(Node a, Node b);   // throws NoSuchEdge
  void evert(Node a);
  Node root(Node a);
  bool connected(Node a, Node b);

  // Rooted variants: preserve the represented-tree orientation, so root()
  // keeps reporting the structural root. `child` must currently be the root
  // of its own tree.
  void link_rooted(Node child, Node parent);
  void cut_from_parent(Node child);

  // Neighbor of `from` on the unique from->to path.
  Node path_first_step(Node from, Node to);  // throws NotConnected
  // Path costs from->to must be strictly monotone; returns the consecutive
  // node pair (p, q), p on the `from` side, whose cost interval [cost(p),
  // cost(q)) contains `key`.
  std::pair<Node, Node> path_search_monotone(Node from, Node to, HeightKey key);
  // Lowest common ancestor of a and b in the tree rooted at `tree_root`.
  Node lca(Node a, Node b, Node tree_root);

  std::size_t live_nodes() const { return live_; }
  const Counters& counters() const { return counters_; }
  void reset_counters() { counters_ = Counters{}; }
  // Enables O(path) verification that path_search_monotone preconditions
  // hold; off by default, it would wreck the complexity contract.
  void set_debug_checks(bool on) { debug_ = on; }

 private:
  struct Rec {
    Node ch[2] = {none, none};
    Node parent = none;  // splay parent or path parent
    bool flip = false;
    bool alive = false;
    HeightKey cost;
  };

  std::vector<Rec> nodes_;
  std::vector<Node> free_;
  std::size_t live_ = 0;
  Counters counters_;
  bool debug_ = false;

  Rec& rec(Node n) { return nodes_[n]; }
  bool is_splay_root(Node x) const;
  int side_of(Node x) const;
  void push(Node x);
  void rotate(Node x);
  void splay(Node x);
  Node access(Node x);  // returns the last preferred-path switch point
  Node leftmost(Node x);
  Node rightmost(Node x);
  Node in_order_successor(Node x);
  void collect_path_costs(Node subtree, std::vector<HeightKey>& out);
};

}  // namespace terratree
