#include "terratree/link_cut_forest.hpp"

#include <cassert>

namespace terratree {

LinkCutForest::Node LinkCutForest::make_node(HeightKey cost) {
  Node n;
  if (!free_.empty()) {
    n = free_.back();
    free_.pop_back();
    nodes_[n] = Rec{};
  } else {
    n = static_cast<Node>(nodes_.size());
    nodes_.emplace_back();
  }
  nodes_[n].alive = true;
  nodes_[n].cost = cost;
  ++live_;
  return n;
}

void LinkCutForest::destroy_node(Node n) {
  access(n);
  Rec& r = rec(n);
  if (r.ch[0] != none || r.ch[1] != none || r.parent != none)
    throw InconsistentState("destroying a non-isolated forest node");
  r.alive = false;
  free_.push_back(n);
  --live_;
}

bool LinkCutForest::is_splay_root(Node x) const {
  Node p = nodes_[x].parent;
  return p == none || (nodes_[p].ch[0] != x && nodes_[p].ch[1] != x);
}

int LinkCutForest::side_of(Node x) const { return nodes_[nodes_[x].parent].ch[1] == x ? 1 : 0; }

void LinkCutForest::push(Node x) {
  Rec& r = rec(x);
  if (!r.flip) return;
  std::swap(r.ch[0], r.ch[1]);
  for (Node c : r.ch)
    if (c != none) nodes_[c].flip = !nodes_[c].flip;
  r.flip = false;
}

void LinkCutForest::rotate(Node x) {
  ++counters_.rotations;
  Node p = rec(x).parent;
  Node g = rec(p).parent;
  bool p_root = is_splay_root(p);
  int dx = side_of(x);
  Node b = rec(x).ch[1 - dx];
  rec(p).ch[dx] = b;
  if (b != none) rec(b).parent = p;
  rec(x).ch[1 - dx] = p;
  rec(p).parent = x;
  rec(x).parent = g;
  if (!p_root) rec(g).ch[rec(g).ch[1] == p ? 1 : 0] = x;
}

void LinkCutForest::splay(Node x) {
  // Push flips downward from the splay root to x first.
  static thread_local std::vector<Node> stack;
  stack.clear();
  Node y = x;
  stack.push_back(y);
  while (!is_splay_root(y)) {
    y = rec(y).parent;
    stack.push_back(y);
  }
  for (auto it = stack.rbegin(); it != stack.rend(); ++it) push(*it);
  while (!is_splay_root(x)) {
    Node p = rec(x).parent;
    if (!is_splay_root(p)) rotate(side_of(x) == side_of(p) ? p : x);
    rotate(x);
  }
}

LinkCutForest::Node LinkCutForest::access(Node x) {
  splay(x);
  rec(x).ch[1] = none;  // former preferred child keeps x as its path parent
  Node last = x;
  while (rec(x).parent != none) {
    Node w = rec(x).parent;
    splay(w);
    rec(w).ch[1] = x;
    last = w;
    splay(x);
  }
  return last;
}

LinkCutForest::Node LinkCutForest::leftmost(Node x) {
  push(x);
  while (rec(x).ch[0] != none) {
    x = rec(x).ch[0];
    push(x);
  }
  return x;
}

LinkCutForest::Node LinkCutForest::rightmost(Node x) {
  push(x);
  while (rec(x).ch[1] != none) {
    x = rec(x).ch[1];
    push(x);
  }
  return x;
}

LinkCutForest::Node LinkCutForest::in_order_successor(Node x) {
  push(x);
  if (rec(x).ch[1] == none) return none;
  return leftmost(rec(x).ch[1]);
}

void LinkCutForest::evert(Node a) {
  ++counters_.ops;
  access(a);
  rec(a).flip = !rec(a).flip;
  push(a);
}

LinkCutForest::Node LinkCutForest::root(Node a) {
  ++counters_.ops;
  access(a);
  Node r = leftmost(a);
  splay(r);
  return r;
}

bool LinkCutForest::connected(Node a, Node b) {
  if (a == b) return true;
  return root(a) == root(b);
}

void LinkCutForest::link(Node a, Node b) {
  ++counters_.ops;
  if (connected(a, b)) throw SameTree("link would create a cycle");
  evert(a);
  rec(a).parent = b;
}

void LinkCutForest::link_rooted(Node child, Node parent) {
  ++counters_.ops;
  access(child);
  if (rec(child).ch[0] != none)
    throw InconsistentState("link_rooted child is not a tree root");
  if (connected(child, parent)) throw SameTree("link would create a cycle");
  access(child);
  rec(child).parent = parent;
}

void LinkCutForest::cut_from_parent(Node child) {
  ++counters_.ops;
  access(child);
  Node l = rec(child).ch[0];
  if (l == none) throw NoSuchEdge("node has no parent");
  rec(l).parent = none;
  rec(child).ch[0] = none;
}

void LinkCutForest::cut(Node a, Node b) {
  ++counters_.ops;
  if (a == b || !connected(a, b)) throw NoSuchEdge("no edge between the given nodes");
  evert(a);
  access(b);
  splay(a);
  // With a everted and b accessed, the splay tree is the a..b path and a is
  // its in-order minimum. The edge exists iff b immediately follows a.
  Node succ = in_order_successor(a);
  if (succ != b) throw NoSuchEdge("nodes are connected but not adjacent");
  splay(b);
  push(b);
  assert(rec(b).ch[0] == a);
  rec(b).ch[0] = none;
  rec(a).parent = none;
}

LinkCutForest::Node LinkCutForest::path_first_step(Node from, Node to) {
  ++counters_.ops;
  if (from == to || !connected(from, to)) throw NotConnected("no path between nodes");
  evert(from);
  access(to);
  splay(from);
  Node s = in_order_successor(from);
  assert(s != none);
  splay(s);
  return s;
}

void LinkCutForest::collect_path_costs(Node subtree, std::vector<HeightKey>& out) {
  if (subtree == none) return;
  push(subtree);
  collect_path_costs(rec(subtree).ch[0], out);
  out.push_back(rec(subtree).cost);
  collect_path_costs(rec(subtree).ch[1], out);
}

std::pair<LinkCutForest::Node, LinkCutForest::Node> LinkCutForest::path_search_monotone(
    Node from, Node to, HeightKey key) {
  ++counters_.ops;
  if (from == to || !connected(from, to)) throw NotConnected("no path between nodes");
  evert(from);
  access(to);
  // The splay tree rooted at `to` is exactly the from->to path in path order.
  splay(to);
  if (debug_) {
    std::vector<HeightKey> costs;
    collect_path_costs(to, costs);
    bool inc_ok = true, dec_ok = true;
    for (std::size_t i = 1; i < costs.size(); ++i) {
      if (!(costs[i - 1] < costs[i])) inc_ok = false;
      if (!(costs[i] < costs[i - 1])) dec_ok = false;
    }
    if (!inc_ok && !dec_ok) throw NotMonotone("path costs are not strictly monotone");
  }
  const bool increasing = cost(from) < cost(to);
  // Find the last node in path order on the `from` side of key.
  Node cand = none;
  Node cur = to;
  while (cur != none) {
    push(cur);
    bool from_side = increasing ? (rec(cur).cost <= key) : (rec(cur).cost >= key);
    if (from_side) {
      cand = cur;
      cur = rec(cur).ch[1];
    } else {
      cur = rec(cur).ch[0];
    }
  }
  if (cand == none) throw KeyOutOfRange("key lies before the first path cost");
  splay(cand);
  Node succ = in_order_successor(cand);
  if (succ == none) throw KeyOutOfRange("key lies beyond the last path cost");
  return {cand, succ};
}

LinkCutForest::Node LinkCutForest::lca(Node a, Node b, Node tree_root) {
  ++counters_.ops;
  if (!connected(a, tree_root) || !connected(b, tree_root))
    throw NotConnected("nodes are in different trees");
  evert(tree_root);
  if (a == b) return a;
  access(a);
  return access(b);
}

}  // namespace terratree
