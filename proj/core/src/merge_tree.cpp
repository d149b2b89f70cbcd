#include "terratree/merge_tree.hpp"

#include <algorithm>
#include <cassert>

namespace terratree {

MergeTree::Node& MergeTree::node(VertexId v) {
  auto it = by_label_.find(v);
  if (it == by_label_.end()) throw InconsistentState("vertex not in merge tree");
  return it->second;
}

const MergeTree::Node& MergeTree::node(VertexId v) const {
  auto it = by_label_.find(v);
  if (it == by_label_.end()) throw InconsistentState("vertex not in merge tree");
  return it->second;
}

VertexId MergeTree::new_node(VertexId label, HeightKey key, bool saddle) {
  Node n;
  n.label = label;
  n.saddle = saddle;
  n.fnode = forest_.make_node(key);
  label_of_fnode_[n.fnode] = label;
  by_label_.emplace(label, n);
  return label;
}

void MergeTree::drop_node(VertexId label) {
  Node& n = node(label);
  label_of_fnode_.erase(n.fnode);
  forest_.destroy_node(n.fnode);
  by_label_.erase(label);
}

void MergeTree::add_first_extremum(VertexId m, HeightKey key) {
  new_node(m, key, false);
  if (top_ == kNoVertex) top_ = m;
}

void MergeTree::bulk_build(const std::vector<VertexId>& members,
                           const std::vector<MergeEdgeSnap>& edges,
                           const std::function<HeightKey(VertexId)>& key_of,
                           const std::function<bool(VertexId)>& is_saddle) {
  for (VertexId m : members) new_node(m, key_of(m), is_saddle(m));
  for (const auto& e : edges) {
    Node& c = node(e.child);
    Node& p = node(e.parent);
    c.parent = e.parent;
    p.kids.push_back(e.child);
    forest_.link(c.fnode, p.fnode);
  }
  top_ = kNoVertex;
  for (VertexId m : members)
    if (node(m).parent == kNoVertex) {
      if (top_ != kNoVertex) throw InconsistentState("merge tree has two roots");
      top_ = m;
    }
  if (top_ == kNoVertex && !members.empty())
    throw InconsistentState("merge tree has no root");
  // Saddles ordered away from the top have their children first.
  std::vector<VertexId> saddles;
  for (VertexId m : members)
    if (node(m).saddle) saddles.push_back(m);
  std::sort(saddles.begin(), saddles.end(), [&](VertexId a, VertexId b) {
    return better(forest_.cost(node(a).fnode), forest_.cost(node(b).fnode));
  });
  for (VertexId s : saddles) recompute_best(s);
}

void MergeTree::insert_pair(VertexId s, HeightKey s_key, VertexId m, HeightKey m_key,
                            VertexId from_extremum) {
  VertexId sn = new_node(s, s_key, true);
  VertexId mn = new_node(m, m_key, false);
  Node& srec = node(sn);
  Node& top_rec = node(top_);
  if (better(forest_.cost(top_rec.fnode), s_key)) {
    // New saddle sits beyond the current top: it becomes the new root.
    forest_.link(top_rec.fnode, srec.fnode);
    top_rec.parent = sn;
    srec.kids.push_back(top_);
    top_ = sn;
  } else {
    // Position on the path from the given leaf toward the top.
    const Node& from = node(from_extremum);
    auto [a_f, b_f] = forest_.path_search_monotone(from.fnode, top_rec.fnode, s_key);
    VertexId a = label_of_fnode_.at(a_f), b = label_of_fnode_.at(b_f);
    if (node(a).parent != b) throw InconsistentState("merge-tree search found a non-edge");
    forest_.cut(a_f, b_f);
    forest_.link(a_f, srec.fnode);
    forest_.link(srec.fnode, b_f);
    Node& arec = node(a);
    Node& brec = node(b);
    arec.parent = sn;
    *std::find(brec.kids.begin(), brec.kids.end(), a) = sn;
    srec.parent = b;
    srec.kids.push_back(a);
  }
  forest_.link(node(mn).fnode, srec.fnode);
  node(mn).parent = sn;
  srec.kids.push_back(mn);
  recompute_best(sn);
}

void MergeTree::remove_pair(VertexId s, VertexId m) {
  Node& srec = node(s);
  Node& mrec = node(m);
  if (mrec.parent != s) throw InconsistentState("leaf is not a child of the saddle");
  if (srec.best == m) throw InconsistentState("dying extremum still owns its saddle pointer");
  VertexId other = srec.kids[0] == m ? srec.kids[1] : srec.kids[0];
  forest_.cut(mrec.fnode, srec.fnode);
  forest_.cut(node(other).fnode, srec.fnode);
  if (srec.parent != kNoVertex) {
    Node& prec = node(srec.parent);
    forest_.cut(srec.fnode, prec.fnode);
    forest_.link(node(other).fnode, prec.fnode);
    node(other).parent = srec.parent;
    *std::find(prec.kids.begin(), prec.kids.end(), s) = other;
  } else {
    node(other).parent = kNoVertex;
    top_ = other;
  }
  drop_node(m);
  drop_node(s);
}

void MergeTree::relabel(VertexId old_label, VertexId new_label, HeightKey new_key) {
  Node n = node(old_label);
  by_label_.erase(old_label);
  n.label = new_label;
  by_label_.emplace(new_label, n);
  label_of_fnode_[n.fnode] = new_label;
  forest_.set_cost(n.fnode, new_key);
  if (n.parent != kNoVertex) {
    auto& kids = node(n.parent).kids;
    *std::find(kids.begin(), kids.end(), old_label) = new_label;
  }
  for (VertexId c : n.kids) node(c).parent = new_label;
  // Pointers referencing the relabeled extremum follow it up the chain.
  if (!n.saddle) {
    VertexId cur = n.parent;
    while (cur != kNoVertex && node(cur).best == old_label) {
      node(cur).best = new_label;
      cur = node(cur).parent;
    }
  }
  if (top_ == old_label) top_ = new_label;
}

void MergeTree::refresh_key(VertexId v, HeightKey key) { forest_.set_cost(node(v).fnode, key); }

void MergeTree::rotate(VertexId lower, VertexId upper, VertexId migrating_hint) {
  Node& lo = node(lower);
  Node& up = node(upper);
  if (lo.parent != upper) throw InconsistentState("rotate expects a child/parent saddle pair");
  LinkCutForest::Node mig_f =
      forest_.path_first_step(lo.fnode, node(migrating_hint).fnode);
  VertexId mig = label_of_fnode_.at(mig_f);
  if (std::find(lo.kids.begin(), lo.kids.end(), mig) == lo.kids.end())
    throw InconsistentState("migrating child is not a child of the lower saddle");
  // Move mig: lower -> upper; swap the parent relation of lower/upper.
  forest_.cut(mig_f, lo.fnode);
  forest_.link(mig_f, up.fnode);
  node(mig).parent = upper;
  *std::find(lo.kids.begin(), lo.kids.end(), mig) = upper;
  *std::find(up.kids.begin(), up.kids.end(), lower) = mig;
  VertexId gp = up.parent;
  if (gp != kNoVertex) {
    forest_.cut(up.fnode, node(gp).fnode);
    forest_.link(lo.fnode, node(gp).fnode);
    auto& gkids = node(gp).kids;
    *std::find(gkids.begin(), gkids.end(), upper) = lower;
  } else {
    top_ = lower;
  }
  lo.parent = gp;
  up.parent = lower;
  recompute_best(upper);
  recompute_best(lower);
}

void MergeTree::extremum_crossing(VertexId loser, VertexId winner) {
  const Node& a = node(loser);
  const Node& b = node(winner);
  if (a.saddle || b.saddle) throw InconsistentState("extremum crossing on a saddle");
  if (loser == winner || a.parent == kNoVertex || b.parent == kNoVertex) return;
  LinkCutForest::Node l = forest_.lca(a.fnode, b.fnode, node(top_).fnode);
  VertexId cur = label_of_fnode_.at(l);
  // Flip the contiguous pointer chain from the LCA upward.
  while (cur != kNoVertex && node(cur).saddle && node(cur).best == loser) {
    node(cur).best = winner;
    cur = node(cur).parent;
  }
}

VertexId MergeTree::parent(VertexId v) const { return node(v).parent; }

bool MergeTree::is_saddle_node(VertexId v) const { return node(v).saddle; }

VertexId MergeTree::child_toward(VertexId n, VertexId extremum) {
  LinkCutForest::Node f = forest_.path_first_step(node(n).fnode, node(extremum).fnode);
  return label_of_fnode_.at(f);
}

std::vector<VertexId> MergeTree::children(VertexId v) const { return node(v).kids; }

VertexId MergeTree::pointer(VertexId saddle) const {
  const Node& n = node(saddle);
  if (!n.saddle) throw InconsistentState("pointer query on an extremum");
  return n.best;
}

void MergeTree::recompute_best(VertexId saddle) {
  Node& n = node(saddle);
  VertexId best = kNoVertex;
  for (VertexId c : n.kids) {
    VertexId cb = best_of(node(c));
    if (best == kNoVertex ||
        better(forest_.cost(node(cb).fnode), forest_.cost(node(best).fnode)))
      best = cb;
  }
  n.best = best;
}

std::vector<PairSnap> MergeTree::pairs() const {
  std::vector<PairSnap> out;
  for (const auto& [label, n] : by_label_) {
    if (!n.saddle) continue;
    VertexId b0 = best_of(node(n.kids[0]));
    VertexId b1 = best_of(node(n.kids[1]));
    HeightKey k0 = forest_.cost(node(b0).fnode);
    HeightKey k1 = forest_.cost(node(b1).fnode);
    VertexId dies = better(k0, k1) ? b1 : b0;
    if (kind_ == Kind::Join)
      out.push_back({dies, label});
    else
      out.push_back({label, dies});
  }
  return out;
}

void MergeTree::append_snapshot(std::vector<MergeEdgeSnap>& edges,
                                std::vector<PointerSnap>& pointers) const {
  for (const auto& [label, n] : by_label_) {
    if (n.parent != kNoVertex) edges.push_back({label, n.parent});
    if (n.saddle) pointers.push_back({label, n.best});
  }
}

void MergeTree::validate_pointers() const {
  for (const auto& [label, n] : by_label_) {
    if (!n.saddle) continue;
    VertexId want = kNoVertex;
    // Full subtree scan.
    std::vector<VertexId> stack = n.kids;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      const Node& r = node(v);
      if (r.saddle) {
        stack.insert(stack.end(), r.kids.begin(), r.kids.end());
      } else if (want == kNoVertex ||
                 better(forest_.cost(r.fnode), forest_.cost(node(want).fnode))) {
        want = v;
      }
    }
    if (want != n.best)
      throw InconsistentState("merge-tree pointer of " + std::to_string(label) +
                              " should be " + std::to_string(want) + " but is " +
                              std::to_string(n.best));
  }
}

}  // namespace terratree
