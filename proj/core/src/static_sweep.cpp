#include "terratree/static_sweep.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <deque>
#include <set>
#include <unordered_set>

namespace terratree::sweep {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n, -1) {}
  int find(int x) {
    while (parent[x] >= 0) {
      if (parent[parent[x]] >= 0) parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[a] = b;
  }
};

std::vector<VertexId> sorted_vertices(const Terrain& t) {
  std::vector<VertexId> order;
  for (VertexId v = 0; v < t.id_bound(); ++v)
    if (t.alive(v)) order.push_back(v);
  std::sort(order.begin(), order.end(),
            [&](VertexId a, VertexId b) { return t.key(a) < t.key(b); });
  return order;
}

struct MergeSweep {
  // parent[v]: vertex that absorbed v's component top; children counts.
  std::unordered_map<VertexId, VertexId> parent;
  std::unordered_map<VertexId, std::vector<VertexId>> children;
  std::unordered_map<VertexId, int> distinct_merged;  // components meeting at v
};

// Union-find sweep in the given vertex order; `before` says whether a
// neighbor has already been processed.
MergeSweep merge_sweep(const Terrain& t, const std::vector<VertexId>& order) {
  MergeSweep out;
  UnionFind uf(t.id_bound());
  std::vector<VertexId> top(t.id_bound(), kNoVertex);
  std::vector<char> done(t.id_bound(), 0);
  for (VertexId w : order) {
    std::vector<VertexId> tops;
    for (VertexId u : t.link(w)) {
      if (!done[u]) continue;
      VertexId s = top[uf.find(u)];
      if (std::find(tops.begin(), tops.end(), s) == tops.end()) tops.push_back(s);
    }
    std::sort(tops.begin(), tops.end());
    out.distinct_merged[w] = static_cast<int>(tops.size());
    for (VertexId s : tops) {
      out.parent[s] = w;
      out.children[w].push_back(s);
      uf.unite(s, w);
    }
    done[w] = 1;
    top[uf.find(w)] = w;
  }
  return out;
}

VertexId climb_to_maximum(const Terrain& t, VertexId u) {
  for (;;) {
    VertexId best = kNoVertex;
    for (VertexId n : t.link(u))
      if (t.below(u, n) && (best == kNoVertex || t.below(best, n))) best = n;
    if (best == kNoVertex) return u;
    u = best;
  }
}

// Heights for geometric interpolation: strictly increasing along the
// symbolic order, so exact numeric ties (and the moving vertex's position
// between two crossings) get a consistent tiny separation. The perturbed
// terrain realizes the same symbolic structure, so side tests on it decide
// colors correctly.
struct GeomHeights {
  std::vector<double> h;

  explicit GeomHeights(const Terrain& t) {
    std::vector<VertexId> order;
    double lo = 0, hi = 0;
    bool any = false;
    for (VertexId v = 1; v < t.id_bound(); ++v) {
      if (!t.alive(v)) continue;
      order.push_back(v);
      double g = t.geometric_height(v);
      lo = any ? std::min(lo, g) : g;
      hi = any ? std::max(hi, g) : g;
      any = true;
    }
    std::sort(order.begin(), order.end(),
              [&](VertexId a, VertexId b) { return t.key(a) < t.key(b); });
    double eps = (hi - lo + 1.0) * 1e-9;
    h.assign(t.id_bound(), 0.0);
    double prev = -std::numeric_limits<double>::infinity();
    for (VertexId v : order) {
      double val = std::max(t.geometric_height(v), prev + eps);
      h[v] = val;
      prev = val;
    }
  }

  double operator()(VertexId v) const { return h[v]; }
};

}  // namespace

HeightKey level_just_above(const Terrain& t, VertexId v) {
  HeightKey k = t.key(v);
  k.nudge += 1;  // one step above even when v itself is a nudged mover
  return k;
}

ContourCycle trace_contour(const Terrain& t, HeightKey level, VertexId lo, VertexId hi) {
  auto above = [&](VertexId v) { return level < t.key(v); };
  assert(!above(lo) && above(hi));
  ContourCycle out;
  // State: inside triangle {a, b, apex}, entered through crossed edge (a, b).
  VertexId a = lo, b = hi;
  VertexId apex = t.next_in_link(a, b);
  const VertexId sa = a, sb = b, sapex = apex;
  std::size_t guard = 0;
  for (;;) {
    if (++guard > 8 * t.id_bound()) throw InconsistentState("contour trace does not close");
    out.edges.emplace_back(above(a) ? b : a, above(a) ? a : b);
    if (a == kInfinityVertex || b == kInfinityVertex || apex == kInfinityVertex)
      out.touches_infinity = true;
    // Exit through the other crossed edge (x, apex) of this triangle into the
    // neighboring triangle.
    VertexId x = (above(apex) != above(a)) ? a : b;
    VertexId third = (x == a) ? b : a;
    auto [p1, p2] = t.edge_apexes(x, apex);
    VertexId next_apex = (p1 == third) ? p2 : p1;
    assert(p1 == third || p2 == third);
    a = x;
    b = apex;
    apex = next_apex;
    if (((a == sa && b == sb) || (a == sb && b == sa)) && apex == sapex) break;
  }
  return out;
}

Color contour_color(const Terrain& t, HeightKey level, const ContourCycle& cycle) {
  if (cycle.touches_infinity) return Color::Red;  // unbounded side drops off to -infinity
  GeomHeights gh(t);
  // Place the polygon at a numeric level strictly inside the crossed strip,
  // so every crossing parameter is interior even when the symbolic level
  // coincides numerically with a vertex height.
  double max_lo = -std::numeric_limits<double>::infinity();
  double min_hi = std::numeric_limits<double>::infinity();
  for (auto [lo, hi] : cycle.edges) {
    max_lo = std::max(max_lo, gh(lo));
    min_hi = std::min(min_hi, gh(hi));
  }
  if (!(max_lo < min_hi))
    throw InconsistentState("contour strip has no numeric level; heights tie");
  double lstar = max_lo + (min_hi - max_lo) / 2.0;
  std::vector<double> px(cycle.edges.size()), py(cycle.edges.size());
  for (std::size_t i = 0; i < cycle.edges.size(); ++i) {
    auto [lo, hi] = cycle.edges[i];
    double hl = gh(lo), hh = gh(hi);
    double s = (lstar - hl) / (hh - hl);
    px[i] = t.x(lo) + s * (t.x(hi) - t.x(lo));
    py[i] = t.y(lo) + s * (t.y(hi) - t.y(lo));
  }
  (void)level;
  double area2 = 0;
  for (std::size_t i = 0; i < px.size(); ++i) {
    std::size_t j = (i + 1) % px.size();
    area2 += px[i] * py[j] - px[j] * py[i];
  }
  // Side of the below endpoint relative to the walk direction; the bounded
  // side is left iff the walk is counter-clockwise.
  for (std::size_t i = 0; i < px.size(); ++i) {
    std::size_t j = (i + 1) % px.size();
    auto [lo, hi] = cycle.edges[i];
    double sx = px[j] - px[i], sy = py[j] - py[i];
    double vx = t.x(lo) - px[i], vy = t.y(lo) - py[i];
    double cr = sx * vy - sy * vx;
    if (cr == 0 || area2 == 0) continue;
    bool low_inside = (cr > 0) == (area2 > 0);
    return low_inside ? Color::Blue : Color::Red;
  }
  throw InconsistentState("degenerate contour, cannot determine color");
}

int count_contours(const Terrain& t, HeightKey level) {
  auto above = [&](VertexId v) { return level < t.key(v); };
  std::set<std::pair<VertexId, VertexId>> remaining;
  for (VertexId v = 0; v < t.id_bound(); ++v) {
    if (!t.alive(v)) continue;
    for (VertexId u : t.link(v)) {
      if (v < u && above(u) != above(v)) remaining.insert({std::min(v, u), std::max(v, u)});
    }
  }
  int count = 0;
  while (!remaining.empty()) {
    auto [a, b] = *remaining.begin();
    VertexId lo = above(a) ? b : a, hi = above(a) ? a : b;
    ContourCycle c = trace_contour(t, level, lo, hi);
    for (auto [x, y] : c.edges) remaining.erase({std::min(x, y), std::max(x, y)});
    ++count;
  }
  return count;
}

namespace {

struct AugmentedTree {
  std::unordered_map<VertexId, std::vector<VertexId>> adj;
  std::unordered_map<VertexId, VertexClass> classes;
};

AugmentedTree build_augmented(const Terrain& t, const std::vector<VertexId>& order) {
  MergeSweep join = merge_sweep(t, order);
  std::vector<VertexId> rev(order.rbegin(), order.rend());
  MergeSweep split = merge_sweep(t, rev);

  AugmentedTree out;
  for (VertexId v : order) {
    if (v == kInfinityVertex) {
      out.classes[v] = VertexClass::Minimum;
      continue;
    }
    LinkInfo li = t.link_info(v);
    if (li.multiple()) throw MultipleSaddle("vertex " + std::to_string(v));
    VertexClass c = li.cls();
    if (c == VertexClass::NegativeSaddle) {
      // Link structure says saddle; the merge sweeps decide the sign.
      int jm = join.distinct_merged[v], sm = split.distinct_merged[v];
      if (jm == 2 && sm == 1) c = VertexClass::NegativeSaddle;
      else if (jm == 1 && sm == 2) c = VertexClass::PositiveSaddle;
      else throw InconsistentState("saddle merges " + std::to_string(jm) + "/" + std::to_string(sm));
    }
    out.classes[v] = c;
  }

  // Carr-style merge of the two augmented trees into the augmented contour
  // tree: repeatedly peel a vertex that is a leaf of one tree and interior to
  // the other.
  std::unordered_map<VertexId, VertexId> jp = join.parent, sp = split.parent;
  std::unordered_map<VertexId, std::unordered_set<VertexId>> jch, sch;
  for (auto& [p, cs] : join.children) jch[p].insert(cs.begin(), cs.end());
  for (auto& [p, cs] : split.children) sch[p].insert(cs.begin(), cs.end());

  auto is_lower_leaf = [&](VertexId v) { return jch[v].empty() && sch[v].size() == 1; };
  auto is_upper_leaf = [&](VertexId v) { return sch[v].empty() && jch[v].size() == 1; };

  std::deque<VertexId> queue;
  for (VertexId v : order)
    if (is_lower_leaf(v) || is_upper_leaf(v)) queue.push_back(v);

  std::unordered_set<VertexId> removed;
  std::size_t edges_added = 0;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    if (removed.count(v)) continue;
    VertexId attach;
    if (is_lower_leaf(v)) {
      attach = jp.at(v);
      jch[attach].erase(v);
      // Splice v out of the split tree.
      VertexId c = *sch[v].begin();
      VertexId p = sp.count(v) ? sp.at(v) : kNoVertex;
      if (p != kNoVertex) {
        sch[p].erase(v);
        sch[p].insert(c);
        sp[c] = p;
      } else {
        sp.erase(c);
      }
    } else if (is_upper_leaf(v)) {
      attach = sp.at(v);
      sch[attach].erase(v);
      VertexId c = *jch[v].begin();
      VertexId p = jp.count(v) ? jp.at(v) : kNoVertex;
      if (p != kNoVertex) {
        jch[p].erase(v);
        jch[p].insert(c);
        jp[c] = p;
      } else {
        jp.erase(c);
      }
    } else {
      continue;  // re-queued stale entry
    }
    removed.insert(v);
    out.adj[v].push_back(attach);
    out.adj[attach].push_back(v);
    ++edges_added;
    if (removed.size() + 1 == order.size()) break;
    for (VertexId w : {attach}) {
      if (!removed.count(w) && (is_lower_leaf(w) || is_upper_leaf(w))) queue.push_back(w);
    }
  }
  if (edges_added + 1 != order.size())
    throw InconsistentState("contour tree merge did not span all vertices");
  return out;
}

}  // namespace

SweepState compute_tree(const Terrain& t) {
  std::vector<VertexId> order = sorted_vertices(t);
  AugmentedTree aug = build_augmented(t, order);

  SweepState out;
  out.classes = aug.classes;

  // Reduce: keep critical vertices, record the arc of each regular vertex.
  auto critical = [&](VertexId v) { return aug.classes.at(v) != VertexClass::Regular; };
  for (VertexId v : order) {
    std::size_t deg = aug.adj[v].size();
    if (critical(v)) {
      out.snapshot.nodes.push_back({v, aug.classes.at(v)});
      if (is_extremum(aug.classes.at(v)) && deg != 1)
        throw InconsistentState("extremum with augmented degree != 1");
      if (is_saddle(aug.classes.at(v)) && deg != 3)
        throw InconsistentState("saddle with augmented degree != 3");
    } else if (deg != 2) {
      throw InconsistentState("regular vertex with augmented degree != 2");
    }
  }
  std::set<std::pair<VertexId, VertexId>> seen;
  for (VertexId v : order) {
    if (!critical(v)) continue;
    for (VertexId first : aug.adj[v]) {
      std::vector<VertexId> chain;
      VertexId prev = v, cur = first;
      while (!critical(cur)) {
        chain.push_back(cur);
        VertexId nxt = aug.adj[cur][0] == prev ? aug.adj[cur][1] : aug.adj[cur][0];
        prev = cur;
        cur = nxt;
      }
      VertexId lo = v, hi = cur;
      if (t.key(hi) < t.key(lo)) std::swap(lo, hi);
      if (seen.insert({lo, hi}).second) {
        out.snapshot.edges.push_back({lo, hi, Color::Red});
        for (VertexId r : chain) out.arc_of[r] = {lo, hi};
      }
    }
  }
  out.snapshot.normalize();
  return out;
}

namespace {

// Reduced-tree adjacency helper.
struct ReducedTree {
  std::unordered_map<VertexId, std::vector<VertexId>> up, down;
  std::unordered_map<VertexId, VertexClass> cls;
};

ReducedTree reduced_adj(const Terrain& t, const SweepState& st) {
  ReducedTree r;
  for (const auto& n : st.snapshot.nodes) r.cls[n.label] = n.cls;
  for (const auto& e : st.snapshot.edges) {
    r.up[e.lo].push_back(e.hi);
    r.down[e.hi].push_back(e.lo);
  }
  return r;
}

// First node on the tree path from `from` toward `to`.
VertexId tree_first_step(const ReducedTree& r, VertexId from, VertexId to) {
  std::unordered_map<VertexId, VertexId> par;
  std::deque<VertexId> bfs{from};
  par[from] = from;
  while (!bfs.empty()) {
    VertexId v = bfs.front();
    bfs.pop_front();
    if (v == to) break;
    for (const auto* side : {&r.up, &r.down}) {
      auto it = side->find(v);
      if (it == side->end()) continue;
      for (VertexId w : it->second)
        if (!par.count(w)) {
          par[w] = v;
          bfs.push_back(w);
        }
    }
  }
  VertexId cur = to;
  while (par.at(cur) != from) cur = par.at(cur);
  return cur;
}

// Merge tree (join for ascending=true) of the height function restricted to
// the reduced contour tree.
void derive_merge_tree(const Terrain& t, const SweepState& st, bool join,
                       std::vector<MergeEdgeSnap>& edges, std::vector<PointerSnap>& pointers) {
  std::vector<VertexId> nodes;
  for (const auto& n : st.snapshot.nodes) nodes.push_back(n.label);
  std::sort(nodes.begin(), nodes.end(),
            [&](VertexId a, VertexId b) { return t.key(a) < t.key(b); });
  if (!join) std::reverse(nodes.begin(), nodes.end());

  std::unordered_map<VertexId, std::vector<VertexId>> adj;
  for (const auto& e : st.snapshot.edges) {
    adj[e.lo].push_back(e.hi);
    adj[e.hi].push_back(e.lo);
  }
  auto before = [&](VertexId a, VertexId b) {
    return join ? t.key(a) < t.key(b) : t.key(b) < t.key(a);
  };

  std::unordered_map<VertexId, int> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = static_cast<int>(i);
  UnionFind uf(nodes.size());
  std::vector<VertexId> top(nodes.size(), kNoVertex);
  std::unordered_map<VertexId, VertexId> parent;
  std::unordered_map<VertexId, std::vector<VertexId>> children;
  for (VertexId w : nodes) {
    std::vector<VertexId> tops;
    for (VertexId u : adj[w]) {
      if (!before(u, w)) continue;
      VertexId s = top[uf.find(index[u])];
      if (std::find(tops.begin(), tops.end(), s) == tops.end()) tops.push_back(s);
    }
    std::sort(tops.begin(), tops.end());
    for (VertexId s : tops) {
      parent[s] = w;
      children[w].push_back(s);
      uf.unite(index[s], index[w]);
    }
    top[uf.find(index[w])] = w;
  }

  VertexClass keep_saddle = join ? VertexClass::NegativeSaddle : VertexClass::PositiveSaddle;
  VertexClass keep_extremum = join ? VertexClass::Minimum : VertexClass::Maximum;
  auto member = [&](VertexId v) {
    VertexClass c = st.classes.at(v);
    return c == keep_saddle || c == keep_extremum;
  };
  // Suppress non-members: they have exactly one child in this merge tree.
  auto climb = [&](VertexId v) {
    VertexId cur = v;
    while (parent.count(cur) && !member(parent.at(cur))) cur = parent.at(cur);
    return parent.count(cur) ? parent.at(cur) : kNoVertex;
  };
  std::unordered_map<VertexId, std::vector<VertexId>> mchildren;
  for (VertexId v : nodes) {
    if (!member(v)) continue;
    VertexId p = climb(v);
    if (p != kNoVertex) {
      edges.push_back({v, p});
      mchildren[p].push_back(v);
    }
  }
  // Extremum pointers: best extremum in each saddle subtree, bottom-up.
  std::unordered_map<VertexId, VertexId> best;
  for (VertexId v : nodes) {  // sorted so children precede parents
    if (!member(v)) continue;
    if (st.classes.at(v) == keep_extremum) {
      best[v] = v;
    } else {
      VertexId b = kNoVertex;
      for (VertexId c : mchildren[v]) {
        VertexId bc = best.at(c);
        if (b == kNoVertex || before(bc, b)) b = bc;
      }
      if (b == kNoVertex) throw InconsistentState("merge-tree saddle without children");
      best[v] = b;
      pointers.push_back({v, b});
    }
  }
}

}  // namespace

std::vector<PairSnap> persistence_pairs(const Terrain& t) {
  std::vector<PairSnap> pairs;
  std::vector<VertexId> order = sorted_vertices(t);
  for (int dir = 0; dir < 2; ++dir) {
    bool ascending = dir == 0;
    std::vector<VertexId> verts = order;
    if (!ascending) std::reverse(verts.begin(), verts.end());
    auto before = [&](VertexId a, VertexId b) {
      return ascending ? t.key(a) < t.key(b) : t.key(b) < t.key(a);
    };
    UnionFind uf(t.id_bound());
    std::vector<VertexId> champion(t.id_bound(), kNoVertex);  // earliest extremum per comp
    std::vector<char> done(t.id_bound(), 0);
    for (VertexId w : verts) {
      std::vector<int> comps;
      for (VertexId u : t.link(w)) {
        if (!done[u]) continue;
        int c = uf.find(u);
        if (std::find(comps.begin(), comps.end(), c) == comps.end()) comps.push_back(c);
      }
      if (comps.size() > 2) throw MultipleSaddle("vertex " + std::to_string(w));
      if (comps.size() == 2) {
        VertexId c1 = champion[comps[0]], c2 = champion[comps[1]];
        VertexId dies = before(c1, c2) ? c2 : c1;
        VertexId lives = before(c1, c2) ? c1 : c2;
        if (ascending)
          pairs.push_back({dies, w});  // minimum paired with the join saddle
        else
          pairs.push_back({w, dies});  // split saddle paired with the maximum
        uf.unite(comps[0], comps[1]);
        uf.unite(comps[0], w);
        champion[uf.find(w)] = lives;
      } else if (comps.size() == 1) {
        VertexId keep = champion[comps[0]];
        uf.unite(comps[0], w);
        champion[uf.find(w)] = keep;
      } else {
        champion[uf.find(w)] = w;  // new extremum starts a component
      }
      done[w] = 1;
    }
  }
  return pairs;
}

SweepState compute_state(const Terrain& t) {
  SweepState st = compute_tree(t);
  ReducedTree rt = reduced_adj(t, st);

  // Colors: trace one representative contour just above each edge's lower
  // endpoint, seeded inside the correct upper-link component.
  for (auto& e : st.snapshot.edges) {
    VertexId a = e.lo, b = e.hi;
    HeightKey level = level_just_above(t, a);
    VertexId seed_hi = kNoVertex;
    if (rt.cls.at(a) == VertexClass::PositiveSaddle) {
      // Two up-edges: pick the upper-link component whose ascending paths
      // end in the subtree hanging off b.
      for (const auto& comp : t.upper_link_components(a)) {
        VertexId rep = comp[0];
        for (VertexId u : comp)
          if (t.below(u, rep)) rep = u;
        VertexId peak = climb_to_maximum(t, rep);
        if (tree_first_step(rt, a, peak) == b) {
          seed_hi = rep;
          break;
        }
      }
      if (seed_hi == kNoVertex) throw InconsistentState("no upper component maps to edge");
    } else {
      seed_hi = t.lowest_in_upper_link(a);
    }
    ContourCycle cyc = trace_contour(t, level, a, seed_hi);
    e.color = contour_color(t, level, cyc);
  }

  derive_merge_tree(t, st, true, st.snapshot.join_edges, st.snapshot.join_lowest);
  derive_merge_tree(t, st, false, st.snapshot.split_edges, st.snapshot.split_highest);
  st.snapshot.pairs = persistence_pairs(t);
  st.snapshot.normalize();
  return st;
}

}  // namespace terratree::sweep
