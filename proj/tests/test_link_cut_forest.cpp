#include <doctest.h>

#include <map>
#include <queue>
#include <random>
#include <set>

#include "terratree/link_cut_forest.hpp"

using namespace terratree;

namespace {

HeightKey key(double h, VertexId id = 0) { return HeightKey{h, id, 0, 0}; }

// Naive adjacency-list forest used as the oracle for every observable query.
struct NaiveForest {
  std::map<int, std::set<int>> adj;

  void add(int n) { adj[n]; }
  void link(int a, int b) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  void cut(int a, int b) {
    adj[a].erase(b);
    adj[b].erase(a);
  }
  bool has_edge(int a, int b) const { return adj.at(a).count(b) > 0; }
  std::vector<int> path(int a, int b) const {  // BFS
    std::map<int, int> par;
    std::queue<int> q;
    q.push(a);
    par[a] = a;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      if (x == b) break;
      for (int y : adj.at(x))
        if (!par.count(y)) {
          par[y] = x;
          q.push(y);
        }
    }
    if (!par.count(b)) return {};
    std::vector<int> p;
    for (int x = b; x != a; x = par[x]) p.push_back(x);
    p.push_back(a);
    std::reverse(p.begin(), p.end());
    return p;
  }
  bool connected(int a, int b) const { return !path(a, b).empty(); }
};

}  // namespace

TEST_CASE("link and cut are inverse") {
  LinkCutForest f;
  auto a = f.make_node(), b = f.make_node();
  CHECK_FALSE(f.connected(a, b));
  f.link(a, b);
  CHECK(f.connected(a, b));
  CHECK_THROWS_AS(f.link(a, b), SameTree);
  f.cut(a, b);
  CHECK_FALSE(f.connected(a, b));
  CHECK_THROWS_AS(f.cut(a, b), NoSuchEdge);
}

TEST_CASE("cut only severs existing edges") {
  LinkCutForest f;
  auto a = f.make_node(), b = f.make_node(), c = f.make_node();
  f.link(a, b);
  f.link(b, c);
  CHECK_THROWS_AS(f.cut(a, c), NoSuchEdge);  // connected but not adjacent
  f.cut(b, a);                               // order-insensitive
  CHECK_FALSE(f.connected(a, c));
  CHECK(f.connected(b, c));
}

TEST_CASE("evert makes the node the root; double evert restores queries") {
  LinkCutForest f;
  std::vector<LinkCutForest::Node> n;
  for (int i = 0; i < 5; ++i) n.push_back(f.make_node());
  for (int i = 0; i + 1 < 5; ++i) f.link(n[i], n[i + 1]);
  f.evert(n[0]);
  CHECK(f.root(n[4]) == n[0]);
  f.evert(n[4]);
  CHECK(f.root(n[0]) == n[4]);
  f.evert(n[4]);
  CHECK(f.root(n[2]) == n[4]);
  CHECK(f.root(n[4]) == n[4]);
}

TEST_CASE("rooted link and cut preserve the structural root") {
  LinkCutForest f;
  auto r = f.make_node(), a = f.make_node(), b = f.make_node(), c = f.make_node();
  f.link_rooted(a, r);
  f.link_rooted(b, a);
  f.link_rooted(c, a);
  for (auto x : {r, a, b, c}) CHECK(f.root(x) == r);
  f.cut_from_parent(a);
  CHECK(f.root(b) == a);
  CHECK(f.root(c) == a);
  CHECK(f.root(r) == r);
  CHECK_THROWS_AS(f.cut_from_parent(r), NoSuchEdge);
  CHECK_THROWS_AS(f.link_rooted(a, b), SameTree);
}

TEST_CASE("path_first_step on simple shapes") {
  LinkCutForest f;
  auto a = f.make_node(), b = f.make_node(), c = f.make_node();
  f.link(a, b);
  f.link(b, c);
  CHECK(f.path_first_step(a, c) == b);
  CHECK(f.path_first_step(c, a) == b);
  CHECK(f.path_first_step(a, b) == b);

  auto s = f.make_node(), x = f.make_node(), y = f.make_node();
  f.link(s, x);
  f.link(s, y);
  CHECK(f.path_first_step(s, y) == y);
  CHECK(f.path_first_step(x, y) == s);
  CHECK_THROWS_AS(f.path_first_step(a, s), NotConnected);
}

TEST_CASE("path_search_monotone finds the straddling edge") {
  LinkCutForest f;
  auto a = f.make_node(key(1)), b = f.make_node(key(3)), c = f.make_node(key(7)),
       d = f.make_node(key(9));
  f.link(a, b);
  f.link(b, c);
  f.link(c, d);
  auto [p, q] = f.path_search_monotone(a, d, key(5));
  CHECK(p == b);
  CHECK(q == c);
  // Decreasing direction.
  auto [p2, q2] = f.path_search_monotone(d, a, key(5));
  CHECK(p2 == c);
  CHECK(q2 == b);
  CHECK_THROWS_AS(f.path_search_monotone(a, d, key(0.5)), KeyOutOfRange);
  CHECK_THROWS_AS(f.path_search_monotone(a, d, key(11)), KeyOutOfRange);
  // Debug oracle flags non-monotone paths.
  auto e = f.make_node(key(2));
  f.link(d, e);
  f.set_debug_checks(true);
  CHECK_THROWS_AS(f.path_search_monotone(a, e, key(5)), NotMonotone);
  f.set_debug_checks(false);
}

TEST_CASE("lca relative to an explicit root") {
  LinkCutForest f;
  auto r = f.make_node(), s = f.make_node(), x = f.make_node(), y = f.make_node(),
       z = f.make_node();
  f.link(s, r);
  f.link(x, s);
  f.link(y, s);
  f.link(z, r);
  CHECK(f.lca(x, y, r) == s);
  CHECK(f.lca(x, z, r) == r);
  CHECK(f.lca(x, s, r) == s);
  CHECK(f.lca(x, x, r) == x);
  CHECK(f.lca(x, y, x) == x);  // rerooting changes ancestry
}

TEST_CASE("randomized ops agree with the naive forest oracle") {
  std::mt19937_64 rng(20240811);
  const int n = 120;
  const int ops = 20000;
  LinkCutForest f;
  NaiveForest naive;
  std::vector<LinkCutForest::Node> node(n);
  for (int i = 0; i < n; ++i) {
    node[i] = f.make_node(key(i, static_cast<VertexId>(i)));
    naive.add(i);
  }
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_int_distribution<int> op(0, 5);
  for (int it = 0; it < ops; ++it) {
    int a = pick(rng), b = pick(rng);
    switch (op(rng)) {
      case 0: {  // link
        if (a == b || naive.connected(a, b)) {
          if (a != b) CHECK_THROWS_AS(f.link(node[a], node[b]), SameTree);
          break;
        }
        f.link(node[a], node[b]);
        naive.link(a, b);
        break;
      }
      case 1: {  // cut
        if (a == b) break;
        if (!naive.has_edge(a, b)) {
          CHECK_THROWS_AS(f.cut(node[a], node[b]), NoSuchEdge);
          break;
        }
        f.cut(node[a], node[b]);
        naive.cut(a, b);
        break;
      }
      case 2: {  // connectivity
        CHECK(f.connected(node[a], node[b]) == (a == b || naive.connected(a, b)));
        break;
      }
      case 3: {  // evert + root
        f.evert(node[a]);
        CHECK(f.root(node[b]) == (naive.connected(a, b) || a == b ? node[a] : f.root(node[b])));
        break;
      }
      case 4: {  // first step
        if (a == b || !naive.connected(a, b)) {
          if (a != b) CHECK_THROWS_AS(f.path_first_step(node[a], node[b]), NotConnected);
          break;
        }
        auto p = naive.path(a, b);
        CHECK(f.path_first_step(node[a], node[b]) == node[p[1]]);
        break;
      }
      case 5: {  // lca against BFS paths
        if (!naive.connected(a, b) && a != b) break;
        int r = a;  // root at a, lca(x, y) wrt a
        int x = pick(rng), y = pick(rng);
        if (!(naive.connected(r, x) || r == x) || !(naive.connected(r, y) || r == y)) break;
        auto px = naive.path(r, x), py = naive.path(r, y);
        std::size_t i = 0;
        while (i + 1 < px.size() && i + 1 < py.size() && px[i + 1] == py[i + 1]) ++i;
        CHECK(f.lca(node[x], node[y], node[r]) == node[px[i]]);
        break;
      }
    }
  }
}

TEST_CASE("amortized rotations grow like ops times log nodes") {
  auto run = [](int n, int ops) {
    std::mt19937_64 rng(7);
    LinkCutForest f;
    std::vector<LinkCutForest::Node> node(n);
    for (int i = 0; i < n; ++i) node[i] = f.make_node();
    // Keep a spanning path, then do random everts/roots/first-steps.
    for (int i = 0; i + 1 < n; ++i) f.link(node[i], node[i + 1]);
    std::uniform_int_distribution<int> pick(0, n - 1);
    f.reset_counters();
    for (int it = 0; it < ops; ++it) {
      int a = pick(rng), b = pick(rng);
      switch (it % 3) {
        case 0: f.evert(node[a]); break;
        case 1: (void)f.root(node[a]); break;
        case 2:
          if (a != b) (void)f.path_first_step(node[a], node[b]);
          break;
      }
    }
    return f.counters().rotations;
  };
  const int ops = 30000;
  std::uint64_t r1 = run(250, ops);
  std::uint64_t r2 = run(500, ops);
  // Doubling the node count must not blow up the per-op cost.
  CHECK(static_cast<double>(r2) <= 2.5 * static_cast<double>(r1));
}
