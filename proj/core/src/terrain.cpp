#include "terratree/terrain.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace terratree {

namespace {

double orient2d(double ax, double ay, double bx, double by, double cx, double cy) {
  return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
}

std::uint64_t pair_key(VertexId a, VertexId b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

VertexClass LinkInfo::cls() const {
  if (lower_degree == 0 && upper_degree == 0) throw InconsistentState("isolated vertex");
  if (lower_degree == 0) return VertexClass::Minimum;
  if (upper_degree == 0) return VertexClass::Maximum;
  if (multiple()) throw MultipleSaddle("link has more than two lower or upper components");
  if (lower_components == 1) {
    assert(upper_components == 1);
    return VertexClass::Regular;
  }
  // Two lower components: two down-contours, so the saddle is negative.
  assert(lower_components == 2 && upper_components == 2);
  return VertexClass::NegativeSaddle;
}

Terrain Terrain::build(const std::vector<VertexInput>& vertices,
                       const std::vector<TriangleIds>& triangles) {
  if (vertices.size() < 3) throw NotATriangulation("need at least 3 finite vertices");

  Terrain t;
  t.verts_.resize(vertices.size() + 1);
  t.verts_[kInfinityVertex].alive = true;
  for (const auto& vi : vertices) {
    if (vi.id == kInfinityVertex || vi.id > vertices.size())
      throw NotATriangulation("vertex ids must be 1..n");
    VertexRec& r = t.verts_[vi.id];
    if (r.alive) throw NotATriangulation("duplicate vertex id " + std::to_string(vi.id));
    if (!std::isfinite(vi.x) || !std::isfinite(vi.y) || !std::isfinite(vi.z))
      throw NotATriangulation("non-finite coordinate on vertex " + std::to_string(vi.id));
    r.x = vi.x;
    r.y = vi.y;
    r.height = vi.z;
    r.alive = true;
  }
  t.finite_count_ = vertices.size();

  if (triangles.empty()) throw NotATriangulation("no triangles");

  // next[a][b] = c for every counter-clockwise triangle corner (a; b, c).
  std::vector<std::unordered_map<VertexId, VertexId>> next(t.verts_.size());
  for (const auto& tri : triangles) {
    VertexId v[3] = {tri.a, tri.b, tri.c};
    for (VertexId u : v)
      if (u == kInfinityVertex || !t.alive(u))
        throw NotATriangulation("triangle references unknown vertex");
    if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2])
      throw NotATriangulation("degenerate triangle");
    double area = orient2d(t.x(v[0]), t.y(v[0]), t.x(v[1]), t.y(v[1]), t.x(v[2]), t.y(v[2]));
    if (!(area > 0))
      throw NotATriangulation("triangle not counter-clockwise or degenerate");
    for (int i = 0; i < 3; ++i) {
      VertexId a = v[i], b = v[(i + 1) % 3], c = v[(i + 2) % 3];
      if (!next[a].emplace(b, c).second)
        throw NotATriangulation("non-manifold edge or inconsistent orientation");
    }
  }

  // Assemble each finite vertex's cycle. Interior vertices close on their
  // own; hull vertices leave an open chain that the vertex at infinity closes.
  std::vector<VertexId> chain_start(t.verts_.size(), kNoVertex);
  std::vector<VertexId> chain_end(t.verts_.size(), kNoVertex);
  for (VertexId a = 1; a < t.verts_.size(); ++a) {
    auto& nx = next[a];
    if (nx.empty()) throw NotATriangulation("vertex " + std::to_string(a) + " not in any triangle");
    std::unordered_set<VertexId> has_pred;
    for (const auto& [b, c] : nx) has_pred.insert(c);
    VertexId start = kNoVertex;
    for (const auto& [b, c] : nx)
      if (!has_pred.count(b)) {
        if (start != kNoVertex) throw NotATriangulation("pinched vertex " + std::to_string(a));
        start = b;
      }
    bool hull = start != kNoVertex;
    if (!hull) start = nx.begin()->first;
    std::vector<VertexId>& cycle = t.verts_[a].link;
    VertexId cur = start;
    for (;;) {
      cycle.push_back(cur);
      auto it = nx.find(cur);
      if (it == nx.end()) break;  // open chain end
      cur = it->second;
      if (cur == start) break;  // closed
    }
    if (cycle.size() != nx.size() + (hull ? 1 : 0))
      throw NotATriangulation("link of vertex " + std::to_string(a) + " is not a single cycle");
    if (hull) {
      chain_start[a] = cycle.front();
      chain_end[a] = cycle.back();
      cycle.push_back(kInfinityVertex);
    }
  }

  // Chain ends must match up around the hull: the fan of vertex a ends at its
  // clockwise hull neighbor, whose own fan starts at a.
  std::unordered_map<VertexId, VertexId> vinf_next;  // s_a -> a
  std::size_t hull_count = 0;
  for (VertexId a = 1; a < t.verts_.size(); ++a) {
    if (chain_start[a] == kNoVertex) continue;
    ++hull_count;
    if (chain_start[chain_end[a]] != a)
      throw NotATriangulation("boundary is not a single convex cycle");
    vinf_next[chain_start[a]] = a;
  }
  if (hull_count < 3) throw NotATriangulation("boundary has fewer than 3 vertices");

  std::vector<VertexId>& vl = t.verts_[kInfinityVertex].link;
  VertexId h0 = vinf_next.begin()->first;
  VertexId cur = h0;
  do {
    vl.push_back(cur);
    auto it = vinf_next.find(cur);
    if (it == vinf_next.end()) throw NotATriangulation("boundary cycle is broken");
    cur = it->second;
  } while (cur != h0 && vl.size() <= hull_count);
  if (vl.size() != hull_count) throw NotATriangulation("boundary is not one cycle");

  // Convexity of the hull (walked in link order of the infinity vertex).
  for (std::size_t i = 0; i < vl.size(); ++i) {
    VertexId p = vl[i], q = vl[(i + 1) % vl.size()], r = vl[(i + 2) % vl.size()];
    if (orient2d(t.x(p), t.y(p), t.x(q), t.y(q), t.x(r), t.y(r)) > 0)
      throw NotATriangulation("convex hull of input is not covered");
  }

  t.check_invariants();
  return t;
}

HeightKey Terrain::key(VertexId v) const {
  if (v == kInfinityVertex) return HeightKey{0.0, 0, -1, 0};
  if (mover_ && mover_->vertex == v && mover_->anchor != kNoVertex) {
    HeightKey k = key(mover_->anchor);
    k.nudge = mover_->nudge;
    return k;
  }
  return HeightKey{verts_[v].height, v, 0, 0};
}

bool Terrain::adjacent(VertexId u, VertexId v) const {
  const auto& l = verts_[u].link.size() <= verts_[v].link.size() ? verts_[u].link : verts_[v].link;
  VertexId other = verts_[u].link.size() <= verts_[v].link.size() ? v : u;
  return std::find(l.begin(), l.end(), other) != l.end();
}

int Terrain::link_pos(VertexId v, VertexId u) const {
  const auto& l = verts_[v].link;
  auto it = std::find(l.begin(), l.end(), u);
  if (it == l.end()) throw InconsistentState("vertices are not adjacent");
  return static_cast<int>(it - l.begin());
}

VertexId Terrain::next_in_link(VertexId v, VertexId u) const {
  const auto& l = verts_[v].link;
  return l[(link_pos(v, u) + 1) % l.size()];
}

VertexId Terrain::prev_in_link(VertexId v, VertexId u) const {
  const auto& l = verts_[v].link;
  return l[(link_pos(v, u) + l.size() - 1) % l.size()];
}

std::pair<VertexId, VertexId> Terrain::edge_apexes(VertexId u, VertexId v) const {
  return {next_in_link(u, v), prev_in_link(u, v)};
}

bool Terrain::below_for_link(VertexId nbr, VertexId center,
                             const std::optional<std::pair<VertexId, VertexId>>& swapped) const {
  bool b = below(nbr, center);
  if (swapped && ((swapped->first == nbr && swapped->second == center) ||
                  (swapped->first == center && swapped->second == nbr)))
    b = !b;
  return b;
}

LinkInfo Terrain::link_info(VertexId v,
                            std::optional<std::pair<VertexId, VertexId>> swapped) const {
  const auto& l = verts_[v].link;
  LinkInfo info;
  if (l.empty()) return info;
  bool prev_below = below_for_link(l.back(), v, swapped);
  for (VertexId u : l) {
    bool b = below_for_link(u, v, swapped);
    (b ? info.lower_degree : info.upper_degree)++;
    if (b && !prev_below) info.lower_components++;
    if (!b && prev_below) info.upper_components++;
    prev_below = b;
  }
  if (info.lower_degree > 0 && info.lower_components == 0) info.lower_components = 1;
  if (info.upper_degree > 0 && info.upper_components == 0) info.upper_components = 1;
  return info;
}

VertexClass Terrain::classify(VertexId v) const { return link_info(v).cls(); }

LinkComponents Terrain::link_components(VertexId v) const {
  const auto& l = verts_[v].link;
  LinkComponents out;
  if (l.empty()) return out;
  // Rotate to a boundary so runs are not split across the seam.
  std::size_t n = l.size();
  std::size_t start = 0;
  bool first_below = below(l[0], v);
  for (std::size_t i = 0; i < n; ++i) {
    if (below(l[i], v) != first_below) break;
    if (i + 1 == n) {  // uniform link: single component
      auto& side = first_below ? out.lower : out.upper;
      side.emplace_back(l.begin(), l.end());
      return out;
    }
  }
  while (below(l[(start + n - 1) % n], v) == below(l[start], v)) start = (start + n - 1) % n;
  std::vector<VertexId> run;
  bool run_below = below(l[start], v);
  for (std::size_t i = 0; i < n; ++i) {
    VertexId u = l[(start + i) % n];
    bool b = below(u, v);
    if (b != run_below) {
      (run_below ? out.lower : out.upper).push_back(std::move(run));
      run.clear();
      run_below = b;
    }
    run.push_back(u);
  }
  (run_below ? out.lower : out.upper).push_back(std::move(run));
  return out;
}

std::vector<std::vector<VertexId>> Terrain::lower_link_components(VertexId v) const {
  return link_components(v).lower;
}

std::vector<std::vector<VertexId>> Terrain::upper_link_components(VertexId v) const {
  return link_components(v).upper;
}

VertexId Terrain::lowest_in_lower_link(VertexId v) const {
  VertexId best = kNoVertex;
  for (VertexId u : verts_[v].link)
    if (below(u, v) && (best == kNoVertex || below(u, best))) best = u;
  return best;
}

VertexId Terrain::lowest_in_upper_link(VertexId v) const {
  VertexId best = kNoVertex;
  for (VertexId u : verts_[v].link)
    if (!below(u, v) && (best == kNoVertex || below(u, best))) best = u;
  return best;
}

void Terrain::begin_move(VertexId v) {
  if (mover_) throw InconsistentState("a vertex is already in motion");
  if (v == kInfinityVertex) throw InconsistentState("the vertex at infinity cannot move");
  mover_ = Mover{v, kNoVertex, 0};
}

void Terrain::place_mover_above(VertexId anchor) {
  assert(mover_ && anchor != mover_->vertex);
  mover_->anchor = anchor;
  mover_->nudge = 2;  // levels use +-1, so a level can sit between anchor and mover
}

void Terrain::place_mover_below(VertexId anchor) {
  assert(mover_ && anchor != mover_->vertex);
  if (anchor == kInfinityVertex) throw InconsistentState("nothing lies below the vertex at infinity");
  mover_->anchor = anchor;
  mover_->nudge = -2;
}

void Terrain::end_move(double final_height) {
  assert(mover_);
  verts_[mover_->vertex].height = final_height;
  mover_.reset();
}

std::optional<VertexId> Terrain::mover() const {
  if (mover_) return mover_->vertex;
  return std::nullopt;
}

double Terrain::geometric_height(VertexId v) const {
  if (mover_ && mover_->vertex == v && mover_->anchor != kNoVertex)
    return verts_[mover_->anchor].height;
  return verts_[v].height;
}

VertexId Terrain::allocate_vertex(double px, double py, double height) {
  VertexRec r;
  r.x = px;
  r.y = py;
  r.height = height;
  r.alive = true;
  verts_.push_back(std::move(r));
  ++finite_count_;
  return static_cast<VertexId>(verts_.size() - 1);
}

void Terrain::split_triangle(VertexId nv, VertexId a, VertexId b, VertexId c) {
  // (a, b, c) must be a triangle in cycle order: next of b in a's cycle is c.
  assert(next_in_link(a, b) == c);
  verts_[nv].link = {a, b, c};
  auto& la = verts_[a].link;
  la.insert(la.begin() + link_pos(a, c), nv);  // between b and c
  auto& lb = verts_[b].link;
  lb.insert(lb.begin() + link_pos(b, a), nv);  // between c and a
  auto& lc = verts_[c].link;
  lc.insert(lc.begin() + link_pos(c, b), nv);  // between a and b
}

void Terrain::split_edge(VertexId nv, VertexId a, VertexId b) {
  auto [ap1, ap2] = edge_apexes(a, b);  // triangles (a, b, ap1) and (a, ap2, b)
  verts_[nv].link = {b, ap1, a, ap2};
  auto& la = verts_[a].link;
  la[link_pos(a, b)] = nv;
  auto& lb = verts_[b].link;
  lb[link_pos(b, a)] = nv;
  auto& l1 = verts_[ap1].link;
  l1.insert(l1.begin() + link_pos(ap1, a), nv);  // between b and a in ap1's cycle
  auto& l2 = verts_[ap2].link;
  l2.insert(l2.begin() + link_pos(ap2, b), nv);  // between a and b in ap2's cycle
}

void Terrain::remove_vertex_degree3(VertexId v) {
  assert(degree(v) == 3);
  auto l = verts_[v].link;
  for (VertexId u : l) {
    auto& lu = verts_[u].link;
    lu.erase(lu.begin() + link_pos(u, v));
  }
  verts_[v].alive = false;
  verts_[v].link.clear();
  --finite_count_;
}

void Terrain::remove_vertex_degree4(VertexId v, VertexId d1, VertexId d2) {
  assert(degree(v) == 4);
  assert(next_in_link(v, next_in_link(v, d1)) == d2);  // d1, d2 opposite in the cycle
  for (VertexId u : verts_[v].link) {
    auto& lu = verts_[u].link;
    int p = link_pos(u, v);
    if (u == d1 || u == d2) {
      lu[p] = (u == d1) ? d2 : d1;  // v's slot becomes the new diagonal
    } else {
      lu.erase(lu.begin() + p);
    }
  }
  verts_[v].alive = false;
  verts_[v].link.clear();
  --finite_count_;
}

Terrain::Location Terrain::locate(double px, double py) const {
  for (VertexId v = 1; v < verts_.size(); ++v)
    if (verts_[v].alive && verts_[v].x == px && verts_[v].y == py)
      return {Location::OnVertex, v, kNoVertex, kNoVertex};
  for (const TriangleIds& tri : finite_triangles()) {
    double o1 = orient2d(x(tri.a), y(tri.a), x(tri.b), y(tri.b), px, py);
    double o2 = orient2d(x(tri.b), y(tri.b), x(tri.c), y(tri.c), px, py);
    double o3 = orient2d(x(tri.c), y(tri.c), x(tri.a), y(tri.a), px, py);
    if (o1 < 0 || o2 < 0 || o3 < 0) continue;
    if (o1 > 0 && o2 > 0 && o3 > 0) return {Location::InsideTriangle, tri.a, tri.b, tri.c};
    if (o1 == 0 && o2 > 0 && o3 > 0) return {Location::OnEdge, tri.a, tri.b, tri.c};
    if (o2 == 0 && o1 > 0 && o3 > 0) return {Location::OnEdge, tri.b, tri.c, tri.a};
    if (o3 == 0 && o1 > 0 && o2 > 0) return {Location::OnEdge, tri.c, tri.a, tri.b};
    // On a vertex would have been caught above; collinear corner cases fall
    // through to the next triangle.
  }
  return {Location::Outside, kNoVertex, kNoVertex, kNoVertex};
}

double Terrain::surface_height(double px, double py) const {
  Location loc = locate(px, py);
  switch (loc.kind) {
    case Location::OnVertex:
      return raw_height(loc.a);
    case Location::OnEdge: {
      double ax = x(loc.a), ay = y(loc.a), bx = x(loc.b), by = y(loc.b);
      double t = std::abs(bx - ax) > std::abs(by - ay) ? (px - ax) / (bx - ax) : (py - ay) / (by - ay);
      return raw_height(loc.a) + t * (raw_height(loc.b) - raw_height(loc.a));
    }
    case Location::InsideTriangle: {
      double ax = x(loc.a), ay = y(loc.a), bx = x(loc.b), by = y(loc.b), cx = x(loc.c), cy = y(loc.c);
      double d = orient2d(ax, ay, bx, by, cx, cy);
      double wa = orient2d(bx, by, cx, cy, px, py) / d;
      double wb = orient2d(cx, cy, ax, ay, px, py) / d;
      double wc = 1.0 - wa - wb;
      return wa * raw_height(loc.a) + wb * raw_height(loc.b) + wc * raw_height(loc.c);
    }
    case Location::Outside:
      throw PointAtInfinity("point lies outside the finite triangulation");
  }
  throw InconsistentState("unreachable");
}

std::vector<TriangleIds> Terrain::finite_triangles() const {
  std::vector<TriangleIds> out;
  for (VertexId v = 1; v < verts_.size(); ++v) {
    if (!verts_[v].alive) continue;
    const auto& l = verts_[v].link;
    for (std::size_t i = 0; i < l.size(); ++i) {
      VertexId b = l[i], c = l[(i + 1) % l.size()];
      if (b == kInfinityVertex || c == kInfinityVertex) continue;
      if (v < b && v < c) out.push_back({v, b, c});
    }
  }
  return out;
}

void Terrain::check_invariants() const {
  for (VertexId v = 0; v < verts_.size(); ++v) {
    if (!verts_[v].alive) continue;
    const auto& l = verts_[v].link;
    if (v != kInfinityVertex && l.size() < 3)
      throw InconsistentState("finite vertex with degree < 3");
    std::unordered_set<VertexId> seen;
    for (std::size_t i = 0; i < l.size(); ++i) {
      VertexId u = l[i];
      if (!alive(u)) throw InconsistentState("link references dead vertex");
      if (!seen.insert(u).second) throw InconsistentState("repeated link neighbor");
      if (!adjacent(u, v)) throw InconsistentState("asymmetric adjacency");
      // Triangle (v, l[i], l[i+1]) must be seen consistently from l[i].
      VertexId w = l[(i + 1) % l.size()];
      if (next_in_link(u, w) != v) throw InconsistentState("inconsistent triangle corner");
    }
  }
}

}  // namespace terratree
