#include "terratree/terrain_gen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace terratree {

namespace {

struct Pt {
  double x, y;
};

double orient(const Pt& a, const Pt& b, const Pt& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool in_circumcircle(const Pt& a, const Pt& b, const Pt& c, const Pt& p) {
  double ax = a.x - p.x, ay = a.y - p.y;
  double bx = b.x - p.x, by = b.y - p.y;
  double cx = c.x - p.x, cy = c.y - p.y;
  double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
               (bx * bx + by * by) * (ax * cy - cx * ay) +
               (cx * cx + cy * cy) * (ax * by - bx * ay);
  return det > 0;  // assumes (a, b, c) counter-clockwise
}

struct Tri {
  int a, b, c;
};

// Circumcircle membership with the enclosing-triangle corners treated as
// points at infinity: triangles touching them degenerate to half-planes,
// which keeps the boundary exact in plain doubles.
bool in_circumcircle_sym(int ia, int ib, int ic, int ip, const std::vector<Pt>& all, int n) {
  const Pt &a = all[ia], &b = all[ib], &c = all[ic], &p = all[ip];
  bool sa = ia >= n, sb = ib >= n, sc = ic >= n;
  int supers = sa + sb + sc;
  if (supers == 0) return in_circumcircle(a, b, c, p);
  if (supers == 1) {
    // Disk through two finite points and a far corner: the half-plane on the
    // far corner's side of the finite chord.
    const Pt &u = sa ? b : a, &v = sa ? c : (sb ? c : b), &s = sa ? a : (sb ? b : c);
    double side_p = orient(u, v, p);
    double side_s = orient(u, v, s);
    return side_p * side_s > 0;
  }
  if (supers == 2) {
    // Disk through one finite point and two far corners: the half-plane
    // bounded by the line through the finite point parallel to the far chord.
    const Pt& f = !sa ? a : (!sb ? b : c);
    const Pt& s1 = sa ? a : b;
    const Pt& s2 = sc ? c : b;
    Pt f2{f.x + (s2.x - s1.x), f.y + (s2.y - s1.y)};
    double side_p = orient(f, f2, p);
    double side_s = orient(f, f2, s1);
    return side_p * side_s > 0;
  }
  return true;  // the all-corner seed triangle contains every data point
}

// Bowyer-Watson with a large enclosing triangle; quadratic, which is fine at
// the scales the generator serves.
std::vector<Tri> delaunay(const std::vector<Pt>& pts) {
  int n = static_cast<int>(pts.size());
  std::vector<Pt> all = pts;
  all.push_back({-1e3, -1e3});
  all.push_back({1e3, -1e3});
  all.push_back({0, 1e3});
  std::vector<Tri> tris = {{n, n + 1, n + 2}};
  for (int i = 0; i < n; ++i) {
    std::vector<Tri> keep;
    std::vector<Tri> bad;
    for (const Tri& t : tris) {
      if (in_circumcircle_sym(t.a, t.b, t.c, i, all, n))
        bad.push_back(t);
      else
        keep.push_back(t);
    }
    // Cavity boundary: edges of bad triangles not shared by two of them.
    std::set<std::pair<int, int>> boundary;
    for (const Tri& t : bad) {
      int vs[3] = {t.a, t.b, t.c};
      for (int e = 0; e < 3; ++e) {
        auto key = std::minmax(vs[e], vs[(e + 1) % 3]);
        auto k = std::pair<int, int>(key.first, key.second);
        if (!boundary.erase(k)) boundary.insert(k);
      }
    }
    // Refill the cavity fanning from the new point, keeping the boundary
    // edges' orientation (counter-clockwise triangles).
    for (const Tri& t : bad) {
      int vs[3] = {t.a, t.b, t.c};
      for (int e = 0; e < 3; ++e) {
        int u = vs[e], v = vs[(e + 1) % 3];
        auto key = std::minmax(u, v);
        if (boundary.count({key.first, key.second})) keep.push_back({u, v, i});
      }
    }
    tris = std::move(keep);
  }
  std::vector<Tri> out;
  for (const Tri& t : tris)
    if (t.a < n && t.b < n && t.c < n) out.push_back(t);
  return out;
}

}  // namespace

GeneratedTerrain generate_terrain(std::uint64_t seed, std::size_t n) {
  if (n < 3) throw Error("terrain generation needs at least 3 vertices");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::vector<Pt> pts;
  pts.reserve(n);
  while (pts.size() < n) {
    Pt p{coord(rng), coord(rng)};
    bool ok = true;
    for (const Pt& q : pts) {
      double dx = p.x - q.x, dy = p.y - q.y;
      if (dx * dx + dy * dy < 1e-8 / static_cast<double>(n)) {
        ok = false;
        break;
      }
    }
    if (ok) pts.push_back(p);
  }

  std::vector<Tri> tris = delaunay(pts);

  // Distinct heights, shuffled so ids carry no height information.
  std::vector<double> heights(n);
  std::uniform_real_distribution<double> dh(0.0, 100.0);
  std::set<double> used;
  for (std::size_t i = 0; i < n; ++i) {
    double h = dh(rng);
    while (used.count(h)) h = dh(rng);
    used.insert(h);
    heights[i] = h;
  }

  GeneratedTerrain out;
  for (std::size_t i = 0; i < n; ++i)
    out.vertices.push_back({static_cast<VertexId>(i + 1), pts[i].x, pts[i].y, heights[i]});
  for (const Tri& t : tris) {
    TriangleIds ids{static_cast<VertexId>(t.a + 1), static_cast<VertexId>(t.b + 1),
                    static_cast<VertexId>(t.c + 1)};
    if (orient(pts[t.a], pts[t.b], pts[t.c]) < 0) std::swap(ids.b, ids.c);
    out.triangles.push_back(ids);
  }

  // Enforce the simple-saddle assumption: resample heights of vertices whose
  // lower or upper link has more than two components, using the built mesh as
  // the authority on link cycles (hull links include the vertex at infinity).
  for (int rounds = 0;; ++rounds) {
    if (rounds > 200) throw Error("terrain generation failed to reach simple saddles");
    Terrain t = Terrain::build(out.vertices, out.triangles);
    bool clean = true;
    for (auto& vi : out.vertices) {
      if (!t.link_info(vi.id).multiple()) continue;
      clean = false;
      double h = dh(rng);
      while (used.count(h)) h = dh(rng);
      used.erase(vi.z);
      used.insert(h);
      vi.z = h;
    }
    if (clean) break;
  }
  return out;
}

}  // namespace terratree
