#include <cassert>
#include <sstream>

#include "terratree/kinetic.hpp"

namespace terratree {

void KineticTopology::wire_new_regular_vertex(VertexId nv) {
  ascent_.ensure_vertex(nv);
  descent_.ensure_vertex(nv);
  // An inserted vertex sits at the interpolated surface height, so it is
  // regular and its neighbors keep their classes; only its own parents are
  // needed.
  ascent_.set_parent(nv, pick_parent(nv, VertexForest::Dir::Ascent));
  descent_.set_parent(nv, pick_parent(nv, VertexForest::Dir::Descent));
}

// Phase one of removing a regular vertex: cut every forest edge touching it
// and remember which neighbors lost their parent. Phase two (after the mesh
// surgery) re-picks those parents from the new links.
std::vector<std::pair<VertexId, VertexForest::Dir>> KineticTopology::detach_regular_vertex(
    VertexId v) {
  if (vertex_class(v) != VertexClass::Regular)
    throw InconsistentState("detaching a critical vertex");
  std::vector<std::pair<VertexId, VertexForest::Dir>> orphans;
  for (VertexId w : terrain_->link(v)) {
    if (w == kInfinityVertex) continue;
    if (descent_.parent(w) == v) {
      descent_.clear_parent(w);
      orphans.push_back({w, VertexForest::Dir::Descent});
    }
    if (ascent_.parent(w) == v) {
      ascent_.clear_parent(w);
      orphans.push_back({w, VertexForest::Dir::Ascent});
    }
  }
  ascent_.clear_parent(v);
  descent_.clear_parent(v);
  ascent_.remove_vertex(v);
  descent_.remove_vertex(v);
  return orphans;
}

void KineticTopology::reattach_orphans(
    const std::vector<std::pair<VertexId, VertexForest::Dir>>& orphans) {
  for (auto [w, dir] : orphans) {
    VertexForest& f = dir == VertexForest::Dir::Descent ? descent_ : ascent_;
    f.set_parent(w, pick_parent(w, dir));
  }
}

std::pair<VertexId, std::vector<EventRecord>> KineticTopology::insert_vertex(
    double px, double py, double r, const Observer& obs) {
  Terrain::Location loc = terrain_->locate(px, py);
  switch (loc.kind) {
    case Terrain::Location::OnVertex:
      throw DuplicatePoint("a vertex already lies at that point");
    case Terrain::Location::Outside:
      throw PointAtInfinity("insertion point lies outside the triangulation");
    case Terrain::Location::InsideTriangle: {
      double h0 = terrain_->surface_height(px, py);
      VertexId nv = terrain_->allocate_vertex(px, py, h0);
      terrain_->split_triangle(nv, loc.a, loc.b, loc.c);
      wire_new_regular_vertex(nv);
      return {nv, change_height(nv, r, obs)};
    }
    case Terrain::Location::OnEdge: {
      double h0 = terrain_->surface_height(px, py);
      VertexId nv = terrain_->allocate_vertex(px, py, h0);
      terrain_->split_edge(nv, loc.a, loc.b);
      wire_new_regular_vertex(nv);
      // The split severed the (a, b) adjacency; forest edges across it are
      // re-picked from the new links (the new vertex is always a candidate).
      for (auto [w, other] : {std::pair{loc.a, loc.b}, std::pair{loc.b, loc.a}}) {
        if (w == kInfinityVertex) continue;
        if (descent_.parent(w) == other)
          descent_.set_parent(w, pick_parent(w, VertexForest::Dir::Descent));
        if (w != kInfinityVertex && ascent_.parent(w) == other)
          ascent_.set_parent(w, pick_parent(w, VertexForest::Dir::Ascent));
      }
      return {nv, change_height(nv, r, obs)};
    }
  }
  throw InconsistentState("unreachable");
}

std::vector<EventRecord> KineticTopology::delete_vertex(VertexId v, const Observer& obs) {
  if (v == kInfinityVertex) throw CannotDeleteInfinity("cannot delete the vertex at infinity");
  if (!terrain_->alive(v)) throw Error("vertex does not exist");
  if (terrain_->degree(v) != 3)
    throw LinkTooLarge("delete requires degree 3; flip edges down first");
  const auto link = terrain_->link(v);
  for (VertexId w : link)
    if (w == kInfinityVertex)
      throw CannotDeleteInfinity(
          "deleting a hull vertex would change the surface over the unbounded face");

  // Flatten v into the plane of its link triangle, then remove it; the
  // surface is pointwise unchanged by the removal.
  double ha = terrain_->raw_height(link[0]);
  double r;
  {
    // Plane through the three link vertices, evaluated at v's position.
    double ax = terrain_->x(link[0]), ay = terrain_->y(link[0]);
    double bx = terrain_->x(link[1]), by = terrain_->y(link[1]);
    double cx = terrain_->x(link[2]), cy = terrain_->y(link[2]);
    double hb = terrain_->raw_height(link[1]), hc = terrain_->raw_height(link[2]);
    double det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    double px = terrain_->x(v), py = terrain_->y(v);
    double wb = ((px - ax) * (cy - ay) - (py - ay) * (cx - ax)) / det;
    double wc = ((bx - ax) * (py - ay) - (by - ay) * (px - ax)) / det;
    r = ha + wb * (hb - ha) + wc * (hc - ha);
  }
  std::vector<EventRecord> records = change_height(v, r, obs);
  if (vertex_class(v) != VertexClass::Regular)
    throw InconsistentState("vertex is still critical at its interpolated height");
  auto orphans = detach_regular_vertex(v);
  terrain_->remove_vertex_degree3(v);
  reattach_orphans(orphans);
  return records;
}

std::vector<EventRecord> KineticTopology::flip_edge(VertexId u1, VertexId u2,
                                                    const Observer& obs) {
  if (u1 == kInfinityVertex || u2 == kInfinityVertex)
    throw BoundaryFlipUnsupported("cannot flip an edge incident to the vertex at infinity");
  if (!terrain_->alive(u1) || !terrain_->alive(u2) || !terrain_->adjacent(u1, u2))
    throw Error("no such edge");
  auto [v3, v4] = terrain_->edge_apexes(u1, u2);
  if (v3 == kInfinityVertex || v4 == kInfinityVertex)
    throw BoundaryFlipUnsupported("flip would create an edge incident to the vertex at infinity");

  double x1 = terrain_->x(u1), y1 = terrain_->y(u1);
  double x2 = terrain_->x(u2), y2 = terrain_->y(u2);
  double x3 = terrain_->x(v3), y3 = terrain_->y(v3);
  double x4 = terrain_->x(v4), y4 = terrain_->y(v4);
  auto orient = [](double ax, double ay, double bx, double by, double cx, double cy) {
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  };
  double o3 = orient(x1, y1, x2, y2, x3, y3), o4 = orient(x1, y1, x2, y2, x4, y4);
  double p1 = orient(x3, y3, x4, y4, x1, y1), p2 = orient(x3, y3, x4, y4, x2, y2);
  if (!(o3 * o4 < 0) || !(p1 * p2 < 0))
    throw NonConvexQuad("surrounding quadrilateral is not strictly convex");

  // Intersection of the two diagonals, and the flipped edge's height there.
  double t = p1 / (p1 - p2);  // along u1 -> u2
  double qx = x1 + t * (x2 - x1), qy = y1 + t * (y2 - y1);
  double s = o3 / (o3 - o4);  // along v3 -> v4
  double r = terrain_->raw_height(v3) + s * (terrain_->raw_height(v4) - terrain_->raw_height(v3));

  double h0 = terrain_->raw_height(u1) + t * (terrain_->raw_height(u2) - terrain_->raw_height(u1));
  VertexId nv = terrain_->allocate_vertex(qx, qy, h0);
  terrain_->split_edge(nv, u1, u2);
  wire_new_regular_vertex(nv);
  std::vector<EventRecord> records = change_height(nv, r, obs);
  if (vertex_class(nv) != VertexClass::Regular)
    throw InconsistentState("flip midpoint is critical at the diagonal height");
  auto orphans = detach_regular_vertex(nv);
  terrain_->remove_vertex_degree4(nv, v3, v4);
  reattach_orphans(orphans);
  return records;
}

}  // namespace terratree
