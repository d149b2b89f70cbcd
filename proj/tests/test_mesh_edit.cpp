#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "terratree/kinetic.hpp"
#include "terratree/terrain_gen.hpp"
#include "test_util.hpp"

using namespace terratree;

TEST_CASE("insert at the interpolated height changes nothing") {
  Terrain t = fixtures::two_peaks();
  KineticTopology k(t);
  std::string before = k.contour_snapshot_text();
  double h = t.surface_height(-0.4, 0.2);
  auto [nv, recs] = k.insert_vertex(-0.4, 0.2, h);
  CHECK(recs.empty());
  CHECK(k.contour_snapshot_text() == before);
  CHECK(k.vertex_class(nv) == VertexClass::Regular);
  VerifyReport rep = k.verify();
  CHECK_MESSAGE(rep.ok, rep.divergence);
}

TEST_CASE("insert on an interior edge gives a degree-4 vertex") {
  Terrain t = fixtures::two_peaks();
  KineticTopology k(t);
  // Midpoint of the interior edge s(0,0)-a(0,1).
  auto [nv, recs] = k.insert_vertex(0.0, 0.5, t.surface_height(0.0, 0.5));
  CHECK(recs.empty());
  CHECK(t.degree(nv) == 4);
  VerifyReport rep = k.verify();
  CHECK_MESSAGE(rep.ok, rep.divergence);
  t.check_invariants();
}

TEST_CASE("insert above all neighbors creates a maximum leaf") {
  Terrain t = fixtures::two_peaks();
  KineticTopology k(t);
  auto [nv, recs] = k.insert_vertex(-0.4, 0.2, 50.0);
  CHECK_FALSE(recs.empty());
  CHECK(k.vertex_class(nv) == VertexClass::Maximum);
  VerifyReport rep = k.verify();
  CHECK_MESSAGE(rep.ok, rep.divergence);
}

TEST_CASE("insert errors") {
  Terrain t = fixtures::two_peaks();
  KineticTopology k(t);
  CHECK_THROWS_AS(k.insert_vertex(0, 0, 5), DuplicatePoint);     // existing vertex
  CHECK_THROWS_AS(k.insert_vertex(50, 50, 5), PointAtInfinity);  // outside the hull
}

TEST_CASE("delete is the exact inverse of insert") {
  Terrain t = fixtures::two_peaks();
  KineticTopology k(t);
  std::string before = k.contour_snapshot_text();
  auto [nv, ins_recs] = k.insert_vertex(-0.4, 0.2, t.surface_height(-0.4, 0.2));
  CHECK(ins_recs.empty());
  auto del_recs = k.delete_vertex(nv);
  CHECK(del_recs.empty());
  CHECK(k.contour_snapshot_text() == before);
  CHECK_FALSE(t.alive(nv));
  VerifyReport rep = k.verify();
  CHECK_MESSAGE(rep.ok, rep.divergence);
  t.check_invariants();
}

TEST_CASE("deleting a maximum flattens it first, emitting events") {
  Terrain t = fixtures::two_peaks();
  KineticTopology k(t);
  std::string before = k.contour_snapshot_text();
  auto [nv, recs] = k.insert_vertex(-0.4, 0.2, 50.0);  // a fresh degree-3 maximum
  CHECK(k.vertex_class(nv) == VertexClass::Maximum);
  auto del_recs = k.delete_vertex(nv);
  bool saw_critical_event = false;
  for (const auto& r : del_recs)
    saw_critical_event |= r.kind == EventKind::Shift || r.kind == EventKind::Death;
  CHECK(saw_critical_event);
  CHECK(k.contour_snapshot_text() == before);
  VerifyReport rep = k.verify();
  CHECK_MESSAGE(rep.ok, rep.divergence);
}

TEST_CASE("delete errors") {
  Terrain t = fixtures::two_peaks();
  KineticTopology k(t);
  CHECK_THROWS_AS(k.delete_vertex(kInfinityVertex), CannotDeleteInfinity);
  CHECK_THROWS_AS(k.delete_vertex(3), LinkTooLarge);  // degree 6 pass
  // Hull vertices of degree 3 are adjacent to the vertex at infinity and
  // cannot be removed without changing the surface.
  Terrain one = Terrain::build({{1, 0, 0, 1}, {2, 1, 0, 2}, {3, 0, 1, 3}}, {{1, 2, 3}});
  KineticTopology k1(one);
  CHECK_THROWS_AS(k1.delete_vertex(1), CannotDeleteInfinity);
}

TEST_CASE("flip of a flat quadrilateral emits no events") {
  // Two triangles over a coplanar quad: heights linear in x.
  std::vector<Terrain::VertexInput> v = {
      {1, 0, 0, 0}, {2, 1, 0, 1}, {3, 1, 1, 1}, {4, 0, 1, 0},
  };
  Terrain t = Terrain::build(v, {{1, 2, 3}, {1, 3, 4}});
  KineticTopology k(t);
  auto recs = k.flip_edge(1, 3);
  CHECK(recs.empty());
  CHECK(t.adjacent(2, 4));
  CHECK_FALSE(t.adjacent(1, 3));
  VerifyReport rep = k.verify();
  CHECK_MESSAGE(rep.ok, rep.divergence);
  t.check_invariants();
}

TEST_CASE("flip twice restores the tree") {
  std::vector<Terrain::VertexInput> v = {
      {1, 0, 0, 3}, {2, 1, 0, 7}, {3, 1, 1, 2}, {4, 0, 1, 9},
  };
  Terrain t = Terrain::build(v, {{1, 2, 3}, {1, 3, 4}});
  KineticTopology k(t);
  std::string before = k.contour_snapshot_text();
  k.flip_edge(1, 3);
  VerifyReport rep = k.verify();
  CHECK_MESSAGE(rep.ok, rep.divergence);
  k.flip_edge(2, 4);
  CHECK(k.contour_snapshot_text() == before);
  rep = k.verify();
  CHECK_MESSAGE(rep.ok, rep.divergence);
  t.check_invariants();
}

TEST_CASE("flip errors") {
  Terrain t = fixtures::two_peaks();
  KineticTopology k(t);
  // Quad around the edge s-a is p1-s-p2-a with s inside triangle p1-p2-a:
  // not strictly convex.
  CHECK_THROWS_AS(k.flip_edge(3, 4), NonConvexQuad);
  // Hull edge: its outer apex is the vertex at infinity.
  CHECK_THROWS_AS(k.flip_edge(1, 4), BoundaryFlipUnsupported);
  CHECK_THROWS_AS(k.flip_edge(kInfinityVertex, 1), BoundaryFlipUnsupported);
}

TEST_CASE("random edit scripts keep the state verified") {
  GeneratedTerrain g = generate_terrain(909, 40);
  Terrain t = Terrain::build(g.vertices, g.triangles);
  KineticTopology k(t);
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> coord(0.05, 0.95), height(-20, 120);
  int inserted = 0, flipped = 0;
  std::vector<VertexId> mine;
  for (int i = 0; i < 40; ++i) {
    int op = static_cast<int>(rng() % 3);
    try {
      if (op == 0) {
        auto [nv, recs] = k.insert_vertex(coord(rng), coord(rng), height(rng));
        (void)recs;
        mine.push_back(nv);
        ++inserted;
      } else if (op == 1 && !mine.empty()) {
        VertexId v = mine[rng() % mine.size()];
        if (t.alive(v) && t.degree(v) == 3) k.delete_vertex(v);
      } else {
        for (VertexId a = 1; a < t.id_bound(); ++a) {
          if (!t.alive(a) || rng() % 5) continue;
          for (VertexId b : t.link(a)) {
            if (b == kInfinityVertex || b < a) continue;
            try {
              k.flip_edge(a, b);
              ++flipped;
            } catch (const Error&) {
              continue;
            }
            break;
          }
          break;
        }
      }
    } catch (const MultipleSaddleEncountered&) {
    } catch (const DuplicatePoint&) {
    } catch (const PointAtInfinity&) {
    }
    VerifyReport rep = k.verify();
    if (!rep.ok) FAIL("divergence after edit ", i, ": ", rep.divergence);
    t.check_invariants();
  }
  CHECK(inserted > 0);
  CHECK(flipped > 0);
}
