#include <doctest.h>

#include <algorithm>

#include "terratree/kinetic.hpp"
#include "terratree/static_sweep.hpp"
#include "test_util.hpp"

using namespace terratree;
using testutil::move_verified;

namespace {

bool has_edge(const StateSnapshot& s, VertexId lo, VertexId hi, Color c) {
  for (const auto& e : s.edges)
    if (e.lo == lo && e.hi == hi && e.color == c) return true;
  return false;
}

// Island (peak P over a 4-ring) inside a square rim. Ring heights are
// parameters; with two ring basins the two ring cols become the dam (lower
// col) and the sill where the water finishes encircling the island.
// Ids: P=1, m1..m4=2..5 (S,E,N,W), R1..R4=6..9.
Terrain ring_island(double m1, double m2, double m3, double m4) {
  std::vector<Terrain::VertexInput> v = {
      {1, 0, 0, 5},      {2, 0, -1, m1},   {3, 1, 0, m2},     {4, 0, 1, m3},
      {5, -1, 0, m4},    {6, 2, -2, 100},  {7, 2, 2, 101},    {8, -2, 2, 102},
      {9, -2, -2, 103},
  };
  std::vector<TriangleIds> t = {
      {1, 2, 3}, {1, 3, 4}, {1, 4, 5}, {1, 5, 2},
      {2, 6, 3}, {3, 6, 7}, {3, 7, 4}, {4, 7, 8}, {4, 8, 5}, {5, 8, 9},
      {5, 9, 2}, {2, 9, 6},
  };
  return Terrain::build(v, t);
}

// Island in a lake with an alcove pocket carved into the south shore. The
// alcove mouth bar (below the encircling sill) is a blue negative saddle
// whose ridge ends both rise onto the mainland.
// Ids: P=1, m1..m4=2..5, R1..R4=6..9, bar=10, alcove=11.
Terrain alcove_lake() {
  std::vector<Terrain::VertexInput> v = {
      {1, 0, 0, 5},        {2, 0, -1, -10},  {3, 1, 0, -9},    {4, 0, 1, -8},
      {5, -1, 0, -7},      {6, 2, -2, 100},  {7, 2, 2, 101},   {8, -2, 2, 102},
      {9, -2, -2, 103},    {10, 0, -1.55, -7.5}, {11, 0, -1.9, -12},
  };
  std::vector<TriangleIds> t = {
      {1, 2, 3},  {1, 3, 4},  {1, 4, 5},  {1, 5, 2},
      {2, 6, 3},  {3, 6, 7},  {3, 7, 4},  {4, 7, 8},  {4, 8, 5}, {5, 8, 9},
      {5, 9, 2},
      {2, 9, 10}, {10, 9, 11}, {9, 6, 11}, {11, 6, 10}, {10, 6, 2},
  };
  return Terrain::build(v, t);
}

// Island with a lagoon behind a breakwater arc whose both ends rise onto the
// island: the bar is a negative saddle whose marks lie on the island shore.
// Ids: P=1, f1=2 (E flank), fn=3 (N flank), f2=4 (W flank), lg=5 (lagoon),
// bar=6, m1=7 (S moat floor), mE=8, mN=9 (encircling sill), mW=10,
// R1..R4=11..14.
Terrain breakwater_lake() {
  std::vector<Terrain::VertexInput> v = {
      {1, 0, 0, 5},          {2, 0.9, 0, 2},      {3, 0, 0.8, 1.5},
      {4, -0.9, 0, 2.5},     {5, 0, -0.7, -11},   {6, 0, -1.2, -9.3},
      {7, 0, -1.6, -10},     {8, 1.6, -0.3, -9.5}, {9, 0, 1.6, -9},
      {10, -1.6, -0.3, -9.8}, {11, 2.5, -2.5, 100}, {12, 2.5, 2.5, 101},
      {13, -2.5, 2.5, 102},  {14, -2.5, -2.5, 103},
  };
  std::vector<TriangleIds> t = {
      {1, 2, 3},  {1, 3, 4},  {1, 4, 5},  {1, 5, 2},
      {5, 4, 6},  {5, 6, 2},
      {6, 4, 7},  {6, 7, 2},
      {2, 7, 8},  {3, 2, 8},  {3, 8, 9},
      {3, 9, 10}, {3, 10, 4}, {4, 10, 7},
      {7, 11, 8}, {8, 11, 12}, {8, 12, 9}, {9, 12, 13},
      {9, 13, 10}, {10, 13, 14}, {10, 14, 7}, {7, 14, 11},
  };
  return Terrain::build(v, t);
}

// Three basins in a row inside a crater: west A, middle B, east C, with dams
// dA (A|B) and dB (B|C). Ids: A=1, dA=2, B=3, dB=4, C=5, R1..R4=6..9.
Terrain three_basins(double hA, double hdA, double hB, double hdB, double hC) {
  std::vector<Terrain::VertexInput> v = {
      {1, -2, 0, hA}, {2, -1, 0, hdA}, {3, 0, 0, hB}, {4, 1, 0, hdB}, {5, 2, 0, hC},
      {6, -3, -2, 100}, {7, 3, -2, 101}, {8, 3, 2, 102}, {9, -3, 2, 103},
  };
  std::vector<TriangleIds> t = {
      {6, 2, 1}, {6, 3, 2}, {6, 4, 3}, {6, 5, 4}, {6, 7, 5},
      {7, 8, 5}, {5, 8, 4}, {4, 8, 3}, {3, 8, 2}, {2, 8, 1}, {1, 8, 9}, {1, 9, 6},
  };
  return Terrain::build(v, t);
}

// Three peaks on an island over low ground: passes q1 (P1|P2) and q2 (P2|P3)
// are positive saddles adjacent in the tree.
// Ids: P1=1, q1=2, P2=3, q2=4, P3=5, a=6 (N low), b=7 (S low).
Terrain three_peaks(double hq1, double hq2) {
  std::vector<Terrain::VertexInput> v = {
      {1, -2, 0, 10}, {2, -1, 0, hq1}, {3, 0, 0, 11}, {4, 1, 0, hq2}, {5, 2, 0, 12},
      {6, 0, 2, 1},   {7, 0, -2, 2},
  };
  std::vector<TriangleIds> t = {
      {7, 2, 1}, {7, 3, 2}, {7, 4, 3}, {7, 5, 4},
      {6, 1, 2}, {6, 2, 3}, {6, 3, 4}, {6, 4, 5},
  };
  return Terrain::build(v, t);
}

// Figure-eight crater island: an oval rim (W, NW, NE, E, SE, SW) around two
// ponds (PW, PE) separated by a cross dam DM; the island sits in a lake with
// floor ring (mS, mE, q, mW) whose north vertex q is the encircling sill,
// enclosed by a square rim with pass LR.
// Ids: W=1 NW=2 NE=3 E=4 SE=5 SW=6 DM=7 PW=8 PE=9 mS=10 mE=11 q=12 mW=13
//      LR=14 R1..R4=15..18.
Terrain figure_eight(double hW, double hE, double hDM) {
  std::vector<Terrain::VertexInput> v = {
      {1, -1.5, 0, hW},    {2, -0.75, 0.8, 20}, {3, 0.75, 0.8, 21},  {4, 1.5, 0, hE},
      {5, 0.75, -0.8, 22}, {6, -0.75, -0.8, 23}, {7, 0, 0, hDM},     {8, -0.75, 0, -20},
      {9, 0.75, 0, -19},   {10, 0, -1.6, -30},  {11, 2.2, 0, -29.5}, {12, 0, 1.6, -28},
      {13, -2.2, 0, -29},  {14, 0, -3, 8},      {15, 3, -3, 100},    {16, 3, 3, 101},
      {17, -3, 3, 102},    {18, -3, -3, 103},
  };
  std::vector<TriangleIds> t = {
      {7, 9, 3}, {7, 3, 2}, {7, 2, 8}, {7, 8, 6}, {7, 6, 5}, {7, 5, 9},
      {8, 2, 1}, {8, 1, 6},
      {9, 5, 4}, {9, 4, 3},
      {13, 1, 2}, {13, 2, 12}, {12, 2, 3}, {12, 3, 11}, {11, 3, 4},
      {11, 4, 5}, {11, 5, 10}, {10, 5, 6}, {10, 6, 13}, {13, 6, 1},
      {14, 15, 10}, {10, 15, 11}, {11, 15, 16}, {11, 16, 12}, {12, 16, 17},
      {12, 17, 13}, {13, 17, 18}, {13, 18, 10}, {10, 18, 14},
  };
  return Terrain::build(v, t);
}

}  // namespace

TEST_CASE("mixed interchange, sign case: causeway dam between island and rim") {
  // Ring basins S (-10) and N (-9) merge at the east col (-7.5); the water
  // encircles at the west col (-7). Both cols touch the island and the rim,
  // so the dam's marks interleave with the sill's.
  Terrain t = ring_island(-10, -7.5, -9, -7);
  KineticTopology k(t);
  CHECK(k.vertex_class(3) == VertexClass::NegativeSaddle);
  CHECK(k.vertex_class(5) == VertexClass::PositiveSaddle);
  CHECK(k.saddle_color(3) == Color::Blue);
  CHECK(k.saddle_color(5) == Color::Blue);
  CHECK(has_edge(k.snapshot(), 3, 5, Color::Blue));

  auto recs = move_verified(k, 3, -6.8);  // dam rises past the sill
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].kind == EventKind::SignInterchange);
  // Labels swapped, topology unchanged: the riser is now the positive saddle.
  CHECK(k.vertex_class(3) == VertexClass::PositiveSaddle);
  CHECK(k.vertex_class(5) == VertexClass::NegativeSaddle);
  CHECK(has_edge(k.snapshot(), 5, 3, Color::Blue));
  CHECK(k.saddle_color(3) == Color::Blue);
  CHECK(k.saddle_color(5) == Color::Blue);
}

TEST_CASE("mixed interchange, blue case: mainland bar under the encircling sill") {
  Terrain t = alcove_lake();
  KineticTopology k(t);
  // bar = 10 (blue negative, merging alcove 11 with the moat lake from m1=2);
  // sill = 5 (blue positive).
  CHECK(k.vertex_class(10) == VertexClass::NegativeSaddle);
  CHECK(k.vertex_class(5) == VertexClass::PositiveSaddle);
  CHECK(k.saddle_color(10) == Color::Blue);
  CHECK(k.saddle_color(5) == Color::Blue);
  auto snap = k.snapshot();
  CHECK(has_edge(snap, 10, 5, Color::Blue));   // bar below sill
  CHECK(has_edge(snap, 11, 10, Color::Blue));  // alcove shore
  CHECK(has_edge(snap, 2, 10, Color::Blue));   // moat lake shore
  CHECK(has_edge(snap, 5, 1, Color::Red));     // island shore up to the peak

  auto recs = move_verified(k, 10, -6.8);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].kind == EventKind::BlueInterchange);
  // Both stay blue; the moat lake now hangs off the sill, the outer shore
  // off the bar, and the flipped edge stays blue.
  snap = k.snapshot();
  CHECK(k.vertex_class(10) == VertexClass::NegativeSaddle);
  CHECK(k.vertex_class(5) == VertexClass::PositiveSaddle);
  CHECK(has_edge(snap, 2, 5, Color::Blue));    // migrated down subtree
  CHECK(has_edge(snap, 5, 10, Color::Blue));   // flipped edge
  CHECK(has_edge(snap, 11, 10, Color::Blue));  // kept down subtree
  CHECK(has_edge(snap, 5, 1, Color::Red));     // red shore stays at the sill
  CHECK(k.saddle_color(10) == Color::Blue);
  CHECK(k.saddle_color(5) == Color::Blue);

  // Time reversal: lowering the bar back is the reversed blue event and must
  // restore the original tree exactly.
  Terrain t2 = alcove_lake();
  KineticTopology k2(t2);
  std::string before = k2.contour_snapshot_text();
  move_verified(k2, 10, -6.8);
  auto recs2 = move_verified(k2, 10, -7.5);
  REQUIRE(recs2.size() == 1);
  CHECK(recs2[0].kind == EventKind::BlueInterchange);
  CHECK(k2.contour_snapshot_text() == before);
}

TEST_CASE("mixed interchange, red case: breakwater with both ends on the island") {
  Terrain t = breakwater_lake();
  KineticTopology k(t);
  // bar = 6 (blue negative: lagoon 5 merges with the moat lake from m1=7);
  // encircling sill = mN = 9 (blue positive).
  CHECK(k.vertex_class(6) == VertexClass::NegativeSaddle);
  CHECK(k.vertex_class(9) == VertexClass::PositiveSaddle);
  CHECK(k.saddle_color(6) == Color::Blue);
  CHECK(k.saddle_color(9) == Color::Blue);
  auto snap = k.snapshot();
  CHECK(has_edge(snap, 6, 9, Color::Blue));
  CHECK(has_edge(snap, 5, 6, Color::Blue));   // lagoon shore
  CHECK(has_edge(snap, 7, 6, Color::Blue));   // moat shore
  CHECK(has_edge(snap, 9, 1, Color::Red));    // island shore

  auto recs = move_verified(k, 6, -8.8);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].kind == EventKind::RedInterchange);
  // The flipped edge turns red and so does the bar; the sill keeps blue.
  snap = k.snapshot();
  CHECK(has_edge(snap, 7, 9, Color::Blue));   // moat lake migrated to the sill
  CHECK(has_edge(snap, 9, 6, Color::Red));    // flipped edge is now red
  CHECK(has_edge(snap, 5, 6, Color::Blue));   // lagoon stays below the bar
  CHECK(has_edge(snap, 6, 1, Color::Red));    // island shore now above the bar
  CHECK(k.saddle_color(6) == Color::Red);
  CHECK(k.saddle_color(9) == Color::Blue);

  // Reversal restores the original state.
  Terrain t2 = breakwater_lake();
  KineticTopology k2(t2);
  std::string before = k2.contour_snapshot_text();
  move_verified(k2, 6, -8.8);
  auto recs2 = move_verified(k2, 6, -9.3);
  REQUIRE(recs2.size() == 1);
  CHECK(recs2[0].kind == EventKind::RedInterchange);
  CHECK(k2.contour_snapshot_text() == before);
}

TEST_CASE("negative interchange, both blue: basin chain rotates") {
  Terrain t = three_basins(-10, -8, -9, -7, -9.5);
  KineticTopology k(t);
  CHECK(k.vertex_class(2) == VertexClass::NegativeSaddle);
  CHECK(k.vertex_class(4) == VertexClass::NegativeSaddle);
  CHECK(k.saddle_color(2) == Color::Blue);
  CHECK(k.saddle_color(4) == Color::Blue);
  CHECK(has_edge(k.snapshot(), 2, 4, Color::Blue));

  auto recs = move_verified(k, 2, -6.5);  // west dam rises past the east dam
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].kind == EventKind::NegativeInterchange);
  auto snap = k.snapshot();
  // Rotation: the middle basin migrates down to the east dam.
  CHECK(has_edge(snap, 3, 4, Color::Blue));
  CHECK(has_edge(snap, 5, 4, Color::Blue));
  CHECK(has_edge(snap, 4, 2, Color::Blue));
  CHECK(has_edge(snap, 1, 2, Color::Blue));
  CHECK(k.saddle_color(2) == Color::Blue);
  CHECK(k.saddle_color(4) == Color::Blue);
}

TEST_CASE("positive interchange: three peaks rotate the split order") {
  Terrain t = three_peaks(5, 6);
  KineticTopology k(t);
  CHECK(k.vertex_class(2) == VertexClass::PositiveSaddle);
  CHECK(k.vertex_class(4) == VertexClass::PositiveSaddle);
  CHECK(has_edge(k.snapshot(), 2, 4, Color::Red));

  auto recs = move_verified(k, 2, 6.5);  // lower pass rises past the higher
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].kind == EventKind::PositiveInterchange);
  auto snap = k.snapshot();
  // The riser ends on top and takes the middle peak with it; the other pass
  // now splits off the east peak first.
  CHECK(has_edge(snap, 2, 3, Color::Red));
  CHECK(has_edge(snap, 2, 1, Color::Red));
  CHECK(has_edge(snap, 4, 2, Color::Red));
  CHECK(has_edge(snap, 4, 5, Color::Red));
  CHECK(k.vertex_class(2) == VertexClass::PositiveSaddle);
  CHECK(k.vertex_class(4) == VertexClass::PositiveSaddle);
}

TEST_CASE("negative interchange with red saddles: breach order swaps (case b)") {
  // Figure-eight island: west breach W (-15) below east breach E (-10); both
  // red negative (each merges a pond with the lake around the island).
  Terrain t = figure_eight(-15, -10, -5);
  KineticTopology k(t);
  CHECK(k.vertex_class(1) == VertexClass::NegativeSaddle);
  CHECK(k.vertex_class(4) == VertexClass::NegativeSaddle);
  CHECK(k.saddle_color(1) == Color::Red);
  CHECK(k.saddle_color(4) == Color::Red);
  auto snap = k.snapshot();
  CHECK(has_edge(snap, 1, 4, Color::Red));    // remnant coast between breaches
  CHECK(has_edge(snap, 8, 1, Color::Blue));   // west pond shore
  CHECK(has_edge(snap, 12, 1, Color::Red));   // island coast from the sill
  CHECK(has_edge(snap, 9, 4, Color::Blue));   // east pond shore

  auto recs = move_verified(k, 1, -9.5);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].kind == EventKind::NegativeInterchange);
  snap = k.snapshot();
  // Both stay red; the island coast migrates down to the east breach.
  CHECK(has_edge(snap, 12, 4, Color::Red));
  CHECK(has_edge(snap, 9, 4, Color::Blue));
  CHECK(has_edge(snap, 4, 1, Color::Red));   // flipped edge stays red
  CHECK(has_edge(snap, 8, 1, Color::Blue));
  CHECK(k.saddle_color(1) == Color::Red);
  CHECK(k.saddle_color(4) == Color::Red);
}

TEST_CASE("negative interchange through the cross dam recolors it blue (case c)") {
  // Dam col DM (-10) above the west breach W (-15); crossing them merges the
  // two ponds first, so the dam becomes a blue saddle.
  Terrain t = figure_eight(-15, -5, -10);
  KineticTopology k(t);
  CHECK(k.vertex_class(1) == VertexClass::NegativeSaddle);
  CHECK(k.vertex_class(7) == VertexClass::NegativeSaddle);
  CHECK(k.saddle_color(1) == Color::Red);
  CHECK(k.saddle_color(7) == Color::Red);
  auto snap = k.snapshot();
  CHECK(has_edge(snap, 1, 7, Color::Red));
  CHECK(has_edge(snap, 8, 1, Color::Blue));
  CHECK(has_edge(snap, 9, 7, Color::Blue));

  std::string before = k.contour_snapshot_text();
  auto recs = move_verified(k, 1, -9.5);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].kind == EventKind::NegativeInterchange);
  snap = k.snapshot();
  // The dam now merges the two ponds: it turns blue, the riser stays red.
  CHECK(has_edge(snap, 8, 7, Color::Blue));
  CHECK(has_edge(snap, 9, 7, Color::Blue));
  CHECK(has_edge(snap, 7, 1, Color::Blue));  // flipped edge
  CHECK(has_edge(snap, 12, 1, Color::Red));
  CHECK(k.saddle_color(7) == Color::Blue);
  CHECK(k.saddle_color(1) == Color::Red);

  // Lowering back is the time-reversed event (a blue saddle rising past a
  // red one) and must restore everything, including the red color.
  auto recs2 = move_verified(k, 1, -15);
  REQUIRE(std::count_if(recs2.begin(), recs2.end(), [](const EventRecord& r) {
            return r.kind == EventKind::NegativeInterchange;
          }) == 1);
  CHECK(k.contour_snapshot_text() == before);
  CHECK(k.saddle_color(7) == Color::Red);
}

TEST_CASE("mixed interchange after rewiring: red riser under a positive saddle") {
  // After the cross-dam event, raising the west breach past the arc-splitting
  // saddle E exercises the reflected mixed case (red negative riser).
  Terrain t = figure_eight(-15, -5, -10);
  KineticTopology k(t);
  move_verified(k, 1, -9.5);  // case (c) rotation first
  CHECK(k.vertex_class(4) == VertexClass::PositiveSaddle);
  CHECK(k.saddle_color(1) == Color::Red);
  CHECK(has_edge(k.snapshot(), 1, 4, Color::Red));

  auto recs = move_verified(k, 1, -4.5);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].kind == EventKind::SignInterchange);
  CHECK(k.vertex_class(1) == VertexClass::PositiveSaddle);
  CHECK(k.vertex_class(4) == VertexClass::NegativeSaddle);
  CHECK(k.saddle_color(4) == Color::Red);
}

TEST_CASE("normalization reductions are involutions on every saddle pairing") {
  // Raising and then lowering across each interchange type restores the
  // state byte for byte; this exercises handler + reduction + inverse.
  struct Case {
    Terrain terrain;
    VertexId mover;
    double up, down;
  };
  std::vector<Case> cases;
  cases.push_back({ring_island(-10, -7.5, -9, -7), 3, -6.8, -7.5});
  cases.push_back({alcove_lake(), 10, -6.8, -7.5});
  cases.push_back({breakwater_lake(), 6, -8.8, -9.3});
  cases.push_back({three_basins(-10, -8, -9, -7, -9.5), 2, -6.5, -8});
  cases.push_back({three_peaks(5, 6), 2, 6.5, 5});
  cases.push_back({figure_eight(-15, -10, -5), 1, -9.5, -15});
  for (auto& c : cases) {
    KineticTopology k(c.terrain);
    std::string before = k.contour_snapshot_text();
    move_verified(k, c.mover, c.up);
    move_verified(k, c.mover, c.down);
    CHECK(k.contour_snapshot_text() == before);
  }
}
