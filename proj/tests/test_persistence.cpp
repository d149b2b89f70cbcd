#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "terratree/kinetic.hpp"
#include "terratree/static_sweep.hpp"
#include "terratree/terrain_gen.hpp"
#include "test_util.hpp"

using namespace terratree;

TEST_CASE("pairs on the fixtures match the elder rule") {
  Terrain t = fixtures::two_peaks();
  KineticTopology k(t);
  auto pairs = k.persistence_pairs();
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0] == PairSnap{3, 2});  // lower peak dies at the pass, value 1
  CHECK(t.raw_height(2) - t.raw_height(3) == 1.0);

  Terrain tc = fixtures::crater();
  KineticTopology kc(tc);
  auto pc = kc.persistence_pairs();
  REQUIRE(pc.size() == 2);
  CHECK(std::count(pc.begin(), pc.end(), PairSnap{2, 3}) == 1);
  CHECK(std::count(pc.begin(), pc.end(), PairSnap{1, 4}) == 1);

  Terrain ts = fixtures::single_peak();
  KineticTopology ks(ts);
  CHECK(ks.persistence_pairs().empty());  // only essentials
}

TEST_CASE("pair values are height differences and nonnegative") {
  GeneratedTerrain g = generate_terrain(17, 60);
  Terrain t = Terrain::build(g.vertices, g.triangles);
  KineticTopology k(t);
  for (const auto& p : k.persistence_pairs()) {
    double value = t.raw_height(p.destroyer) - t.raw_height(p.creator);
    // Join pairs: min below saddle. Split pairs: saddle below max... the
    // destroyer of a split pair is the maximum, above its creator either way.
    CHECK(value >= 0.0);
  }
}

TEST_CASE("minima crossings update pointers like a full rescan") {
  // Drive minima past each other repeatedly; after every crossing event the
  // engine's pointer structure must equal a full subtree recomputation,
  // which validate_structures performs.
  GeneratedTerrain g = generate_terrain(23, 50);
  Terrain t = Terrain::build(g.vertices, g.triangles);
  KineticTopology k(t);
  std::mt19937_64 rng(23);
  int crossings = 0;
  for (int round = 0; round < 120 && crossings < 120; ++round) {
    // Pick an extremum and push it just past a sibling extremum.
    std::vector<VertexId> extrema;
    for (VertexId v = 1; v < t.id_bound(); ++v)
      if (t.alive(v) && is_extremum(k.vertex_class(v))) extrema.push_back(v);
    VertexId v = extrema[rng() % extrema.size()];
    std::uniform_real_distribution<double> height(-40.0, 140.0);
    try {
      k.change_height(v, height(rng), [&](const EventRecord& rec) {
        if (rec.kind == EventKind::MinimaCrossing || rec.kind == EventKind::MaximaCrossing) {
          ++crossings;
          k.validate_structures();  // includes the full pointer rescan
        }
      });
    } catch (const MultipleSaddleEncountered&) {
    }
    VerifyReport rep = k.verify();
    if (!rep.ok) FAIL("divergence in round ", round, ": ", rep.divergence);
  }
  CHECK(crossings >= 50);
}

TEST_CASE("join tree mirrors the contour tree restricted to its members") {
  // Collapsing the maintained contour tree to minima and negative saddles
  // (height-aware contraction) reproduces the maintained join tree.
  for (std::uint64_t seed : {3ull, 19ull}) {
    GeneratedTerrain g = generate_terrain(seed, 50);
    Terrain t = Terrain::build(g.vertices, g.triangles);
    KineticTopology k(t);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> height(-30.0, 130.0);
    std::uniform_int_distribution<VertexId> pick(1, 50);
    for (int i = 0; i < 10; ++i) {
      try {
        k.change_height(pick(rng), height(rng));
      } catch (const MultipleSaddleEncountered&) {
      }
    }
    auto st = sweep::compute_state(t);  // derives the merge trees from its tree
    StateSnapshot mine = k.snapshot();
    CHECK(mine.join_edges == st.snapshot.join_edges);
    CHECK(mine.split_edges == st.snapshot.split_edges);
    CHECK(mine.join_lowest == st.snapshot.join_lowest);
    CHECK(mine.split_highest == st.snapshot.split_highest);
  }
}

TEST_CASE("shift events relabel pairs without touching other participants") {
  Terrain t = fixtures::island_in_lake();
  KineticTopology k(t);
  auto before = k.persistence_pairs();
  // Shift the moat minimum m1 -> m2; pairs only relabel that minimum.
  testutil::move_verified(k, 2, -8.5);
  auto after = k.persistence_pairs();
  REQUIRE(before.size() == after.size());
  for (std::size_t i = 0; i < before.size(); ++i) {
    PairSnap want = before[i];
    if (want.creator == 2) want.creator = 3;
    CHECK(std::count(after.begin(), after.end(), want) == 1);
  }
}
