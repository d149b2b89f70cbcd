#include "fixtures.hpp"

namespace terratree::fixtures {

Terrain single_peak() {
  std::vector<Terrain::VertexInput> v = {
      {1, 0, 0, 10},                                      // peak
      {2, 1, 0, 1}, {3, 0.31, 0.95, 2}, {4, -0.81, 0.59, 3},
      {5, -0.81, -0.59, 4}, {6, 0.31, -0.95, 5},
  };
  std::vector<TriangleIds> t = {
      {1, 2, 3}, {1, 3, 4}, {1, 4, 5}, {1, 5, 6}, {1, 6, 2},
  };
  return Terrain::build(v, t);
}

Terrain two_peaks() {
  std::vector<Terrain::VertexInput> v = {
      {1, -1, 0, 5},  // p1
      {2, 1, 0, 4},   // p2
      {3, 0, 0, 3},   // s
      {4, 0, 1, 1},   // a
      {5, 0, -1, 2},  // b
  };
  std::vector<TriangleIds> t = {
      {1, 5, 3}, {5, 2, 3}, {2, 4, 3}, {4, 1, 3},
  };
  return Terrain::build(v, t);
}

Terrain crater() {
  std::vector<Terrain::VertexInput> v = {
      {1, -1, 0, -5},   // b1
      {2, 1, 0, -4},    // b2
      {3, 0, 0, 0},     // d (dam)
      {4, -2, -2, 10},  // r1
      {5, 2, -2, 11},   // r2
      {6, 2, 2, 12},    // r3
      {7, -2, 2, 13},   // r4
  };
  std::vector<TriangleIds> t = {
      {1, 3, 7}, {3, 6, 7}, {3, 2, 6}, {5, 6, 2}, {5, 2, 3}, {4, 5, 3}, {4, 3, 1}, {4, 1, 7},
  };
  return Terrain::build(v, t);
}

Terrain island_in_lake() {
  std::vector<Terrain::VertexInput> v = {
      {1, 0, 0, 5},      // P, island peak
      {2, 0, -1, -10},   // m1, deepest moat point
      {3, 1, 0, -9},     // m2
      {4, 0, 1, -8},     // m3
      {5, -1, 0, -7},    // m4, encircling saddle
      {6, 2, -2, 100},   // R1, rim pass
      {7, 2, 2, 101},    // R2
      {8, -2, 2, 102},   // R3
      {9, -2, -2, 103},  // R4, global maximum
  };
  std::vector<TriangleIds> t = {
      {1, 2, 3}, {1, 3, 4}, {1, 4, 5}, {1, 5, 2},                          // island fan
      {2, 6, 3}, {3, 6, 7}, {3, 7, 4}, {4, 7, 8}, {4, 8, 5}, {5, 8, 9},    // moat to rim
      {5, 9, 2}, {2, 9, 6},
  };
  return Terrain::build(v, t);
}

}  // namespace terratree::fixtures
