#pragma once

#include <cstdint>
#include <vector>

#include "terratree/terrain.hpp"

namespace terratree {

struct GeneratedTerrain {
  std::vector<Terrain::VertexInput> vertices;
  std::vector<TriangleIds> triangles;
};

// Reproducible random terrain: n points in the unit square with distinct
// random heights, triangulated Delaunay-style. All randomness comes from the
// seed.
GeneratedTerrain generate_terrain(std::uint64_t seed, std::size_t n);

}  // namespace terratree
