#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "terratree/terrain.hpp"
#include "terratree/types.hpp"

namespace terratree {

// Terrain text format, one item per line:
//   terrain <n_vertices> <n_triangles>
//   v <id> <x> <y> <z>
//   t <id1> <id2> <id3>          (counter-clockwise)
Terrain load_terrain(std::istream& in);
Terrain load_terrain_file(const std::string& path);
void save_terrain(std::ostream& out, const std::vector<Terrain::VertexInput>& vertices,
                  const std::vector<TriangleIds>& triangles);

// Script commands: chg <v> <r> | ins <x> <y> <r> | del <v> | flip <u1> <u2>
//                  | verify | dump
struct ScriptCommand {
  enum Kind { ChangeHeight, Insert, Delete, Flip, Verify, Dump } kind;
  VertexId v = kNoVertex, u = kNoVertex;
  double x = 0, y = 0, r = 0;
};
std::vector<ScriptCommand> parse_script(std::istream& in);
std::vector<ScriptCommand> parse_script_file(const std::string& path);

std::string format_double(double v);  // shortest round-trippable form

}  // namespace terratree
