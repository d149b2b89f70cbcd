#include "terratree/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace terratree {

std::string format_double(double v) {
  char buf[64];
  // Shortest representation that round-trips exactly.
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

Terrain load_terrain(std::istream& in) {
  std::string word;
  if (!(in >> word) || word != "terrain") throw ParseError("expected 'terrain' header");
  std::size_t nv = 0, nt = 0;
  if (!(in >> nv >> nt)) throw ParseError("bad terrain header counts");
  std::vector<Terrain::VertexInput> verts;
  std::vector<TriangleIds> tris;
  verts.reserve(nv);
  tris.reserve(nt);
  for (std::size_t i = 0; i < nv; ++i) {
    Terrain::VertexInput v;
    if (!(in >> word) || word != "v") throw ParseError("expected vertex line");
    if (!(in >> v.id >> v.x >> v.y >> v.z)) throw ParseError("bad vertex line");
    verts.push_back(v);
  }
  for (std::size_t i = 0; i < nt; ++i) {
    TriangleIds t{};
    if (!(in >> word) || word != "t") throw ParseError("expected triangle line");
    if (!(in >> t.a >> t.b >> t.c)) throw ParseError("bad triangle line");
    tris.push_back(t);
  }
  return Terrain::build(verts, tris);
}

Terrain load_terrain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open terrain file: " + path);
  return load_terrain(in);
}

void save_terrain(std::ostream& out, const std::vector<Terrain::VertexInput>& vertices,
                  const std::vector<TriangleIds>& triangles) {
  out << "terrain " << vertices.size() << ' ' << triangles.size() << '\n';
  for (const auto& v : vertices)
    out << "v " << v.id << ' ' << format_double(v.x) << ' ' << format_double(v.y) << ' '
        << format_double(v.z) << '\n';
  for (const auto& t : triangles) out << "t " << t.a << ' ' << t.b << ' ' << t.c << '\n';
}

std::vector<ScriptCommand> parse_script(std::istream& in) {
  std::vector<ScriptCommand> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string op;
    if (!(ls >> op) || op[0] == '#') continue;
    ScriptCommand c{};
    auto fail = [&] { throw ParseError("script line " + std::to_string(lineno) + ": " + line); };
    if (op == "chg") {
      c.kind = ScriptCommand::ChangeHeight;
      if (!(ls >> c.v >> c.r)) fail();
    } else if (op == "ins") {
      c.kind = ScriptCommand::Insert;
      if (!(ls >> c.x >> c.y >> c.r)) fail();
    } else if (op == "del") {
      c.kind = ScriptCommand::Delete;
      if (!(ls >> c.v)) fail();
    } else if (op == "flip") {
      c.kind = ScriptCommand::Flip;
      if (!(ls >> c.v >> c.u)) fail();
    } else if (op == "verify") {
      c.kind = ScriptCommand::Verify;
    } else if (op == "dump") {
      c.kind = ScriptCommand::Dump;
    } else {
      fail();
    }
    out.push_back(c);
  }
  return out;
}

std::vector<ScriptCommand> parse_script_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open script file: " + path);
  return parse_script(in);
}

}  // namespace terratree
