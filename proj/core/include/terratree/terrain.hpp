#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "terratree/types.hpp"

namespace terratree {

struct TriangleIds {
  VertexId a, b, c;
};

// Lower/upper link structure of one vertex. Components are maximal runs of
// the link cycle; a simple saddle has exactly two of each.
struct LinkInfo {
  int lower_degree = 0;
  int upper_degree = 0;
  int lower_components = 0;
  int upper_components = 0;

  bool multiple() const { return lower_components > 2 || upper_components > 2; }
  VertexClass cls() const;
};

struct LinkComponents {
  std::vector<std::vector<VertexId>> lower;
  std::vector<std::vector<VertexId>> upper;
};

// Planar triangulation of the whole plane: a finite triangulation of the
// convex hull of the input points, closed off by the vertex at infinity,
// which is adjacent to every hull vertex and lies below every finite vertex.
//
// Link cycles are stored counter-clockwise. The cycle order never changes
// while heights move; it changes only under explicit surgery (vertex
// insertion/removal). While a vertex is being moved its effective height is
// "immediately above/below" an anchor vertex, so every comparison stays
// exact; no epsilon appears anywhere.
class Terrain {
 public:
  struct VertexInput {
    VertexId id;
    double x, y, z;
  };

  static Terrain build(const std::vector<VertexInput>& vertices,
                       const std::vector<TriangleIds>& triangles);

  // -- basic queries ------------------------------------------------------
  std::size_t id_bound() const { return verts_.size(); }
  bool alive(VertexId v) const { return v < verts_.size() && verts_[v].alive; }
  std::size_t finite_vertex_count() const { return finite_count_; }
  double x(VertexId v) const { return verts_[v].x; }
  double y(VertexId v) const { return verts_[v].y; }
  double raw_height(VertexId v) const { return verts_[v].height; }
  void set_raw_height(VertexId v, double h) { verts_[v].height = h; }

  HeightKey key(VertexId v) const;
  bool below(VertexId u, VertexId v) const { return key(u) < key(v); }

  const std::vector<VertexId>& link(VertexId v) const { return verts_[v].link; }
  int degree(VertexId v) const { return static_cast<int>(verts_[v].link.size()); }
  bool adjacent(VertexId u, VertexId v) const;
  VertexId next_in_link(VertexId v, VertexId u) const;
  VertexId prev_in_link(VertexId v, VertexId u) const;
  // Apexes of the two triangles sharing edge (u, v): {next, prev} in u's cycle.
  std::pair<VertexId, VertexId> edge_apexes(VertexId u, VertexId v) const;

  // -- link analysis ------------------------------------------------------
  // `swapped`, when set, pretends the relative height order of that vertex
  // pair is inverted; used to peek at the state just after a crossing.
  LinkInfo link_info(VertexId v,
                     std::optional<std::pair<VertexId, VertexId>> swapped = {}) const;
  VertexClass classify(VertexId v) const;  // throws MultipleSaddle
  LinkComponents link_components(VertexId v) const;
  std::vector<std::vector<VertexId>> lower_link_components(VertexId v) const;
  std::vector<std::vector<VertexId>> upper_link_components(VertexId v) const;
  // Deterministic representatives.
  VertexId lowest_in_lower_link(VertexId v) const;
  VertexId lowest_in_upper_link(VertexId v) const;

  // -- moving vertex protocol --------------------------------------------
  void begin_move(VertexId v);
  void place_mover_above(VertexId anchor);
  void place_mover_below(VertexId anchor);
  void end_move(double final_height);
  std::optional<VertexId> mover() const;
  // Raw height for geometric interpolation; for the mover this is the anchor
  // height (the instantaneous height at the current event).
  double geometric_height(VertexId v) const;

  // -- surgery (used by the edit operations) ------------------------------
  VertexId allocate_vertex(double px, double py, double height);
  void split_triangle(VertexId nv, VertexId a, VertexId b, VertexId c);
  void split_edge(VertexId nv, VertexId a, VertexId b);
  // Removes a vertex of degree 3; the hole becomes the triangle of its link.
  void remove_vertex_degree3(VertexId v);
  // Removes a degree-4 vertex whose link cycle is (u1, d1, u2, d2); the hole
  // is retriangulated with the diagonal d1-d2.
  void remove_vertex_degree4(VertexId v, VertexId d1, VertexId d2);

  // -- geometry ------------------------------------------------------------
  struct Location {
    enum Kind { OnVertex, OnEdge, InsideTriangle, Outside } kind;
    VertexId a = kNoVertex, b = kNoVertex, c = kNoVertex;
  };
  Location locate(double px, double py) const;
  double surface_height(double px, double py) const;
  std::vector<TriangleIds> finite_triangles() const;

  void check_invariants() const;  // debug/test helper; throws on violation

 private:
  struct VertexRec {
    double x = 0, y = 0, height = 0;
    bool alive = false;
    std::vector<VertexId> link;  // counter-clockwise cycle
  };

  struct Mover {
    VertexId vertex = kNoVertex;
    VertexId anchor = kNoVertex;  // kNoVertex: still at its stored height
    std::int8_t nudge = 0;
  };

  std::vector<VertexRec> verts_;
  std::size_t finite_count_ = 0;
  std::optional<Mover> mover_;

  int link_pos(VertexId v, VertexId u) const;
  bool below_for_link(VertexId nbr, VertexId center,
                      const std::optional<std::pair<VertexId, VertexId>>& swapped) const;
};

}  // namespace terratree
