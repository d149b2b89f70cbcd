#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace terratree {

// Vertex handle. Id 0 is reserved for the vertex at infinity; ids are stable
// for the lifetime of a terrain and never reused after deletion.
using VertexId = std::uint32_t;
inline constexpr VertexId kInfinityVertex = 0;
inline constexpr VertexId kNoVertex = static_cast<VertexId>(-1);

// Total order on vertex heights. Ties in the raw height are broken by vertex
// id, so every terrain behaves as if all heights were pairwise distinct.
// `cls == -1` sorts below every finite key (the vertex at infinity).
// Nonzero `nudge` denotes a position immediately above/below the vertex
// (height, id): +-1 for contour levels, +-2 for a vertex in motion, so that a
// level fits between an anchor and the vertex anchored on it.
struct HeightKey {
  double height = 0.0;
  VertexId id = 0;
  std::int8_t cls = 0;
  std::int8_t nudge = 0;

  friend int compare(const HeightKey& a, const HeightKey& b) {
    if (a.cls != b.cls) return a.cls < b.cls ? -1 : 1;
    if (a.cls < 0) return 0;
    if (a.height != b.height) return a.height < b.height ? -1 : 1;
    if (a.id != b.id) return a.id < b.id ? -1 : 1;
    if (a.nudge != b.nudge) return a.nudge < b.nudge ? -1 : 1;
    return 0;
  }
  friend bool operator<(const HeightKey& a, const HeightKey& b) { return compare(a, b) < 0; }
  friend bool operator>(const HeightKey& a, const HeightKey& b) { return compare(a, b) > 0; }
  friend bool operator==(const HeightKey& a, const HeightKey& b) { return compare(a, b) == 0; }
  friend bool operator<=(const HeightKey& a, const HeightKey& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const HeightKey& a, const HeightKey& b) { return compare(a, b) >= 0; }
};

enum class Color : std::uint8_t { Red, Blue };

inline Color opposite(Color c) { return c == Color::Red ? Color::Blue : Color::Red; }
inline const char* to_string(Color c) { return c == Color::Red ? "red" : "blue"; }

// Vertex classification. Saddles are simple by assumption: exactly two lower
// and two upper link components. The sign tells how the level set changes at
// the saddle: negative merges two contours, positive splits one in two.
enum class VertexClass : std::uint8_t {
  Regular,
  Minimum,
  Maximum,
  NegativeSaddle,
  PositiveSaddle,
};

inline bool is_saddle(VertexClass c) {
  return c == VertexClass::NegativeSaddle || c == VertexClass::PositiveSaddle;
}
inline bool is_extremum(VertexClass c) {
  return c == VertexClass::Minimum || c == VertexClass::Maximum;
}
inline bool is_critical(VertexClass c) { return c != VertexClass::Regular; }

inline const char* to_string(VertexClass c) {
  switch (c) {
    case VertexClass::Regular: return "regular";
    case VertexClass::Minimum: return "min";
    case VertexClass::Maximum: return "max";
    case VertexClass::NegativeSaddle: return "neg";
    case VertexClass::PositiveSaddle: return "pos";
  }
  return "?";
}

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// terrain
struct NotATriangulation : Error { using Error::Error; };
struct MultipleSaddle : Error { using Error::Error; };
// dynamic forest
struct SameTree : Error { using Error::Error; };
struct NoSuchEdge : Error { using Error::Error; };
struct NotConnected : Error { using Error::Error; };
struct KeyOutOfRange : Error { using Error::Error; };
struct NotMonotone : Error { using Error::Error; };
// contour structures
struct VertexIsCritical : Error { using Error::Error; };
struct InconsistentCrossLink : Error { using Error::Error; };
struct InconsistentState : Error { using Error::Error; };
// kinetic engine
struct MultipleSaddleEncountered : Error { using Error::Error; };
// edits
struct DuplicatePoint : Error { using Error::Error; };
struct PointAtInfinity : Error { using Error::Error; };
struct LinkTooLarge : Error { using Error::Error; };
struct CannotDeleteInfinity : Error { using Error::Error; };
struct NonConvexQuad : Error { using Error::Error; };
struct BoundaryFlipUnsupported : Error { using Error::Error; };
// cli
struct ParseError : Error { using Error::Error; };

}  // namespace terratree
