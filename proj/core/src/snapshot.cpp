#include "terratree/snapshot.hpp"

#include <algorithm>
#include <sstream>

namespace terratree {

void StateSnapshot::normalize() {
  std::sort(nodes.begin(), nodes.end(),
            [](const CtNodeSnap& a, const CtNodeSnap& b) { return a.label < b.label; });
  // Edge endpoints stay height-oriented (lo below hi); ids only order the list.
  std::sort(edges.begin(), edges.end(), [](const CtEdgeSnap& a, const CtEdgeSnap& b) {
    return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
  });
  auto by_child = [](const MergeEdgeSnap& a, const MergeEdgeSnap& b) { return a.child < b.child; };
  std::sort(join_edges.begin(), join_edges.end(), by_child);
  std::sort(split_edges.begin(), split_edges.end(), by_child);
  auto by_saddle = [](const PointerSnap& a, const PointerSnap& b) { return a.saddle < b.saddle; };
  std::sort(join_lowest.begin(), join_lowest.end(), by_saddle);
  std::sort(split_highest.begin(), split_highest.end(), by_saddle);
  std::sort(pairs.begin(), pairs.end(), [](const PairSnap& a, const PairSnap& b) {
    return a.creator != b.creator ? a.creator < b.creator : a.destroyer < b.destroyer;
  });
}

std::string format_contour_snapshot(const StateSnapshot& s) {
  std::ostringstream out;
  out << "ct " << s.nodes.size() << '\n';
  for (const auto& n : s.nodes) out << "n " << n.label << ' ' << to_string(n.cls) << '\n';
  for (const auto& e : s.edges)
    out << "e " << std::min(e.lo, e.hi) << ' ' << std::max(e.lo, e.hi) << ' '
        << to_string(e.color) << '\n';
  return out.str();
}

namespace {

template <typename T, typename Fmt>
std::string first_diff(const char* what, const std::vector<T>& expected,
                       const std::vector<T>& actual, Fmt fmt) {
  std::size_t n = std::max(expected.size(), actual.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= expected.size())
      return std::string(what) + ": unexpected " + fmt(actual[i]);
    if (i >= actual.size())
      return std::string(what) + ": missing " + fmt(expected[i]);
    if (!(expected[i] == actual[i]))
      return std::string(what) + ": expected " + fmt(expected[i]) + ", got " + fmt(actual[i]);
  }
  return {};
}

}  // namespace

std::string diff_snapshots(const StateSnapshot& expected, const StateSnapshot& actual) {
  std::string d;
  d = first_diff("node", expected.nodes, actual.nodes, [](const CtNodeSnap& n) {
    return std::to_string(n.label) + "/" + to_string(n.cls);
  });
  if (!d.empty()) return d;
  auto edge_fmt = [](const CtEdgeSnap& e) {
    return "(" + std::to_string(e.lo) + "," + std::to_string(e.hi) + ")/" + to_string(e.color);
  };
  d = first_diff("edge", expected.edges, actual.edges, edge_fmt);
  if (!d.empty()) return d;
  auto merge_fmt = [](const MergeEdgeSnap& e) {
    return std::to_string(e.child) + "->" + std::to_string(e.parent);
  };
  d = first_diff("join edge", expected.join_edges, actual.join_edges, merge_fmt);
  if (!d.empty()) return d;
  d = first_diff("split edge", expected.split_edges, actual.split_edges, merge_fmt);
  if (!d.empty()) return d;
  auto ptr_fmt = [](const PointerSnap& p) {
    return std::to_string(p.saddle) + "=>" + std::to_string(p.extremum);
  };
  d = first_diff("join pointer", expected.join_lowest, actual.join_lowest, ptr_fmt);
  if (!d.empty()) return d;
  d = first_diff("split pointer", expected.split_highest, actual.split_highest, ptr_fmt);
  if (!d.empty()) return d;
  return first_diff("pair", expected.pairs, actual.pairs, [](const PairSnap& p) {
    return "(" + std::to_string(p.creator) + "," + std::to_string(p.destroyer) + ")";
  });
}

}  // namespace terratree
