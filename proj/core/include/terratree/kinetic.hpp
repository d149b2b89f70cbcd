#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "terratree/contour_tree.hpp"
#include "terratree/merge_tree.hpp"
#include "terratree/snapshot.hpp"
#include "terratree/terrain.hpp"
#include "terratree/vertex_forests.hpp"

namespace terratree {

enum class EventKind : std::uint8_t {
  Auxiliary,
  Shift,
  Birth,
  Death,
  SignInterchange,
  BlueInterchange,
  RedInterchange,
  NegativeInterchange,
  PositiveInterchange,
  MinimaCrossing,
  MaximaCrossing,
};

const char* to_string(EventKind k);

struct EventRecord {
  std::uint64_t seq = 0;
  EventKind kind = EventKind::Auxiliary;
  VertexId v = kNoVertex;  // the moving vertex
  VertexId u = kNoVertex;  // the vertex whose height it crossed
  std::string details;
  std::uint64_t forest_ops = 0;   // dynamic-forest calls spent on this event
  std::uint64_t rotations = 0;    // splay rotations spent on this event

  std::string log_line() const;
};

struct VerifyReport {
  bool ok = true;
  std::string divergence;
};

// The maintained topology of one terrain: contour tree, ascent/descent
// forests, join/split trees with persistence pointers, and the ChangeHeight
// engine that repairs all of them at every certificate failure in
// O(log n) dynamic-forest work.
//
// Exclusive writer; queries may run between mutations.
class KineticTopology {
 public:
  using Observer = std::function<void(const EventRecord&)>;

  explicit KineticTopology(Terrain& t);

  Terrain& terrain() { return *terrain_; }
  const Terrain& terrain() const { return *terrain_; }

  // -- queries -------------------------------------------------------------
  VertexClass vertex_class(VertexId v) const;
  // Contour-tree edge containing the image of a regular vertex, as labels
  // (lower, upper). O(log n).
  std::pair<VertexId, VertexId> find_edge(VertexId v);
  Color saddle_color(VertexId s);
  std::vector<PairSnap> persistence_pairs() const;
  StateSnapshot snapshot() const;
  std::string contour_snapshot_text() const;

  // -- mutations -----------------------------------------------------------
  std::vector<EventRecord> change_height(VertexId v, double r, const Observer& obs = {});
  std::pair<VertexId, std::vector<EventRecord>> insert_vertex(double px, double py, double r,
                                                              const Observer& obs = {});
  std::vector<EventRecord> delete_vertex(VertexId v, const Observer& obs = {});
  std::vector<EventRecord> flip_edge(VertexId u1, VertexId u2, const Observer& obs = {});

  // -- verification ----------------------------------------------------------
  // Compares against a from-scratch static sweep and checks every structural
  // invariant (forest validity, cross-links, merge-tree pointers).
  VerifyReport verify() const;
  void validate_structures() const;  // internal invariants only (no sweep)

  struct ForestCounters {
    std::uint64_t ops = 0;
    std::uint64_t rotations = 0;
  };
  ForestCounters forest_counters() const;
  std::uint64_t event_count() const { return seq_; }

 private:
  Terrain* terrain_;
  ContourTree ct_;
  VertexForest ascent_;
  VertexForest descent_;
  MergeTree join_;
  MergeTree split_;
  std::uint64_t seq_ = 0;

  // Extremum key sets for the order-maintenance certificates (the moving
  // vertex is excluded while in motion).
  std::set<HeightKey> minima_keys_, maxima_keys_;

  // --- motion state (valid during change_height) ---
  struct Motion {
    VertexId v = kNoVertex;
    bool raising = true;
    HeightKey target;
    double target_height = 0;
    std::set<std::pair<HeightKey, VertexId>> queue;
    std::vector<EventRecord>* out = nullptr;
    const Observer* obs = nullptr;
  };
  std::optional<Motion> motion_;

  void build_from_sweep();
  void wire_new_regular_vertex(VertexId nv);
  std::vector<std::pair<VertexId, VertexForest::Dir>> detach_regular_vertex(VertexId v);
  void reattach_orphans(const std::vector<std::pair<VertexId, VertexForest::Dir>>& orphans);

  // --- certificates ---
  enum CertBit : std::uint8_t { kNeighborCert = 1, kTreeCert = 2, kExtremumCert = 4 };
  void seed_certificates();
  void refresh_tree_certificates();
  void refresh_extremum_certificate();
  void queue_insert(VertexId u, std::uint8_t bit);
  void queue_remove_bit(VertexId u, std::uint8_t bit);
  void queue_consume(VertexId u);

  // --- event processing ---
  void process_crossing(VertexId u);
  void local_crossing(VertexId u, EventRecord& rec);
  void interchange_crossing(VertexId u, EventRecord& rec);
  void merge_tree_crossing(VertexId u, EventRecord& rec);
  void extremum_order_crossing(VertexId u, EventRecord& rec);
  void repair_forests(VertexId v, VertexId u, VertexClass v_before, VertexClass u_before,
                      VertexClass v_after, VertexClass u_after);
  void apply_shift(VertexId from, VertexId to, EventRecord& rec);
  void apply_birth(VertexId v, VertexId u, VertexClass v_after, VertexClass u_after,
                   ContourTree::NodeId lo, ContourTree::NodeId hi, VertexId search_min,
                   VertexId search_max, EventRecord& rec);
  void apply_death(VertexId v, VertexId u, VertexClass v_before, VertexClass u_before,
                   EventRecord& rec);

  // --- interchanges (canonical handlers over a z-orientation) ---
  struct Oriented;  // private view helper
  void same_sign_interchange(ContourTree::NodeId lower, ContourTree::NodeId upper,
                             bool zflip, EventRecord& rec);
  void mixed_canonical(ContourTree::NodeId lower, ContourTree::NodeId upper, bool zflip,
                       EventRecord& rec);
  void mixed_reversed(ContourTree::NodeId lower, ContourTree::NodeId upper, bool zflip,
                      EventRecord& rec);

  // --- shared helpers ---
  void note_class_change(VertexId w, VertexClass before, VertexClass after);
  void refresh_mover_costs();
  void refresh_mover_costs_final(VertexId v);
  void advance_mover(VertexId past);
  std::pair<ContourTree::NodeId, ContourTree::NodeId> find_edge_nodes(VertexId v);
  double abort_height(VertexId v) const;
  void finish_event(EventRecord& rec);
  VertexId pick_parent(VertexId w, VertexForest::Dir dir) const;
  bool mover_is(VertexClass c) const;

  std::vector<VertexId> tree_certs_;
  VertexId ext_cert_ = kNoVertex;
  std::unordered_map<VertexId, std::uint8_t> cert_mask_;
  std::uint64_t pre_event_ops_ = 0;
  std::uint64_t pre_event_rotations_ = 0;
};

}  // namespace terratree
