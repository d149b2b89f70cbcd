#include "terratree/kinetic.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "terratree/static_sweep.hpp"

namespace terratree {

namespace {

// Four-way link shape; saddle signs are a global property resolved elsewhere.
enum class Shape { Min, Max, Regular, Saddle };

Shape shape_of(VertexClass c) {
  switch (c) {
    case VertexClass::Minimum: return Shape::Min;
    case VertexClass::Maximum: return Shape::Max;
    case VertexClass::Regular: return Shape::Regular;
    default: return Shape::Saddle;
  }
}

Shape shape_of(const LinkInfo& li) {
  if (li.lower_degree == 0) return Shape::Min;
  if (li.upper_degree == 0) return Shape::Max;
  return li.lower_components == 1 ? Shape::Regular : Shape::Saddle;
}

}  // namespace

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Auxiliary: return "aux";
    case EventKind::Shift: return "shift";
    case EventKind::Birth: return "birth";
    case EventKind::Death: return "death";
    case EventKind::SignInterchange: return "isign";
    case EventKind::BlueInterchange: return "iblue";
    case EventKind::RedInterchange: return "ired";
    case EventKind::NegativeInterchange: return "ineg";
    case EventKind::PositiveInterchange: return "ipos";
    case EventKind::MinimaCrossing: return "mincross";
    case EventKind::MaximaCrossing: return "maxcross";
  }
  return "?";
}

std::string EventRecord::log_line() const {
  std::ostringstream out;
  out << seq << ' ' << to_string(kind) << ' ' << v << ' ' << u;
  if (!details.empty()) out << ' ' << details;
  return out.str();
}

// ---------------------------------------------------------------------------
// construction

KineticTopology::KineticTopology(Terrain& t)
    : terrain_(&t),
      ct_(t),
      ascent_(t, VertexForest::Dir::Ascent),
      descent_(t, VertexForest::Dir::Descent),
      join_(MergeTree::Kind::Join),
      split_(MergeTree::Kind::Split) {
  build_from_sweep();
}

void KineticTopology::build_from_sweep() {
  sweep::SweepState st = sweep::compute_state(*terrain_);

  for (const auto& n : st.snapshot.nodes) ct_.create_node(n.label, n.cls);
  for (const auto& e : st.snapshot.edges)
    ct_.add_edge(ct_.node_of(e.lo), ct_.node_of(e.hi), e.color);

  for (VertexId v = 0; v < terrain_->id_bound(); ++v) {
    if (!terrain_->alive(v)) continue;
    ascent_.ensure_vertex(v);
    descent_.ensure_vertex(v);
  }
  for (VertexId v = 0; v < terrain_->id_bound(); ++v) {
    if (!terrain_->alive(v)) continue;
    VertexClass c = st.classes.at(v);
    if (c != VertexClass::Maximum) ascent_.set_parent(v, pick_parent(v, VertexForest::Dir::Ascent));
    if (c != VertexClass::Minimum)
      descent_.set_parent(v, pick_parent(v, VertexForest::Dir::Descent));
    if (c == VertexClass::Minimum) {
      descent_.set_leaf(v, ct_.node_of(v));
      if (v != kInfinityVertex) minima_keys_.insert(terrain_->key(v));
    }
    if (c == VertexClass::Maximum) {
      ascent_.set_leaf(v, ct_.node_of(v));
      maxima_keys_.insert(terrain_->key(v));
    }
  }

  auto build_merge = [&](MergeTree& mt, const std::vector<MergeEdgeSnap>& edges,
                         VertexClass extremum) {
    std::vector<VertexId> members;
    for (const auto& n : st.snapshot.nodes)
      if (n.cls == extremum ||
          n.cls == (mt.kind() == MergeTree::Kind::Join ? VertexClass::NegativeSaddle
                                                       : VertexClass::PositiveSaddle))
        members.push_back(n.label);
    mt.bulk_build(members, edges, [&](VertexId v) { return terrain_->key(v); },
                  [&](VertexId v) { return st.classes.at(v) != extremum; });
  };
  build_merge(join_, st.snapshot.join_edges, VertexClass::Minimum);
  build_merge(split_, st.snapshot.split_edges, VertexClass::Maximum);
}

// ---------------------------------------------------------------------------
// queries

VertexClass KineticTopology::vertex_class(VertexId v) const {
  if (!terrain_->alive(v)) throw Error("vertex does not exist");
  ContourTree::NodeId n = ct_.node_of(v);
  return n == ContourTree::none ? VertexClass::Regular : ct_.cls(n);
}

std::pair<ContourTree::NodeId, ContourTree::NodeId> KineticTopology::find_edge_nodes(VertexId v) {
  if (vertex_class(v) != VertexClass::Regular)
    throw VertexIsCritical("find_edge on critical vertex " + std::to_string(v));
  VertexId x = descent_.root_of(v);
  VertexId y = ascent_.root_of(v);
  ContourTree::NodeId xl = descent_.leaf_of(x);
  ContourTree::NodeId yl = ascent_.leaf_of(y);
  auto [hi_f, lo_f] = ct_.forest().path_search_monotone(ct_.forest_node(yl), ct_.forest_node(xl),
                                                        terrain_->key(v));
  return {ct_.node_of_forest(lo_f), ct_.node_of_forest(hi_f)};
}

std::pair<VertexId, VertexId> KineticTopology::find_edge(VertexId v) {
  auto [lo, hi] = find_edge_nodes(v);
  return {ct_.label(lo), ct_.label(hi)};
}

Color KineticTopology::saddle_color(VertexId s) {
  ContourTree::NodeId n = ct_.node_of(s);
  if (n == ContourTree::none || !is_saddle(ct_.cls(n)))
    throw Error("vertex is not a saddle");
  // A saddle's color is the color of its unique down-contour (positive) or
  // up-contour (negative).
  if (ct_.cls(n) == VertexClass::PositiveSaddle)
    return ct_.edge_color(ct_.single_down(n), n);
  return ct_.edge_color(n, ct_.single_up(n));
}

std::vector<PairSnap> KineticTopology::persistence_pairs() const {
  std::vector<PairSnap> out = join_.pairs();
  std::vector<PairSnap> sp = split_.pairs();
  out.insert(out.end(), sp.begin(), sp.end());
  return out;
}

StateSnapshot KineticTopology::snapshot() const {
  StateSnapshot s;
  ct_.append_snapshot(s);
  join_.append_snapshot(s.join_edges, s.join_lowest);
  split_.append_snapshot(s.split_edges, s.split_highest);
  s.pairs = persistence_pairs();
  s.normalize();
  return s;
}

std::string KineticTopology::contour_snapshot_text() const {
  return format_contour_snapshot(snapshot());
}

KineticTopology::ForestCounters KineticTopology::forest_counters() const {
  ForestCounters c;
  for (const LinkCutForest* f :
       {&const_cast<KineticTopology*>(this)->ct_.forest(),
        &const_cast<KineticTopology*>(this)->ascent_.forest(),
        &const_cast<KineticTopology*>(this)->descent_.forest(),
        &const_cast<KineticTopology*>(this)->join_.forest(),
        &const_cast<KineticTopology*>(this)->split_.forest()}) {
    c.ops += f->counters().ops;
    c.rotations += f->counters().rotations;
  }
  return c;
}

// ---------------------------------------------------------------------------
// helpers

VertexId KineticTopology::pick_parent(VertexId w, VertexForest::Dir dir) const {
  VertexId p = dir == VertexForest::Dir::Descent ? terrain_->lowest_in_lower_link(w)
                                                 : terrain_->lowest_in_upper_link(w);
  if (p == kNoVertex) throw InconsistentState("no parent candidate in link");
  return p;
}

bool KineticTopology::mover_is(VertexClass c) const {
  return motion_ && vertex_class(motion_->v) == c;
}

void KineticTopology::note_class_change(VertexId w, VertexClass before, VertexClass after) {
  if (motion_ && w == motion_->v) return;  // the mover is excluded while moving
  if (w == kInfinityVertex) return;
  HeightKey k = terrain_->key(w);
  if (before == VertexClass::Minimum) minima_keys_.erase(k);
  if (before == VertexClass::Maximum) maxima_keys_.erase(k);
  if (after == VertexClass::Minimum) minima_keys_.insert(k);
  if (after == VertexClass::Maximum) maxima_keys_.insert(k);
}

void KineticTopology::refresh_mover_costs() {
  VertexId v = motion_->v;
  HeightKey k = terrain_->key(v);
  if (ContourTree::NodeId n = ct_.node_of(v); n != ContourTree::none) ct_.refresh_cost(n);
  if (join_.contains(v)) join_.refresh_key(v, k);
  if (split_.contains(v)) split_.refresh_key(v, k);
}

void KineticTopology::advance_mover(VertexId past) {
  if (motion_->raising)
    terrain_->place_mover_above(past);
  else
    terrain_->place_mover_below(past);
  refresh_mover_costs();
}

double KineticTopology::abort_height(VertexId v) const {
  HeightKey k = terrain_->key(v);
  if (k.nudge == 0) return terrain_->raw_height(v);  // nothing was crossed
  double anchor_h = terrain_->geometric_height(v);
  VertexId anchor = k.id;
  bool raising = k.nudge > 0;
  // Prefer the exact tie (height of the anchor, order by id): valid when the
  // id falls on the right side and no other same-height vertex sits between.
  bool id_ok = raising ? v > anchor : v < anchor;
  bool tie_between = false;
  for (VertexId w = 1; w < terrain_->id_bound(); ++w) {
    if (!terrain_->alive(w) || w == v || w == anchor) continue;
    if (terrain_->raw_height(w) != anchor_h) continue;
    if (raising ? (anchor < w && w < v) : (v < w && w < anchor)) tie_between = true;
  }
  if (id_ok && !tie_between) return anchor_h;
  // Otherwise place the vertex numerically between the anchor and the next
  // distinct height. That reorders it against same-height vertices beyond the
  // anchor, which is only observable if one of them is a pending certificate.
  if (motion_) {
    for (const auto& [ck, cu] : motion_->queue) {
      (void)cu;
      if (ck.cls == 0 && ck.height == anchor_h &&
          (raising ? ck.id > anchor : ck.id < anchor))
        throw InconsistentState("cannot realize an abort height between exact ties");
    }
  }
  bool have_next = false;
  double next = 0;
  for (VertexId w = 1; w < terrain_->id_bound(); ++w) {
    if (!terrain_->alive(w) || w == v) continue;
    double h = terrain_->raw_height(w);
    if (raising ? h > anchor_h : h < anchor_h) {
      if (!have_next || (raising ? h < next : h > next)) {
        next = h;
        have_next = true;
      }
    }
  }
  if (have_next) return (anchor_h + next) / 2.0;
  return raising ? anchor_h + 1.0 : anchor_h - 1.0;
}

// ---------------------------------------------------------------------------
// certificates

void KineticTopology::queue_insert(VertexId u, std::uint8_t bit) {
  cert_mask_[u] |= bit;
  motion_->queue.insert({terrain_->key(u), u});
}

void KineticTopology::queue_remove_bit(VertexId u, std::uint8_t bit) {
  auto it = cert_mask_.find(u);
  if (it == cert_mask_.end()) return;
  it->second &= static_cast<std::uint8_t>(~bit);
  if (it->second == 0) {
    motion_->queue.erase({terrain_->key(u), u});
    cert_mask_.erase(it);
  }
}

void KineticTopology::queue_consume(VertexId u) {
  cert_mask_.erase(u);
}

void KineticTopology::seed_certificates() {
  VertexId v = motion_->v;
  bool raising = motion_->raising;
  HeightKey vk = terrain_->key(v);
  for (VertexId u : terrain_->link(v)) {
    if (u == kInfinityVertex) continue;
    HeightKey uk = terrain_->key(u);
    if (raising ? vk < uk : uk < vk) queue_insert(u, kNeighborCert);
  }
  refresh_tree_certificates();
  refresh_extremum_certificate();
}

void KineticTopology::refresh_tree_certificates() {
  VertexId v = motion_->v;
  for (VertexId u : tree_certs_) queue_remove_bit(u, kTreeCert);
  tree_certs_.clear();
  ContourTree::NodeId n = ct_.node_of(v);
  if (n == ContourTree::none || !is_saddle(ct_.cls(n))) return;
  const auto& side = motion_->raising ? ct_.ups(n) : ct_.downs(n);
  for (ContourTree::NodeId m : side) {
    VertexId u = ct_.label(m);
    tree_certs_.push_back(u);
    queue_insert(u, kTreeCert);
  }
  // Join/split trees have their own interchange events: saddles adjacent
  // there are not always adjacent in the contour tree (positive saddles can
  // sit between two join-adjacent negative saddles).
  auto add = [&](VertexId u) {
    tree_certs_.push_back(u);
    queue_insert(u, kTreeCert);
  };
  if (ct_.cls(n) == VertexClass::NegativeSaddle) {
    if (motion_->raising) {
      VertexId p = join_.parent(v);
      if (p != kNoVertex) add(p);
    } else {
      for (VertexId c : join_.children(v))
        if (join_.is_saddle_node(c)) add(c);
    }
  } else {
    if (motion_->raising) {
      for (VertexId c : split_.children(v))
        if (split_.is_saddle_node(c)) add(c);
    } else {
      VertexId p = split_.parent(v);
      if (p != kNoVertex) add(p);
    }
  }
}

void KineticTopology::refresh_extremum_certificate() {
  VertexId v = motion_->v;
  if (ext_cert_ != kNoVertex) {
    queue_remove_bit(ext_cert_, kExtremumCert);
    ext_cert_ = kNoVertex;
  }
  const std::set<HeightKey>* keys = nullptr;
  if (mover_is(VertexClass::Minimum)) keys = &minima_keys_;
  if (mover_is(VertexClass::Maximum)) keys = &maxima_keys_;
  if (!keys || keys->empty()) return;
  HeightKey vk = terrain_->key(v);
  if (motion_->raising) {
    auto it = keys->upper_bound(vk);
    if (it == keys->end()) return;
    ext_cert_ = it->id;
  } else {
    auto it = keys->lower_bound(vk);
    if (it == keys->begin()) return;
    ext_cert_ = std::prev(it)->id;
  }
  queue_insert(ext_cert_, kExtremumCert);
}

// ---------------------------------------------------------------------------
// change height

std::vector<EventRecord> KineticTopology::change_height(VertexId v, double r,
                                                        const Observer& obs) {
  if (!terrain_->alive(v)) throw Error("vertex does not exist");
  if (v == kInfinityVertex) throw Error("the vertex at infinity cannot move");
  if (motion_) throw InconsistentState("change_height is not re-entrant");

  std::vector<EventRecord> records;
  HeightKey cur = terrain_->key(v);
  HeightKey target{r, v, 0, 0};
  int c = compare(target, cur);
  if (c == 0) {
    terrain_->set_raw_height(v, r);
    return records;
  }

  VertexClass vc = vertex_class(v);
  if (vc == VertexClass::Minimum) minima_keys_.erase(cur);
  if (vc == VertexClass::Maximum) maxima_keys_.erase(cur);

  motion_.emplace();
  motion_->v = v;
  motion_->raising = c > 0;
  motion_->target = target;
  motion_->target_height = r;
  motion_->out = &records;
  motion_->obs = &obs;
  tree_certs_.clear();
  ext_cert_ = kNoVertex;
  cert_mask_.clear();
  terrain_->begin_move(v);
  seed_certificates();

  try {
    for (;;) {
      if (motion_->queue.empty()) break;
      auto it = motion_->raising ? motion_->queue.begin() : std::prev(motion_->queue.end());
      auto [k, u] = *it;
      if (motion_->raising ? !(k < target) : !(target < k)) break;
      motion_->queue.erase(it);
      queue_consume(u);
      process_crossing(u);
    }
  } catch (...) {
    double h = abort_height(v);
    terrain_->end_move(h);
    refresh_mover_costs_final(v);
    motion_.reset();
    throw;
  }

  terrain_->end_move(r);
  refresh_mover_costs_final(v);
  motion_.reset();
  return records;
}

void KineticTopology::refresh_mover_costs_final(VertexId v) {
  HeightKey k = terrain_->key(v);
  if (ContourTree::NodeId n = ct_.node_of(v); n != ContourTree::none) ct_.refresh_cost(n);
  if (join_.contains(v)) join_.refresh_key(v, k);
  if (split_.contains(v)) split_.refresh_key(v, k);
  VertexClass vc = vertex_class(v);
  if (vc == VertexClass::Minimum && v != kInfinityVertex) minima_keys_.insert(k);
  if (vc == VertexClass::Maximum) maxima_keys_.insert(k);
}

void KineticTopology::finish_event(EventRecord& rec) {
  refresh_mover_costs();
  refresh_tree_certificates();
  refresh_extremum_certificate();
  ForestCounters after = forest_counters();
  rec.forest_ops = after.ops - pre_event_ops_;
  rec.rotations = after.rotations - pre_event_rotations_;
  rec.seq = seq_++;
  motion_->out->push_back(rec);
  if (motion_->obs && *motion_->obs) (*motion_->obs)(motion_->out->back());
}

void KineticTopology::process_crossing(VertexId u) {
  VertexId v = motion_->v;
  ForestCounters before = forest_counters();
  pre_event_ops_ = before.ops;
  pre_event_rotations_ = before.rotations;

  EventRecord rec;
  rec.v = v;
  rec.u = u;

  bool adjacent = terrain_->adjacent(v, u);
  ContourTree::NodeId nv = ct_.node_of(v), nu = ct_.node_of(u);
  bool tree_adjacent =
      nv != ContourTree::none && nu != ContourTree::none && ct_.has_edge(nv, nu);

  if (adjacent) {
    local_crossing(u, rec);
  } else if (tree_adjacent) {
    interchange_crossing(u, rec);
  } else if (nv != ContourTree::none && nu != ContourTree::none && is_saddle(ct_.cls(nv)) &&
             ct_.cls(nu) == ct_.cls(nv)) {
    merge_tree_crossing(u, rec);
  } else {
    extremum_order_crossing(u, rec);
  }
  finish_event(rec);
}

// ---------------------------------------------------------------------------
// extremum order crossing (persistence pointer event)

// Two same-sign saddles adjacent in the join (split) tree but not in the
// contour tree swap heights: the merge tree rotates, the contour tree is
// untouched.
void KineticTopology::merge_tree_crossing(VertexId u, EventRecord& rec) {
  VertexId v = motion_->v;
  bool neg = vertex_class(v) == VertexClass::NegativeSaddle;
  MergeTree& mt = neg ? join_ : split_;
  // The structural child in the merge tree is the one about to pass its
  // parent: for the join tree the height-lower saddle, mirrored for split.
  VertexId lower, upper;
  bool v_is_child = mt.parent(v) == u;
  if (v_is_child) {
    lower = v;
    upper = u;
  } else if (mt.parent(u) == v) {
    lower = u;
    upper = v;
  } else {
    throw InconsistentState("saddle crossing outside both trees: " + std::to_string(v) + "/" +
                            std::to_string(u));
  }
  // Which child subtree of the rotating child migrates: mirror of the
  // contour-tree test, with first steps taken in the merge tree itself.
  VertexId hint = kNoVertex;
  auto comps = neg ? terrain_->lower_link_components(upper) : terrain_->upper_link_components(upper);
  if (comps.size() != 2) throw InconsistentState("merge-tree saddle without two components");
  int child_side = 0;
  for (const auto& comp : comps) {
    VertexId rep = comp[0];
    for (VertexId w : comp) {
      bool more_extreme = neg ? terrain_->below(rep, w) : terrain_->below(w, rep);
      if (more_extreme) rep = w;
    }
    VertexId x = neg ? descent_.root_of(rep) : ascent_.root_of(rep);
    VertexId s = mt.child_toward(lower, x);
    if (s != upper) {
      ++child_side;
      hint = x;
    }
  }
  if (child_side != 1 || hint == kNoVertex)
    throw InconsistentState("merge-tree mark test found no migrating subtree");
  advance_mover(u);
  mt.rotate(lower, upper, hint);
  rec.kind = neg ? EventKind::NegativeInterchange : EventKind::PositiveInterchange;
  rec.details = neg ? "join only" : "split only";
}

void KineticTopology::extremum_order_crossing(VertexId u, EventRecord& rec) {
  VertexId v = motion_->v;
  VertexClass vc = vertex_class(v), uc = vertex_class(u);
  if (vc != uc || !is_extremum(vc))
    throw InconsistentState("unexpected non-adjacent crossing of " + std::to_string(v) + "/" +
                            std::to_string(u));
  advance_mover(u);
  if (vc == VertexClass::Minimum) {
    // The lower minimum is the better one; the riser loses.
    VertexId loser = motion_->raising ? v : u;
    VertexId winner = motion_->raising ? u : v;
    join_.extremum_crossing(loser, winner);
    rec.kind = EventKind::MinimaCrossing;
  } else {
    VertexId loser = motion_->raising ? u : v;
    VertexId winner = motion_->raising ? v : u;
    split_.extremum_crossing(loser, winner);
    rec.kind = EventKind::MaximaCrossing;
  }
}

// ---------------------------------------------------------------------------
// local events

void KineticTopology::local_crossing(VertexId u, EventRecord& rec) {
  VertexId v = motion_->v;
  VertexClass vb = vertex_class(v), ub = vertex_class(u);

  LinkInfo li_v = terrain_->link_info(v, std::pair{v, u});
  LinkInfo li_u = terrain_->link_info(u, std::pair{v, u});
  if (li_v.multiple() || li_u.multiple())
    throw MultipleSaddleEncountered("crossing " + std::to_string(v) + "/" + std::to_string(u) +
                                    " creates a multiple saddle");
  ContourTree::NodeId nv = ct_.node_of(v), nu = ct_.node_of(u);
  if (is_saddle(vb) && is_saddle(ub) && nv != ContourTree::none && nu != ContourTree::none &&
      ct_.has_edge(nv, nu))
    throw MultipleSaddleEncountered("adjacent saddles " + std::to_string(v) + "/" +
                                    std::to_string(u) + " meet on one contour");

  Shape sv_b = shape_of(vb), su_b = shape_of(ub);
  Shape sv_a = shape_of(li_v), su_a = shape_of(li_u);

  bool v_changed = sv_b != sv_a, u_changed = su_b != su_a;

  if (!v_changed && !u_changed) {
    advance_mover(u);
    repair_forests(v, u, vb, ub, vb, ub);
    rec.kind = EventKind::Auxiliary;
    return;
  }

  bool birth = sv_b == Shape::Regular && su_b == Shape::Regular &&
               sv_a != Shape::Regular && su_a != Shape::Regular;
  bool death = sv_b != Shape::Regular && su_b != Shape::Regular &&
               sv_a == Shape::Regular && su_a == Shape::Regular;
  bool shift = !birth && !death &&
               ((sv_b != Shape::Regular && sv_a == Shape::Regular && su_b == Shape::Regular &&
                 su_a == sv_b) ||
                (su_b != Shape::Regular && su_a == Shape::Regular && sv_b == Shape::Regular &&
                 sv_a == su_b));
  if (!birth && !death && !shift)
    throw InconsistentState("unclassifiable local transition at " + std::to_string(v) + "/" +
                            std::to_string(u));

  if (birth) {
    // Resolve classes: the extremal one determines the saddle's sign.
    VertexClass va, ua;
    if (sv_a == Shape::Saddle) {
      if (su_a != Shape::Min && su_a != Shape::Max)
        throw InconsistentState("birth without an extremum");
      ua = su_a == Shape::Min ? VertexClass::Minimum : VertexClass::Maximum;
      va = su_a == Shape::Min ? VertexClass::NegativeSaddle : VertexClass::PositiveSaddle;
    } else {
      if (sv_a != Shape::Min && sv_a != Shape::Max)
        throw InconsistentState("birth without an extremum");
      va = sv_a == Shape::Min ? VertexClass::Minimum : VertexClass::Maximum;
      ua = sv_a == Shape::Min ? VertexClass::NegativeSaddle : VertexClass::PositiveSaddle;
    }
    VertexId saddle_label = is_saddle(va) ? v : u;
    VertexClass saddle_cls = is_saddle(va) ? va : ua;
    // Roots come from the pre-crossing forests; the containing edge is
    // searched at the crossing position itself, because the image of the
    // mover may slide through tree nodes between two events.
    VertexId search_min = kNoVertex, search_max = kNoVertex;
    if (saddle_cls == VertexClass::NegativeSaddle)
      search_min = descent_.root_of(saddle_label);
    else
      search_max = ascent_.root_of(saddle_label);
    advance_mover(u);
    auto [lo, hi] = find_edge_nodes(v);
    repair_forests(v, u, vb, ub, va, ua);
    apply_birth(v, u, va, ua, lo, hi, search_min, search_max, rec);
    note_class_change(u, ub, ua);
    return;
  }

  advance_mover(u);

  if (death) {
    VertexClass va = VertexClass::Regular, ua = VertexClass::Regular;
    repair_forests(v, u, vb, ub, va, ua);
    apply_death(v, u, vb, ub, rec);
    note_class_change(u, ub, ua);
    return;
  }

  // Shift: one critical label moves onto the regular partner.
  VertexId from = sv_b != Shape::Regular ? v : u;
  VertexId to = from == v ? u : v;
  VertexClass from_cls = from == v ? vb : ub;
  VertexClass va = from == v ? VertexClass::Regular : from_cls;
  VertexClass ua = from == u ? VertexClass::Regular : from_cls;
  repair_forests(v, u, vb, ub, va, ua);
  apply_shift(from, to, rec);
  note_class_change(u, ub, ua);
}

void KineticTopology::repair_forests(VertexId v, VertexId u, VertexClass vb, VertexClass ub,
                                     VertexClass va, VertexClass ua) {
  bool raising = motion_->raising;
  VertexForest& climb = raising ? ascent_ : descent_;  // forest losing the (v -> u) edge
  VertexForest& fall = raising ? descent_ : ascent_;   // forest losing the (u -> v) edge
  auto climb_dir = raising ? VertexForest::Dir::Ascent : VertexForest::Dir::Descent;
  auto fall_dir = raising ? VertexForest::Dir::Descent : VertexForest::Dir::Ascent;
  VertexClass climb_root_cls = raising ? VertexClass::Maximum : VertexClass::Minimum;
  VertexClass fall_root_cls = raising ? VertexClass::Minimum : VertexClass::Maximum;

  if (climb.parent(v) == u) {
    climb.clear_parent(v);
    if (va != climb_root_cls) climb.set_parent(v, pick_parent(v, climb_dir));
  }
  if (ub == climb_root_cls) climb.set_parent(u, v);
  if (fall.parent(u) == v) {
    fall.clear_parent(u);
    if (ua != fall_root_cls) fall.set_parent(u, pick_parent(u, fall_dir));
  }
  if (vb == fall_root_cls) fall.set_parent(v, u);
}

void KineticTopology::apply_shift(VertexId from, VertexId to, EventRecord& rec) {
  ContourTree::NodeId n = ct_.node_of(from);
  VertexClass cls = ct_.cls(n);
  ct_.relabel(n, to);
  if (cls == VertexClass::Minimum) {
    descent_.clear_leaf(from);
    descent_.set_leaf(to, n);
  } else if (cls == VertexClass::Maximum) {
    ascent_.clear_leaf(from);
    ascent_.set_leaf(to, n);
  }
  HeightKey to_key = terrain_->key(to);
  if (join_.contains(from)) join_.relabel(from, to, to_key);
  if (split_.contains(from)) split_.relabel(from, to, to_key);
  rec.kind = EventKind::Shift;
  rec.details = to_string(cls);
}

void KineticTopology::apply_birth(VertexId v, VertexId u, VertexClass va, VertexClass ua,
                                  ContourTree::NodeId lo, ContourTree::NodeId hi,
                                  VertexId search_min, VertexId search_max, EventRecord& rec) {
  VertexId saddle_label = is_saddle(va) ? v : u;
  VertexId leaf_label = saddle_label == v ? u : v;
  VertexClass saddle_cls = is_saddle(va) ? va : ua;
  VertexClass leaf_cls = is_saddle(va) ? ua : va;

  ContourTree::NodeId S = ct_.create_node(saddle_label, saddle_cls);
  ContourTree::NodeId L = ct_.create_node(leaf_label, leaf_cls);
  Color mid = ct_.edge_color(lo, hi);
  ct_.remove_edge(lo, hi);
  ct_.add_edge(lo, S, mid);
  ct_.add_edge(S, hi, mid);
  ct_.add_edge(S, L, leaf_cls == VertexClass::Minimum ? Color::Blue : Color::Red);

  if (leaf_cls == VertexClass::Minimum) {
    descent_.set_leaf(leaf_label, L);
    join_.insert_pair(saddle_label, terrain_->key(saddle_label), leaf_label,
                      terrain_->key(leaf_label), search_min);
  } else {
    ascent_.set_leaf(leaf_label, L);
    split_.insert_pair(saddle_label, terrain_->key(saddle_label), leaf_label,
                       terrain_->key(leaf_label), search_max);
  }
  rec.kind = EventKind::Birth;
  std::ostringstream d;
  d << "edge " << ct_.label(lo) << '-' << ct_.label(hi) << " saddle " << saddle_label << " leaf "
    << leaf_label;
  rec.details = d.str();
}

void KineticTopology::apply_death(VertexId v, VertexId u, VertexClass vb, VertexClass ub,
                                  EventRecord& rec) {
  VertexId saddle_label = is_saddle(vb) ? v : u;
  VertexId leaf_label = saddle_label == v ? u : v;
  VertexClass saddle_cls = is_saddle(vb) ? vb : ub;
  VertexClass leaf_cls = is_saddle(vb) ? ub : vb;
  if ((saddle_cls == VertexClass::NegativeSaddle) != (leaf_cls == VertexClass::Minimum))
    throw InconsistentState("death with mismatched saddle sign");

  ContourTree::NodeId S = ct_.node_of(saddle_label);
  ContourTree::NodeId L = ct_.node_of(leaf_label);
  if (!ct_.has_edge(S, L)) throw InconsistentState("death pair is not a tree edge");

  ContourTree::NodeId a, b;  // surviving neighbors, a below b
  if (saddle_cls == VertexClass::NegativeSaddle) {
    a = ct_.other_down(S, L);
    b = ct_.single_up(S);
  } else {
    a = ct_.single_down(S);
    b = ct_.other_up(S, L);
  }
  Color ca = ct_.edge_color(a, S), cb = ct_.edge_color(S, b);
  if (ca != cb) throw InconsistentState("death would merge edges of different colors");

  ct_.remove_edge(S, L);
  ct_.remove_edge(a, S);
  ct_.remove_edge(S, b);
  ct_.add_edge(a, b, ca);

  if (leaf_cls == VertexClass::Minimum) {
    join_.remove_pair(saddle_label, leaf_label);
    descent_.clear_leaf(leaf_label);
  } else {
    split_.remove_pair(saddle_label, leaf_label);
    ascent_.clear_leaf(leaf_label);
  }
  ct_.destroy_node(S);
  ct_.destroy_node(L);
  rec.kind = EventKind::Death;
  std::ostringstream d;
  d << "saddle " << saddle_label << " leaf " << leaf_label << " merged " << ct_.label(a) << '-'
    << ct_.label(b);
  rec.details = d.str();
}

// ---------------------------------------------------------------------------
// interchange events

// z-orientation view: flips up/down, colors, and the height order, so the
// canonical handlers cover the reflected cases of the color/sign analysis.
struct KineticTopology::Oriented {
  KineticTopology& k;
  bool z;

  const std::vector<ContourTree::NodeId>& ups(ContourTree::NodeId n) const {
    return z ? k.ct_.downs(n) : k.ct_.ups(n);
  }
  const std::vector<ContourTree::NodeId>& downs(ContourTree::NodeId n) const {
    return z ? k.ct_.ups(n) : k.ct_.downs(n);
  }
  ContourTree::NodeId single_up(ContourTree::NodeId n) const {
    return z ? k.ct_.single_down(n) : k.ct_.single_up(n);
  }
  ContourTree::NodeId single_down(ContourTree::NodeId n) const {
    return z ? k.ct_.single_up(n) : k.ct_.single_down(n);
  }
  ContourTree::NodeId other_up(ContourTree::NodeId n, ContourTree::NodeId x) const {
    return z ? k.ct_.other_down(n, x) : k.ct_.other_up(n, x);
  }
  ContourTree::NodeId other_down(ContourTree::NodeId n, ContourTree::NodeId x) const {
    return z ? k.ct_.other_up(n, x) : k.ct_.other_down(n, x);
  }
  Color color(ContourTree::NodeId a, ContourTree::NodeId b) const {
    Color c = k.ct_.edge_color(a, b);
    return z ? opposite(c) : c;
  }
  bool below(VertexId a, VertexId b) const {
    return z ? k.terrain_->below(b, a) : k.terrain_->below(a, b);
  }
  std::vector<std::vector<VertexId>> upper_comps(VertexId v) const {
    return z ? k.terrain_->lower_link_components(v) : k.terrain_->upper_link_components(v);
  }
  std::vector<std::vector<VertexId>> lower_comps(VertexId v) const {
    return z ? k.terrain_->upper_link_components(v) : k.terrain_->lower_link_components(v);
  }
  VertexId view_lowest(const std::vector<VertexId>& comp) const {
    VertexId best = comp[0];
    for (VertexId w : comp)
      if (below(w, best)) best = w;
    return best;
  }
  VertexId view_highest(const std::vector<VertexId>& comp) const {
    VertexId best = comp[0];
    for (VertexId w : comp)
      if (below(best, w)) best = w;
    return best;
  }
  VertexId ascent_root(VertexId v) const {
    return z ? k.descent_.root_of(v) : k.ascent_.root_of(v);
  }
  VertexId descent_root(VertexId v) const {
    return z ? k.ascent_.root_of(v) : k.descent_.root_of(v);
  }
};

void KineticTopology::interchange_crossing(VertexId u, EventRecord& rec) {
  VertexId v = motion_->v;
  ContourTree::NodeId nv = ct_.node_of(v), nu = ct_.node_of(u);
  if (nv == ContourTree::none || nu == ContourTree::none || !is_saddle(ct_.cls(nv)) ||
      !is_saddle(ct_.cls(nu)))
    throw InconsistentState("tree crossing between non-saddles " + std::to_string(v) + "/" +
                            std::to_string(u));
  ContourTree::NodeId L = motion_->raising ? nv : nu;  // relative riser, currently below
  ContourTree::NodeId U = motion_->raising ? nu : nv;
  VertexClass sL = ct_.cls(L), sU = ct_.cls(U);

  if (sL == VertexClass::NegativeSaddle && sU == VertexClass::NegativeSaddle) {
    same_sign_interchange(L, U, false, rec);
  } else if (sL == VertexClass::PositiveSaddle && sU == VertexClass::PositiveSaddle) {
    same_sign_interchange(U, L, true, rec);
  } else if (sL == VertexClass::NegativeSaddle) {
    // Mixed with the riser negative; canonical when its up-contour is blue.
    Color c = ct_.edge_color(L, ct_.single_up(L));
    if (c == Color::Blue)
      mixed_canonical(L, U, false, rec);
    else
      mixed_canonical(U, L, true, rec);
  } else {
    // Riser positive above a negative saddle: time-reversed mixed event.
    Color c = ct_.edge_color(ct_.single_down(L), L);
    if (c == Color::Blue)
      mixed_reversed(L, U, false, rec);
    else
      mixed_reversed(U, L, true, rec);
  }
}

void KineticTopology::same_sign_interchange(ContourTree::NodeId A, ContourTree::NodeId B,
                                            bool z, EventRecord& rec) {
  Oriented o{*this, z};
  VertexId la = ct_.label(A), lb = ct_.label(B);
  VertexId crossed = la == motion_->v ? lb : la;
  if (o.downs(A).size() != 2 || o.single_up(A) != B)
    throw InconsistentState("same-sign interchange with unexpected structure");
  ContourTree::NodeId W = o.other_down(B, A);
  ContourTree::NodeId P = o.single_up(B);

  // Which down subtree of A the marks of B lie in: test via the view-descent
  // roots of B's two view-lower link components.
  ContourTree::NodeId D = ContourTree::none;
  VertexId hint = kNoVertex;
  int b_side = 0;
  for (const auto& comp : o.lower_comps(lb)) {
    VertexId x = o.descent_root(o.view_highest(comp));
    ContourTree::NodeId xn = ct_.node_of(x);
    if (xn == ContourTree::none) throw InconsistentState("forest root without a tree node");
    auto s_f = ct_.forest().path_first_step(ct_.forest_node(A), ct_.forest_node(xn));
    ContourTree::NodeId s = ct_.node_of_forest(s_f);
    if (s == B) {
      ++b_side;
    } else {
      if (s != o.downs(A)[0] && s != o.downs(A)[1])
        throw InconsistentState("interchange mark test left the expected subtrees");
      D = s;
      hint = x;
    }
  }
  if (b_side != 1 || D == ContourTree::none)
    throw InconsistentState("interchange mark test found no migrating subtree");

  Color cD = ct_.edge_color(D, A);
  Color cW = ct_.edge_color(W, B);
  Color cP = ct_.edge_color(B, P);
  ct_.remove_edge(D, A);
  ct_.remove_edge(A, B);
  ct_.remove_edge(B, P);
  advance_mover(crossed);
  ct_.add_edge(D, B, cD);
  // B keeps its sign; its color follows from its two down edges: both blue
  // makes a blue saddle, mixed makes a red one (in view colors).
  Color view_cD = z ? opposite(cD) : cD;
  Color view_cW = z ? opposite(cW) : cW;
  Color view_mid = (view_cD == Color::Blue && view_cW == Color::Blue) ? Color::Blue : Color::Red;
  ct_.add_edge(B, A, z ? opposite(view_mid) : view_mid);
  ct_.add_edge(A, P, cP);

  MergeTree& mt = z ? split_ : join_;
  mt.rotate(la, lb, hint);
  rec.kind = z ? EventKind::PositiveInterchange : EventKind::NegativeInterchange;
  std::ostringstream d;
  d << "moved " << ct_.label(D) << (z ? " z" : "");
  rec.details = d.str();
}

void KineticTopology::mixed_canonical(ContourTree::NodeId A, ContourTree::NodeId B, bool z,
                                      EventRecord& rec) {
  Oriented o{*this, z};
  VertexId la = ct_.label(A), lb = ct_.label(B);
  VertexId crossed = la == motion_->v ? lb : la;
  if (o.downs(A).size() != 2 || o.single_up(A) != B || o.single_down(B) != A ||
      o.ups(B).size() != 2)
    throw InconsistentState("mixed interchange with unexpected structure");

  // Ascent-side test: which up subtree of B each upper component of A
  // ascends into.
  ContourTree::NodeId s[2];
  {
    auto comps = o.upper_comps(la);
    if (comps.size() != 2) throw InconsistentState("saddle without two upper components");
    for (int i = 0; i < 2; ++i) {
      VertexId y = o.ascent_root(o.view_lowest(comps[i]));
      ContourTree::NodeId yn = ct_.node_of(y);
      if (yn == ContourTree::none) throw InconsistentState("forest root without a tree node");
      auto s_f = ct_.forest().path_first_step(ct_.forest_node(B), ct_.forest_node(yn));
      s[i] = ct_.node_of_forest(s_f);
      if (s[i] != o.ups(B)[0] && s[i] != o.ups(B)[1])
        throw InconsistentState("ascent mark test left the expected subtrees");
    }
  }
  // Descent-side test: which down subtree of A the marks of B lie in.
  ContourTree::NodeId d[2];
  {
    auto comps = o.lower_comps(lb);
    if (comps.size() != 2) throw InconsistentState("saddle without two lower components");
    for (int i = 0; i < 2; ++i) {
      VertexId x = o.descent_root(o.view_highest(comps[i]));
      ContourTree::NodeId xn = ct_.node_of(x);
      if (xn == ContourTree::none) throw InconsistentState("forest root without a tree node");
      auto d_f = ct_.forest().path_first_step(ct_.forest_node(A), ct_.forest_node(xn));
      d[i] = ct_.node_of_forest(d_f);
      if (d[i] != o.downs(A)[0] && d[i] != o.downs(A)[1])
        throw InconsistentState("descent mark test left the expected subtrees");
    }
  }

  if (s[0] != s[1]) {
    // Interleaved marks: sign interchange, labels swap and nothing else moves.
    if (d[0] == d[1]) throw InconsistentState("interleave tests disagree");
    advance_mover(crossed);
    ct_.swap_labels(A, B);
    if (join_.contains(la) == join_.contains(lb) || split_.contains(la) == split_.contains(lb))
      throw InconsistentState("merge trees out of step with a sign interchange");
    if (join_.contains(la))
      join_.relabel(la, lb, terrain_->key(lb));
    else
      join_.relabel(lb, la, terrain_->key(la));
    if (split_.contains(la))
      split_.relabel(la, lb, terrain_->key(lb));
    else
      split_.relabel(lb, la, terrain_->key(la));
    rec.kind = EventKind::SignInterchange;
    rec.details = z ? "z" : "";
    return;
  }

  if (d[0] != d[1]) throw InconsistentState("interleave tests disagree");
  ContourTree::NodeId U = s[0];
  ContourTree::NodeId D = d[0];
  Color view_up = o.color(B, U);

  Color cD = ct_.edge_color(D, A);
  Color cU = ct_.edge_color(B, U);
  ct_.remove_edge(D, A);
  ct_.remove_edge(B, U);
  ct_.remove_edge(A, B);
  advance_mover(crossed);
  ct_.add_edge(D, B, cD);
  ct_.add_edge(A, U, cU);
  ct_.add_edge(A, B, cU);  // flipped edge follows the migrating up edge

  rec.kind = view_up == Color::Blue ? EventKind::BlueInterchange : EventKind::RedInterchange;
  std::ostringstream det;
  det << "moved " << ct_.label(D) << ',' << ct_.label(U) << (z ? " z" : "");
  rec.details = det.str();
}

void KineticTopology::mixed_reversed(ContourTree::NodeId X, ContourTree::NodeId Y, bool z,
                                     EventRecord& rec) {
  Oriented o{*this, z};
  VertexId lx = ct_.label(X), ly = ct_.label(Y);
  VertexId crossed = lx == motion_->v ? ly : lx;
  if (o.ups(X).size() != 2 || o.downs(X).size() != 1 || o.ups(Y).size() != 1 ||
      o.downs(Y).size() != 2)
    throw InconsistentState("reversed mixed interchange with unexpected structure");

  ContourTree::NodeId D = o.single_down(X);
  ContourTree::NodeId W = o.single_up(Y);
  Color view_mid = o.color(X, Y);
  Color view_own = o.color(D, X);
  if (view_own != Color::Blue)
    throw InconsistentState("reversed mixed interchange with a red positive riser");

  Color cD = ct_.edge_color(D, X);
  Color cW = ct_.edge_color(Y, W);
  Color mid_real = ct_.edge_color(X, Y);
  ct_.remove_edge(D, X);
  ct_.remove_edge(Y, W);
  ct_.remove_edge(X, Y);
  advance_mover(crossed);
  ct_.add_edge(D, Y, cD);
  ct_.add_edge(X, W, cW);
  Color new_mid = view_mid == Color::Red ? (z ? Color::Red : Color::Blue) : mid_real;
  ct_.add_edge(X, Y, new_mid);

  rec.kind = view_mid == Color::Blue ? EventKind::BlueInterchange : EventKind::RedInterchange;
  std::ostringstream det;
  det << "moved " << ct_.label(D) << ',' << ct_.label(W) << " t" << (z ? "z" : "");
  rec.details = det.str();
}

// ---------------------------------------------------------------------------
// verification

void KineticTopology::validate_structures() const {
  ct_.validate();
  std::unordered_map<VertexId, VertexClass> classes;
  for (VertexId v = 0; v < terrain_->id_bound(); ++v) {
    if (!terrain_->alive(v)) continue;
    classes[v] = vertex_class(v);
  }
  ascent_.validate(classes);
  descent_.validate(classes);
  join_.validate_pointers();
  split_.validate_pointers();
  // Leaf cross-links point at correctly labeled leaves.
  for (const auto& [v, c] : classes) {
    if (c == VertexClass::Minimum && ct_.label(descent_.leaf_of(v)) != v)
      throw InconsistentCrossLink("descent leaf link mislabeled for " + std::to_string(v));
    if (c == VertexClass::Maximum && ct_.label(ascent_.leaf_of(v)) != v)
      throw InconsistentCrossLink("ascent leaf link mislabeled for " + std::to_string(v));
  }
}

VerifyReport KineticTopology::verify() const {
  VerifyReport rep;
  try {
    validate_structures();
  } catch (const Error& e) {
    rep.ok = false;
    rep.divergence = std::string("structural: ") + e.what();
    return rep;
  }
  sweep::SweepState st = sweep::compute_state(*terrain_);
  StateSnapshot actual = snapshot();
  std::string diff = diff_snapshots(st.snapshot, actual);
  if (!diff.empty()) {
    rep.ok = false;
    rep.divergence = diff;
  }
  return rep;
}

}  // namespace terratree
