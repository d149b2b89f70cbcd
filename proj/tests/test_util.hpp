#pragma once

#include <doctest.h>

#include <string>
#include <vector>

#include "terratree/kinetic.hpp"

namespace terratree::testutil {

// Runs change_height and verifies the full state against the static sweep
// after every single event; returns the event records.
inline std::vector<EventRecord> move_verified(KineticTopology& k, VertexId v, double r) {
  std::vector<EventRecord> seen;
  auto obs = [&](const EventRecord& rec) {
    seen.push_back(rec);
    VerifyReport rep = k.verify();
    if (!rep.ok) {
      FAIL("divergence after event ", rec.log_line(), ": ", rep.divergence);
    }
  };
  std::vector<EventRecord> out = k.change_height(v, r, obs);
  REQUIRE(out.size() == seen.size());
  return out;
}

inline std::vector<EventKind> kinds(const std::vector<EventRecord>& recs) {
  std::vector<EventKind> out;
  for (const auto& r : recs) out.push_back(r.kind);
  return out;
}

}  // namespace terratree::testutil
