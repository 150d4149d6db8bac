#include <gtest/gtest.h>

#include <map>
#include <set>
#include <string>

#include "mcknot/templates.hpp"
#include "mcknot/transforms.hpp"

using namespace mcknot;

namespace {

std::pair<std::string, std::string> norm(const std::string& a, const std::string& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

using PairSet = std::set<std::pair<std::string, std::string>>;

PairSet as_set(const std::vector<std::pair<std::string, std::string>>& rel) {
  PairSet out;
  for (const auto& [a, b] : rel) out.insert(norm(a, b));
  return out;
}

// Follow a strand entering at a tail slot through interior arcs until it
// exits at another tail slot.
SlotRef trace_partner(const Diagram& d, SlotRef tail) {
  SlotRef u = tail;
  for (int guard = 0; guard < 1 << 20; guard++) {
    SlotRef v = d.pass_partner(u);
    int aid = d.arc_id_at(v);
    if (d.ainfo(aid).kind == arc_boundary) return v;
    u = d.other_end(aid, v);
  }
  throw std::logic_error("trace_partner: no exit found");
}

template <class T>
PairSet traced_relations(const T& t) {
  std::map<std::string, SlotRef> by_label;
  std::map<std::string, std::string> label_at;
  auto key = [](SlotRef s) { return std::to_string(s.crossing) + ":" + std::to_string(s.index); };
  for (const auto& [slot, label] : t.tails) {
    by_label[label.str()] = slot;
    label_at[key(slot)] = label.str();
  }
  PairSet out;
  for (const auto& [slot, label] : t.tails) {
    SlotRef q = trace_partner(t.diagram, slot);
    out.insert(norm(label.str(), label_at.at(key(q))));
  }
  return out;
}

}  // namespace

TEST(HexTemplate, CountsAndCensus) {
  for (int m = 1; m <= 6; m++) {
    HexTemplate t = build_hex_template(m);
    const Diagram& d = t.diagram;
    long v = 3L * m * m + 3 * m + 1;
    EXPECT_EQ(d.crossing_count(), v) << "m=" << m;
    EXPECT_EQ(d.arc_count(), 3 * v) << "m=" << m;
    EXPECT_EQ((long)t.tails.size(), 12L * m + 6) << "m=" << m;
    EXPECT_EQ(d.uniform_multiplicity().value_or(-1), 3) << "m=" << m;
    EXPECT_EQ(d.component_count(), 1) << "m=" << m;
    EXPECT_TRUE(d.euler_check()) << "m=" << m;
    EXPECT_TRUE(d.validate().ok()) << "m=" << m;

    Census expect{{1, 3}, {3, 6L * m * m + 6 * m + 1}};
    EXPECT_EQ(d.census(), expect) << "m=" << m;
  }
}

TEST(HexTemplate, MonogonsSitOnOutermostClosureArcs) {
  for (int m : {1, 2, 3}) {
    HexTemplate t = build_hex_template(m);
    const Diagram& d = t.diagram;
    auto fs = d.faces();
    int monogons = 0;
    for (const auto& f : fs.faces) {
      if (f.size() != 1) continue;
      monogons++;
      SlotRef head = d.dart_head(f.darts[0]);
      int aid = d.arc_id_at(head);
      EXPECT_EQ(d.ainfo(aid).kind, arc_boundary) << "m=" << m;
    }
    EXPECT_EQ(monogons, 3) << "m=" << m;
  }
}

TEST(HexTemplate, TailLabelsUniqueAndBasepointIsFirst) {
  for (int m : {1, 2, 4}) {
    HexTemplate t = build_hex_template(m);
    std::set<std::string> seen;
    for (const auto& [slot, label] : t.tails) {
      EXPECT_TRUE(seen.insert(label.str()).second) << "dup " << label.str();
    }
    SlotRef a = t.tail("1A");
    EXPECT_EQ(a.crossing, t.basepoint.crossing);
    EXPECT_EQ(a.index, t.basepoint.index);
    EXPECT_EQ(t.tail("3B'").valid(), true);
  }
}

// Independent geometric oracle: the tail at point P whose free direction is
// d_k continues inside the hex along d_{(k+3)%6}; its partner is the last
// in-range lattice point on that ray, exiting by slot (k+3)%6.
TEST(HexTemplate, RelationsMatchStraightLineGeometry) {
  for (int m = 1; m <= 6; m++) {
    HexTemplate t = build_hex_template(m);
    std::map<std::string, std::string> expect_partner;
    PairSet geometric;
    auto dirs = hexgrid::directions();
    std::map<std::string, SlotRef> by_label;
    std::map<std::pair<int, int>, std::string> label_at;
    for (const auto& [slot, label] : t.tails) label_at[{slot.crossing, slot.index}] = label.str();
    for (const auto& [slot, label] : t.tails) {
      hexgrid::Cube p = t.vertex_of[slot.crossing];
      int k = slot.index;
      int back = (k + 3) % 6;
      hexgrid::Cube q = p;
      while (true) {
        hexgrid::Cube next = hexgrid::add(q, dirs[back]);
        if (!hexgrid::in_hex(next, m)) break;
        q = next;
      }
      int qid = t.vertex_id.at(q);
      geometric.insert(norm(label.str(), label_at.at({qid, back})));
    }
    EXPECT_EQ(geometric, as_set(hex_interior_relations(m))) << "m=" << m;
  }
}

TEST(HexTemplate, RelationsMatchDiagramTrace) {
  for (int m = 1; m <= 6; m++) {
    HexTemplate t = build_hex_template(m);
    EXPECT_EQ(traced_relations(t), as_set(hex_interior_relations(m))) << "m=" << m;
  }
}

TEST(HexTemplate, TrivializeStacksByFirstVisit) {
  HexTemplate t = build_hex_template(2);
  Diagram& d = t.diagram;
  trivialize(d, t.basepoint);
  for (int c = 0; c < d.crossing_count(); c++) EXPECT_TRUE(d.has_heights(c));
  auto walk = d.strand_traversal(t.basepoint);
  std::map<int, int> visits;
  for (size_t i = 0; i < walk.size(); i += 2) {
    auto [c, p] = d.pass_of(walk[i]);
    visits[c]++;
    EXPECT_EQ(d.heights(c)[p], visits[c]);
  }
  for (const auto& [c, count] : visits) EXPECT_EQ(count, 3);
  EXPECT_EQ((int)visits.size(), d.crossing_count());
}

TEST(RectTemplate, CountsAndCensus) {
  for (int n : {2, 4, 6, 8}) {
    RectTemplate t = build_rect_template(n);
    const Diagram& d = t.diagram;
    long v = (long)(n + 1) * (n + 2);
    EXPECT_EQ(d.crossing_count(), v) << "n=" << n;
    EXPECT_EQ(d.arc_count(), 4 * v) << "n=" << n;
    EXPECT_EQ((long)t.tails.size(), 4L * (2 * n + 3)) << "n=" << n;
    EXPECT_EQ(d.uniform_multiplicity().value_or(-1), 4) << "n=" << n;
    EXPECT_EQ(d.component_count(), 1) << "n=" << n;
    EXPECT_TRUE(d.euler_check()) << "n=" << n;
    EXPECT_TRUE(d.validate().ok()) << "n=" << n;

    Census c = d.census();
    long total = 0;
    for (const auto& [len, count] : c) {
      EXPECT_LE(len, 4) << "n=" << n;
      total += count;
    }
    EXPECT_EQ(c.count(1) ? c.at(1) : 0, 2) << "n=" << n;
    EXPECT_EQ(total, 3 * v + 2) << "n=" << n;
  }
}

TEST(RectTemplate, RelationsMatchDiagramTrace) {
  for (int n : {2, 4, 6}) {
    RectTemplate t = build_rect_template(n);
    EXPECT_EQ(traced_relations(t), as_set(rect_interior_relations(n))) << "n=" << n;
  }
}

TEST(RectTemplate, TrivializeCoversAllPasses) {
  RectTemplate t = build_rect_template(2);
  trivialize(t.diagram, t.basepoint);
  for (int c = 0; c < t.diagram.crossing_count(); c++) {
    EXPECT_TRUE(t.diagram.has_heights(c));
  }
}

TEST(RectTemplate, RejectsOddOrTinySizes) {
  EXPECT_THROW(build_rect_template(3), std::invalid_argument);
  EXPECT_THROW(build_rect_template(0), std::invalid_argument);
  EXPECT_THROW(build_hex_template(0), std::invalid_argument);
}

TEST(WovenTemplate, Hex3nAcceptanceMatrix) {
  for (int m : {2, 3}) {
    for (int k : {2, 3}) {
      WovenTemplate t = build_hex3n_template(m, k);
      const Diagram& d = t.diagram;
      EXPECT_EQ(d.uniform_multiplicity().value_or(-1), 3 * k) << "m=" << m << " k=" << k;
      EXPECT_EQ(d.component_count(), 1) << "m=" << m << " k=" << k;
      EXPECT_TRUE(d.euler_check()) << "m=" << m << " k=" << k;
      EXPECT_TRUE(d.validate().ok()) << "m=" << m << " k=" << k;
      for (const auto& [size, count] : d.census()) {
        EXPECT_GE(size, 1) << "m=" << m << " k=" << k;
        EXPECT_LE(size, 3) << "m=" << m << " k=" << k;
      }
    }
  }
}

// Weaving adds copies through existing crossings only: the crossing set stays
// the hex lattice, each copy adds one bigon ring along the strand.
TEST(WovenTemplate, Hex3nFrozenCensuses) {
  struct Row {
    int m, k;
    Census census;
  };
  const Row rows[] = {
      {2, 2, {{1, 3}, {2, 57}, {3, 37}}},
      {2, 3, {{1, 4}, {2, 112}, {3, 38}}},
      {3, 2, {{1, 3}, {2, 111}, {3, 73}}},
      {3, 3, {{1, 4}, {2, 220}, {3, 74}}},
  };
  for (const auto& row : rows) {
    WovenTemplate t = build_hex3n_template(row.m, row.k);
    EXPECT_EQ(t.diagram.census(), row.census) << "m=" << row.m << " k=" << row.k;
    EXPECT_EQ(t.diagram.crossing_count(), 3 * row.m * row.m + 3 * row.m + 1);
  }
}

TEST(WovenTemplate, Hex3nHeightsFollowFirstVisits) {
  WovenTemplate t = build_hex3n_template(2, 2);
  const Diagram& d = t.diagram;
  auto walk = d.strand_traversal(t.basepoint);
  std::map<int, int> visits;
  for (size_t i = 0; i < walk.size(); i += 2) {
    auto [c, p] = d.pass_of(walk[i]);
    visits[c]++;
    EXPECT_EQ(d.heights(c)[p], visits[c]);
  }
  for (const auto& [c, count] : visits) EXPECT_EQ(count, 6);
  EXPECT_EQ((int)visits.size(), d.crossing_count());
}

TEST(WovenTemplate, Hex3nRejectsInvalidParameters) {
  EXPECT_THROW(build_hex3n_template(1, 2), std::invalid_argument);
  EXPECT_THROW(build_hex3n_template(2, 1), std::invalid_argument);
}

TEST(WovenTemplate, LoopsAcceptanceMatrix) {
  for (int m : {3, 5}) {
    for (int k : {1, 2}) {
      for (int extra : {0, 1}) {
        WovenTemplate t = build_loops_template(m, k, extra);
        const Diagram& d = t.diagram;
        EXPECT_EQ(d.uniform_multiplicity().value_or(-1), 3 * k + 2 + 2 * extra)
            << "m=" << m << " k=" << k << " extra=" << extra;
        EXPECT_EQ(d.component_count(), 1) << "m=" << m << " k=" << k;
        EXPECT_TRUE(d.euler_check()) << "m=" << m << " k=" << k;
        EXPECT_TRUE(d.validate().ok()) << "m=" << m << " k=" << k;
        for (const auto& [size, count] : d.census()) {
          EXPECT_GE(size, 1) << "m=" << m << " k=" << k << " extra=" << extra;
          EXPECT_LE(size, 4) << "m=" << m << " k=" << k << " extra=" << extra;
        }
      }
    }
  }
}

// Curl placement is deterministic; k=1 needs two face repairs (the extra
// crossings beyond the 37-vertex lattice), k=2 none.
TEST(WovenTemplate, LoopsFrozenCensuses) {
  struct Row {
    int k, extra;
    long crossings;
    Census census;
  };
  const Row rows[] = {
      {1, 0, 39, {{1, 75}, {2, 6}, {3, 5}, {4, 72}}},
      {1, 1, 39, {{1, 79}, {2, 78}, {3, 5}, {4, 74}}},
      {2, 0, 37, {{1, 74}, {2, 78}, {3, 74}, {4, 35}}},
      {2, 1, 37, {{1, 74}, {2, 152}, {3, 74}, {4, 35}}},
  };
  for (const auto& row : rows) {
    WovenTemplate t = build_loops_template(3, row.k, row.extra);
    EXPECT_EQ(t.diagram.census(), row.census) << "k=" << row.k << " extra=" << row.extra;
    EXPECT_EQ(t.diagram.crossing_count(), row.crossings) << "k=" << row.k;
  }
}

TEST(WovenTemplate, LoopsHeightsFollowFirstVisits) {
  WovenTemplate t = build_loops_template(3, 1, 0);
  const Diagram& d = t.diagram;
  auto walk = d.strand_traversal(t.basepoint);
  std::map<int, int> visits;
  for (size_t i = 0; i < walk.size(); i += 2) {
    auto [c, p] = d.pass_of(walk[i]);
    visits[c]++;
    EXPECT_EQ(d.heights(c)[p], visits[c]);
  }
  EXPECT_EQ((int)visits.size(), d.crossing_count());
}

TEST(WovenTemplate, LoopsCoverTheSmallestHexagon) {
  WovenTemplate t = build_loops_template(1, 1, 0);
  EXPECT_EQ(t.diagram.uniform_multiplicity().value_or(-1), 5);
  EXPECT_EQ(t.diagram.component_count(), 1);
  for (const auto& [size, count] : t.diagram.census()) EXPECT_LE(size, 4);
}

TEST(WovenTemplate, LoopsRejectInvalidParameters) {
  EXPECT_THROW(build_loops_template(2, 1, 0), std::invalid_argument);
  EXPECT_THROW(build_loops_template(3, 0, 0), std::invalid_argument);
  EXPECT_THROW(build_loops_template(3, 1, 2), std::invalid_argument);
}
