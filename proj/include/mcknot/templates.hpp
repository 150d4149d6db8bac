#pragma once

// Weave templates: large projections with only small faces that serve as the
// canvas for multi-crossing realization.
//
// Hex template: the triangular grid restricted to a hexagon of radius m, every
// lattice point a triple crossing, boundary line-ends closed off by nested
// arcs so the whole projection is a single unknotted strand. Faces are three
// monogons (one per corner on alternating corners) and triangles.
//
// Rect template: an (n+1) x (n+2) grid of quadruple crossings formed by
// doubling every line of a square grid and letting each doubled pair weave.
// Boundary ends are closed the same way; faces have at most four sides.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mcknot/diagram.hpp"
#include "mcknot/transforms.hpp"

namespace mcknot {

// Arc roles used by the builders (ArcInfo::kind).
inline constexpr int arc_line = 0;      // segment of a straight grid line
inline constexpr int arc_boundary = 1;  // exterior closure arc

struct TailLabel {
  int num = 0;
  char letter = 'A';
  bool primed = false;

  std::string str() const {
    std::string s = std::to_string(num);
    s += letter;
    if (primed) s += '\'';
    return s;
  }
  friend bool operator==(const TailLabel& a, const TailLabel& b) {
    return a.num == b.num && a.letter == b.letter && a.primed == b.primed;
  }
};

namespace hexgrid {

using Cube = std::array<int, 3>;  // x + y + z == 0

// The six lattice directions in clockwise slot order.
inline const std::array<Cube, 6>& directions() {
  static const std::array<Cube, 6> d = {{{1, 0, -1},
                                         {1, -1, 0},
                                         {0, -1, 1},
                                         {-1, 0, 1},
                                         {-1, 1, 0},
                                         {0, 1, -1}}};
  return d;
}

inline Cube add(Cube a, Cube b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

inline bool in_hex(Cube p, int m) {
  return std::abs(p[0]) <= m && std::abs(p[1]) <= m && std::abs(p[2]) <= m;
}

inline Cube corner(int s, int m) {
  static const std::array<Cube, 6> unit = {{{1, 0, -1},
                                            {1, -1, 0},
                                            {0, -1, 1},
                                            {-1, 0, 1},
                                            {-1, 1, 0},
                                            {0, 1, -1}}};
  return {unit[s][0] * m, unit[s][1] * m, unit[s][2] * m};
}

// Line family cut transversally by direction k: lines of family f keep
// coordinate coord(f) constant; the parameter grows along the direction.
inline int family_of_direction(int k) { return k % 3; }
inline int line_of(Cube p, int family) {
  switch (family) {
    case 0: return p[1];   // d0 keeps y
    case 1: return p[2];   // d1 keeps z
    default: return p[0];  // d2 keeps x
  }
}
inline int param_of(Cube p, int family) {
  switch (family) {
    case 0: return p[0];
    case 1: return p[0];
    default: return p[2];
  }
}

}  // namespace hexgrid

struct HexTemplate {
  Diagram diagram;
  int m = 0;
  std::vector<hexgrid::Cube> vertex_of;           // crossing id -> lattice point
  std::map<hexgrid::Cube, int> vertex_id;         // lattice point -> crossing id
  std::vector<std::pair<SlotRef, TailLabel>> tails;  // boundary walk order
  SlotRef basepoint;                              // tail 1A

  SlotRef tail(const std::string& label) const {
    for (auto& [slot, lab] : tails)
      if (lab.str() == label) return slot;
    throw std::out_of_range("no tail labeled " + label);
  }
};

inline HexTemplate build_hex_template(int m) {
  using namespace hexgrid;
  if (m < 1) throw std::invalid_argument("hex template needs m >= 1");
  HexTemplate t;
  t.m = m;
  Diagram& d = t.diagram;

  for (int x = -m; x <= m; x++) {
    for (int y = std::max(-m, -x - m); y <= std::min(m, -x + m); y++) {
      Cube p{x, y, -x - y};
      int id = d.add_crossing(3);
      t.vertex_of.push_back(p);
      t.vertex_id[p] = id;
      d.cinfo(id).x = 0.8660254037844386 * x;
      d.cinfo(id).y = 0.5 * x + y;
      d.cinfo(id).kind = 0;
    }
  }

  for (int id = 0; id < d.crossing_count(); id++) {
    Cube p = t.vertex_of[id];
    for (int k = 0; k < 3; k++) {
      Cube q = add(p, directions()[k]);
      if (!in_hex(q, m)) continue;
      ArcInfo info;
      info.kind = arc_line;
      info.family = k;
      info.line = line_of(p, k);
      info.p0 = param_of(p, k);
      info.p1 = param_of(q, k);
      d.add_arc({id, k}, {t.vertex_id[q], k + 3}, info);
    }
  }

  // Boundary walk, clockwise: corner s to corner s+1 along step direction
  // s+2. At each point the tails are scanned clockwise starting just past the
  // slot facing the previous point.
  std::vector<SlotRef> walk;
  for (int s = 0; s < 6; s++) {
    Cube step = directions()[(s + 2) % 6];
    Cube p = corner(s, m);
    for (int tstep = 0; tstep < m; tstep++) {
      int back = (tstep == 0) ? (s + 4) % 6 : (s + 5) % 6;
      int id = t.vertex_id[p];
      for (int j = 1; j < 6; j++) {
        int k = (back + j) % 6;
        if (!in_hex(add(p, directions()[k]), m)) walk.push_back({id, k});
      }
      p = add(p, step);
    }
  }
  // The walk starts at corner 0 whose tails are the last two labels plus 1A;
  // rotate so 1A leads.
  std::rotate(walk.begin(), walk.begin() + 2, walk.end());

  int run = 2 * m + 1;
  for (int i = 0; i < static_cast<int>(walk.size()); i++) {
    TailLabel lab;
    lab.letter = static_cast<char>('A' + i / (2 * run));
    int r = i % (2 * run);
    lab.primed = r >= run;
    lab.num = lab.primed ? 2 * run - r : r + 1;
    t.tails.emplace_back(walk[i], lab);
  }

  std::map<std::string, SlotRef> by_label;
  for (auto& [slot, lab] : t.tails) by_label[lab.str()] = slot;
  for (char letter : {'A', 'B', 'C'}) {
    for (int i = 1; i <= run; i++) {
      TailLabel a{i, letter, false}, b{i, letter, true};
      ArcInfo info;
      info.kind = arc_boundary;
      d.add_arc(by_label.at(a.str()), by_label.at(b.str()), info);
    }
  }

  t.basepoint = t.tails.front().first;
  return t;
}

// Tail pairs joined by one straight line of the grid, in closed form.
inline std::vector<std::pair<std::string, std::string>> hex_interior_relations(int m) {
  auto lab = [](int num, char letter, bool primed) {
    return TailLabel{num, letter, primed}.str();
  };
  std::vector<std::pair<std::string, std::string>> rel;
  const char* letters = "ABC";
  for (int f = 0; f < 3; f++) {
    char x = letters[f];
    char y = letters[(f + 2) % 3];  // A pairs with C, B with A, C with B
    rel.emplace_back(lab(1, x, true), lab(2 * m + 1, y, false));
    for (int i = 0; i < m; i++)
      rel.emplace_back(lab(2 * i + 1, x, false), lab(2 * (m - i), y, false));
    for (int i = 1; i <= m; i++)
      rel.emplace_back(lab(2 * i + 1, x, true), lab(2 * (m - i) + 2, y, true));
  }
  return rel;
}

// --- rectangular weave -----------------------------------------------------

// Slot order of the quadruple crossings, clockwise from the up-left strand.
enum rect_slot {
  rect_UL = 0,
  rect_UR = 1,
  rect_RU = 2,
  rect_RD = 3,
  rect_DR = 4,
  rect_DL = 5,
  rect_LD = 6,
  rect_LU = 7,
};

struct RectTemplate {
  Diagram diagram;
  int n = 0;
  std::vector<std::vector<int>> grid;  // [row][col] -> crossing id, row 0 top
  std::vector<std::pair<SlotRef, TailLabel>> tails;
  SlotRef basepoint;  // tail 1B

  SlotRef tail(const std::string& label) const {
    for (auto& [slot, lab] : tails)
      if (lab.str() == label) return slot;
    throw std::out_of_range("no tail labeled " + label);
  }
};

inline RectTemplate build_rect_template(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("rect template needs even n >= 2");
  RectTemplate t;
  t.n = n;
  Diagram& d = t.diagram;
  int rows = n + 1, cols = n + 2;

  t.grid.assign(rows, std::vector<int>(cols, -1));
  for (int r = 0; r < rows; r++) {
    for (int c = 0; c < cols; c++) {
      int id = d.add_crossing(4);
      t.grid[r][c] = id;
      d.cinfo(id).x = c;
      d.cinfo(id).y = -r;
      d.cinfo(id).kind = 0;
    }
  }

  auto corridor = [](int kind, int line, int param) {
    ArcInfo info;
    info.kind = kind;
    info.family = 0;
    info.line = line;
    info.p0 = param;
    info.p1 = param + 1;
    return info;
  };
  for (int r = 0; r < rows; r++) {
    for (int c = 0; c < cols; c++) {
      int id = t.grid[r][c];
      if (r + 1 < rows) {
        ArcInfo up = corridor(arc_line, 0, 0);
        up.family = 1;
        up.line = 2 * c;
        up.p0 = r;
        up.p1 = r + 1;
        ArcInfo lo = up;
        lo.line = 2 * c + 1;
        d.add_arc({id, rect_DR}, {t.grid[r + 1][c], rect_UR}, up);
        d.add_arc({id, rect_DL}, {t.grid[r + 1][c], rect_UL}, lo);
      }
      if (c + 1 < cols) {
        ArcInfo up = corridor(arc_line, 2 * r, c);
        ArcInfo lo = corridor(arc_line, 2 * r + 1, c);
        d.add_arc({id, rect_RU}, {t.grid[r][c + 1], rect_LU}, up);
        d.add_arc({id, rect_RD}, {t.grid[r][c + 1], rect_LD}, lo);
      }
    }
  }

  // Boundary tails counterclockwise from the top-right corner's UR slot.
  auto push = [&](int id, int slot, int num, char letter, bool primed) {
    t.tails.emplace_back(SlotRef{id, slot}, TailLabel{num, letter, primed});
  };
  int ur = t.grid[0][cols - 1], ul = t.grid[0][0];
  int ll = t.grid[rows - 1][0], lr = t.grid[rows - 1][cols - 1];
  push(ur, rect_UR, 1, 'A', false);
  push(ur, rect_UL, 2, 'A', false);
  for (int c = n; c >= 1; c--) {
    push(t.grid[0][c], rect_UR, 2 * (n - c) + 3, 'A', false);
    push(t.grid[0][c], rect_UL, 2 * (n - c) + 4, 'A', false);
  }
  push(ul, rect_UR, 2 * n + 3, 'A', false);
  push(ul, rect_UL, 2 * n + 3, 'A', true);
  for (int r = 0; r <= n; r++) {
    push(t.grid[r][0], rect_LU, 2 * (n - r) + 2, 'A', true);
    push(t.grid[r][0], rect_LD, 2 * (n - r) + 1, 'A', true);
  }
  push(ll, rect_DL, 1, 'B', false);
  push(ll, rect_DR, 2, 'B', false);
  for (int c = 1; c <= n; c++) {
    push(t.grid[rows - 1][c], rect_DL, 2 * c + 1, 'B', false);
    push(t.grid[rows - 1][c], rect_DR, 2 * c + 2, 'B', false);
  }
  push(lr, rect_DL, 2 * n + 3, 'B', false);
  push(lr, rect_DR, 2 * n + 3, 'B', true);
  for (int r = n; r >= 0; r--) {
    push(t.grid[r][cols - 1], rect_RD, 2 * r + 2, 'B', true);
    push(t.grid[r][cols - 1], rect_RU, 2 * r + 1, 'B', true);
  }

  std::map<std::string, SlotRef> by_label;
  for (auto& [slot, lab] : t.tails) by_label[lab.str()] = slot;
  for (char letter : {'A', 'B'}) {
    for (int i = 1; i <= 2 * n + 3; i++) {
      TailLabel a{i, letter, false}, b{i, letter, true};
      ArcInfo info;
      info.kind = arc_boundary;
      d.add_arc(by_label.at(a.str()), by_label.at(b.str()), info);
    }
  }

  t.basepoint = t.tail("1B");
  return t;
}

// Tail pairs joined by one doubled-grid strand. Columns flip the pair order
// (odd crossing count), rows preserve it.
inline std::vector<std::pair<std::string, std::string>> rect_interior_relations(int n) {
  auto lab = [](int num, char letter, bool primed) {
    return TailLabel{num, letter, primed}.str();
  };
  std::vector<std::pair<std::string, std::string>> rel;
  rel.emplace_back(lab(1, 'A', false), lab(2 * n + 3, 'B', false));
  rel.emplace_back(lab(2, 'A', false), lab(2 * n + 3, 'B', true));
  rel.emplace_back(lab(2 * n + 3, 'A', false), lab(1, 'B', false));
  rel.emplace_back(lab(2 * n + 3, 'A', true), lab(2, 'B', false));
  for (int c = 1; c <= n; c++) {
    rel.emplace_back(lab(2 * (n - c) + 4, 'A', false), lab(2 * c + 2, 'B', false));
    rel.emplace_back(lab(2 * (n - c) + 3, 'A', false), lab(2 * c + 1, 'B', false));
  }
  for (int r = 0; r <= n; r++) {
    rel.emplace_back(lab(2 * (n - r) + 2, 'A', true), lab(2 * r + 1, 'B', true));
    rel.emplace_back(lab(2 * (n - r) + 1, 'A', true), lab(2 * r + 2, 'B', true));
  }
  return rel;
}

// ---------------------------------------------------------------------------
// Woven templates: parallel strand copies and loop decorations
// ---------------------------------------------------------------------------

// Hex template thickened to k parallel copies of its strand and, for the
// loops families, decorated with curls at every crossing.
struct WovenTemplate {
  Diagram diagram;
  SlotRef basepoint;  // tail 1A of the underlying hex template
  int m = 0;
  int k = 0;
  int extra = 0;
};

namespace detail {

inline long face_oversize(const Diagram& d, long limit) {
  long s = 0;
  for (auto [size, count] : d.census())
    if (size > limit) s += (size - limit) * count;
  return s;
}

// Arcs of the face sweeping past an empty slot, collected by a boundary walk
// that treats unmatched slots as transparent.
inline std::vector<int> face_arcs_at_hole(const Diagram& d, SlotRef hole) {
  auto away = [&](int e, SlotRef q) { return (d.arc(e).a == q) ? 2 * e : 2 * e + 1; };
  int two_n = d.slot_count(hole.crossing);
  int t = hole.index;
  do { t = (t + 1) % two_n; } while (d.arc_id_at({hole.crossing, t}) < 0);
  int first = away(d.arc_id_at({hole.crossing, t}), {hole.crossing, t});
  std::vector<int> arcs;
  int cur = first;
  do {
    arcs.push_back(cur / 2);
    SlotRef h = d.dart_head(cur);
    int nn = d.slot_count(h.crossing);
    int s = h.index;
    do { s = (s + 1) % nn; } while (d.arc_id_at({h.crossing, s}) < 0);
    cur = away(d.arc_id_at({h.crossing, s}), {h.crossing, s});
  } while (cur != first);
  return arcs;
}

struct OpenWeave {
  Diagram d;
  SlotRef pending, prev;
  std::vector<SlotRef> route;
  SlotRef base;
};

// Lays one parallel copy of the route, entering each crossing on alternating
// sides of its guide pass; the copy's two loose ends stay unmatched.
inline OpenWeave lay_weave(const Diagram& input, const std::vector<SlotRef>& route0,
                           int rot, Side start, SlotRef base) {
  OpenWeave o{input, {-1, -1}, {-1, -1}, route0, base};
  Diagram& d = o.d;
  int len = static_cast<int>(route0.size());
  ArcInfo info;
  info.kind = arc_copy;
  auto reindex = [&](int c, int lo, int hi) {
    auto fx = [&](SlotRef& s) {
      if (s.crossing != c || s.index < 0) return;
      if (s.index >= lo) ++s.index;
      if (s.index >= hi) ++s.index;
    };
    for (auto& s : o.route) fx(s);
    fx(o.pending);
    fx(o.prev);
    fx(o.base);
  };
  Side delta = start;
  for (int i = 0; i < len; ++i) {
    SlotRef u = o.route[(rot + i) % len];
    int p = (delta == Side::cw_after) ? u.index + 1 : u.index;
    auto [in, out] = d.insert_pass(u.crossing, p);
    reindex(u.crossing, std::min(in.index, out.index), std::max(in.index, out.index));
    if (o.pending.index < 0) o.pending = in;
    else d.add_arc(o.prev, in, info);
    o.prev = out;
    delta = (delta == Side::cw_after) ? Side::ccw_before : Side::cw_after;
  }
  return o;
}

struct ClosedWeave {
  Diagram d;
  std::vector<SlotRef> route;
  SlotRef base;
  long over;
};

// Planar single-component closures of an open weave: cut one arc bordering a
// loose end's face and reconnect through the copy, both ways round. Sorted by
// how far the face census exceeds triangles.
inline std::vector<ClosedWeave> weave_closures(OpenWeave& o, std::size_t cap,
                                               long max_over) {
  std::vector<ClosedWeave> out;
  std::set<int> cand;
  for (int e : face_arcs_at_hole(o.d, o.pending)) cand.insert(e);
  for (int e : face_arcs_at_hole(o.d, o.prev)) cand.insert(e);
  ArcInfo info;
  info.kind = arc_copy;
  for (int e0 : cand) {
    SlotRef ga = o.d.arc(e0).a, gb = o.d.arc(e0).b;
    ArcInfo einfo = o.d.ainfo(e0);
    for (int mode = 0; mode < 2; ++mode) {
      o.d.remove_arc(o.d.arc_id_at(ga));
      int i1, i2;
      if (mode == 0) {
        i1 = o.d.add_arc(ga, o.pending, info);
        i2 = o.d.add_arc(o.prev, gb, info);
      } else {
        i1 = o.d.add_arc(ga, o.prev, info);
        i2 = o.d.add_arc(o.pending, gb, info);
      }
      bool ok = o.d.euler_check() && o.d.component_count() == 1;
      long over = ok ? face_oversize(o.d, 3) : 0;
      if (ok && over <= max_over) out.push_back({o.d, o.route, o.base, over});
      o.d.remove_arc(i2);
      o.d.remove_arc(i1);
      o.d.add_arc(ga, gb, einfo);
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ClosedWeave& a, const ClosedWeave& b) { return a.over < b.over; });
  if (out.size() > cap) out.resize(cap);
  return out;
}

// Adds `rounds` parallel copies, keeping every face a monogon, bigon or
// triangle. Copies commit in pairs sharing a rotation when both seams close
// cleanly; seams stagger around the circuit so no region saturates.
inline void weave_rounds(Diagram& d, std::vector<SlotRef>& route, SlotRef& base,
                         int rounds, const std::string& who) {
  int len = static_cast<int>(route.size());
  int done = 0, last_rot = 0;
  while (done < rounds) {
    bool want_pair = rounds - done >= 2;
    int committed = 0;
    // phase 0: pair with both halves clean; phase 1: pair whose first half
    // may overshoot before the second repairs it; phase 2: lone clean copy.
    for (int phase = want_pair ? 0 : 2; phase < 3 && !committed; ++phase) {
      int from = (last_rot + std::max(3, len / 4)) % len;
      for (int j = 0; j < len && !committed; ++j) {
        int rot = (from + j) % len;
        for (int s = 0; s < 2 && !committed; ++s) {
          Side side = s ? Side::ccw_before : Side::cw_after;
          OpenWeave o = lay_weave(d, route, rot, side, base);
          if (phase == 2) {
            auto close = weave_closures(o, 1, 0);
            if (close.empty()) continue;
            d = std::move(close[0].d);
            route = std::move(close[0].route);
            base = close[0].base;
            committed = 1;
            last_rot = rot;
            break;
          }
          auto mids = weave_closures(o, phase == 0 ? 4 : 8, phase == 0 ? 0 : 4);
          for (auto& mid : mids) {
            OpenWeave o2 = lay_weave(mid.d, mid.route, rot, side, mid.base);
            auto close = weave_closures(o2, 1, 0);
            if (close.empty()) continue;
            d = std::move(close[0].d);
            route = std::move(close[0].route);
            base = close[0].base;
            committed = 2;
            last_rot = rot;
            break;
          }
        }
      }
    }
    if (!committed)
      throw std::runtime_error(who + ": no clean closure for copy " +
                               std::to_string(done + 1));
    done += committed;
  }
}

// Face at the corner between slot s and slot s+1 of a crossing.
inline int corner_face(const Diagram& d, const FaceSet& fs, int c, int s) {
  int two_n = d.slot_count(c);
  int t = (s + 1) % two_n;
  int e = d.arc_id_at({c, t});
  int dart = (d.dart_head(2 * e) == SlotRef{c, t}) ? 2 * e + 1 : 2 * e;
  return fs.face_of_dart.at(dart);
}

// Reroutes the strand leaving slot x through two extra passes of the same
// crossing, forming a curl: multiplicity +2, one new monogon, and exactly two
// corner faces grow by one arc.
inline void add_curl(Diagram& d, int c, int x, Side side, SlotRef& base) {
  SlotRef xs{c, x};
  int aid = d.arc_id_at(xs);
  if (aid < 0) throw std::logic_error("add_curl: empty slot");
  SlotRef y = d.other_end(aid, xs);
  ArcInfo info = d.ainfo(aid);
  d.remove_arc(aid);
  auto fix = [&](SlotRef& s, int lo, int hi) {
    if (s.crossing != c) return;
    if (s.index >= lo) ++s.index;
    if (s.index >= hi) ++s.index;
  };
  int p1 = (side == Side::cw_after) ? x + 1 : x;
  auto [a1, a2] = d.insert_pass(c, p1);
  fix(xs, std::min(a1.index, a2.index), std::max(a1.index, a2.index));
  fix(y, std::min(a1.index, a2.index), std::max(a1.index, a2.index));
  fix(base, std::min(a1.index, a2.index), std::max(a1.index, a2.index));
  int p2 = (side == Side::cw_after) ? a2.index + 1 : a2.index;
  auto [b1, b2] = d.insert_pass(c, p2);
  fix(xs, std::min(b1.index, b2.index), std::max(b1.index, b2.index));
  fix(y, std::min(b1.index, b2.index), std::max(b1.index, b2.index));
  fix(a1, std::min(b1.index, b2.index), std::max(b1.index, b2.index));
  fix(base, std::min(b1.index, b2.index), std::max(b1.index, b2.index));
  d.add_arc(xs, a1, info);
  d.add_arc({c, (side == Side::cw_after) ? b1.index - 1 : b1.index + 1}, b1, info);
  d.add_arc(b2, y, info);
}

struct CurlSpot {
  int x;
  Side side;
  long over, grown;
};

// Anchor slots for a curl at crossing c with the resulting growth of the two
// affected corner faces. On plain multiplicity-3 crossings only every other
// anchor is considered; the two chiralities then claim the same face class.
inline std::vector<CurlSpot> curl_candidates(const Diagram& d, const FaceSet& fs,
                                             int c, const std::vector<Side>& sides) {
  int mult = d.multiplicity(c), two_n = 2 * mult;
  int step = (mult == 3) ? 2 : 1;
  int x0 = (mult == 3) ? 1 : 0;
  std::vector<CurlSpot> out;
  for (Side side : sides)
    for (int x = x0; x < two_n; x += step) {
      int c1, c2;
      if (side == Side::cw_after) {
        c1 = (x + two_n - 1) % two_n;
        c2 = (x + mult) % two_n;
      } else {
        c1 = x;
        c2 = (x + mult - 1) % two_n;
      }
      int f1 = corner_face(d, fs, c, c1), f2 = corner_face(d, fs, c, c2);
      long s1 = static_cast<long>(fs.faces[f1].darts.size());
      long s2 = static_cast<long>(fs.faces[f2].darts.size());
      long n1 = s1 + 1 + (f1 == f2 ? 1 : 0);
      long n2 = (f1 == f2) ? n1 : s2 + 1;
      long over = std::max(0L, n1 - 4) + (f1 == f2 ? 0L : std::max(0L, n2 - 4));
      out.push_back({x, side, over, std::max(n1, n2)});
    }
  return out;
}

// One curl on every crossing, most-constrained crossing first. Lattice rows
// alternate curl chirality; crossings without a lattice row (added by face
// repair) may take either.
inline void decorate_round(Diagram& d, const std::vector<hexgrid::Cube>& vertex_of,
                           SlotRef& base) {
  int n0 = d.crossing_count();
  std::vector<char> decorated(n0, 0);
  auto sides_of = [&](int c) -> std::vector<Side> {
    if (c < static_cast<int>(vertex_of.size())) {
      int row = ((vertex_of[c][1] % 2) + 2) % 2;
      return {row == 0 ? Side::cw_after : Side::ccw_before};
    }
    return {Side::cw_after, Side::ccw_before};
  };
  for (int left = n0; left > 0; --left) {
    FaceSet fs = d.faces();
    int bestc = -1;
    long best_safe = std::numeric_limits<long>::max();
    for (int c = 0; c < n0; ++c) {
      if (decorated[c]) continue;
      long safe = 0;
      for (auto& cd : curl_candidates(d, fs, c, sides_of(c)))
        if (cd.over == 0) ++safe;
      if (safe < best_safe) {
        best_safe = safe;
        bestc = c;
      }
    }
    CurlSpot pick{-1, Side::cw_after, std::numeric_limits<long>::max(),
                  std::numeric_limits<long>::max()};
    for (auto& cd : curl_candidates(d, fs, bestc, sides_of(bestc)))
      if (cd.over < pick.over || (cd.over == pick.over && cd.grown < pick.grown))
        pick = cd;
    add_curl(d, bestc, pick.x, pick.side, base);
    decorated[bestc] = 1;
  }
}

inline std::vector<SlotRef> strand_circuit(const Diagram& d) {
  auto comps = d.components();
  auto walk = d.strand_traversal(SlotRef{comps[0][0].first, comps[0][0].second});
  std::vector<SlotRef> route;
  for (std::size_t i = 0; i < walk.size(); i += 2) route.push_back(walk[i]);
  return route;
}

}  // namespace detail

// k parallel copies of the hex template strand, fused into one component:
// uniform multiplicity 3k, faces within {1,2,3}.
inline WovenTemplate build_hex3n_template(int m, int k) {
  if (m < 2) throw std::invalid_argument("hex3n template needs m >= 2");
  if (k < 2) throw std::invalid_argument("hex3n template needs k >= 2");
  HexTemplate hex = build_hex_template(m);
  WovenTemplate t;
  t.m = m;
  t.k = k;
  t.diagram = std::move(hex.diagram);
  t.basepoint = hex.basepoint;
  std::vector<SlotRef> route = detail::strand_circuit(t.diagram);
  detail::weave_rounds(t.diagram, route, t.basepoint, k - 1, "build_hex3n_template");
  trivialize(t.diagram, t.basepoint);
  return t;
}

// Loop-decorated template: k copies of the hex strand, then one curl on every
// crossing (multiplicity 3k+2), optionally a second round (3k+4). Oversized
// faces left by decoration are split by extra crossings of equal multiplicity.
inline WovenTemplate build_loops_template(int m, int k, int extra) {
  if (m < 1 || m % 2 == 0) throw std::invalid_argument("loops template needs odd m");
  if (k < 1) throw std::invalid_argument("loops template needs k >= 1");
  if (extra != 0 && extra != 1)
    throw std::invalid_argument("loops template extra must be 0 or 1");
  HexTemplate hex = build_hex_template(m);
  WovenTemplate t;
  t.m = m;
  t.k = k;
  t.extra = extra;
  t.diagram = std::move(hex.diagram);
  t.basepoint = hex.basepoint;
  if (k > 1) {
    std::vector<SlotRef> route = detail::strand_circuit(t.diagram);
    detail::weave_rounds(t.diagram, route, t.basepoint, k - 1, "build_loops_template");
  }
  for (int round = 0; round <= extra; ++round) {
    detail::decorate_round(t.diagram, hex.vertex_of, t.basepoint);
    t.diagram = fix_five_gons(t.diagram);
  }
  if (t.diagram.component_count() != 1)
    throw std::runtime_error("build_loops_template: decoration split the strand");
  trivialize(t.diagram, t.basepoint);
  return t;
}

}  // namespace mcknot
