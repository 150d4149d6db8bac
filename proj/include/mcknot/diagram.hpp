#pragma once

// Combinatorial maps for multi-crossing knot and link projections.
//
// A diagram is a collection of crossings and arcs on the sphere. A crossing
// of multiplicity n has 2n slots in clockwise cyclic order; a strand entering
// slot i leaves through slot i+n, so every strand bisects the crossing. Arcs
// form a perfect matching on slots. Faces are traced by the rotation system:
// arrive at a slot, turn to the next slot clockwise, traverse its arc.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace mcknot {

struct SlotRef {
  int crossing = -1;
  int index = -1;

  bool valid() const { return crossing >= 0 && index >= 0; }
  friend bool operator==(const SlotRef& a, const SlotRef& b) {
    return a.crossing == b.crossing && a.index == b.index;
  }
  friend bool operator!=(const SlotRef& a, const SlotRef& b) { return !(a == b); }
  friend bool operator<(const SlotRef& a, const SlotRef& b) {
    return a.crossing != b.crossing ? a.crossing < b.crossing : a.index < b.index;
  }
};

// Optional per-crossing annotations kept by builders and surgeries. `pos` is a
// layout hint only; no algorithm depends on it.
struct CrossingInfo {
  double x = 0.0, y = 0.0;
  int kind = 0;  // builder-defined
};

// Optional per-arc annotations. Builders tag arcs with the line they belong
// to so later passes (doubling, overlay) can find bundles; `lane` is a signed
// offset of a parallel copy from its line's original strand; `stratum` orders
// whole strands vertically (smaller = higher) once a pipeline assigns it.
struct ArcInfo {
  int kind = 0;       // builder-defined
  int family = -1;    // line family (templates: 0,1,2 for the three directions)
  int line = -1;      // line index within family
  double p0 = 0.0;    // parameter range along the line covered by this arc
  double p1 = 0.0;
  int lane = 0;
  int stratum = -1;
};

struct Arc {
  SlotRef a, b;
  bool alive = false;
};

using Census = std::map<int, long>;

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

struct Face {
  std::vector<int> darts;  // dart = 2*arc + end; head(2e+0)=arc.b, head(2e+1)=arc.a
  int size() const { return static_cast<int>(darts.size()); }
};

struct FaceSet {
  std::vector<Face> faces;
  std::map<int, int> face_of_dart;

  Census census() const {
    Census c;
    for (const Face& f : faces) c[f.size()]++;
    return c;
  }
};

class Diagram {
 public:
  // --- construction ---------------------------------------------------

  int add_crossing(int multiplicity) {
    slots_.emplace_back(2 * multiplicity, -1);
    tags_.emplace_back(2 * multiplicity, 0);
    cinfo_.emplace_back();
    heights_.emplace_back();
    return static_cast<int>(slots_.size()) - 1;
  }

  int add_arc(SlotRef x, SlotRef y, ArcInfo info = {}) {
    check_slot(x);
    check_slot(y);
    if (arc_id_at(x) != -1 || arc_id_at(y) != -1 || x == y)
      throw std::logic_error("add_arc: slot already matched");
    int id;
    if (!free_arcs_.empty()) {
      id = free_arcs_.back();
      free_arcs_.pop_back();
    } else {
      id = static_cast<int>(arcs_.size());
      arcs_.emplace_back();
      ainfo_.emplace_back();
    }
    arcs_[id] = Arc{x, y, true};
    ainfo_[id] = info;
    slot_at(x) = id;
    slot_at(y) = id;
    return id;
  }

  void remove_arc(int id) {
    Arc& e = arcs_.at(id);
    if (!e.alive) throw std::logic_error("remove_arc: dead arc");
    slot_at(e.a) = -1;
    slot_at(e.b) = -1;
    e.alive = false;
    free_arcs_.push_back(id);
  }

  // Inserts one new strand pass into a crossing: two slots, one placed before
  // old position p (0..2n) and its partner opposite. Returns the new slots,
  // first the one at p. Existing arcs, tags and info are re-indexed.
  std::pair<SlotRef, SlotRef> insert_pass(int c, int p) {
    int n = multiplicity(c);
    int two_n = 2 * n;
    if (p < 0 || p > two_n) throw std::logic_error("insert_pass: bad position");
    int q = p + n;
    bool swapped = false;
    if (q > two_n) {
      q = p - n;
      std::swap(p, q);
      swapped = true;
    }
    // p <= q; insert at q first so p is unaffected.
    insert_slot_raw(c, q);
    insert_slot_raw(c, p);
    heights_[c].clear();
    SlotRef lo{c, p}, hi{c, q + 1};
    return swapped ? std::make_pair(hi, lo) : std::make_pair(lo, hi);
  }

  // --- basic queries ---------------------------------------------------

  int crossing_count() const { return static_cast<int>(slots_.size()); }
  int multiplicity(int c) const { return static_cast<int>(slots_.at(c).size()) / 2; }
  int slot_count(int c) const { return static_cast<int>(slots_.at(c).size()); }

  long arc_count() const {
    long n = 0;
    for (const Arc& e : arcs_)
      if (e.alive) n++;
    return n;
  }

  std::vector<int> arc_ids() const {
    std::vector<int> ids;
    for (int i = 0; i < static_cast<int>(arcs_.size()); i++)
      if (arcs_[i].alive) ids.push_back(i);
    return ids;
  }

  const Arc& arc(int id) const { return arcs_.at(id); }
  bool arc_alive(int id) const { return id >= 0 && id < (int)arcs_.size() && arcs_[id].alive; }

  int arc_id_at(SlotRef s) const {
    check_slot(s);
    return slots_[s.crossing][s.index];
  }

  SlotRef other_end(int arc_id, SlotRef s) const {
    const Arc& e = arcs_.at(arc_id);
    return e.a == s ? e.b : e.a;
  }

  SlotRef cw_next(SlotRef s) const { return {s.crossing, (s.index + 1) % slot_count(s.crossing)}; }
  SlotRef cw_prev(SlotRef s) const {
    int m = slot_count(s.crossing);
    return {s.crossing, (s.index + m - 1) % m};
  }

  // The slot the strand entering at s leaves through.
  SlotRef pass_partner(SlotRef s) const {
    int n = multiplicity(s.crossing);
    return {s.crossing, (s.index + n) % (2 * n)};
  }

  // Canonical pass id for a slot: (crossing, index mod n).
  std::pair<int, int> pass_of(SlotRef s) const {
    return {s.crossing, s.index % multiplicity(s.crossing)};
  }

  int& tag(SlotRef s) {
    check_slot(s);
    return tags_[s.crossing][s.index];
  }
  int tag(SlotRef s) const {
    check_slot(s);
    return tags_[s.crossing][s.index];
  }

  // Heights order the n passes of a crossing vertically, rank 1 topmost.
  // Unset until a builder or trivialization assigns them; inserting a pass
  // discards the crossing's heights.
  bool has_heights(int c) const { return !heights_.at(c).empty(); }
  const std::vector<int>& heights(int c) const { return heights_.at(c); }
  void set_heights(int c, std::vector<int> ranks) {
    int n = multiplicity(c);
    if (static_cast<int>(ranks.size()) != n) throw std::logic_error("set_heights: rank count");
    std::vector<int> sorted = ranks;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n; i++)
      if (sorted[i] != i + 1) throw std::logic_error("set_heights: ranks must be 1..n");
    heights_.at(c) = std::move(ranks);
  }
  void clear_heights(int c) { heights_.at(c).clear(); }

  CrossingInfo& cinfo(int c) { return cinfo_.at(c); }
  const CrossingInfo& cinfo(int c) const { return cinfo_.at(c); }
  ArcInfo& ainfo(int id) { return ainfo_.at(id); }
  const ArcInfo& ainfo(int id) const { return ainfo_.at(id); }

  std::optional<int> uniform_multiplicity() const {
    if (slots_.empty()) return std::nullopt;
    int n = multiplicity(0);
    for (int c = 1; c < crossing_count(); c++)
      if (multiplicity(c) != n) return std::nullopt;
    return n;
  }

  // --- darts and faces --------------------------------------------------

  SlotRef dart_head(int dart) const {
    const Arc& e = arcs_.at(dart / 2);
    return (dart % 2) == 0 ? e.b : e.a;
  }

  int dart_from(SlotRef s) const {
    int id = arc_id_at(s);
    if (id < 0) throw std::logic_error("dart_from: unmatched slot");
    return arcs_[id].a == s ? 2 * id : 2 * id + 1;
  }

  int next_dart(int dart) const {
    SlotRef u = cw_next(dart_head(dart));
    return dart_from(u);
  }

  FaceSet faces() const {
    FaceSet fs;
    std::set<int> seen;
    for (int id : arc_ids()) {
      for (int e = 0; e < 2; e++) {
        int start = 2 * id + e;
        if (seen.count(start)) continue;
        Face f;
        int d = start;
        do {
          f.darts.push_back(d);
          seen.insert(d);
          d = next_dart(d);
        } while (d != start);
        int fid = static_cast<int>(fs.faces.size());
        for (int dd : f.darts) fs.face_of_dart[dd] = fid;
        fs.faces.push_back(std::move(f));
      }
    }
    return fs;
  }

  Census census() const { return faces().census(); }
  long face_count() const { return static_cast<long>(faces().faces.size()); }

  // Crossings connected through arcs; a split diagram has several.
  int map_component_count() const {
    std::vector<int> parent(crossing_count());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const Arc& e : arcs_)
      if (e.alive) parent[find(e.a.crossing)] = find(e.b.crossing);
    std::set<int> roots;
    for (int c = 0; c < crossing_count(); c++) roots.insert(find(c));
    return static_cast<int>(roots.size());
  }

  // Each connected map component contributes 2 to V - E + F exactly when its
  // rotation system embeds in the sphere.
  bool euler_check() const {
    for (int c = 0; c < crossing_count(); c++)
      for (int i = 0; i < slot_count(c); i++)
        if (slots_[c][i] < 0) return false;
    if (crossing_count() == 0) return false;
    long v = crossing_count();
    long e = arc_count();
    return v - e + face_count() == 2L * map_component_count();
  }

  // --- strands and components -------------------------------------------

  // Closed slot sequence of the strand through `start`, alternating entry and
  // exit slots: enter start, leave through the opposite slot, follow its arc.
  std::vector<SlotRef> strand_traversal(SlotRef start) const {
    std::vector<SlotRef> seq;
    SlotRef s = start;
    do {
      seq.push_back(s);
      SlotRef out = pass_partner(s);
      seq.push_back(out);
      int id = arc_id_at(out);
      if (id < 0) throw std::logic_error("strand_traversal: dangling slot");
      s = other_end(id, out);
    } while (s != start);
    return seq;
  }

  int component_count() const { return static_cast<int>(components().size()); }

  // Each component as a sorted list of pass ids (crossing, pass).
  std::vector<std::vector<std::pair<int, int>>> components() const {
    std::map<std::pair<int, int>, int> comp;
    int next = 0;
    for (int c = 0; c < crossing_count(); c++) {
      for (int i = 0; i < multiplicity(c); i++) {
        if (comp.count({c, i})) continue;
        int id = next++;
        SlotRef s{c, i};
        do {
          comp[pass_of(s)] = id;
          SlotRef out = pass_partner(s);
          int a = arc_id_at(out);
          if (a < 0) throw std::logic_error("components: dangling slot");
          s = other_end(a, out);
        } while (comp.find(pass_of(s)) == comp.end());
      }
    }
    std::vector<std::vector<std::pair<int, int>>> out(next);
    for (auto& [pass, id] : comp) out[id].push_back(pass);
    return out;
  }

  int component_of(SlotRef s) const {
    auto comps = components();
    auto p = pass_of(s);
    for (int i = 0; i < static_cast<int>(comps.size()); i++)
      if (std::binary_search(comps[i].begin(), comps[i].end(), p)) return i;
    return -1;
  }

  // --- validation ---------------------------------------------------------

  ValidationReport validate() const {
    ValidationReport r;
    if (crossing_count() == 0) {
      r.violations.push_back("diagram has no crossings");
      return r;
    }
    for (int c = 0; c < crossing_count(); c++) {
      if (multiplicity(c) < 2)
        r.violations.push_back("crossing " + std::to_string(c) + " has multiplicity < 2");
      for (int i = 0; i < slot_count(c); i++)
        if (slots_[c][i] < 0)
          r.violations.push_back("unmatched slot (" + std::to_string(c) + "," +
                                 std::to_string(i) + ")");
    }
    for (int id = 0; id < static_cast<int>(arcs_.size()); id++) {
      if (!arcs_[id].alive) continue;
      const Arc& e = arcs_[id];
      for (SlotRef s : {e.a, e.b}) {
        if (s.crossing < 0 || s.crossing >= crossing_count() || s.index < 0 ||
            s.index >= slot_count(s.crossing)) {
          r.violations.push_back("arc " + std::to_string(id) + " endpoint out of bounds");
        } else if (slots_[s.crossing][s.index] != id) {
          r.violations.push_back("arc " + std::to_string(id) + " not registered at its slot");
        }
      }
      if (e.a == e.b) r.violations.push_back("arc " + std::to_string(id) + " joins a slot to itself");
    }
    if (!r.violations.empty()) return r;
    if (!euler_check()) r.violations.push_back("rotation system is not spherical (Euler check failed)");
    return r;
  }

 private:
  void check_slot(SlotRef s) const {
    if (s.crossing < 0 || s.crossing >= crossing_count() || s.index < 0 ||
        s.index >= slot_count(s.crossing))
      throw std::logic_error("slot out of bounds");
  }

  int& slot_at(SlotRef s) { return slots_[s.crossing][s.index]; }

  void insert_slot_raw(int c, int p) {
    auto& sl = slots_[c];
    sl.insert(sl.begin() + p, -1);
    auto& tg = tags_[c];
    tg.insert(tg.begin() + p, 0);
    for (Arc& e : arcs_) {
      if (!e.alive) continue;
      if (e.a.crossing == c && e.a.index >= p) e.a.index++;
      if (e.b.crossing == c && e.b.index >= p) e.b.index++;
    }
  }

  std::vector<std::vector<int>> slots_;  // per crossing: arc id per slot
  std::vector<std::vector<int>> tags_;
  std::vector<std::vector<int>> heights_;
  std::vector<CrossingInfo> cinfo_;
  std::vector<Arc> arcs_;
  std::vector<ArcInfo> ainfo_;
  std::vector<int> free_arcs_;
};

// True iff every face size of `census` appears in `seq`.
inline bool realizes(const Census& census, const std::vector<int>& seq) {
  for (auto& [size, count] : census) {
    if (count == 0) continue;
    if (std::find(seq.begin(), seq.end(), size) == seq.end()) return false;
  }
  return true;
}

// Disjoint union; crossings of `b` are appended after those of `a`.
inline Diagram disjoint_union(const Diagram& a, const Diagram& b) {
  Diagram d = a;
  int off = a.crossing_count();
  std::map<int, int> arc_map;
  for (int c = 0; c < b.crossing_count(); c++) {
    int nc = d.add_crossing(b.multiplicity(c));
    d.cinfo(nc) = b.cinfo(c);
  }
  for (int id : b.arc_ids()) {
    const Arc& e = b.arc(id);
    d.add_arc({e.a.crossing + off, e.a.index}, {e.b.crossing + off, e.b.index}, b.ainfo(id));
  }
  for (int c = 0; c < b.crossing_count(); c++) {
    for (int i = 0; i < b.slot_count(c); i++) d.tag({c + off, i}) = b.tag({c, i});
    if (b.has_heights(c)) d.set_heights(c + off, b.heights(c));
  }
  return d;
}

}  // namespace mcknot
