#pragma once

// Diagram surgeries: height assignment, strand doubling, face-splitting
// repairs, and component composition.

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mcknot/diagram.hpp"

namespace mcknot {

struct surgery_error : std::runtime_error {
  explicit surgery_error(const std::string& what) : std::runtime_error(what) {}
};

// Arc kind for strands laid down by doubling.
inline constexpr int arc_copy = 2;

// ---------------------------------------------------------------------------
// Heights
// ---------------------------------------------------------------------------

// Ranks every pass of every crossing by ascending key; rank 1 is topmost.
inline void assign_heights(Diagram& d,
                           const std::map<std::pair<int, int>, std::pair<int, long>>& key) {
  for (int c = 0; c < d.crossing_count(); ++c) {
    int n = d.multiplicity(c);
    std::vector<std::pair<std::pair<int, long>, int>> order;
    order.reserve(n);
    for (int p = 0; p < n; ++p) {
      auto it = key.find({c, p});
      if (it == key.end()) throw std::logic_error("assign_heights: unkeyed pass");
      order.push_back({it->second, p});
    }
    std::sort(order.begin(), order.end());
    std::vector<int> ranks(n);
    for (int r = 0; r < n; ++r) ranks[order[r].second] = r + 1;
    d.set_heights(c, ranks);
  }
}

// Heights that descend in first-visit order along the strand through `start`,
// so the strand can be lifted off the plane without self-trapping.
inline void trivialize(Diagram& d, SlotRef start) {
  auto walk = d.strand_traversal(start);
  std::map<std::pair<int, int>, std::pair<int, long>> key;
  long step = 0;
  for (size_t i = 0; i < walk.size(); i += 2) {
    auto pw = d.pass_of(walk[i]);
    key.emplace(std::pair<int, int>{pw.first, pw.second}, std::pair<int, long>{0, step});
    ++step;
  }
  assign_heights(d, key);
}

// A strand can close up beside its guide only if it switches sides an even
// number of times; with one switch per pass, that is an even pass count.
inline bool doubling_parity_check(const Diagram& d, SlotRef component_slot) {
  auto walk = d.strand_traversal(component_slot);
  return (walk.size() / 2) % 2 == 0;
}

inline bool doubling_parity_check(const Diagram& d, int component) {
  auto comps = d.components();
  if (component < 0 || component >= static_cast<int>(comps.size()))
    throw std::invalid_argument("doubling_parity_check: no such component");
  auto [c, p] = comps[component][0];
  return doubling_parity_check(d, SlotRef{c, p});
}

// ---------------------------------------------------------------------------
// Doubling
// ---------------------------------------------------------------------------

enum class Side { cw_after, ccw_before };

struct DoublePattern {
  Side side = Side::cw_after;  // which side of the guide the copy starts on
  int stratum = -1;            // stratum tag for arcs laid by the copy
};

struct DoubleResult {
  Diagram diagram;
  std::vector<SlotRef> copy_passes;   // copy's passes in strand order
  std::vector<SlotRef> guide_passes;  // input route, reindexed past the inserts
  SlotRef copy_start{-1, -1};
  bool fused = false;  // copy was spliced into the routed strand
};

// Lays a parallel copy of a strand along `route` (consecutive passes of one
// strand, in walk order). The copy runs straight through every routed
// crossing beside its guide, raising the multiplicity by one per pass. It
// closes onto itself when the closing arc keeps the map planar; otherwise
// (odd pass count) it is spliced into the routed strand at route[0].
inline DoubleResult double_route(const Diagram& input, std::vector<SlotRef> route,
                                 const DoublePattern& pattern = {}) {
  if (route.empty()) throw std::invalid_argument("double_route: empty route");
  DoubleResult res;
  res.diagram = input;
  Diagram& d = res.diagram;

  for (size_t i = 0; i + 1 < route.size(); ++i) {
    SlotRef out = d.pass_partner(route[i]);
    int aid = d.arc_id_at(out);
    if (aid < 0 || !(d.other_end(aid, out) == route[i + 1]))
      throw std::invalid_argument("double_route: route is not a strand walk");
  }

  ArcInfo copy_info;
  copy_info.kind = arc_copy;
  copy_info.stratum = pattern.stratum;

  SlotRef pending_entry{-1, -1};
  SlotRef prev_exit{-1, -1};

  // Stored refs hold pre-insert indices; shift them past the two new slots.
  auto reindex = [&](int crossing, int lo, int hi) {
    auto fix = [&](SlotRef& s) {
      if (s.crossing != crossing || s.index < 0) return;
      if (s.index >= lo) ++s.index;
      if (s.index >= hi) ++s.index;
    };
    for (auto& s : route) fix(s);
    fix(pending_entry);
    fix(prev_exit);
  };

  auto attach = [&](SlotRef entry, SlotRef exit) {
    if (pending_entry.index < 0)
      pending_entry = entry;
    else
      d.add_arc(prev_exit, entry, copy_info);
    prev_exit = exit;
  };

  // The copy alternates sides: a chord beside the guide is clockwise of it
  // at one end and counterclockwise at the other.
  Side delta = pattern.side;
  for (size_t i = 0; i < route.size(); ++i) {
    SlotRef u = route[i];
    int p = (delta == Side::cw_after) ? u.index + 1 : u.index;
    auto [s_in, s_out] = d.insert_pass(u.crossing, p);
    reindex(u.crossing, std::min(s_in.index, s_out.index),
            std::max(s_in.index, s_out.index));
    attach(s_in, s_out);
    delta = (delta == Side::cw_after) ? Side::ccw_before : Side::cw_after;
  }

  // One side switch per pass, so an odd route ends on the wrong side and
  // cannot close beside its guide; splice it into the strand at route[0]
  // instead. Either the copy or its reversal lies flat in the junction.
  if (route.size() % 2 == 0) {
    d.add_arc(prev_exit, pending_entry, copy_info);
  } else {
    SlotRef u0 = route[0];
    int aid = d.arc_id_at(u0);
    SlotRef z = d.other_end(aid, u0);
    d.remove_arc(aid);
    int j1 = d.add_arc(z, pending_entry, copy_info);
    int j2 = d.add_arc(prev_exit, u0, copy_info);
    if (!d.euler_check()) {
      d.remove_arc(j1);
      d.remove_arc(j2);
      d.add_arc(z, prev_exit, copy_info);
      d.add_arc(pending_entry, u0, copy_info);
    }
    res.fused = true;
  }
  if (!d.euler_check()) throw surgery_error("double_route: closure is not planar");

  // Read the copy's passes back off the finished diagram: later inserts at a
  // crossing shift slots recorded earlier, so a walk is the reliable source.
  // The copy makes exactly one pass per routed pass.
  res.copy_start = pending_entry;
  auto walk = d.strand_traversal(res.copy_start);
  for (size_t i = 0; i < 2 * route.size() && i < walk.size(); i += 2)
    res.copy_passes.push_back(walk[i]);
  res.guide_passes = std::move(route);
  return res;
}

// Doubles a whole component, routed from its canonical start.
inline DoubleResult double_component(const Diagram& input, int component,
                                     const DoublePattern& pattern = {}) {
  auto comps = input.components();
  if (component < 0 || component >= static_cast<int>(comps.size()))
    throw std::invalid_argument("double_component: no such component");
  auto [c, p] = comps[component][0];
  auto walk = input.strand_traversal(SlotRef{c, p});
  std::vector<SlotRef> route;
  route.reserve(walk.size() / 2);
  for (size_t i = 0; i < walk.size(); i += 2) route.push_back(walk[i]);
  return double_route(input, std::move(route), pattern);
}

// ---------------------------------------------------------------------------
// Face-splitting gadgets
// ---------------------------------------------------------------------------

struct SurgerySite {
  enum class Kind { arc_pair, face, crossing };
  Kind kind = Kind::arc_pair;
  std::vector<int> ids;
};

struct CompositionMove {
  int component_a = -1;
  int component_b = -1;
  SurgerySite site;
};

// How one n-crossing replaces two arcs of a common face: the first arc's
// strand makes the `e1` passes in order, the second arc's strand the `e2`
// passes; consecutive passes of a chain are joined by fold arcs.
struct GadgetLayout {
  int n = 0;
  std::vector<std::pair<int, int>> e1;  // (entry slot, exit slot) per pass
  std::vector<std::pair<int, int>> e2;
};

inline GadgetLayout gadget_layout(int n) {
  if (n < 3) throw std::invalid_argument("gadget_layout: need n >= 3");
  GadgetLayout lay;
  lay.n = n;
  if (n == 3) {
    lay.e1 = {{3, 0}, {5, 2}};
    lay.e2 = {{1, 4}};
  } else if (n == 4) {
    lay.e1 = {{0, 4}, {3, 7}};
    lay.e2 = {{6, 2}, {5, 1}};
  } else if (n % 2 == 1) {
    lay.e1.push_back({0, n});
    for (int t = 2; t <= n - 1; ++t) {
      if (t % 2 == 0) {
        int in = 2 * n - 2 - t;
        lay.e1.push_back({in, (in + n) % (2 * n)});
      } else {
        lay.e1.push_back({t - 1, n + t - 1});
      }
    }
    lay.e2 = {{2 * n - 2, n - 2}};
  } else {
    lay.e1 = {{0, n}, {n - 1, 2 * n - 1}};
    int c = n / 2 - 1;
    std::map<int, int> partner;
    partner[c] = c + 1;
    partner[c + 1] = c;
    std::vector<int> lows;
    for (int x = 1; x <= n - 2; ++x)
      if (x != c && x != c + 1) lows.push_back(x);
    for (int k = 1; k <= n - 4; ++k) {
      partner[lows[k - 1]] = 2 * n - 3 - k;
      partner[2 * n - 3 - k] = lows[k - 1];
    }
    int in = 2 * n - 2;
    while (true) {
      int out = (in + n) % (2 * n);
      lay.e2.push_back({in, out});
      if (out == 2 * n - 3) break;
      auto it = partner.find(out);
      if (it == partner.end() || static_cast<int>(lay.e2.size()) > n)
        throw std::logic_error("gadget_layout: fold trace failed");
      in = it->second;
    }
  }
  std::set<int> seen;
  for (const auto* chain : {&lay.e1, &lay.e2})
    for (auto [a, b] : *chain) {
      if ((a + n) % (2 * n) != b) throw std::logic_error("gadget_layout: pass not antipodal");
      seen.insert(a);
      seen.insert(b);
    }
  if (static_cast<int>(seen.size()) != 2 * n)
    throw std::logic_error("gadget_layout: slots not partitioned");
  return lay;
}

namespace detail {

// Replaces the arcs under face darts d1, d2 by one n-crossing wired per the
// layout. Orientations come from the face walk: each dart runs tail -> head.
inline Diagram splice_gadget(const Diagram& input, int d1, int d2, int n) {
  GadgetLayout lay = gadget_layout(n);
  int arc1 = d1 / 2, arc2 = d2 / 2;
  Diagram out = input;
  SlotRef q = out.dart_head(d1), p = out.dart_head(d1 ^ 1);
  SlotRef s = out.dart_head(d2), r = out.dart_head(d2 ^ 1);
  ArcInfo i1 = out.ainfo(arc1), i2 = out.ainfo(arc2);
  out.remove_arc(arc1);
  out.remove_arc(arc2);
  int z = out.add_crossing(n);
  auto wire = [&](const std::vector<std::pair<int, int>>& chain, SlotRef from, SlotRef to,
                  const ArcInfo& info) {
    out.add_arc(from, {z, chain.front().first}, info);
    for (size_t t = 0; t + 1 < chain.size(); ++t)
      out.add_arc({z, chain[t].second}, {z, chain[t + 1].first}, info);
    out.add_arc({z, chain.back().second}, to, info);
  };
  wire(lay.e1, p, q, i1);
  wire(lay.e2, r, s, i2);
  return out;
}

inline long big_face_count(const Diagram& d) {
  long count = 0;
  for (auto [size, c] : d.census())
    if (size >= 5) count += c;
  return count;
}

// Splits the lowest-id face of size >= 5 with one n-crossing. Candidate dart
// pairs are scored by the net change in oversize, counting both the residual
// faces and the growth of the faces behind the two rerouted arcs; ties break
// toward balanced residuals. The first strict minimum wins.
inline Diagram split_big_face(const Diagram& input, int n) {
  FaceSet fs = input.faces();
  int target = -1;
  for (size_t f = 0; f < fs.faces.size(); ++f)
    if (fs.faces[f].darts.size() >= 5) {
      target = static_cast<int>(f);
      break;
    }
  if (target < 0) throw surgery_error("split_big_face: no face of size >= 5");
  const auto& darts = fs.faces[target].darts;
  int k = static_cast<int>(darts.size());
  int bias = (n >= 5) ? 1 : 0;  // second residual face carries one extra arc
  int grow2 = (n >= 6 && n % 2 == 0) ? 1 : 2;  // arcs added behind the second dart
  auto over = [](long s) { return s > 4 ? s - 4 : 0; };
  long best_score = std::numeric_limits<long>::max();
  int best_d1 = -1, best_d2 = -1;
  // Pass 0 skips darts whose arc borders the target face on both sides; the
  // growth accounting is meaningless for those. Pass 1 admits them if nothing
  // else is available.
  for (int pass = 0; pass < 2 && best_d1 < 0; ++pass) {
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        int d1 = darts[i], d2 = darts[j];
        if (d1 / 2 == d2 / 2) continue;
        int fa = fs.face_of_dart.at(d1 ^ 1), fb = fs.face_of_dart.at(d2 ^ 1);
        bool isthmus = fa == target || fb == target;
        if (pass == 0 && isthmus) continue;
        int g = (j - i - 1 + k) % k;
        long k1 = g + 2, k2 = (k - 2 - g) + 2 + bias;
        long phi = over(k1) + over(k2) - over(k);
        if (!isthmus) {
          long a = static_cast<long>(fs.faces[fa].darts.size());
          long b = static_cast<long>(fs.faces[fb].darts.size());
          if (fa == fb)
            phi += over(a + 1 + grow2) - over(a);
          else
            phi += over(a + 1) - over(a) + over(b + grow2) - over(b);
        }
        long score = phi * 1000000 + std::max(k1, k2);
        if (score < best_score) {
          best_score = score;
          best_d1 = d1;
          best_d2 = d2;
        }
      }
  }
  if (best_d1 < 0) throw surgery_error("split_big_face: face has a single arc");
  Diagram out = splice_gadget(input, best_d1, best_d2, n);
  if (!out.euler_check()) throw surgery_error("split_big_face: broke planarity");
  return out;
}

}  // namespace detail

// Reroutes two strand segments bounding a common face through one trivial
// n-crossing. The two residual large faces have sizes summing to (face size)
// + 3, and every other new face is a monogon, bigon, or triangle.
inline Diagram loop_trick(const Diagram& input, const SurgerySite& site, int n) {
  if (site.kind != SurgerySite::Kind::arc_pair || site.ids.size() != 2)
    throw std::invalid_argument("loop_trick: site must name an arc pair");
  if (n < 5)
    throw std::invalid_argument("loop_trick: no single n-crossing gains a face for n < 5");
  int a1 = site.ids[0], a2 = site.ids[1];
  if (a1 == a2) throw std::invalid_argument("loop_trick: arcs must be distinct");
  if (!input.arc_alive(a1) || !input.arc_alive(a2))
    throw std::invalid_argument("loop_trick: no such arc");
  FaceSet fs = input.faces();
  for (const auto& face : fs.faces) {
    int d1 = -1, d2 = -1;
    for (int dart : face.darts) {
      if (dart / 2 == a1 && d1 < 0) d1 = dart;
      if (dart / 2 == a2 && d2 < 0) d2 = dart;
    }
    if (d1 >= 0 && d2 >= 0) {
      Diagram out = detail::splice_gadget(input, d1, d2, n);
      if (!out.euler_check()) throw surgery_error("loop_trick: broke planarity");
      return out;
    }
  }
  throw surgery_error("loop_trick: arcs do not bound a common face");
}

// Fully repairs the lowest-id face of size >= 5, cascading on any large
// pieces the repair itself creates, so the count of faces >= 5 drops by one.
inline Diagram fix_one_five_gon(const Diagram& input) {
  long start = detail::big_face_count(input);
  if (start == 0) return input;
  auto n = input.uniform_multiplicity();
  if (!n) throw surgery_error("fix_one_five_gon: needs uniform multiplicity");
  long cap = 10 * input.face_count();
  Diagram d = input;
  long steps = 0;
  while (detail::big_face_count(d) >= start) {
    if (++steps > cap) throw surgery_error("fix_one_five_gon: iteration cap exceeded");
    d = detail::split_big_face(d, *n);
  }
  return d;
}

// Repairs faces of size >= 5 until the census is within {1,2,3,4}.
inline Diagram fix_five_gons(const Diagram& input) {
  auto n = input.uniform_multiplicity();
  if (!n) throw surgery_error("fix_five_gons: needs uniform multiplicity");
  long cap = 10 * input.face_count();
  Diagram d = input;
  long steps = 0;
  while (detail::big_face_count(d) > 0) {
    if (++steps > cap) throw surgery_error("fix_five_gons: iteration cap exceeded");
    d = detail::split_big_face(d, *n);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Composition
// ---------------------------------------------------------------------------

// Lowest-id face bordered by both components, with one arc of each.
inline CompositionMove find_composition_site(const Diagram& d, int comp_a, int comp_b) {
  auto comps = d.components();
  int nc = static_cast<int>(comps.size());
  if (comp_a < 0 || comp_a >= nc || comp_b < 0 || comp_b >= nc || comp_a == comp_b)
    throw std::invalid_argument("find_composition_site: bad component pair");
  std::map<std::pair<int, int>, int> owner;
  for (int i = 0; i < nc; ++i)
    for (auto pass : comps[i]) owner[pass] = i;
  auto arc_owner = [&](int aid) {
    auto pw = d.pass_of(d.arc(aid).a);
    return owner.at({pw.first, pw.second});
  };
  FaceSet fs = d.faces();
  for (size_t f = 0; f < fs.faces.size(); ++f) {
    int arc_of_a = -1, arc_of_b = -1;
    for (int dart : fs.faces[f].darts) {
      int who = arc_owner(dart / 2);
      if (who == comp_a && arc_of_a < 0) arc_of_a = dart / 2;
      if (who == comp_b && arc_of_b < 0) arc_of_b = dart / 2;
    }
    if (arc_of_a >= 0 && arc_of_b >= 0) {
      CompositionMove move;
      move.component_a = comp_a;
      move.component_b = comp_b;
      move.site.kind = SurgerySite::Kind::face;
      move.site.ids = {static_cast<int>(f), arc_of_a, arc_of_b};
      return move;
    }
  }
  throw surgery_error("find_composition_site: components share no face");
}

// Joins two components across a face both border: the two arcs are cut and
// cross-spliced inside the face. Large faces created by the join are repaired
// when the diagram has a uniform multiplicity.
inline Diagram compose(const Diagram& input, const CompositionMove& move) {
  if (move.site.kind != SurgerySite::Kind::face || move.site.ids.size() != 3)
    throw std::invalid_argument("compose: site must name a face and two arcs");
  int face = move.site.ids[0], arc_a = move.site.ids[1], arc_b = move.site.ids[2];
  if (!input.arc_alive(arc_a) || !input.arc_alive(arc_b) || arc_a == arc_b)
    throw std::invalid_argument("compose: bad arc pair");
  FaceSet fs = input.faces();
  if (face < 0 || face >= static_cast<int>(fs.faces.size()))
    throw std::invalid_argument("compose: no such face");
  int da = -1, db = -1;
  for (int dart : fs.faces[face].darts) {
    if (dart / 2 == arc_a && da < 0) da = dart;
    if (dart / 2 == arc_b && db < 0) db = dart;
  }
  if (da < 0 || db < 0) throw surgery_error("compose: arcs do not bound the site face");

  auto comps = input.components();
  std::map<std::pair<int, int>, int> owner;
  for (int i = 0; i < static_cast<int>(comps.size()); ++i)
    for (auto pass : comps[i]) owner[pass] = i;
  auto arc_owner = [&](int aid) {
    auto pw = input.pass_of(input.arc(aid).a);
    return owner.at({pw.first, pw.second});
  };
  if (arc_owner(arc_a) != move.component_a || arc_owner(arc_b) != move.component_b)
    throw std::invalid_argument("compose: arcs do not lie on the named components");

  Diagram out = input;
  SlotRef ha = out.dart_head(da), ta = out.dart_head(da ^ 1);
  SlotRef hb = out.dart_head(db), tb = out.dart_head(db ^ 1);
  ArcInfo ia = out.ainfo(arc_a), ib = out.ainfo(arc_b);
  out.remove_arc(arc_a);
  out.remove_arc(arc_b);
  out.add_arc(ta, hb, ia);
  out.add_arc(tb, ha, ib);
  if (!out.euler_check()) throw surgery_error("compose: splice broke planarity");
  if (out.component_count() != input.component_count() - 1)
    throw surgery_error("compose: arcs were not on distinct components");
  if (out.uniform_multiplicity() && detail::big_face_count(out) > 0) out = fix_five_gons(out);
  return out;
}

}  // namespace mcknot
