#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "chroma/bits.hpp"
#include "chroma/errors.hpp"
#include "chroma/graph.hpp"

namespace chroma {

// vertex -> color id; -1 marks "unassigned" in intermediate states only.
using Coloring = std::vector<int>;

namespace detail {

// budget <= 0 means unlimited.
struct Deadline {
  bool active = false;
  std::chrono::steady_clock::time_point end;
  explicit Deadline(std::chrono::milliseconds budget) {
    if (budget.count() > 0) {
      active = true;
      end = std::chrono::steady_clock::now() + budget;
    }
  }
  bool expired() const {
    return active && std::chrono::steady_clock::now() > end;
  }
};

}  // namespace detail

inline bool is_proper(const Graph& g, const Coloring& c) {
  if (static_cast<int>(c.size()) != g.vertex_count())
    throw invalid_argument_error("is_proper: coloring not total on V");
  for (int v = 0; v < g.vertex_count(); ++v)
    if (c[static_cast<std::size_t>(v)] < 0)
      throw invalid_argument_error("is_proper: partial coloring");
  for (int u = 0; u < g.vertex_count(); ++u) {
    bool bad = false;
    g.for_each_neighbor(u, [&](int v) {
      if (v > u && c[static_cast<std::size_t>(u)] == c[static_cast<std::size_t>(v)])
        bad = true;
    });
    if (bad) return false;
  }
  return true;
}

// ---------------------------------------------------------------------
// Color sets: bitmask-encoded while every color fits below 128, sorted
// array as soon as any color is larger. The adversarial instances push
// list sizes into the hundreds (and thousands at n = 3), so the fast
// path must degrade gracefully.
// ---------------------------------------------------------------------

class ColorSet {
 public:
  ColorSet() = default;

  static ColorSet range(int lo, int hi) {
    ColorSet s;
    for (int c = lo; c < hi; ++c) s.insert(c);
    return s;
  }

  static ColorSet of(std::initializer_list<int> cs) {
    ColorSet s;
    for (int c : cs) s.insert(c);
    return s;
  }

  explicit ColorSet(const std::vector<int>& cs) {
    for (int c : cs) insert(c);
  }

  void insert(int c) {
    if (c < 0) throw invalid_argument_error("ColorSet: negative color");
    if (!big_mode_ && c >= 128) spill();
    if (big_mode_) {
      auto it = std::lower_bound(big_.begin(), big_.end(), c);
      if (it == big_.end() || *it != c) big_.insert(it, c);
    } else {
      mask_[static_cast<std::size_t>(c >> 6)] |= std::uint64_t{1} << (c & 63);
    }
  }

  bool contains(int c) const {
    if (c < 0) return false;
    if (big_mode_) return std::binary_search(big_.begin(), big_.end(), c);
    if (c >= 128) return false;
    return (mask_[static_cast<std::size_t>(c >> 6)] >> (c & 63)) & 1u;
  }

  int size() const {
    if (big_mode_) return static_cast<int>(big_.size());
    return std::popcount(mask_[0]) + std::popcount(mask_[1]);
  }

  bool empty() const { return size() == 0; }

  std::vector<int> values() const {
    if (big_mode_) return big_;
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (int w = 0; w < 2; ++w) {
      std::uint64_t x = mask_[static_cast<std::size_t>(w)];
      while (x) {
        out.push_back(w * 64 + std::countr_zero(x));
        x &= x - 1;
      }
    }
    return out;
  }

  template <class F>
  void for_each(F&& f) const {
    for (int c : values()) f(c);
  }

  ColorSet intersect(const ColorSet& o) const {
    ColorSet r;
    for (int c : values())
      if (o.contains(c)) r.insert(c);
    return r;
  }

  ColorSet set_minus(const ColorSet& o) const {
    ColorSet r;
    for (int c : values())
      if (!o.contains(c)) r.insert(c);
    return r;
  }

  ColorSet set_union(const ColorSet& o) const {
    ColorSet r = *this;
    for (int c : o.values()) r.insert(c);
    return r;
  }

  bool operator==(const ColorSet& o) const { return values() == o.values(); }

 private:
  void spill() {
    big_ = values();
    big_mode_ = true;
    mask_ = {0, 0};
  }

  std::array<std::uint64_t, 2> mask_{0, 0};
  std::vector<int> big_;
  bool big_mode_ = false;
};

// Per-vertex finite color lists. Distinct lists are pooled so that
// instances with thousands of vertices sharing three lists stay small.
class ListAssignment {
 public:
  ListAssignment() = default;
  explicit ListAssignment(int n) : which_(static_cast<std::size_t>(n), -1) {}

  int vertex_count() const { return static_cast<int>(which_.size()); }

  void set_list(int v, const ColorSet& s) {
    check_vertex(v);
    auto key = s.values();
    auto it = dedup_.find(key);
    int id;
    if (it == dedup_.end()) {
      id = static_cast<int>(pool_.size());
      pool_.push_back(s);
      dedup_.emplace(std::move(key), id);
    } else {
      id = it->second;
    }
    which_[static_cast<std::size_t>(v)] = id;
  }

  const ColorSet& list(int v) const {
    check_vertex(v);
    int id = which_[static_cast<std::size_t>(v)];
    if (id < 0) throw invalid_argument_error("ListAssignment: unset vertex");
    return pool_[static_cast<std::size_t>(id)];
  }

  bool total() const {
    for (int id : which_)
      if (id < 0) return false;
    return true;
  }

  int pool_size() const { return static_cast<int>(pool_.size()); }
  const ColorSet& pool_list(int id) const {
    return pool_[static_cast<std::size_t>(id)];
  }
  int pool_id(int v) const {
    check_vertex(v);
    return which_[static_cast<std::size_t>(v)];
  }

  ColorSet color_universe() const {
    ColorSet u;
    for (const auto& s : pool_) u = u.set_union(s);
    return u;
  }

  nlohmann::json to_json() const {
    nlohmann::json lists = nlohmann::json::object();
    for (int v = 0; v < vertex_count(); ++v)
      lists[std::to_string(v)] = list(v).values();
    return nlohmann::json{{"lists", lists}};
  }

  static ListAssignment from_json(const nlohmann::json& j) {
    const auto& lists = j.at("lists");
    ListAssignment la(static_cast<int>(lists.size()));
    for (auto it = lists.begin(); it != lists.end(); ++it) {
      int v = std::stoi(it.key());
      la.set_list(v, ColorSet(it.value().get<std::vector<int>>()));
    }
    if (!la.total())
      throw invalid_argument_error("ListAssignment: vertex keys not 0..n-1");
    return la;
  }

 private:
  void check_vertex(int v) const {
    if (v < 0 || v >= vertex_count())
      throw invalid_argument_error("ListAssignment: vertex out of range");
  }

  std::vector<ColorSet> pool_;
  std::map<std::vector<int>, int> dedup_;
  std::vector<int> which_;
};

// ---------------------------------------------------------------------
// Greedy DSATUR coloring; gives the upper bound the exact solver starts
// from. Deterministic tie-breaking.
// ---------------------------------------------------------------------

inline Coloring greedy_coloring(const Graph& g) {
  int n = g.vertex_count();
  Coloring colors(static_cast<std::size_t>(n), -1);
  std::vector<Bitset> neigh(static_cast<std::size_t>(n), Bitset(n + 1));
  std::vector<int> sat(static_cast<std::size_t>(n), 0);
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (colors[static_cast<std::size_t>(v)] != -1) continue;
      if (pick == -1 || sat[static_cast<std::size_t>(v)] > sat[static_cast<std::size_t>(pick)] ||
          (sat[static_cast<std::size_t>(v)] == sat[static_cast<std::size_t>(pick)] &&
           g.degree(v) > g.degree(pick)))
        pick = v;
    }
    int c = 0;
    while (neigh[static_cast<std::size_t>(pick)].test(c)) ++c;
    colors[static_cast<std::size_t>(pick)] = c;
    g.for_each_neighbor(pick, [&](int u) {
      if (colors[static_cast<std::size_t>(u)] == -1 &&
          !neigh[static_cast<std::size_t>(u)].test(c)) {
        neigh[static_cast<std::size_t>(u)].set(c);
        ++sat[static_cast<std::size_t>(u)];
      }
    });
  }
  return colors;
}

// ---------------------------------------------------------------------
// Max clique: exact branch-and-bound with a greedy-coloring bound for
// graphs up to 2000 vertices, greedy extension (flagged inexact) above.
// ---------------------------------------------------------------------

struct CliqueResult {
  int size = 0;
  std::vector<int> witness;
  bool exact = true;
};

namespace detail {

struct CliqueSearch {
  const Graph& g;
  std::vector<int> best;
  std::vector<int> current;

  explicit CliqueSearch(const Graph& gr) : g(gr) {}

  void expand(Bitset& cand) {
    // Greedy color classes over the candidate set; class number bounds
    // how much the clique can still grow.
    std::vector<std::pair<int, int>> seq;  // (vertex, color)
    Bitset un = cand;
    int color = 0;
    while (un.any()) {
      ++color;
      Bitset cls = un;
      while (cls.any()) {
        int v = cls.first();
        seq.emplace_back(v, color);
        un.reset(v);
        cls.reset(v);
        cls.and_not_row(g.row(v));
      }
    }
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
      auto [v, c] = *it;
      if (static_cast<int>(current.size()) + c <= static_cast<int>(best.size()))
        return;
      Bitset next = cand;
      next.and_with_row(g.row(v));
      current.push_back(v);
      if (next.any())
        expand(next);
      else if (current.size() > best.size())
        best = current;
      current.pop_back();
      cand.reset(v);
    }
  }
};

}  // namespace detail

inline CliqueResult max_clique_lower_bound(const Graph& g) {
  int n = g.vertex_count();
  if (n == 0) return {};

  // greedy seed: extend from each of the first few high-degree vertices
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) order[static_cast<std::size_t>(v)] = v;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return g.degree(a) > g.degree(b); });
  std::vector<int> greedy;
  for (int v : order) {
    bool ok = true;
    for (int u : greedy)
      if (!g.adjacent(u, v)) {
        ok = false;
        break;
      }
    if (ok) greedy.push_back(v);
  }
  std::sort(greedy.begin(), greedy.end());

  if (n > 2000)
    return {static_cast<int>(greedy.size()), greedy, /*exact=*/false};

  detail::CliqueSearch search(g);
  search.best = greedy;
  Bitset cand(n);
  cand.set_all();
  search.expand(cand);
  std::sort(search.best.begin(), search.best.end());
  return {static_cast<int>(search.best.size()), search.best, /*exact=*/true};
}

// ---------------------------------------------------------------------
// Exact chromatic number: branch and bound between the clique lower
// bound and the DSATUR upper bound.
// ---------------------------------------------------------------------

struct ChromaticResult {
  int chi = 0;
  Coloring coloring;
  int clique_size = 0;
  std::vector<int> clique;
  long long nodes = 0;
};

namespace detail {

struct KColoring {
  const Graph& g;
  int k;
  const Deadline& deadline;
  long long nodes = 0;
  std::vector<int> colors;
  std::vector<Bitset> domains;

  KColoring(const Graph& gr, int kk, const Deadline& dl)
      : g(gr), k(kk), deadline(dl),
        colors(static_cast<std::size_t>(gr.vertex_count()), -1),
        domains(static_cast<std::size_t>(gr.vertex_count()), Bitset(kk)) {
    for (auto& d : domains) d.set_all();
  }

  bool assign(int v, int c, std::vector<std::pair<int, int>>& trail) {
    colors[static_cast<std::size_t>(v)] = c;
    bool dead = false;
    g.for_each_neighbor(v, [&](int u) {
      if (dead || colors[static_cast<std::size_t>(u)] != -1) return;
      auto& d = domains[static_cast<std::size_t>(u)];
      if (d.test(c)) {
        d.reset(c);
        trail.emplace_back(u, c);
        if (d.none()) dead = true;
      }
    });
    return !dead;
  }

  void undo(int v, std::vector<std::pair<int, int>>& trail) {
    for (auto& [u, c] : trail) domains[static_cast<std::size_t>(u)].set(c);
    trail.clear();
    colors[static_cast<std::size_t>(v)] = -1;
  }

  bool solve(int colored, int used) {
    if ((++nodes & 255) == 0 && deadline.expired())
      throw budget_error("k-coloring search budget exhausted", -1, -1, nodes);
    int n = g.vertex_count();
    if (colored == n) return true;
    int v = -1, vdom = k + 1;
    for (int u = 0; u < n; ++u) {
      if (colors[static_cast<std::size_t>(u)] != -1) continue;
      int d = domains[static_cast<std::size_t>(u)].count();
      if (d < vdom || (d == vdom && v != -1 && g.degree(u) > g.degree(v))) {
        v = u;
        vdom = d;
      }
    }
    std::vector<std::pair<int, int>> trail;
    int cap = std::min(k, used + 1);  // colors beyond the first unused are symmetric
    for (int c = 0; c < cap; ++c) {
      if (!domains[static_cast<std::size_t>(v)].test(c)) continue;
      if (assign(v, c, trail) && solve(colored + 1, std::max(used, c + 1)))
        return true;
      undo(v, trail);
    }
    return false;
  }
};

}  // namespace detail

inline ChromaticResult chromatic_number(
    const Graph& g, std::chrono::milliseconds budget = std::chrono::milliseconds{0}) {
  ChromaticResult r;
  int n = g.vertex_count();
  if (n == 0) return r;

  CliqueResult clique = max_clique_lower_bound(g);
  Coloring greedy = greedy_coloring(g);
  int ub = 1 + *std::max_element(greedy.begin(), greedy.end());
  int lb = clique.size;
  r.clique_size = clique.size;
  r.clique = clique.witness;

  detail::Deadline dl(budget);
  Coloring best = greedy;
  int k = lb;
  for (; k < ub; ++k) {
    detail::KColoring search(g, k, dl);
    // seed the clique with distinct colors
    std::vector<std::pair<int, int>> trail;
    bool viable = static_cast<int>(clique.witness.size()) <= k;
    int colored = 0;
    if (viable) {
      for (std::size_t i = 0; i < clique.witness.size(); ++i) {
        int v = clique.witness[i];
        if (!search.domains[static_cast<std::size_t>(v)].test(static_cast<int>(i)) ||
            !search.assign(v, static_cast<int>(i), trail)) {
          viable = false;
          break;
        }
        trail.clear();
        ++colored;
      }
    }
    try {
      if (viable && search.solve(colored, static_cast<int>(clique.witness.size()))) {
        best = search.colors;
        r.nodes += search.nodes;
        break;
      }
    } catch (budget_error& e) {
      // k-1 colors were refuted before the deadline, so [k, ub] is certified
      throw budget_error("chromatic_number: budget exhausted", k, ub,
                         r.nodes + e.nodes);
    }
    r.nodes += search.nodes;
  }
  r.chi = std::min(k, ub);
  r.coloring = best;
  if (!is_proper(g, r.coloring))
    throw internal_error("chromatic_number: witness is not proper");
  return r;
}

// ---------------------------------------------------------------------
// Exact list-coloring feasibility: backtracking, smallest remaining list
// first (ties by degree, then index), forward pruning on neighbors.
// ---------------------------------------------------------------------

struct ListFeasibility {
  bool feasible = false;
  Coloring coloring;        // witness when feasible
  int empty_list_vertex = -1;
  long long nodes = 0;
};

namespace detail {

struct ListSolver {
  const Graph& g;
  int universe;
  std::vector<int> colors;  // dense color ids
  std::vector<Bitset> domains;
  long long nodes = 0;

  ListSolver(const Graph& gr, int u)
      : g(gr), universe(u),
        colors(static_cast<std::size_t>(gr.vertex_count()), -1),
        domains(static_cast<std::size_t>(gr.vertex_count()), Bitset(u)) {}

  bool solve(int colored) {
    ++nodes;
    int n = g.vertex_count();
    if (colored == n) return true;
    int v = -1, vdom = universe + 1;
    for (int u = 0; u < n; ++u) {
      if (colors[static_cast<std::size_t>(u)] != -1) continue;
      int d = domains[static_cast<std::size_t>(u)].count();
      if (d < vdom || (d == vdom && v != -1 && g.degree(u) > g.degree(v))) {
        v = u;
        vdom = d;
      }
    }
    std::vector<std::pair<int, int>> trail;
    bool found = false;
    domains[static_cast<std::size_t>(v)].for_each([&](int c) {
      if (found) return;
      colors[static_cast<std::size_t>(v)] = c;
      bool dead = false;
      g.for_each_neighbor(v, [&](int u) {
        if (dead || colors[static_cast<std::size_t>(u)] != -1) return;
        auto& d = domains[static_cast<std::size_t>(u)];
        if (d.test(c)) {
          d.reset(c);
          trail.emplace_back(u, c);
          if (d.none()) dead = true;
        }
      });
      if (!dead && solve(colored + 1)) {
        found = true;
        return;
      }
      for (auto& [u, cc] : trail) domains[static_cast<std::size_t>(u)].set(cc);
      trail.clear();
      colors[static_cast<std::size_t>(v)] = -1;
    });
    return found;
  }
};

}  // namespace detail

inline ListFeasibility list_feasible(const Graph& g, const ListAssignment& l) {
  int n = g.vertex_count();
  if (l.vertex_count() != n || !l.total())
    throw invalid_argument_error("list_feasible: lists not total on V");
  ListFeasibility out;
  for (int v = 0; v < n; ++v)
    if (l.list(v).empty()) {
      out.empty_list_vertex = v;
      return out;
    }
  if (n == 0) {
    out.feasible = true;
    return out;
  }

  // dense remap of the color universe
  std::vector<int> universe = l.color_universe().values();
  std::map<int, int> dense;
  for (std::size_t i = 0; i < universe.size(); ++i)
    dense[universe[i]] = static_cast<int>(i);

  detail::ListSolver solver(g, static_cast<int>(universe.size()));
  for (int v = 0; v < n; ++v)
    l.list(v).for_each([&](int c) {
      solver.domains[static_cast<std::size_t>(v)].set(dense[c]);
    });

  out.feasible = solver.solve(0);
  out.nodes = solver.nodes;
  if (out.feasible) {
    out.coloring.resize(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
      out.coloring[static_cast<std::size_t>(v)] =
          universe[static_cast<std::size_t>(solver.colors[static_cast<std::size_t>(v)])];
    // witness validity is asserted unconditionally
    if (!is_proper(g, out.coloring))
      throw internal_error("list_feasible: witness is not proper");
    for (int v = 0; v < n; ++v)
      if (!l.list(v).contains(out.coloring[static_cast<std::size_t>(v)]))
        throw internal_error("list_feasible: witness leaves its list");
  }
  return out;
}

// ---------------------------------------------------------------------
// Minimum number of distinct colors over all proper list colorings.
// Colors contained in exactly the same lists are interchangeable, so the
// search runs over symbolic (role, instance) pairs: for the block
// instances this quotients a 10000-color palette down to three roles.
// ---------------------------------------------------------------------

namespace detail {

struct RoleSearch {
  int n = 0;
  int roles = 0;
  std::vector<char> allowed;           // n x roles, row-major
  std::vector<long long> supply;       // role -> color count
  std::vector<std::uint32_t> adj;      // vertex -> neighbor mask (n <= 12)
  std::vector<int> inst_role;
  std::vector<std::uint32_t> inst_members;
  std::vector<long long> used;
  int best = -1;

  bool role_ok(int v, int r) const {
    return allowed[static_cast<std::size_t>(v) * roles + r] != 0;
  }

  void dfs(int v) {
    int open = static_cast<int>(inst_role.size());
    if (best != -1 && open >= best) return;
    if (v == n) {
      best = open;
      return;
    }
    for (int i = 0; i < open; ++i) {
      if (!role_ok(v, inst_role[static_cast<std::size_t>(i)])) continue;
      if (inst_members[static_cast<std::size_t>(i)] & adj[static_cast<std::size_t>(v)])
        continue;
      inst_members[static_cast<std::size_t>(i)] |= 1u << v;
      dfs(v + 1);
      inst_members[static_cast<std::size_t>(i)] &= ~(1u << v);
    }
    if (best != -1 && open + 1 >= best) return;
    for (int r = 0; r < roles; ++r) {
      if (!role_ok(v, r)) continue;
      if (used[static_cast<std::size_t>(r)] >= supply[static_cast<std::size_t>(r)])
        continue;
      inst_role.push_back(r);
      inst_members.push_back(1u << v);
      ++used[static_cast<std::size_t>(r)];
      dfs(v + 1);
      --used[static_cast<std::size_t>(r)];
      inst_role.pop_back();
      inst_members.pop_back();
    }
  }
};

}  // namespace detail

inline int min_distinct_colors(const Graph& g, const ListAssignment& l) {
  int n = g.vertex_count();
  if (n > 12)
    throw invalid_argument_error("min_distinct_colors: graph too large (> 12)");
  if (l.vertex_count() != n || !l.total())
    throw invalid_argument_error("min_distinct_colors: lists not total");
  if (n == 0) return 0;
  for (int v = 0; v < n; ++v)
    if (l.list(v).empty())
      throw infeasible_error("min_distinct_colors: empty list");

  // role = maximal set of colors appearing in exactly the same lists
  int pools = l.pool_size();
  std::map<std::uint32_t, long long> role_supply;
  for (int c : l.color_universe().values()) {
    std::uint32_t sig = 0;
    for (int p = 0; p < pools; ++p)
      if (l.pool_list(p).contains(c)) sig |= 1u << p;
    ++role_supply[sig];
  }

  detail::RoleSearch search;
  search.n = n;
  std::vector<std::uint32_t> sigs;
  for (auto& [sig, cnt] : role_supply) {
    sigs.push_back(sig);
    search.supply.push_back(cnt);
  }
  search.roles = static_cast<int>(sigs.size());
  search.used.assign(search.supply.size(), 0);
  search.allowed.assign(static_cast<std::size_t>(n) * search.roles, 0);
  for (int v = 0; v < n; ++v)
    for (std::size_t r = 0; r < sigs.size(); ++r)
      if ((sigs[r] >> l.pool_id(v)) & 1u)
        search.allowed[static_cast<std::size_t>(v) * search.roles + r] = 1;
  search.adj.assign(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v)
    g.for_each_neighbor(v, [&](int u) {
      search.adj[static_cast<std::size_t>(v)] |= 1u << u;
    });

  search.dfs(0);
  if (search.best == -1)
    throw infeasible_error("min_distinct_colors: no proper list coloring");
  return search.best;
}

// Same quantity by direct enumeration over the actual colors; used as a
// cross-check where the palette is small.
inline int min_distinct_colors_enumerated(const Graph& g,
                                          const ListAssignment& l) {
  int n = g.vertex_count();
  if (n > 12)
    throw invalid_argument_error("min_distinct_colors_enumerated: > 12 vertices");
  if (n == 0) return 0;
  std::vector<int> universe = l.color_universe().values();
  if (universe.size() > 64)
    throw invalid_argument_error("min_distinct_colors_enumerated: > 64 colors");
  std::map<int, int> dense;
  for (std::size_t i = 0; i < universe.size(); ++i)
    dense[universe[i]] = static_cast<int>(i);
  std::vector<std::uint64_t> domain(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v) {
    l.list(v).for_each([&](int c) {
      domain[static_cast<std::size_t>(v)] |= std::uint64_t{1} << dense[c];
    });
    if (!domain[static_cast<std::size_t>(v)])
      throw infeasible_error("min_distinct_colors_enumerated: empty list");
  }
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v)
    g.for_each_neighbor(v, [&](int u) {
      adj[static_cast<std::size_t>(v)] |= 1u << u;
    });

  std::vector<int> colors(static_cast<std::size_t>(n), -1);
  int best = -1;
  auto dfs = [&](auto&& self, int v, std::uint64_t used, int distinct) -> void {
    if (best != -1 && distinct >= best) return;
    if (v == n) {
      best = distinct;
      return;
    }
    std::uint64_t avail = domain[static_cast<std::size_t>(v)];
    std::uint32_t nb = adj[static_cast<std::size_t>(v)] & ((1u << v) - 1u);
    while (nb) {
      int u = std::countr_zero(nb);
      avail &= ~(std::uint64_t{1} << colors[static_cast<std::size_t>(u)]);
      nb &= nb - 1;
    }
    // reuse colors before opening new ones
    for (int pass = 0; pass < 2; ++pass) {
      std::uint64_t cand = pass == 0 ? (avail & used) : (avail & ~used);
      while (cand) {
        int c = std::countr_zero(cand);
        cand &= cand - 1;
        colors[static_cast<std::size_t>(v)] = c;
        self(self, v + 1, used | (std::uint64_t{1} << c),
             distinct + (pass == 0 ? 0 : 1));
        colors[static_cast<std::size_t>(v)] = -1;
      }
    }
  };
  dfs(dfs, 0, 0, 0);
  if (best == -1)
    throw infeasible_error("min_distinct_colors_enumerated: infeasible");
  return best;
}

// ---------------------------------------------------------------------
// Choosability witness search: enumerate t-list assignments in canonical
// form (colors first appear in increasing order) and test each for a
// proper coloring. Any assignment over any palette is color-isomorphic
// to one over at most t*|V| colors, so exhausting the canonical space
// up to that universe is a complete 2-quantifier check.
// ---------------------------------------------------------------------

struct ChoosabilitySearchStats {
  long long assignments_checked = 0;
  long long feasible_assignments = 0;
  int max_palette = 0;
  bool exhausted = false;
};

enum class ChoosabilityBound { lower_bound_witness, upper_bound_exhaustive };

inline const char* to_string(ChoosabilityBound b) {
  return b == ChoosabilityBound::lower_bound_witness ? "lower_bound_witness"
                                                     : "upper_bound_exhaustive";
}

struct ChoosabilityVerdict {
  ChoosabilityBound bound_type;
  int t = 0;
  std::optional<ListAssignment> witness;
  ChoosabilitySearchStats stats;
};

namespace detail {

struct BadAssignmentSearch {
  const Graph& g;
  int n, t, cmax;
  const Deadline& deadline;
  ChoosabilitySearchStats& stats;
  std::vector<std::vector<int>> lists;
  std::optional<ListAssignment> found;

  BadAssignmentSearch(const Graph& gr, int tt, int cm, const Deadline& dl,
                      ChoosabilitySearchStats& st)
      : g(gr), n(gr.vertex_count()), t(tt), cmax(cm), deadline(dl), stats(st),
        lists(static_cast<std::size_t>(gr.vertex_count())) {}

  void leaf() {
    ++stats.assignments_checked;
    if ((stats.assignments_checked & 63) == 0 && deadline.expired())
      throw budget_error("choosability search budget exhausted", -1, -1,
                         stats.assignments_checked);
    ListAssignment la(n);
    for (int v = 0; v < n; ++v)
      la.set_list(v, ColorSet(lists[static_cast<std::size_t>(v)]));
    auto res = list_feasible(g, la);
    if (res.feasible)
      ++stats.feasible_assignments;
    else
      found = std::move(la);
  }

  // choose `need` old colors from [from, used) on top of `picked`
  void old_part(int v, int used, int fresh, int from, int need,
                std::vector<int>& picked) {
    if (found) return;
    if (need == 0) {
      auto& lv = lists[static_cast<std::size_t>(v)];
      lv = picked;
      for (int j = 0; j < fresh; ++j) lv.push_back(used + j);
      descend(v + 1, used + fresh);
      return;
    }
    for (int c = from; c + need <= used; ++c) {
      picked.push_back(c);
      old_part(v, used, fresh, c + 1, need - 1, picked);
      picked.pop_back();
      if (found) return;
    }
  }

  void descend(int v, int used) {
    if (found) return;
    if (v == n) {
      if (used == cmax) leaf();
      return;
    }
    // remaining vertices must still be able to reach exactly cmax colors
    if (static_cast<long long>(cmax) - used > static_cast<long long>(t) * (n - v))
      return;
    int max_fresh = std::min(t, cmax - used);
    for (int fresh = 0; fresh <= max_fresh; ++fresh) {
      if (t - fresh > used) continue;  // not enough old colors to fill the list
      std::vector<int> picked;
      old_part(v, used, fresh, 0, t - fresh, picked);
      if (found) return;
    }
  }
};

}  // namespace detail

inline ChoosabilityVerdict find_bad_assignment(
    const Graph& g, int t, int universe = 0,
    std::chrono::milliseconds budget = std::chrono::milliseconds{0}) {
  int n = g.vertex_count();
  if (n < 1) throw invalid_argument_error("find_bad_assignment: empty graph");
  if (t < 1) throw invalid_argument_error("find_bad_assignment: need t >= 1");
  if (universe <= 0) universe = t * n;
  universe = std::min(universe, t * n);

  detail::Deadline dl(budget);
  ChoosabilityVerdict verdict;
  verdict.t = t;
  // iterative deepening on the total palette: small witnesses first
  for (int cmax = t; cmax <= universe; ++cmax) {
    verdict.stats.max_palette = cmax;
    detail::BadAssignmentSearch search(g, t, cmax, dl, verdict.stats);
    search.descend(0, 0);
    if (search.found) {
      verdict.bound_type = ChoosabilityBound::lower_bound_witness;
      verdict.witness = std::move(search.found);
      return verdict;
    }
  }
  verdict.bound_type = ChoosabilityBound::upper_bound_exhaustive;
  verdict.stats.exhausted = true;
  return verdict;
}

}  // namespace chroma
