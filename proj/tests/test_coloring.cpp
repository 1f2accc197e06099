#include "doctest.h"

#include <random>
#include <set>

#include "chroma/cayley.hpp"
#include "chroma/certify.hpp"
#include "chroma/coloring.hpp"
#include "oracles.hpp"

using namespace chroma;

TEST_CASE("is_proper") {
  Graph k3 = make_complete(3);
  CHECK(is_proper(k3, {0, 1, 2}));
  CHECK_FALSE(is_proper(k3, {0, 0, 1}));
  CHECK_THROWS_AS(is_proper(k3, {0, 1}), invalid_argument_error);
  CHECK_THROWS_AS(is_proper(k3, {0, 1, -1}), invalid_argument_error);
}

TEST_CASE("color sets spill past 128 colors") {
  ColorSet s = ColorSet::of({3, 1, 127});
  CHECK(s.size() == 3);
  CHECK(s.values() == std::vector<int>{1, 3, 127});
  s.insert(300);  // forces the sorted-array representation
  CHECK(s.size() == 4);
  CHECK(s.contains(127));
  CHECK(s.contains(300));
  CHECK_FALSE(s.contains(2));
  CHECK(s.values() == std::vector<int>{1, 3, 127, 300});

  ColorSet r = ColorSet::range(100, 140);
  CHECK(r.size() == 40);
  CHECK(r.intersect(ColorSet::range(130, 200)).size() == 10);
  CHECK(r.set_minus(ColorSet::range(0, 139)).values() == std::vector<int>{139});
  CHECK(ColorSet::range(5, 5).empty());

  // boundary: 127 still fits the masks, 128 does not
  ColorSet edge = ColorSet::range(0, 128);
  CHECK(edge.size() == 128);
  CHECK(edge.contains(127));
  edge.insert(128);
  CHECK(edge.size() == 129);
  CHECK(edge.contains(0));
  CHECK_THROWS_AS(edge.insert(-1), invalid_argument_error);
}

TEST_CASE("list assignments pool duplicate lists and serialize") {
  ListAssignment la(4);
  la.set_list(0, ColorSet::of({1, 2}));
  la.set_list(1, ColorSet::of({2, 1}));
  la.set_list(2, ColorSet::of({5, 7}));
  la.set_list(3, ColorSet::of({1, 2}));
  CHECK(la.pool_size() == 2);
  CHECK(la.pool_id(0) == la.pool_id(1));
  CHECK(la.pool_id(0) == la.pool_id(3));
  CHECK(la.pool_id(0) != la.pool_id(2));
  CHECK(la.color_universe().values() == std::vector<int>{1, 2, 5, 7});

  ListAssignment back = ListAssignment::from_json(la.to_json());
  CHECK(back.vertex_count() == 4);
  for (int v = 0; v < 4; ++v) CHECK(back.list(v) == la.list(v));
}

TEST_CASE("greedy coloring is always proper") {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 8; ++trial) {
    Graph g = oracle::random_graph(14, 0.4, rng);
    Coloring c = greedy_coloring(g);
    CHECK(is_proper(g, c));
  }
}

TEST_CASE("max clique on the named instances") {
  Graph box = cartesian_product(make_complete(3), make_complete(3));
  CHECK(max_clique_lower_bound(make_complete_multipartite(3, 3)).size == 3);
  CHECK(max_clique_lower_bound(box).size == 3);
  CHECK(oracle::brute_max_clique(box) == 3);

  Graph join = lexicographic_product(make_complete(2), box);
  CliqueResult r = max_clique_lower_bound(join);
  CHECK(r.size == 6);
  CHECK(r.exact);
  CHECK(oracle::brute_max_clique(join) == 6);
  // witness really is a clique
  for (std::size_t i = 0; i < r.witness.size(); ++i)
    for (std::size_t j = i + 1; j < r.witness.size(); ++j)
      CHECK(join.adjacent(r.witness[i], r.witness[j]));
}

TEST_CASE("max clique falls back to a flagged heuristic past 2000 vertices") {
  CliqueResult big = max_clique_lower_bound(make_complete(2048));
  CHECK_FALSE(big.exact);
  CHECK(big.size == 2048);  // greedy extension is still right on a clique
  CliqueResult small = max_clique_lower_bound(make_complete(64));
  CHECK(small.exact);
}

TEST_CASE("max clique agrees with brute force on random graphs") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = oracle::random_graph(13, 0.5, rng);
    CHECK(max_clique_lower_bound(g).size == oracle::brute_max_clique(g));
  }
}

TEST_CASE("chromatic number on the named instances") {
  Graph box = cartesian_product(make_complete(3), make_complete(3));
  ChromaticResult a = chromatic_number(box);
  CHECK(a.chi == 3);
  CHECK(is_proper(box, a.coloring));

  CHECK(chromatic_number(make_complete_multipartite(3, 3)).chi == 3);
  CHECK(chromatic_number(oracle::cycle_graph(5)).chi == 3);
  CHECK(chromatic_number(make_complete(7)).chi == 7);
}

TEST_CASE("chromatic number agrees with brute force on small graphs") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = oracle::random_graph(8, 0.45, rng);
    ChromaticResult r = chromatic_number(g);
    CHECK(r.chi == oracle::brute_chromatic(g));
    CHECK(is_proper(g, r.coloring));
    CHECK(r.clique_size <= r.chi);
    Coloring greedy = greedy_coloring(g);
    CHECK(r.chi <= 1 + *std::max_element(greedy.begin(), greedy.end()));
  }
}

TEST_CASE("chromatic budget reports certified bounds") {
  // triple Mycielskian: 23 vertices, clique number 2, chi = 5
  auto mycielski = [](const Graph& g) {
    int n = g.vertex_count();
    Graph m(2 * n + 1);
    for (int u = 0; u < n; ++u)
      g.for_each_neighbor(u, [&](int v) {
        if (v > u) {
          m.add_edge(u, v);
          m.add_edge(u, n + v);
          m.add_edge(n + u, v);
        }
      });
    for (int u = 0; u < n; ++u) m.add_edge(n + u, 2 * n);
    return m;
  };
  Graph g = mycielski(mycielski(oracle::cycle_graph(5)));
  try {
    ChromaticResult r = chromatic_number(g, std::chrono::milliseconds(1));
    CHECK(r.chi == 5);  // fast machine: finished inside the budget
  } catch (const budget_error& e) {
    CHECK(e.lower >= 2);
    CHECK(e.upper >= e.lower);
    CHECK(e.upper <= 23);
  }
  CHECK(chromatic_number(g).chi == 5);
}

TEST_CASE("list feasibility basics") {
  Graph k2 = make_complete(2);
  ListAssignment l2(2);
  l2.set_list(0, ColorSet::of({1, 2}));
  l2.set_list(1, ColorSet::of({1, 2}));
  ListFeasibility f2 = list_feasible(k2, l2);
  CHECK(f2.feasible);
  CHECK(f2.coloring[0] != f2.coloring[1]);

  Graph k3 = make_complete(3);
  ListAssignment l3(3);
  for (int v = 0; v < 3; ++v) l3.set_list(v, ColorSet::of({1, 2}));
  CHECK_FALSE(list_feasible(k3, l3).feasible);

  ListAssignment lempty(3);
  lempty.set_list(0, ColorSet::of({1}));
  lempty.set_list(1, ColorSet{});
  lempty.set_list(2, ColorSet::of({2}));
  ListFeasibility fe = list_feasible(k3, lempty);
  CHECK_FALSE(fe.feasible);
  CHECK(fe.empty_list_vertex == 1);
}

TEST_CASE("list feasibility agrees with brute force") {
  std::mt19937 rng(37);
  std::uniform_int_distribution<int> color(0, 6);
  for (int trial = 0; trial < 30; ++trial) {
    Graph g = oracle::random_graph(7, 0.5, rng);
    ListAssignment l(7);
    for (int v = 0; v < 7; ++v) {
      ColorSet s;
      for (int i = 0; i < 3; ++i) s.insert(color(rng));
      l.set_list(v, s);
    }
    CHECK(list_feasible(g, l).feasible == oracle::brute_list_feasible(g, l));
  }
}

TEST_CASE("feasibility is monotone under list growth") {
  std::mt19937 rng(43);
  std::uniform_int_distribution<int> color(0, 5);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = oracle::random_graph(7, 0.5, rng);
    ListAssignment l(7);
    for (int v = 0; v < 7; ++v) {
      ColorSet s;
      for (int i = 0; i < 2; ++i) s.insert(color(rng));
      l.set_list(v, s);
    }
    if (!list_feasible(g, l).feasible) continue;
    ListAssignment grown(7);
    for (int v = 0; v < 7; ++v) {
      ColorSet s = l.list(v);
      s.insert(color(rng));
      grown.set_list(v, s);
    }
    CHECK(list_feasible(g, grown).feasible);
  }
}

TEST_CASE("min distinct colors") {
  Graph k3 = make_complete(3);
  ListAssignment l3(3);
  for (int v = 0; v < 3; ++v) l3.set_list(v, ColorSet::of({1, 2, 3}));
  CHECK(min_distinct_colors(k3, l3) == 3);

  Graph iso(3);
  ListAssignment liso(3);
  for (int v = 0; v < 3; ++v) liso.set_list(v, ColorSet::of({4, 5}));
  CHECK(min_distinct_colors(iso, liso) == 1);

  // infeasible instances are an error, not a number
  ListAssignment lbad(3);
  for (int v = 0; v < 3; ++v) lbad.set_list(v, ColorSet::of({1, 2}));
  CHECK_THROWS_AS(min_distinct_colors(k3, lbad), infeasible_error);
  CHECK_THROWS_AS(min_distinct_colors_enumerated(k3, lbad), infeasible_error);

  Graph big(13);
  CHECK_THROWS_AS(min_distinct_colors(big, ListAssignment(13)),
                  invalid_argument_error);
}

TEST_CASE("quotient and direct minima agree on random instances") {
  std::mt19937 rng(53);
  std::uniform_int_distribution<int> color(0, 7);
  int compared = 0;
  for (int trial = 0; trial < 40; ++trial) {
    Graph g = oracle::random_graph(6, 0.5, rng);
    ListAssignment l(6);
    for (int v = 0; v < 6; ++v) {
      ColorSet s;
      for (int i = 0; i < 3; ++i) s.insert(color(rng));
      l.set_list(v, s);
    }
    int a = -1, b = -1;
    try {
      a = min_distinct_colors(g, l);
    } catch (const infeasible_error&) {
    }
    try {
      b = min_distinct_colors_enumerated(g, l);
    } catch (const infeasible_error&) {
    }
    CHECK(a == b);
    if (a != -1) ++compared;
  }
  CHECK(compared > 5);  // the generator must produce real instances
}

TEST_CASE("uniform lists of chi colors force exactly chi distinct") {
  std::mt19937 rng(59);
  for (int trial = 0; trial < 8; ++trial) {
    Graph g = oracle::random_graph(6, 0.5, rng);
    int chi = oracle::brute_chromatic(g);
    ListAssignment l(6);
    for (int v = 0; v < 6; ++v) l.set_list(v, ColorSet::range(0, chi));
    CHECK(min_distinct_colors(g, l) == chi);
  }
}

TEST_CASE("choosability search: C4 is 2-choosable") {
  Graph c4 = oracle::cycle_graph(4);
  ChoosabilityVerdict v = find_bad_assignment(c4, 2);
  CHECK(v.bound_type == ChoosabilityBound::upper_bound_exhaustive);
  CHECK(v.stats.exhausted);
  CHECK(v.stats.assignments_checked > 0);
  CHECK(v.stats.feasible_assignments == v.stats.assignments_checked);
}

TEST_CASE("choosability search: K_{3,3} is not 2-choosable") {
  Graph k33 = make_complete_multipartite(3, 2);
  ChoosabilityVerdict v = find_bad_assignment(k33, 2);
  REQUIRE(v.bound_type == ChoosabilityBound::lower_bound_witness);
  REQUIRE(v.witness.has_value());
  for (int u = 0; u < 6; ++u) CHECK(v.witness->list(u).size() == 2);
  CHECK_FALSE(list_feasible(k33, *v.witness).feasible);
  CHECK_FALSE(oracle::brute_list_feasible(k33, *v.witness));
  // the classical witness needs only three colors
  CHECK(v.stats.max_palette == 3);
}

TEST_CASE("choosability search: K_{3*3} is not 3-choosable") {
  Graph k333 = make_complete_multipartite(3, 3);
  ChoosabilityVerdict v = find_bad_assignment(k333, 3);
  REQUIRE(v.bound_type == ChoosabilityBound::lower_bound_witness);
  REQUIRE(v.witness.has_value());
  for (int u = 0; u < 9; ++u) CHECK(v.witness->list(u).size() == 3);
  CHECK_FALSE(list_feasible(k333, *v.witness).feasible);
  CHECK_FALSE(oracle::brute_list_feasible(k333, *v.witness));
}

namespace {

// all t-subsets of [0, universe), by index recursion
void all_subsets(int universe, int t, int from, std::vector<int>& cur,
                 std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == t) {
    out.push_back(cur);
    return;
  }
  for (int c = from; c < universe; ++c) {
    cur.push_back(c);
    all_subsets(universe, t, c + 1, cur, out);
    cur.pop_back();
  }
}

// reference search: every assignment over the fixed universe, no symmetry
bool exists_bad_over(const chroma::Graph& g, int t, int universe) {
  std::vector<std::vector<int>> subsets;
  std::vector<int> cur;
  all_subsets(universe, t, 0, cur, subsets);
  int n = g.vertex_count();
  std::vector<int> pick(static_cast<std::size_t>(n), 0);
  while (true) {
    chroma::ListAssignment la(n);
    for (int v = 0; v < n; ++v)
      la.set_list(v, chroma::ColorSet(subsets[static_cast<std::size_t>(
                         pick[static_cast<std::size_t>(v)])]));
    if (!oracle::brute_list_feasible(g, la)) return true;
    int v = 0;
    while (v < n && ++pick[static_cast<std::size_t>(v)] ==
                        static_cast<int>(subsets.size())) {
      pick[static_cast<std::size_t>(v)] = 0;
      ++v;
    }
    if (v == n) return false;
  }
}

}  // namespace

TEST_CASE("canonical enumeration is complete over a fixed universe") {
  // the canonical (restricted-growth) search over <= 4 colors must find a
  // bad assignment exactly when plain enumeration over 4 colors does
  std::mt19937 rng(71);
  Graph p3(3);
  p3.add_edge(0, 1);
  p3.add_edge(1, 2);
  std::vector<Graph> cases{p3, make_complete(3), oracle::cycle_graph(4),
                           make_complete(4)};
  for (int trial = 0; trial < 6; ++trial)
    cases.push_back(oracle::random_graph(4, 0.5, rng));
  for (const auto& g : cases) {
    bool reference = exists_bad_over(g, 2, 4);
    ChoosabilityVerdict v = find_bad_assignment(g, 2, 4);
    CHECK((v.bound_type == ChoosabilityBound::lower_bound_witness) == reference);
    if (v.witness) CHECK_FALSE(oracle::brute_list_feasible(g, *v.witness));
  }
}

TEST_CASE("solvers are deterministic run to run") {
  Graph k33 = make_complete_multipartite(3, 2);
  ChoosabilityVerdict a = find_bad_assignment(k33, 2);
  ChoosabilityVerdict b = find_bad_assignment(k33, 2);
  REQUIRE((a.witness && b.witness));
  CHECK(a.witness->to_json() == b.witness->to_json());
  CHECK(a.stats.assignments_checked == b.stats.assignments_checked);

  AdversarialInstance inst = build_adversarial_lists(1, 4);
  ListFeasibility f1 = list_feasible(inst.graph, inst.lists);
  ListFeasibility f2 = list_feasible(inst.graph, inst.lists);
  CHECK(f1.feasible == f2.feasible);
  CHECK(f1.coloring == f2.coloring);
  CHECK(f1.nodes == f2.nodes);
}

TEST_CASE("color set algebra matches a std::set oracle") {
  std::mt19937 rng(79);
  std::uniform_int_distribution<int> val(0, 299);
  std::uniform_int_distribution<int> len(0, 40);
  for (int trial = 0; trial < 50; ++trial) {
    std::set<int> sa, sb;
    ColorSet a, b;
    for (int i = len(rng); i > 0; --i) {
      int x = val(rng);
      sa.insert(x);
      a.insert(x);
    }
    for (int i = len(rng); i > 0; --i) {
      int x = val(rng);
      sb.insert(x);
      b.insert(x);
    }
    auto as_vec = [](const std::set<int>& s) {
      return std::vector<int>(s.begin(), s.end());
    };
    CHECK(a.values() == as_vec(sa));
    CHECK(a.size() == static_cast<int>(sa.size()));
    std::set<int> inter, minus, uni = sa;
    for (int x : sa)
      if (sb.count(x)) inter.insert(x);
    for (int x : sa)
      if (!sb.count(x)) minus.insert(x);
    uni.insert(sb.begin(), sb.end());
    CHECK(a.intersect(b).values() == as_vec(inter));
    CHECK(a.set_minus(b).values() == as_vec(minus));
    CHECK(a.set_union(b).values() == as_vec(uni));
    for (int probe = 0; probe < 10; ++probe) {
      int x = val(rng);
      CHECK(a.contains(x) == (sa.count(x) == 1));
    }
  }
}

TEST_CASE("choosability search budget raises with progress stats") {
  Graph k333 = make_complete_multipartite(3, 3);
  try {
    ChoosabilityVerdict v = find_bad_assignment(k333, 3, 0,
                                               std::chrono::milliseconds(1));
    CHECK(v.bound_type == ChoosabilityBound::lower_bound_witness);
  } catch (const budget_error& e) {
    CHECK(e.nodes > 0);
  }
}
