#pragma once

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chroma/cayley.hpp"
#include "chroma/certificate.hpp"
#include "chroma/coloring.hpp"
#include "chroma/distance.hpp"
#include "chroma/io.hpp"

namespace chroma {

inline Graph labeled_k3() {
  Graph k3 = make_complete(3);
  k3.set_labels({"0", "1", "2"});
  return k3;
}

inline Graph k3_box_k3() {
  return cartesian_product(labeled_k3(), labeled_k3());
}

// H_{3n} = G_{3n} box K_3, Gamma-vertex major, K_3 index minor. Vertex
// gamma*3 + c carries the label "<digits>,<c>".
inline Graph build_h(int n, int capacity_cap = kDefaultCapacity) {
  if (n < 1) throw invalid_argument_error("build_h: need n >= 1");
  long long vertices = pow3(3 * n);
  if (vertices > capacity_cap)
    throw capacity_error("build_h: " + std::to_string(vertices) +
                         " vertices exceeds cap " + std::to_string(capacity_cap));
  CayleyBundle bundle = build_cayley(3 * n, capacity_cap);
  return cartesian_product(bundle.graph, labeled_k3());
}

// ---------------------------------------------------------------------
// Structure theorem: H_{3n}^{2n} equals K_{3^{3n-2}}[K_3 box K_3] under
// the block bijection built from the equivalence classes.
// ---------------------------------------------------------------------

inline Certificate verify_structure_theorem_with(const CayleyBundle& bundle,
                                                 const ClassPartition& classes,
                                                 const Graph& h_pow,
                                                 int n) {
  Certificate cert;
  cert.claim = "structure-theorem";
  cert.parameters = {{"n", n}, {"m", 3 * n}, {"power", 2 * n}};
  if (n < 2)
    cert.notes.push_back("n = " + std::to_string(n) +
                         " is outside the theorem hypothesis n >= 2");
  long long r = pow3(3 * n - 2);
  int hv = h_pow.vertex_count();
  if (bundle.m != 3 * n || hv != 3 * bundle.graph.vertex_count())
    throw invalid_argument_error(
        "verify_structure_theorem: bundle/power sizes do not match n");

  // block of H-vertex gamma*3+c is the class of gamma
  std::vector<int> block(static_cast<std::size_t>(hv));
  for (int v = 0; v < hv; ++v)
    block[static_cast<std::size_t>(v)] = classes.class_of[static_cast<std::size_t>(v / 3)];

  // Claim 1: vertices in distinct blocks are adjacent in H^{2n}, i.e.
  // every non-neighbor lies in the vertex's own block.
  for (int v = 0; v < hv; ++v) {
    auto row = h_pow.row(v);
    for (std::size_t w = 0; w < row.size(); ++w) {
      std::uint64_t missing = ~row[w];
      if (w == row.size() - 1 && (hv & 63))
        missing &= (~std::uint64_t{0}) >> (64 - (hv & 63));
      while (missing) {
        int u = static_cast<int>(w * 64) + std::countr_zero(missing);
        missing &= missing - 1;
        if (u == v) continue;
        if (block[static_cast<std::size_t>(u)] != block[static_cast<std::size_t>(v)]) {
          cert.status = CertStatus::failed;
          cert.witness = {{"claim", 1}, {"u", u}, {"v", v},
                          {"reason", "cross-block pair not adjacent"}};
          return cert;
        }
      }
    }
  }

  // Claim 2: each block induces K_3 box K_3 under (position, K_3 index).
  Graph box = k3_box_k3();
  for (std::size_t i = 0; i < classes.classes.size(); ++i) {
    std::vector<int> q;
    q.reserve(9);
    for (int p = 0; p < 3; ++p)
      for (int c = 0; c < 3; ++c)
        q.push_back(classes.classes[i][static_cast<std::size_t>(p)] * 3 + c);
    Graph induced = induced_subgraph(h_pow, q);
    if (!induced.same_adjacency(box)) {
      cert.status = CertStatus::failed;
      cert.witness = {{"claim", 2}, {"block", static_cast<long long>(i)},
                      {"reason", "block does not induce K3 box K3"}};
      return cert;
    }
  }

  // Full labeled equality with the lexicographic product.
  Graph lex = lexicographic_product(make_complete(static_cast<int>(r)), box);
  std::vector<int> bij(static_cast<std::size_t>(hv));
  for (int v = 0; v < hv; ++v) {
    int gamma = v / 3, c = v % 3;
    bij[static_cast<std::size_t>(v)] =
        classes.class_of[static_cast<std::size_t>(gamma)] * 9 +
        classes.pos_in_class[static_cast<std::size_t>(gamma)] * 3 + c;
  }
  if (!is_same_labeled(h_pow, lex, bij)) {
    cert.status = CertStatus::failed;
    cert.witness = {{"reason", "bijection does not preserve adjacency"}};
    return cert;
  }

  long long pairs = static_cast<long long>(hv) * (hv - 1) / 2;
  cert.status = CertStatus::verified;
  cert.stats = {{"vertices", hv},
                {"blocks", r},
                {"block_size", 9},
                {"non_edges", pairs - h_pow.edge_count()},
                {"expected_non_edges", 18 * r}};
  cert.witness = {{"bijection",
                   "class-major: (gamma, c) -> 9*class(gamma) + 3*position(gamma) + c"}};
  return cert;
}

inline Certificate verify_structure_theorem(int n,
                                            int capacity_cap = kDefaultCapacity,
                                            int threads = 0) {
  if (n < 1) throw invalid_argument_error("verify_structure_theorem: need n >= 1");
  CayleyBundle bundle = build_cayley(3 * n, capacity_cap);
  ClassPartition classes = equivalence_classes(bundle);
  Graph h = cartesian_product(bundle.graph, labeled_k3());
  Graph hp = graph_power(h, 2 * n, threads);
  return verify_structure_theorem_with(bundle, classes, hp, n);
}

// ---------------------------------------------------------------------
// Power composition: (H^{2s})^k and H^{2sk} computed independently and
// compared entry for entry.
// ---------------------------------------------------------------------

inline Certificate verify_power_composition_with(const Graph& h, int s, int k,
                                                 const Graph* h_pow_2sk,
                                                 int threads = 0) {
  Certificate cert;
  cert.claim = "power-composition";
  cert.parameters = {{"s", s}, {"k", k}, {"m", 3 * s * k}};
  Graph a = graph_power(h, 2 * s, threads);
  Graph b = graph_power(a, k, threads);
  Graph c = h_pow_2sk ? Graph(*h_pow_2sk) : graph_power(h, 2 * s * k, threads);
  if (!b.same_adjacency(c)) {
    // locate one offending pair for the witness
    for (int u = 0; u < b.vertex_count(); ++u)
      for (int v = u + 1; v < b.vertex_count(); ++v)
        if (b.adjacent(u, v) != c.adjacent(u, v)) {
          cert.status = CertStatus::failed;
          cert.witness = {{"u", u}, {"v", v},
                          {"iterated", b.adjacent(u, v)},
                          {"direct", c.adjacent(u, v)}};
          return cert;
        }
    cert.status = CertStatus::failed;
    return cert;
  }
  cert.status = CertStatus::verified;
  cert.stats = {{"vertices", h.vertex_count()},
                {"power_edges", b.edge_count()}};
  return cert;
}

inline Certificate verify_power_composition(int s, int k,
                                            int capacity_cap = kDefaultCapacity,
                                            int threads = 0) {
  if (s < 1 || k < 1)
    throw invalid_argument_error("verify_power_composition: need s,k >= 1");
  Graph h = build_h(s * k, capacity_cap);
  return verify_power_composition_with(h, s, k, nullptr, threads);
}

// ---------------------------------------------------------------------
// chi(H) for H = K_{3^{3n-2}}[K_3 box K_3]: a clique of size 3^{3n-1}
// (the first-coordinate-0 stratum) plus an explicit proper coloring with
// as many colors, both checked directly.
// ---------------------------------------------------------------------

inline int chi_h_color_rule(int v) {
  int x = v / 9, cell = v % 9;
  return 3 * x + (cell / 3 + cell % 3) % 3;
}

inline Certificate verify_chi_of_h(int n, int capacity_cap = kDefaultCapacity) {
  Certificate cert;
  cert.claim = "chi-h";
  if (n < 1) throw invalid_argument_error("verify_chi_of_h: need n >= 1");
  long long r = pow3(3 * n - 2);
  long long chi = 3 * r;
  cert.parameters = {{"n", n}, {"r", r}};
  if (n < 2)
    cert.notes.push_back("n = " + std::to_string(n) +
                         " is outside the lemma hypothesis n >= 2");
  if (9 * r > capacity_cap)
    throw capacity_error("verify_chi_of_h: instance exceeds capacity cap");

  Graph lex = lexicographic_product(make_complete(static_cast<int>(r)), k3_box_k3());
  int nv = lex.vertex_count();

  // clique witness: all vertices whose K3 box K3 cell has first coordinate 0
  std::vector<int> clique;
  clique.reserve(static_cast<std::size_t>(chi));
  for (int v = 0; v < nv; ++v)
    if (v % 9 < 3) clique.push_back(v);
  if (static_cast<long long>(clique.size()) != chi) {
    cert.status = CertStatus::failed;
    cert.witness = {{"reason", "stratum has unexpected size"}};
    return cert;
  }
  for (std::size_t i = 0; i < clique.size(); ++i)
    for (std::size_t j = i + 1; j < clique.size(); ++j)
      if (!lex.adjacent(clique[i], clique[j])) {
        cert.status = CertStatus::failed;
        cert.witness = {{"reason", "clique witness pair not adjacent"},
                        {"u", clique[i]}, {"v", clique[j]}};
        return cert;
      }

  // explicit coloring: color(x, (u,v)) = 3x + (u+v) mod 3
  Coloring col(static_cast<std::size_t>(nv));
  Bitset used(static_cast<int>(chi));
  for (int v = 0; v < nv; ++v) {
    col[static_cast<std::size_t>(v)] = chi_h_color_rule(v);
    used.set(col[static_cast<std::size_t>(v)]);
  }
  if (static_cast<long long>(used.count()) != chi) {
    cert.status = CertStatus::failed;
    cert.witness = {{"reason", "coloring does not use exactly chi colors"}};
    return cert;
  }
  if (!is_proper(lex, col)) {
    cert.status = CertStatus::failed;
    cert.witness = {{"reason", "explicit coloring is not proper"}};
    return cert;
  }

  cert.status = CertStatus::verified;
  cert.stats = {{"vertices", nv},
                {"chi", chi},
                {"clique_size", static_cast<long long>(clique.size())},
                {"colors_used", chi}};
  cert.witness = {{"clique_rule", "first-coordinate-0 stratum"},
                  {"coloring_rule", "color(x,(u,v)) = 3x + (u+v) mod 3"}};
  if (nv <= 1000) {
    cert.witness["clique"] = clique;
    cert.witness["coloring"] = col;
  }
  return cert;
}

// ---------------------------------------------------------------------
// chi(G[H]) = chi(G[K_l]) where l = chi(H), checked by the exact solver.
// ---------------------------------------------------------------------

inline Certificate verify_lexico_proposition(
    const Graph& g, const Graph& h,
    std::chrono::milliseconds budget = std::chrono::milliseconds{0}) {
  Certificate cert;
  cert.claim = "lexico-chromatic";
  if (static_cast<long long>(g.vertex_count()) * h.vertex_count() > 128)
    throw invalid_argument_error(
        "verify_lexico_proposition: product too large for the exact solver");
  cert.parameters = {{"g", json::parse(export_json_graph(g))},
                     {"h", json::parse(export_json_graph(h))}};
  try {
    ChromaticResult hh = chromatic_number(h, budget);
    Graph gh = lexicographic_product(g, h);
    Graph gk = lexicographic_product(g, make_complete(hh.chi));
    ChromaticResult a = chromatic_number(gh, budget);
    ChromaticResult b = chromatic_number(gk, budget);
    cert.stats = {{"l", hh.chi}, {"chi_gh", a.chi}, {"chi_gk", b.chi}};
    cert.witness = {{"coloring_gh", a.coloring}, {"coloring_gk", b.coloring}};
    cert.status = (a.chi == b.chi) ? CertStatus::verified : CertStatus::failed;
  } catch (const budget_error& e) {
    cert.status = CertStatus::inconclusive;
    cert.notes.push_back(std::string("budget exhausted: ") + e.what());
  }
  return cert;
}

// ---------------------------------------------------------------------
// The adversarial list instances: K_r[K_3 box K_3], palette A split into
// A_1, A_2, A_3 of size t/2, list A minus A_i on stratum R_i (stratum =
// first coordinate of the K_3 box K_3 cell).
// ---------------------------------------------------------------------

struct AdversarialInstance {
  int r = 0;
  int t = 0;
  std::array<ColorSet, 3> palette_parts;
  Graph graph;
  ListAssignment lists;
  bool canonical_r = false;  // r of the form 3^{3n-2}
};

inline int stratum_of(int v) { return (v % 9) / 3; }

inline bool is_canonical_block_count(long long r) {
  if (r < 3) return false;
  int e = 0;
  while (r % 3 == 0) {
    r /= 3;
    ++e;
  }
  return r == 1 && e % 3 == 1;
}

inline AdversarialInstance build_adversarial_lists(
    int r, int t, int capacity_cap = kDefaultCapacity) {
  if (r < 1) throw invalid_argument_error("build_adversarial_lists: need r >= 1");
  if (t < 2 || t % 2 != 0)
    throw invalid_argument_error(
        "build_adversarial_lists: construction requires an even t >= 2");
  if (9LL * r > capacity_cap)
    throw capacity_error("build_adversarial_lists: 9r exceeds capacity cap");

  AdversarialInstance inst;
  inst.r = r;
  inst.t = t;
  inst.canonical_r = is_canonical_block_count(r);
  for (int i = 0; i < 3; ++i)
    inst.palette_parts[static_cast<std::size_t>(i)] =
        ColorSet::range(i * (t / 2), (i + 1) * (t / 2));
  inst.graph = lexicographic_product(make_complete(r), k3_box_k3());

  ColorSet all = ColorSet::range(0, 3 * (t / 2));
  std::array<ColorSet, 3> stratum_list;
  for (int i = 0; i < 3; ++i)
    stratum_list[static_cast<std::size_t>(i)] =
        all.set_minus(inst.palette_parts[static_cast<std::size_t>(i)]);

  inst.lists = ListAssignment(inst.graph.vertex_count());
  for (int v = 0; v < inst.graph.vertex_count(); ++v)
    inst.lists.set_list(v, stratum_list[static_cast<std::size_t>(stratum_of(v))]);
  return inst;
}

// ---------------------------------------------------------------------
// The counting chain, as independently checkable finite facts:
//   (1) every independent triple of a block meets all three strata;
//   (2) the three stratum lists have empty intersection;
//   (3) any proper list coloring of one block uses >= 5 colors;
//   (4) vertices in distinct blocks are always adjacent;
//   (5) pigeonhole: blocks need per_block_min * r distinct colors but
//       only |A| = 3t/2 exist.
// ---------------------------------------------------------------------

struct Pigeonhole {
  long long needed = 0;
  long long available = 0;
};

struct CountingCertificate {
  int r = 0;
  int t = 0;
  bool triple_span_checked = false;
  bool empty_intersection_checked = false;
  int per_block_min_colors = 0;  // -1 when the block alone is infeasible
  bool cross_block_disjointness_checked = false;
  Pigeonhole pigeonhole;
  CertStatus conclusion = CertStatus::inconclusive;
  std::vector<std::string> notes;

  json to_json() const {
    json j;
    j["claim"] = "counting-argument";
    j["status"] = to_string(conclusion);
    j["parameters"] = {{"r", r}, {"t", t}};
    j["stats"] = {{"triple_span_checked", triple_span_checked},
                  {"empty_intersection_checked", empty_intersection_checked},
                  {"per_block_min_colors", per_block_min_colors},
                  {"cross_block_disjointness_checked", cross_block_disjointness_checked},
                  {"pigeonhole", {{"needed", pigeonhole.needed},
                                  {"available", pigeonhole.available}}}};
    if (!notes.empty()) j["notes"] = notes;
    return j;
  }

  Certificate to_certificate() const {
    Certificate c;
    c.claim = "counting-argument";
    c.status = conclusion;
    c.parameters = {{"r", r}, {"t", t}};
    c.stats = to_json()["stats"];
    c.notes = notes;
    return c;
  }
};

inline CountingCertificate verify_counting_argument(const AdversarialInstance& inst) {
  CountingCertificate out;
  out.r = inst.r;
  out.t = inst.t;
  int nv = inst.graph.vertex_count();
  if (nv != 9 * inst.r || inst.lists.vertex_count() != nv || !inst.lists.total())
    throw invalid_argument_error("verify_counting_argument: malformed instance");
  for (int v = 0; v < nv; ++v)
    if (inst.lists.list(v).size() != inst.t)
      throw invalid_argument_error("verify_counting_argument: list size != t");
  if (!inst.canonical_r)
    out.notes.push_back("r = " + std::to_string(inst.r) +
                        " generalized beyond the canonical block count 3^(3n-2)");

  // palette sanity: three disjoint parts of size t/2
  long long available = 0;
  for (int i = 0; i < 3; ++i) {
    if (inst.palette_parts[static_cast<std::size_t>(i)].size() != inst.t / 2)
      throw invalid_argument_error("verify_counting_argument: |A_i| != t/2");
    available += inst.palette_parts[static_cast<std::size_t>(i)].size();
    for (int j = i + 1; j < 3; ++j)
      if (!inst.palette_parts[static_cast<std::size_t>(i)]
               .intersect(inst.palette_parts[static_cast<std::size_t>(j)])
               .empty())
        throw invalid_argument_error("verify_counting_argument: A_i overlap");
  }

  // block uniformity: every block induces the same graph as block 0, and
  // lists depend only on the stratum
  std::vector<int> cells(9);
  for (int i = 0; i < 9; ++i) cells[static_cast<std::size_t>(i)] = i;
  Graph block0 = induced_subgraph(inst.graph, cells);
  for (int b = 1; b < inst.r; ++b) {
    for (int i = 0; i < 9; ++i)
      for (int j = i + 1; j < 9; ++j)
        if (inst.graph.adjacent(9 * b + i, 9 * b + j) != block0.adjacent(i, j))
          throw invalid_argument_error("verify_counting_argument: blocks differ");
  }
  ColorSet all;
  for (const auto& part : inst.palette_parts) all = all.set_union(part);
  for (int i = 0; i < 3; ++i)
    if (!(inst.lists.list(3 * i) ==
          all.set_minus(inst.palette_parts[static_cast<std::size_t>(i)])))
      throw invalid_argument_error(
          "verify_counting_argument: stratum list is not A minus A_i");
  for (int v = 0; v < nv; ++v)
    if (inst.lists.pool_id(v) != inst.lists.pool_id(3 * stratum_of(v)))
      throw invalid_argument_error(
          "verify_counting_argument: lists not constant on strata");

  // (1) every independent triple of the block meets all three strata
  out.triple_span_checked = true;
  long long independent_triples = 0;
  for (int a = 0; a < 9; ++a)
    for (int b = a + 1; b < 9; ++b)
      for (int c = b + 1; c < 9; ++c) {
        if (block0.adjacent(a, b) || block0.adjacent(a, c) || block0.adjacent(b, c))
          continue;
        ++independent_triples;
        bool hit[3] = {false, false, false};
        hit[stratum_of(a)] = hit[stratum_of(b)] = hit[stratum_of(c)] = true;
        if (!(hit[0] && hit[1] && hit[2])) out.triple_span_checked = false;
      }
  if (independent_triples == 0) out.triple_span_checked = false;

  // (2) no color survives all three stratum lists
  const ColorSet& l0 = inst.lists.list(0);
  const ColorSet& l3 = inst.lists.list(3);
  const ColorSet& l6 = inst.lists.list(6);
  out.empty_intersection_checked = l0.intersect(l3).intersect(l6).empty();

  // (3) minimum distinct colors on one block, via the quotient oracle,
  // cross-checked by direct enumeration for small t
  ListAssignment block_lists(9);
  for (int i = 0; i < 9; ++i) block_lists.set_list(i, inst.lists.list(i));
  bool block_infeasible = false;
  try {
    out.per_block_min_colors = min_distinct_colors(block0, block_lists);
    if (inst.t <= 8) {
      int direct = min_distinct_colors_enumerated(block0, block_lists);
      if (direct != out.per_block_min_colors)
        throw internal_error(
            "verify_counting_argument: quotient and direct block minima disagree");
    }
  } catch (const infeasible_error&) {
    if (inst.t <= 8) {
      bool direct_agrees = false;
      try {
        (void)min_distinct_colors_enumerated(block0, block_lists);
      } catch (const infeasible_error&) {
        direct_agrees = true;
      }
      if (!direct_agrees)
        throw internal_error(
            "verify_counting_argument: quotient says infeasible but direct "
            "enumeration found a block coloring");
    }
    block_infeasible = true;
    out.per_block_min_colors = -1;
    out.notes.push_back("a single block already admits no proper list coloring");
  }

  // (4) all cross-block pairs adjacent
  out.cross_block_disjointness_checked = true;
  {
    Bitset outside(nv);
    for (int v = 0; v < nv && out.cross_block_disjointness_checked; ++v) {
      int b = v / 9;
      outside.set_all();
      auto w = outside.words();
      bits::clear_range(w, 9 * b, 9 * (b + 1));
      auto row = inst.graph.row(v);
      for (std::size_t k = 0; k < w.size(); ++k)
        if ((row[k] & w[k]) != w[k]) {
          out.cross_block_disjointness_checked = false;
          break;
        }
    }
  }

  // (5) pigeonhole
  out.pigeonhole.available = available;  // |A| = 3t/2
  if (block_infeasible) {
    out.pigeonhole.needed = -1;
    out.conclusion = (out.triple_span_checked && out.empty_intersection_checked &&
                      out.cross_block_disjointness_checked)
                         ? CertStatus::infeasible_certified
                         : CertStatus::inconclusive;
    return out;
  }
  out.pigeonhole.needed =
      static_cast<long long>(out.per_block_min_colors) * inst.r;
  bool all_checks = out.triple_span_checked && out.empty_intersection_checked &&
                    out.cross_block_disjointness_checked;
  if (all_checks && out.pigeonhole.needed > out.pigeonhole.available)
    out.conclusion = CertStatus::infeasible_certified;
  else
    out.conclusion = CertStatus::inconclusive;
  return out;
}

// ---------------------------------------------------------------------
// End-to-end pipeline: construct G_{3sk} and H_{3sk}, verify each lemma
// in order, build the adversarial instance at the canonical parameters and
// certify the chromatic / list-chromatic gap.
// ---------------------------------------------------------------------

struct PipelineOptions {
  int capacity_cap = kDefaultCapacity;
  int threads = 0;
  std::optional<std::string> cache_dir;  // defaults to $CHROMA_POWER_CACHE
};

struct TheoremReport {
  int s = 0, k = 0, n = 0;
  int t = 0;
  long long chi_value = 0;
  long long chi_l_lower = 0;
  CertStatus status = CertStatus::failed;
  std::string failed_stage;
  json graph_stats = json::object();
  std::vector<Certificate> stages;

  bool ok() const { return status == CertStatus::verified; }

  json to_json() const {
    json j;
    j["claim"] = "theorem";
    j["status"] = to_string(status);
    j["s"] = s;
    j["k"] = k;
    j["n"] = n;
    j["t"] = t;
    j["chi"] = chi_value;
    j["chi_l_lower"] = chi_l_lower;
    if (!failed_stage.empty()) j["failed_stage"] = failed_stage;
    j["graph_stats"] = graph_stats;
    auto arr = json::array();
    for (const auto& c : stages) arr.push_back(c.to_json());
    j["stages"] = std::move(arr);
    return j;
  }

  static TheoremReport from_json(const json& j) {
    TheoremReport r;
    r.s = j.at("s").get<int>();
    r.k = j.at("k").get<int>();
    r.n = j.at("n").get<int>();
    r.t = j.at("t").get<int>();
    r.chi_value = j.at("chi").get<long long>();
    r.chi_l_lower = j.at("chi_l_lower").get<long long>();
    r.status = cert_status_from_string(j.at("status").get<std::string>());
    if (j.contains("failed_stage")) r.failed_stage = j["failed_stage"];
    r.graph_stats = j.value("graph_stats", json::object());
    for (const auto& c : j.at("stages")) r.stages.push_back(Certificate::from_json(c));
    return r;
  }

  std::string to_markdown() const {
    std::ostringstream md;
    md << "# Theorem report (s = " << s << ", k = " << k << ")\n\n";
    md << "- status: " << to_string(status) << "\n";
    md << "- chi(G^k) = " << chi_value << "\n";
    md << "- chi_l(G^k) >= " << chi_l_lower << " (witnessed by list size t = " << t
       << ")\n";
    md << "- gap >= " << (chi_l_lower - chi_value) << "\n\n";
    for (const auto& c : stages) md << c.to_markdown() << "\n";
    return md.str();
  }
};

namespace detail {

struct PipelineCache {
  std::optional<std::filesystem::path> dir;

  explicit PipelineCache(const PipelineOptions& opt) {
    if (opt.cache_dir) {
      dir = *opt.cache_dir;
    } else if (const char* env = std::getenv("CHROMA_POWER_CACHE")) {
      if (*env) dir = env;
    }
    if (dir) std::filesystem::create_directories(*dir);
  }

  std::optional<std::string> read(const std::string& name) const {
    if (!dir) return std::nullopt;
    std::ifstream in(*dir / name, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write(const std::string& name, const std::string& bytes) const {
    if (!dir) return;
    std::ofstream out(*dir / name, std::ios::binary);
    out << bytes;
  }

  std::optional<Certificate> load_cert(const std::string& name,
                                       const json& expect_params) const {
    auto bytes = read(name);
    if (!bytes) return std::nullopt;
    try {
      Certificate c = Certificate::from_json(json::parse(*bytes));
      if (c.parameters == expect_params && c.ok()) return c;
    } catch (...) {
    }
    return std::nullopt;
  }

  void store_cert(const std::string& name, const Certificate& c) const {
    write(name, c.to_json().dump(2) + "\n");
  }

  std::optional<Graph> load_graph(const std::string& name) const {
    auto bytes = read(name);
    if (!bytes) return std::nullopt;
    try {
      return import_graph(*bytes, GraphFormat::graph6);
    } catch (...) {
      return std::nullopt;
    }
  }

  void store_graph(const std::string& name, const Graph& g) const {
    write(name, export_graph(g, GraphFormat::graph6));
  }
};

}  // namespace detail

// Largest even t strictly below (10/9) * 3^(3n-1) = 10 * 3^(3n-3).
inline int default_adversarial_t(int n) {
  long long bound = 10 * pow3(3 * n - 3);
  return static_cast<int>(bound - 2);
}

inline TheoremReport run_theorem_pipeline(int s, int k,
                                          const PipelineOptions& opt = {}) {
  if (k < 2)
    throw invalid_argument_error("run_theorem_pipeline: theorem requires k >= 2");
  if (s < 1) throw invalid_argument_error("run_theorem_pipeline: need s >= 1");
  int n = s * k;
  long long h_vertices = pow3(3 * n);
  if (h_vertices > opt.capacity_cap)
    throw capacity_error("run_theorem_pipeline: H_" + std::to_string(3 * n) +
                         " needs " + std::to_string(h_vertices) +
                         " vertices, over cap " + std::to_string(opt.capacity_cap));

  detail::PipelineCache cache(opt);
  TheoremReport rep;
  rep.s = s;
  rep.k = k;
  rep.n = n;
  rep.t = default_adversarial_t(n);
  rep.chi_value = pow3(3 * n - 1);
  rep.chi_l_lower = rep.t + 1;

  auto fail = [&](const std::string& stage) {
    rep.status = CertStatus::failed;
    rep.failed_stage = stage;
    return rep;
  };
  auto push = [&](Certificate c, const std::string& cache_name) {
    cache.store_cert(cache_name, c);
    rep.stages.push_back(std::move(c));
    return rep.stages.back().ok();
  };

  std::string suffix = "_n" + std::to_string(n) + ".json";

  CayleyBundle bundle = build_cayley(3 * n, opt.capacity_cap);
  ClassPartition classes = equivalence_classes(bundle);
  Graph h = cartesian_product(bundle.graph, labeled_k3());
  rep.graph_stats = {{"g_vertices", bundle.graph.vertex_count()},
                     {"g_degree", bundle.graph.degree(0)},
                     {"h_vertices", h.vertex_count()},
                     {"h_degree", h.degree(0)}};

  // distance lemma
  {
    auto cached = cache.load_cert("cert_distance_lemma" + suffix,
                                  json{{"m", 3 * n}, {"n", n}});
    Certificate c = cached ? *cached : verify_distance_lemma(bundle);
    if (!push(std::move(c), "cert_distance_lemma" + suffix))
      return fail("distance-lemma");
  }

  // power-multipartite
  {
    auto cached = cache.load_cert(
        "cert_power_multipartite" + suffix,
        json{{"m", 3 * n}, {"n", n}, {"power", 2 * n - 1}});
    Certificate c =
        cached ? *cached : verify_power_multipartite(bundle, n, opt.threads);
    if (!push(std::move(c), "cert_power_multipartite" + suffix))
      return fail("power-multipartite");
  }

  // structure theorem; H^{2n} is the long pole, so it is checkpointed
  std::string hp_name = "h" + std::to_string(3 * n) + "_pow" +
                        std::to_string(2 * n) + ".g6";
  std::optional<Graph> hp;
  {
    auto cached_cert = cache.load_cert(
        "cert_structure" + suffix,
        json{{"n", n}, {"m", 3 * n}, {"power", 2 * n}});
    if (cached_cert) {
      rep.stages.push_back(*cached_cert);
      hp = cache.load_graph(hp_name);
    } else {
      hp = cache.load_graph(hp_name);
      if (!hp) {
        hp = graph_power(h, 2 * n, opt.threads);
        cache.store_graph(hp_name, *hp);
      }
      Certificate c = verify_structure_theorem_with(bundle, classes, *hp, n);
      if (!push(std::move(c), "cert_structure" + suffix))
        return fail("structure-theorem");
    }
  }

  // power composition
  {
    auto cached = cache.load_cert("cert_power_composition" + suffix,
                                  json{{"s", s}, {"k", k}, {"m", 3 * n}});
    Certificate c;
    if (cached) {
      c = *cached;
    } else {
      c = verify_power_composition_with(h, s, k, hp ? &*hp : nullptr,
                                        opt.threads);
      c.parameters = {{"s", s}, {"k", k}, {"m", 3 * n}};
    }
    if (!push(std::move(c), "cert_power_composition" + suffix))
      return fail("power-composition");
  }
  hp.reset();  // free one 3^{3n}-row matrix before the chi stage

  // chi(H^{2n})
  {
    auto cached = cache.load_cert("cert_chi_h" + suffix,
                                  json{{"n", n}, {"r", pow3(3 * n - 2)}});
    Certificate c = cached ? *cached : verify_chi_of_h(n, opt.capacity_cap);
    if (!push(std::move(c), "cert_chi_h" + suffix)) return fail("chi-h");
  }

  // adversarial instance + counting argument
  {
    long long r = pow3(3 * n - 2);
    auto cached = cache.load_cert("cert_counting" + suffix,
                                  json{{"r", r}, {"t", rep.t}});
    Certificate c;
    if (cached) {
      c = *cached;
    } else {
      AdversarialInstance inst = build_adversarial_lists(
          static_cast<int>(r), rep.t, opt.capacity_cap);
      CountingCertificate counting = verify_counting_argument(inst);
      c = counting.to_certificate();
    }
    if (c.status != CertStatus::infeasible_certified) {
      rep.stages.push_back(std::move(c));
      return fail("counting-argument");
    }
    push(std::move(c), "cert_counting" + suffix);
  }

  // final arithmetic: chi_l lower bound vs chi
  if (rep.chi_l_lower < rep.chi_value) return fail("conclusion");
  rep.status = CertStatus::verified;
  return rep;
}

// ---------------------------------------------------------------------
// Re-checker: consumes nothing but the certificate JSON, rebuilds the
// named objects from the recorded parameters and re-derives the verdict.
// ---------------------------------------------------------------------

struct RecheckResult {
  bool ok = false;
  std::string message;
};

inline RecheckResult recheck_certificate(const json& j,
                                         int capacity_cap = kDefaultCapacity);

namespace detail {

inline RecheckResult recheck_fail(const std::string& why) { return {false, why}; }

inline RecheckResult recheck_compare(const Certificate& fresh, const json& old) {
  if (json(to_string(fresh.status)) != old.at("status"))
    return recheck_fail("status mismatch: recomputed " +
                        std::string(to_string(fresh.status)));
  if (old.contains("stats") && fresh.to_json()["stats"] != old["stats"])
    return recheck_fail("stats mismatch");
  return {true, "ok"};
}

}  // namespace detail

inline RecheckResult recheck_certificate(const json& j, int capacity_cap) {
  std::string claim = j.value("claim", "");
  const json params = j.value("parameters", json::object());
  try {
    if (claim == "distance-lemma") {
      CayleyBundle b = build_cayley(params.at("m").get<int>(), capacity_cap);
      Certificate fresh = verify_distance_lemma(b);
      auto r = detail::recheck_compare(fresh, j);
      if (!r.ok) return r;
      if (j.contains("witness") && fresh.to_json()["witness"] != j["witness"])
        return detail::recheck_fail("witness mismatch");
      return r;
    }
    if (claim == "power-multipartite") {
      CayleyBundle b = build_cayley(params.at("m").get<int>(), capacity_cap);
      Certificate fresh = verify_power_multipartite(b, params.at("n").get<int>());
      return detail::recheck_compare(fresh, j);
    }
    if (claim == "structure-theorem") {
      Certificate fresh =
          verify_structure_theorem(params.at("n").get<int>(), capacity_cap);
      return detail::recheck_compare(fresh, j);
    }
    if (claim == "power-composition") {
      Certificate fresh = verify_power_composition(
          params.at("s").get<int>(), params.at("k").get<int>(), capacity_cap);
      return detail::recheck_compare(fresh, j);
    }
    if (claim == "chi-h") {
      int n = params.at("n").get<int>();
      Certificate fresh = verify_chi_of_h(n, capacity_cap);
      auto r = detail::recheck_compare(fresh, j);
      if (!r.ok) return r;
      // explicit witnesses, when recorded, must stand on their own
      if (j.contains("witness") && j["witness"].contains("clique")) {
        Graph lex = lexicographic_product(
            make_complete(static_cast<int>(pow3(3 * n - 2))), k3_box_k3());
        auto clique = j["witness"]["clique"].get<std::vector<int>>();
        if (static_cast<long long>(clique.size()) != pow3(3 * n - 1))
          return detail::recheck_fail("witness clique has wrong size");
        for (std::size_t a = 0; a < clique.size(); ++a)
          for (std::size_t b = a + 1; b < clique.size(); ++b)
            if (!lex.adjacent(clique[a], clique[b]))
              return detail::recheck_fail("witness clique pair not adjacent");
        auto col = j["witness"]["coloring"].get<Coloring>();
        if (!is_proper(lex, col))
          return detail::recheck_fail("witness coloring not proper");
      }
      return r;
    }
    if (claim == "counting-argument") {
      AdversarialInstance inst = build_adversarial_lists(
          params.at("r").get<int>(), params.at("t").get<int>(), capacity_cap);
      CountingCertificate fresh = verify_counting_argument(inst);
      if (json(to_string(fresh.conclusion)) != j.at("status"))
        return detail::recheck_fail("counting conclusion mismatch");
      if (fresh.to_json()["stats"] != j.at("stats"))
        return detail::recheck_fail("counting stats mismatch");
      return {true, "ok"};
    }
    if (claim == "lexico-chromatic") {
      Graph g = import_json_graph(params.at("g").dump());
      Graph h = import_json_graph(params.at("h").dump());
      Certificate fresh = verify_lexico_proposition(g, h);
      return detail::recheck_compare(fresh, j);
    }
    if (claim == "theorem") {
      TheoremReport rep = TheoremReport::from_json(j);
      if (rep.chi_value != pow3(3 * rep.n - 1))
        return detail::recheck_fail("chi is not 3^(3n-1)");
      if (rep.t != default_adversarial_t(rep.n) || rep.chi_l_lower != rep.t + 1)
        return detail::recheck_fail("chi_l lower bound arithmetic is off");
      for (const auto& stage : j.at("stages")) {
        auto r = recheck_certificate(stage, capacity_cap);
        if (!r.ok)
          return detail::recheck_fail(
              "stage " + stage.value("claim", "?") + ": " + r.message);
      }
      return {true, "ok"};
    }
  } catch (const std::exception& e) {
    return detail::recheck_fail(std::string("recheck raised: ") + e.what());
  }
  return detail::recheck_fail("unknown claim: " + claim);
}

}  // namespace chroma
