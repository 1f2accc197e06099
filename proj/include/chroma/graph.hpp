#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "chroma/bits.hpp"
#include "chroma/errors.hpp"

namespace chroma {

// Default cap on constructed vertex counts. Large enough for every graph
// this tool targets, small enough to catch runaway parameters.
inline constexpr int kDefaultCapacity = 20000;

// Undirected simple graph on vertices 0..n-1. Adjacency is bit-packed,
// one row of ceil(n/64) words per vertex; add_edge keeps the relation
// symmetric and loop-free by construction. Labels are optional and, when
// present, total and distinct.
class Graph {
 public:
  Graph() = default;

  explicit Graph(int n) {
    if (n < 0) throw invalid_argument_error("graph: negative vertex count");
    n_ = n;
    words_ = bits::words_for(n);
    adj_.assign(static_cast<std::size_t>(n) * words_, 0);
  }

  int vertex_count() const { return n_; }
  std::size_t row_words() const { return words_; }

  std::span<const std::uint64_t> row(int v) const {
    return {adj_.data() + static_cast<std::size_t>(v) * words_, words_};
  }
  std::span<std::uint64_t> row_mut(int v) {
    return {adj_.data() + static_cast<std::size_t>(v) * words_, words_};
  }

  bool adjacent(int u, int v) const {
    check_vertex(u);
    check_vertex(v);
    return bits::test(row(u), v);
  }

  void add_edge(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw invalid_argument_error("graph: self-loop rejected");
    bits::set(row_mut(u), v);
    bits::set(row_mut(v), u);
  }

  int degree(int v) const { return bits::count(row(v)); }

  long long edge_count() const {
    long long twice = 0;
    for (int v = 0; v < n_; ++v) twice += degree(v);
    return twice / 2;
  }

  std::vector<int> neighbors(int v) const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(degree(v)));
    bits::for_each(row(v), [&](int u) { out.push_back(u); });
    return out;
  }

  template <class F>
  void for_each_neighbor(int v, F&& f) const {
    bits::for_each(row(v), f);
  }

  bool has_labels() const { return !labels_.empty(); }
  const std::string& label(int v) const {
    check_vertex(v);
    return labels_[static_cast<std::size_t>(v)];
  }
  void set_labels(std::vector<std::string> labels) {
    if (!labels.empty()) {
      if (static_cast<int>(labels.size()) != n_)
        throw invalid_argument_error("graph: label count mismatch");
      std::unordered_set<std::string_view> seen(labels.begin(), labels.end());
      if (static_cast<int>(seen.size()) != n_)
        throw invalid_argument_error("graph: labels must be distinct");
    }
    labels_ = std::move(labels);
  }
  const std::vector<std::string>& labels() const { return labels_; }
  void clear_labels() { labels_.clear(); }

  // Adjacency-only equality; vertex order matters, labels do not.
  bool same_adjacency(const Graph& o) const {
    return n_ == o.n_ && adj_ == o.adj_;
  }

  bool operator==(const Graph& o) const {
    return same_adjacency(o) && labels_ == o.labels_;
  }

  // Full invariant sweep: loop-free diagonal, symmetric relation, no
  // stray bits past column n, labels distinct when present. O(n^2/64).
  void check_invariants() const {
    for (int v = 0; v < n_; ++v) {
      if (bits::test(row(v), v)) throw internal_error("graph: self-loop");
      int tail = n_ & 63;
      if (tail && (row(v).back() >> tail))
        throw internal_error("graph: bits past vertex range");
    }
    for (int u = 0; u < n_; ++u)
      for (int v = u + 1; v < n_; ++v)
        if (bits::test(row(u), v) != bits::test(row(v), u))
          throw internal_error("graph: asymmetric adjacency");
    if (!labels_.empty()) {
      std::unordered_set<std::string> seen(labels_.begin(), labels_.end());
      if (static_cast<int>(seen.size()) != n_)
        throw internal_error("graph: duplicate labels");
    }
  }

 private:
  void check_vertex(int v) const {
    if (v < 0 || v >= n_)
      throw invalid_argument_error("graph: vertex out of range");
  }

  int n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> adj_;
  std::vector<std::string> labels_;
};

inline Graph make_complete(int n) {
  if (n < 1) throw invalid_argument_error("make_complete: need n >= 1");
  Graph g(n);
  for (int v = 0; v < n; ++v) {
    auto r = g.row_mut(v);
    bits::set_range(r, 0, n);
    bits::reset(r, v);
  }
  return g;
}

// K_{part_size * parts}: `parts` blocks of `part_size` consecutive
// vertices, adjacent iff in different blocks. Block of v is
// v / part_size.
inline Graph make_complete_multipartite(int part_size, int parts) {
  if (part_size < 1 || parts < 1)
    throw invalid_argument_error("make_complete_multipartite: zero argument");
  int n = part_size * parts;
  Graph g(n);
  for (int v = 0; v < n; ++v) {
    int block = v / part_size;
    auto r = g.row_mut(v);
    bits::set_range(r, 0, n);
    bits::clear_range(r, block * part_size, (block + 1) * part_size);
  }
  return g;
}

namespace detail {

inline std::vector<std::string> combine_labels(const Graph& g, const Graph& h) {
  // Products carry labels only when both factors do.
  if (!g.has_labels() || !h.has_labels()) return {};
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(g.vertex_count()) * h.vertex_count());
  for (int a = 0; a < g.vertex_count(); ++a)
    for (int b = 0; b < h.vertex_count(); ++b)
      out.push_back(g.label(a) + "," + h.label(b));
  return out;
}

}  // namespace detail

// Cartesian product G box H. Vertex (a,b) has index a*|V(H)| + b (left
// factor major); edges move in exactly one coordinate.
inline Graph cartesian_product(const Graph& g, const Graph& h) {
  int gn = g.vertex_count(), hn = h.vertex_count();
  Graph p(gn * hn);
  for (int a = 0; a < gn; ++a) {
    g.for_each_neighbor(a, [&](int a2) {
      if (a2 < a) return;
      for (int b = 0; b < hn; ++b) p.add_edge(a * hn + b, a2 * hn + b);
    });
    for (int b = 0; b < hn; ++b) {
      h.for_each_neighbor(b, [&](int b2) {
        if (b2 > b) p.add_edge(a * hn + b, a * hn + b2);
      });
    }
  }
  p.set_labels(detail::combine_labels(g, h));
  return p;
}

// Lexicographic product G[H], same vertex ordering as the cartesian
// product: (a1,b1) ~ (a2,b2) iff a1a2 in E(G), or a1 = a2 and
// b1b2 in E(H).
inline Graph lexicographic_product(const Graph& g, const Graph& h) {
  int gn = g.vertex_count(), hn = h.vertex_count();
  Graph p(gn * hn);
  for (int a = 0; a < gn; ++a) {
    for (int b = 0; b < hn; ++b) {
      auto r = p.row_mut(a * hn + b);
      g.for_each_neighbor(a, [&](int a2) {
        bits::set_range(r, a2 * hn, (a2 + 1) * hn);
      });
      h.for_each_neighbor(b, [&](int b2) { bits::set(r, a * hn + b2); });
    }
  }
  p.set_labels(detail::combine_labels(g, h));
  return p;
}

// Subgraph induced by `keep`, reindexed 0..|keep|-1 in the given order.
// Original identities are preserved as labels (existing label if any,
// otherwise the original index).
inline Graph induced_subgraph(const Graph& g, std::span<const int> keep) {
  std::vector<int> back(static_cast<std::size_t>(g.vertex_count()), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    int v = keep[i];
    if (v < 0 || v >= g.vertex_count())
      throw invalid_argument_error("induced_subgraph: vertex out of range");
    if (back[static_cast<std::size_t>(v)] != -1)
      throw invalid_argument_error("induced_subgraph: duplicate vertex");
    back[static_cast<std::size_t>(v)] = static_cast<int>(i);
  }
  Graph s(static_cast<int>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = i + 1; j < keep.size(); ++j)
      if (g.adjacent(keep[i], keep[j]))
        s.add_edge(static_cast<int>(i), static_cast<int>(j));
  std::vector<std::string> labels;
  labels.reserve(keep.size());
  for (int v : keep)
    labels.push_back(g.has_labels() ? g.label(v) : std::to_string(v));
  s.set_labels(std::move(labels));
  return s;
}

inline Graph complement(const Graph& g) {
  int n = g.vertex_count();
  Graph c(n);
  for (int v = 0; v < n; ++v) {
    auto r = c.row_mut(v);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = ~g.row(v)[k];
    bits::reset(r, v);
    int tail = n & 63;
    if (tail) r.back() &= (~std::uint64_t{0}) >> (64 - tail);
  }
  if (g.has_labels()) c.set_labels(g.labels());
  return c;
}

// True iff `bijection` (a permutation V(a) -> V(b)) preserves adjacency
// in both directions. Isomorphism is only ever checked against an
// explicitly constructed map, never searched for.
inline bool is_same_labeled(const Graph& a, const Graph& b,
                            std::span<const int> bijection) {
  int n = a.vertex_count();
  if (b.vertex_count() != n || static_cast<int>(bijection.size()) != n)
    throw invalid_argument_error("is_same_labeled: bijection size mismatch");
  std::vector<char> hit(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v) {
    int w = bijection[static_cast<std::size_t>(v)];
    if (w < 0 || w >= n || hit[static_cast<std::size_t>(w)])
      throw invalid_argument_error("is_same_labeled: not a bijection");
    hit[static_cast<std::size_t>(w)] = 1;
  }
  for (int u = 0; u < n; ++u) {
    int su = bijection[static_cast<std::size_t>(u)];
    for (int v = u + 1; v < n; ++v) {
      if (bits::test(a.row(u), v) !=
          bits::test(b.row(su), bijection[static_cast<std::size_t>(v)]))
        return false;
    }
  }
  return true;
}

inline bool is_same_labeled(const Graph& a, const Graph& b) {
  if (a.vertex_count() != b.vertex_count())
    throw invalid_argument_error("is_same_labeled: vertex count mismatch");
  return a.same_adjacency(b);
}

}  // namespace chroma
