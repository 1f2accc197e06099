#pragma once

#include <cstdint>
#include <thread>
#include <vector>

#include "chroma/graph.hpp"

namespace chroma {

// Explicit sentinel for unreachable pairs. Never mixed into arithmetic:
// every consumer tests for it before adding.
inline constexpr std::uint16_t kInfiniteDistance = 0xFFFF;

class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(int n)
      : n_(n),
        d_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
           kInfiniteDistance) {}

  int vertex_count() const { return n_; }

  std::uint16_t at(int u, int v) const {
    return d_[static_cast<std::size_t>(u) * n_ + v];
  }
  void set(int u, int v, std::uint16_t d) {
    d_[static_cast<std::size_t>(u) * n_ + v] = d;
  }
  bool reachable(int u, int v) const { return at(u, v) != kInfiniteDistance; }

  // Largest finite entry; -1 when some pair is unreachable.
  int max_distance() const {
    int m = 0;
    for (auto d : d_) {
      if (d == kInfiniteDistance) return -1;
      if (d > m) m = d;
    }
    return m;
  }

 private:
  int n_ = 0;
  std::vector<std::uint16_t> d_;
};

namespace detail {

template <class F>
inline void parallel_rows(int n, int threads, F&& body) {
  if (threads <= 0) {
    unsigned hc = std::thread::hardware_concurrency();
    threads = hc ? static_cast<int>(hc) : 1;
  }
  if (threads <= 1 || n < 256) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    int lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

// Single-source BFS distances. `depth_cap` (when >= 0) stops the scan
// beyond that depth; capped-out vertices read as unreachable.
inline std::vector<std::uint16_t> bfs_distances(const Graph& g, int src,
                                                int depth_cap = -1) {
  if (src < 0 || src >= g.vertex_count())
    throw invalid_argument_error("bfs: source out of range");
  std::vector<std::uint16_t> dist(static_cast<std::size_t>(g.vertex_count()),
                                  kInfiniteDistance);
  std::vector<int> queue;
  queue.reserve(static_cast<std::size_t>(g.vertex_count()));
  dist[static_cast<std::size_t>(src)] = 0;
  queue.push_back(src);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    std::uint16_t dv = dist[static_cast<std::size_t>(v)];
    if (depth_cap >= 0 && dv >= depth_cap) continue;
    g.for_each_neighbor(v, [&](int u) {
      if (dist[static_cast<std::size_t>(u)] == kInfiniteDistance) {
        dist[static_cast<std::size_t>(u)] = static_cast<std::uint16_t>(dv + 1);
        queue.push_back(u);
      }
    });
  }
  return dist;
}

// BFS from every source. Sources are independent, so the row partition
// parallelizes without affecting the result.
inline DistanceMatrix all_pairs_distances(const Graph& g, int threads = 0) {
  int n = g.vertex_count();
  DistanceMatrix m(n);
  detail::parallel_rows(n, threads, [&](int lo, int hi) {
    for (int s = lo; s < hi; ++s) {
      auto dist = bfs_distances(g, s);
      for (int v = 0; v < n; ++v) m.set(s, v, dist[static_cast<std::size_t>(v)]);
    }
  });
  return m;
}

inline bool is_connected(const Graph& g) {
  if (g.vertex_count() == 0) return true;
  auto d = bfs_distances(g, 0);
  for (auto x : d)
    if (x == kInfiniteDistance) return false;
  return true;
}

// Max eccentricity; -1 for disconnected or empty graphs.
inline int diameter(const Graph& g) {
  if (g.vertex_count() == 0) return -1;
  int best = 0;
  for (int s = 0; s < g.vertex_count(); ++s) {
    auto d = bfs_distances(g, s);
    for (auto x : d) {
      if (x == kInfiniteDistance) return -1;
      if (x > best) best = x;
    }
  }
  return best;
}

// k-th power: u ~ v iff 1 <= d_g(u,v) <= k. Computed as k-1 rounds of
// truncated BFS run for all sources at once on the bit rows: ball(v)
// grows by one step per round via OR of the neighbors' balls. Word
// parallelism is what keeps the 19683-vertex instances tractable.
inline Graph graph_power(const Graph& g, int k, int threads = 0) {
  if (k < 1) throw invalid_argument_error("graph_power: need k >= 1");
  int n = g.vertex_count();
  std::size_t words = g.row_words();

  // ball = closed neighborhood reachable within the rounds done so far
  std::vector<std::uint64_t> ball(static_cast<std::size_t>(n) * words);
  for (int v = 0; v < n; ++v) {
    auto src = g.row(v);
    std::copy(src.begin(), src.end(),
              ball.begin() + static_cast<std::size_t>(v) * words);
    bits::set({ball.data() + static_cast<std::size_t>(v) * words, words}, v);
  }

  std::vector<std::uint64_t> next(ball.size());
  for (int round = 1; round < k; ++round) {
    detail::parallel_rows(n, threads, [&](int lo, int hi) {
      for (int v = lo; v < hi; ++v) {
        std::uint64_t* acc = next.data() + static_cast<std::size_t>(v) * words;
        const std::uint64_t* own =
            ball.data() + static_cast<std::size_t>(v) * words;
        std::copy(own, own + words, acc);
        g.for_each_neighbor(v, [&](int w) {
          const std::uint64_t* bw =
              ball.data() + static_cast<std::size_t>(w) * words;
          for (std::size_t x = 0; x < words; ++x) acc[x] |= bw[x];
        });
      }
    });
    if (next == ball) break;  // ball saturated: k at or past eccentricity
    ball.swap(next);
  }

  Graph p(n);
  for (int v = 0; v < n; ++v) {
    auto r = p.row_mut(v);
    const std::uint64_t* src = ball.data() + static_cast<std::size_t>(v) * words;
    std::copy(src, src + words, r.begin());
    bits::reset(r, v);
  }
  if (g.has_labels()) p.set_labels(g.labels());
  return p;
}

}  // namespace chroma
