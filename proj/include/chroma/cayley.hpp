#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "chroma/certificate.hpp"
#include "chroma/distance.hpp"
#include "chroma/graph.hpp"

namespace chroma {

// Element of Z_3^m, coordinates in {0,1,2}.
using GroupVector = std::vector<std::uint8_t>;

inline long long pow3(int e) {
  long long r = 1;
  while (e-- > 0) r *= 3;
  return r;
}

inline GroupVector vec_add(const GroupVector& u, const GroupVector& v) {
  if (u.size() != v.size())
    throw invalid_argument_error("vec_add: length mismatch");
  GroupVector w(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    w[i] = static_cast<std::uint8_t>((u[i] + v[i]) % 3);
  return w;
}

inline GroupVector vec_neg(const GroupVector& u) {
  GroupVector w(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    w[i] = static_cast<std::uint8_t>((3 - u[i]) % 3);
  return w;
}

inline int coordinate_sum_mod3(const GroupVector& u) {
  int s = 0;
  for (auto x : u) s += x;
  return s % 3;
}

inline int nonzero_count(const GroupVector& u) {
  int c = 0;
  for (auto x : u)
    if (x) ++c;
  return c;
}

// Vacuously true for the zero vector.
inline bool nonzeros_all_identical(const GroupVector& u) {
  int seen = 0;
  for (auto x : u) {
    if (!x) continue;
    if (seen == 0) seen = x;
    else if (seen != x) return false;
  }
  return true;
}

inline std::string vector_label(const GroupVector& u) {
  std::string s;
  s.reserve(u.size());
  for (auto x : u) s.push_back(static_cast<char>('0' + x));
  return s;
}

inline GroupVector all_ones(int m) { return GroupVector(m, 1); }
inline GroupVector all_twos(int m) { return GroupVector(m, 2); }

// Gamma_m = { z in Z_3^m : sum z_i = 0 (mod 3) }, the index-3 subgroup.
// Rank in lexicographic order is the base-3 value of the first m-1
// coordinates; the last coordinate is forced.
inline GroupVector gamma_vector(int m, long long index) {
  GroupVector v(static_cast<std::size_t>(m), 0);
  int sum = 0;
  for (int i = m - 2; i >= 0; --i) {
    v[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(index % 3);
    sum += v[static_cast<std::size_t>(i)];
    index /= 3;
  }
  v[static_cast<std::size_t>(m - 1)] = static_cast<std::uint8_t>((3 - sum % 3) % 3);
  return v;
}

inline long long gamma_index(const GroupVector& v) {
  if (coordinate_sum_mod3(v) != 0)
    throw invalid_argument_error("gamma_index: vector not in Gamma_m");
  long long idx = 0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) idx = idx * 3 + v[i];
  return idx;
}

inline std::vector<GroupVector> enumerate_gamma(int m) {
  if (m < 1) throw invalid_argument_error("enumerate_gamma: need m >= 1");
  long long n = pow3(m - 1);
  std::vector<GroupVector> out;
  out.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) out.push_back(gamma_vector(m, i));
  return out;
}

// X_m: all m(m-1) vectors with a single 1 at position i and a single 2
// at position j != i. Closed under negation since -x_{i,j} = x_{j,i}.
inline std::vector<GroupVector> generators(int m) {
  if (m < 2) throw invalid_argument_error("generators: need m >= 2");
  std::vector<GroupVector> out;
  out.reserve(static_cast<std::size_t>(m) * (m - 1));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      GroupVector x(static_cast<std::size_t>(m), 0);
      x[static_cast<std::size_t>(i)] = 1;
      x[static_cast<std::size_t>(j)] = 2;
      out.push_back(std::move(x));
    }
  return out;
}

// Gamma_m together with the Cayley graph on it generated by X_m.
struct CayleyBundle {
  int m = 0;
  std::vector<GroupVector> vertices;  // lexicographic order
  Graph graph;

  int index_of(const GroupVector& v) const {
    return static_cast<int>(gamma_index(v));
  }
};

inline CayleyBundle build_cayley(int m, int capacity_cap = kDefaultCapacity) {
  if (m < 2) throw invalid_argument_error("build_cayley: need m >= 2");
  long long n = pow3(m - 1);
  if (n > capacity_cap)
    throw capacity_error("build_cayley: 3^(m-1) = " + std::to_string(n) +
                         " vertices exceeds cap " + std::to_string(capacity_cap));
  CayleyBundle b;
  b.m = m;
  b.vertices = enumerate_gamma(m);
  b.graph = Graph(static_cast<int>(n));
  auto gens = generators(m);
  for (int v = 0; v < static_cast<int>(n); ++v) {
    for (const auto& x : gens) {
      int w = static_cast<int>(gamma_index(vec_add(b.vertices[v], x)));
      if (w > v) b.graph.add_edge(v, w);
    }
  }
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (const auto& v : b.vertices) labels.push_back(vector_label(v));
  b.graph.set_labels(std::move(labels));
  return b;
}

// Partition of Gamma_{3n} into the triples {y, y+a, y+b} with
// a = (1,...,1), b = (2,...,2). Classes are ordered by smallest member
// index, members ascending.
struct ClassPartition {
  std::vector<std::array<int, 3>> classes;
  std::vector<int> class_of;
  std::vector<int> pos_in_class;
};

inline ClassPartition equivalence_classes(const CayleyBundle& b) {
  if (b.m % 3 != 0)
    throw invalid_argument_error(
        "equivalence_classes: all-ones vector lies in Gamma_m only when 3 | m");
  int n = b.graph.vertex_count();
  GroupVector a = all_ones(b.m), bb = all_twos(b.m);
  ClassPartition p;
  p.class_of.assign(static_cast<std::size_t>(n), -1);
  p.pos_in_class.assign(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v) {
    if (p.class_of[static_cast<std::size_t>(v)] != -1) continue;
    std::array<int, 3> cls = {
        v, static_cast<int>(gamma_index(vec_add(b.vertices[v], a))),
        static_cast<int>(gamma_index(vec_add(b.vertices[v], bb)))};
    std::sort(cls.begin(), cls.end());
    int rank = static_cast<int>(p.classes.size());
    for (int pos = 0; pos < 3; ++pos) {
      int u = cls[static_cast<std::size_t>(pos)];
      if (p.class_of[static_cast<std::size_t>(u)] != -1)
        throw internal_error("equivalence_classes: relation not a partition");
      p.class_of[static_cast<std::size_t>(u)] = rank;
      p.pos_in_class[static_cast<std::size_t>(u)] = pos;
    }
    p.classes.push_back(cls);
  }
  return p;
}

// Checks, for every y in Gamma_{3n}: 3*d(0,y) <= 2*nnz(y), with equality
// exactly when the nonzero coordinates of y are all the same value.
// One BFS from 0 suffices for the exhaustive statement-level check.
inline Certificate verify_distance_lemma(const CayleyBundle& b) {
  if (b.m % 3 != 0)
    throw invalid_argument_error("verify_distance_lemma: need m = 3n");
  int n3 = b.m / 3;
  Certificate cert;
  cert.claim = "distance-lemma";
  cert.parameters = {{"m", b.m}, {"n", n3}};
  cert.notes.push_back("statement-level exhaustive check over all of Gamma_m");
  if (n3 < 2)
    cert.notes.push_back("n = " + std::to_string(n3) +
                         " is outside the lemma hypothesis n >= 2");

  auto dist = bfs_distances(b.graph, 0);
  int max_d = 0;
  long long equality_count = 0;
  std::vector<std::string> max_vertices;
  for (int v = 0; v < b.graph.vertex_count(); ++v) {
    std::uint16_t d = dist[static_cast<std::size_t>(v)];
    const GroupVector& y = b.vertices[static_cast<std::size_t>(v)];
    int nnz = nonzero_count(y);
    bool identical = nonzeros_all_identical(y);
    if (d == kInfiniteDistance) {
      cert.status = CertStatus::failed;
      cert.witness = {{"vector", vector_label(y)}, {"reason", "unreachable"}};
      return cert;
    }
    if (3 * d > 2 * nnz) {
      cert.status = CertStatus::failed;
      cert.witness = {{"vector", vector_label(y)},
                      {"distance", d},
                      {"nonzero_coordinates", nnz},
                      {"reason", "bound violated"}};
      return cert;
    }
    bool equality = (3 * d == 2 * nnz);
    if (equality != identical) {
      cert.status = CertStatus::failed;
      cert.witness = {{"vector", vector_label(y)},
                      {"distance", d},
                      {"nonzero_coordinates", nnz},
                      {"reason", equality ? "equality on mixed nonzeros"
                                          : "strict on identical nonzeros"}};
      return cert;
    }
    if (equality && v != 0) ++equality_count;
    if (d > max_d) {
      max_d = d;
      max_vertices.clear();
    }
    if (d == max_d) max_vertices.push_back(vector_label(y));
  }
  cert.status = CertStatus::verified;
  cert.stats = {{"vertices", b.graph.vertex_count()},
                {"max_distance", max_d},
                {"equality_vertices", equality_count}};
  cert.witness = {{"max_distance", max_d},
                  {"attained_by", max_vertices}};
  return cert;
}

// G_{3n}^{2n-1} must equal the complete multipartite graph with the
// equivalence classes as partite sets, under the class-major bijection
// y -> 3*class(y) + position(y).
inline Certificate verify_power_multipartite(const CayleyBundle& b, int n,
                                             int threads = 0) {
  Certificate cert;
  cert.claim = "power-multipartite";
  cert.parameters = {{"m", b.m}, {"n", n}, {"power", 2 * n - 1}};
  if (b.m != 3 * n)
    throw invalid_argument_error("verify_power_multipartite: m != 3n");
  if (n < 2)
    cert.notes.push_back("n = " + std::to_string(n) +
                         " is outside the lemma hypothesis n >= 2");

  auto classes = equivalence_classes(b);
  long long parts = pow3(b.m - 2);
  Graph power = graph_power(b.graph, 2 * n - 1, threads);
  Graph multi = make_complete_multipartite(3, static_cast<int>(parts));
  std::vector<int> bij(static_cast<std::size_t>(b.graph.vertex_count()));
  for (int v = 0; v < b.graph.vertex_count(); ++v)
    bij[static_cast<std::size_t>(v)] =
        3 * classes.class_of[static_cast<std::size_t>(v)] +
        classes.pos_in_class[static_cast<std::size_t>(v)];

  for (int u = 0; u < power.vertex_count(); ++u) {
    for (int v = u + 1; v < power.vertex_count(); ++v) {
      bool pa = power.adjacent(u, v);
      bool ma = multi.adjacent(bij[static_cast<std::size_t>(u)],
                               bij[static_cast<std::size_t>(v)]);
      if (pa != ma) {
        cert.status = CertStatus::failed;
        cert.witness = {{"u", vector_label(b.vertices[static_cast<std::size_t>(u)])},
                        {"v", vector_label(b.vertices[static_cast<std::size_t>(v)])},
                        {"power_adjacent", pa},
                        {"multipartite_adjacent", ma}};
        return cert;
      }
    }
  }
  cert.status = CertStatus::verified;
  cert.stats = {{"vertices", power.vertex_count()},
                {"power_edges", power.edge_count()},
                {"partite_sets", parts},
                {"part_size", 3}};
  cert.witness = {{"bijection", "class-major: y -> 3*class(y) + position(y)"}};
  return cert;
}

}  // namespace chroma
