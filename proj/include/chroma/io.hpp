#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

#include "chroma/graph.hpp"

namespace chroma {

enum class GraphFormat { graph6, dimacs, json };

inline const char* format_name(GraphFormat f) {
  switch (f) {
    case GraphFormat::graph6: return "graph6";
    case GraphFormat::dimacs: return "dimacs";
    case GraphFormat::json: return "json";
  }
  return "?";
}

// ---------------------------------------------------------------------
// graph6 (McKay's header-less text format). Upper triangle in column
// order x(0,1), x(0,2), x(1,2), x(0,3), ..., packed 6 bits per byte,
// each byte offset by 63.
// ---------------------------------------------------------------------

inline std::string export_graph6(const Graph& g) {
  int n = g.vertex_count();
  std::string out;
  if (n <= 62) {
    out.push_back(static_cast<char>(n + 63));
  } else if (n <= 258047) {
    out.push_back(126);
    out.push_back(static_cast<char>(((n >> 12) & 63) + 63));
    out.push_back(static_cast<char>(((n >> 6) & 63) + 63));
    out.push_back(static_cast<char>((n & 63) + 63));
  } else {
    throw capacity_error("graph6: vertex count beyond 3-byte size form");
  }
  int acc = 0, nbits = 0;
  for (int v = 1; v < n; ++v) {
    auto rv = g.row(v);
    for (int u = 0; u < v; ++u) {
      acc = (acc << 1) | (bits::test(rv, u) ? 1 : 0);
      if (++nbits == 6) {
        out.push_back(static_cast<char>(acc + 63));
        acc = 0;
        nbits = 0;
      }
    }
  }
  if (nbits) out.push_back(static_cast<char>((acc << (6 - nbits)) + 63));
  return out;
}

inline Graph import_graph6(std::string_view s) {
  std::size_t pos = 0;
  auto need = [&](std::size_t k) {
    if (pos + k > s.size()) throw parse_error("graph6: truncated input", s.size());
  };
  auto sixbits = [&]() {
    need(1);
    unsigned char c = static_cast<unsigned char>(s[pos]);
    if (c < 63 || c > 126) throw parse_error("graph6: byte out of range", pos);
    ++pos;
    return static_cast<int>(c - 63);
  };
  need(1);
  long long n;
  if (static_cast<unsigned char>(s[0]) == 126) {
    ++pos;
    if (pos < s.size() && static_cast<unsigned char>(s[pos]) == 126)
      throw parse_error("graph6: 8-byte size form unsupported", pos);
    long long a = sixbits(), b = sixbits(), c = sixbits();
    n = (a << 12) | (b << 6) | c;
  } else {
    n = sixbits();
  }
  Graph g(static_cast<int>(n));
  int acc = 0, nbits = 0;
  std::size_t bit_at = pos;
  for (int v = 1; v < n; ++v) {
    for (int u = 0; u < v; ++u) {
      if (nbits == 0) {
        bit_at = pos;
        acc = sixbits();
        nbits = 6;
      }
      if ((acc >> (nbits - 1)) & 1) g.add_edge(u, v);
      --nbits;
    }
  }
  if (nbits && (acc & ((1 << nbits) - 1)))
    throw parse_error("graph6: nonzero padding bits", bit_at);
  if (pos != s.size()) throw parse_error("graph6: trailing bytes", pos);
  return g;
}

// ---------------------------------------------------------------------
// DIMACS edge format: "p edge N M" then M lines "e u v", 1-based.
// Comment lines start with 'c'.
// ---------------------------------------------------------------------

inline std::string export_dimacs(const Graph& g) {
  std::string out = "p edge " + std::to_string(g.vertex_count()) + " " +
                    std::to_string(g.edge_count()) + "\n";
  for (int u = 0; u < g.vertex_count(); ++u) {
    g.for_each_neighbor(u, [&](int v) {
      if (v > u)
        out += "e " + std::to_string(u + 1) + " " + std::to_string(v + 1) + "\n";
    });
  }
  return out;
}

namespace detail {

struct DimacsScanner {
  std::string_view s;
  std::size_t pos = 0;

  bool done() const { return pos >= s.size(); }
  void skip_ws_in_line() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  void skip_line() {
    while (pos < s.size() && s[pos] != '\n') ++pos;
    if (pos < s.size()) ++pos;
  }
  long long read_int() {
    skip_ws_in_line();
    std::size_t at = pos;
    bool any = false;
    long long x = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      x = x * 10 + (s[pos] - '0');
      ++pos;
      any = true;
      if (x > (1LL << 40)) throw parse_error("dimacs: number too large", at);
    }
    if (!any) throw parse_error("dimacs: expected integer", at);
    return x;
  }
};

}  // namespace detail

inline Graph import_dimacs(std::string_view s) {
  detail::DimacsScanner sc{s};
  bool got_header = false;
  long long n = 0, m = 0, edges_seen = 0;
  Graph g;
  while (!sc.done()) {
    std::size_t line_at = sc.pos;
    sc.skip_ws_in_line();
    if (sc.done()) break;
    char tag = s[sc.pos];
    if (tag == '\n' || tag == '\r') {
      sc.skip_line();
      continue;
    }
    if (tag == 'c') {
      sc.skip_line();
      continue;
    }
    if (tag == 'p') {
      if (got_header) throw parse_error("dimacs: duplicate header", line_at);
      ++sc.pos;
      sc.skip_ws_in_line();
      if (s.compare(sc.pos, 4, "edge") != 0)
        throw parse_error("dimacs: expected 'edge' after p", sc.pos);
      sc.pos += 4;
      // tolerate "edges"
      if (sc.pos < s.size() && s[sc.pos] == 's') ++sc.pos;
      n = sc.read_int();
      m = sc.read_int();
      g = Graph(static_cast<int>(n));
      got_header = true;
      sc.skip_line();
      continue;
    }
    if (tag == 'e') {
      if (!got_header) throw parse_error("dimacs: edge before header", line_at);
      ++sc.pos;
      std::size_t at = sc.pos;
      long long u = sc.read_int();
      long long v = sc.read_int();
      if (u < 1 || u > n || v < 1 || v > n)
        throw parse_error("dimacs: endpoint out of range", at);
      if (u == v) throw parse_error("dimacs: self-loop", at);
      g.add_edge(static_cast<int>(u - 1), static_cast<int>(v - 1));
      ++edges_seen;
      sc.skip_line();
      continue;
    }
    throw parse_error("dimacs: unknown line type", sc.pos);
  }
  if (!got_header) throw parse_error("dimacs: missing header", 0);
  if (edges_seen != m) throw parse_error("dimacs: edge count mismatch", s.size());
  return g;
}

// ---------------------------------------------------------------------
// JSON: {"n": N, "edges": [[u,v],...], "labels": [...]}. The only format
// that keeps labels.
// ---------------------------------------------------------------------

inline std::string export_json_graph(const Graph& g) {
  nlohmann::json j;
  j["n"] = g.vertex_count();
  auto edges = nlohmann::json::array();
  for (int u = 0; u < g.vertex_count(); ++u) {
    g.for_each_neighbor(u, [&](int v) {
      if (v > u) edges.push_back({u, v});
    });
  }
  j["edges"] = std::move(edges);
  if (g.has_labels()) j["labels"] = g.labels();
  return j.dump(2) + "\n";
}

inline Graph import_json_graph(std::string_view s) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(s);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("json: ") + e.what(), e.byte);
  }
  try {
    int n = j.at("n").get<int>();
    Graph g(n);
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2)
        throw invalid_argument_error("json: edge is not a pair");
      int u = e[0].get<int>(), v = e[1].get<int>();
      g.add_edge(u, v);
    }
    if (j.contains("labels"))
      g.set_labels(j["labels"].get<std::vector<std::string>>());
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("json: ") + e.what(), 0);
  }
}

inline std::string export_graph(const Graph& g, GraphFormat f) {
  switch (f) {
    case GraphFormat::graph6: return export_graph6(g) + "\n";
    case GraphFormat::dimacs: return export_dimacs(g);
    case GraphFormat::json: return export_json_graph(g);
  }
  throw invalid_argument_error("export_graph: bad format");
}

inline Graph import_graph(std::string_view bytes, GraphFormat f) {
  switch (f) {
    case GraphFormat::graph6: {
      // a single line; strip one trailing newline if present
      std::string_view t = bytes;
      while (!t.empty() && (t.back() == '\n' || t.back() == '\r'))
        t.remove_suffix(1);
      return import_graph6(t);
    }
    case GraphFormat::dimacs: return import_dimacs(bytes);
    case GraphFormat::json: return import_json_graph(bytes);
  }
  throw invalid_argument_error("import_graph: bad format");
}

// Format from a file name: .g6 / .dimacs|.col / .json.
inline GraphFormat guess_format(std::string_view path) {
  auto ends = [&](std::string_view suf) {
    return path.size() >= suf.size() &&
           path.substr(path.size() - suf.size()) == suf;
  };
  if (ends(".g6") || ends(".graph6")) return GraphFormat::graph6;
  if (ends(".dimacs") || ends(".col")) return GraphFormat::dimacs;
  if (ends(".json")) return GraphFormat::json;
  throw invalid_argument_error("cannot infer graph format from path: " +
                               std::string(path));
}

}  // namespace chroma
