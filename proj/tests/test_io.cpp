#include "doctest.h"

#include <random>

#include "chroma/cayley.hpp"
#include "chroma/io.hpp"
#include "oracles.hpp"

using namespace chroma;

TEST_CASE("graph6 known encodings") {
  // hand-encoded: n=3 -> 'B'; bits 111 padded to 111000 -> 56+63 = 'w'
  CHECK(export_graph6(make_complete(3)) == "Bw");
  CHECK(import_graph6("Bw").same_adjacency(make_complete(3)));
  // K4: six upper-triangle bits all set -> 63+63 = '~'
  CHECK(export_graph6(make_complete(4)) == "C~");
  CHECK(export_graph6(Graph(5)) == "D??");

  Graph k1 = make_complete(1);
  Graph rt = import_graph6(export_graph6(k1));
  CHECK(rt.vertex_count() == 1);
  CHECK(rt.edge_count() == 0);
}

TEST_CASE("graph6 round trips including the long size form") {
  std::mt19937 rng(5);
  for (int n : {2, 10, 61, 62, 63, 100, 200}) {
    Graph g = oracle::random_graph(n, 0.3, rng);
    Graph back = import_graph6(export_graph6(g));
    CHECK(back.same_adjacency(g));
  }
}

TEST_CASE("graph6 parse errors carry offsets") {
  CHECK_THROWS_AS(import_graph6(""), parse_error);
  CHECK_THROWS_AS(import_graph6("D"), parse_error);  // truncated bit section
  CHECK_THROWS_AS(import_graph6("Bw!"), parse_error);
  CHECK_THROWS_AS(import_graph6(std::string("B\x01")), parse_error);
  try {
    import_graph6(std::string("B\x01"));
  } catch (const parse_error& e) {
    CHECK(e.offset == 1);
  }
  // nonzero padding bits rejected
  CHECK_NOTHROW(import_graph6("Bw"));
  CHECK_THROWS_AS(import_graph6("B~"), parse_error);
}

TEST_CASE("dimacs export and import") {
  Graph g6 = build_cayley(6).graph;
  std::string dim = export_dimacs(g6);
  CHECK(dim.rfind("p edge 243 3645\n", 0) == 0);
  Graph back = import_dimacs(dim);
  CHECK(back.same_adjacency(g6));

  CHECK_THROWS_AS(import_dimacs("e 1 2\n"), parse_error);
  CHECK_THROWS_AS(import_dimacs("p edge 2 1\ne 1 3\n"), parse_error);
  CHECK_THROWS_AS(import_dimacs("p edge 2 1\ne 1 1\n"), parse_error);
  CHECK_THROWS_AS(import_dimacs("p edge 2 2\ne 1 2\n"), parse_error);
  CHECK_NOTHROW(import_dimacs("c comment\np edge 2 1\ne 1 2\n"));
}

TEST_CASE("json keeps labels") {
  Graph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.set_labels({"a", "b", "c"});
  Graph back = import_json_graph(export_json_graph(g));
  CHECK(back == g);
  CHECK(back.label(2) == "c");

  CHECK_THROWS_AS(import_json_graph("{"), parse_error);
  CHECK_THROWS_AS(import_json_graph("{\"n\":2,\"edges\":[[0,0]]}"), error);
  CHECK_THROWS_AS(import_json_graph("{\"n\":2,\"edges\":[[0,5]]}"), error);
}

TEST_CASE("round trips across all formats on a corpus") {
  std::mt19937 rng(9);
  std::vector<Graph> corpus;
  corpus.push_back(build_cayley(6).graph);
  // H_6 = G_6 box K_3
  corpus.push_back(cartesian_product(build_cayley(6).graph, make_complete(3)));
  for (int i = 0; i < 4; ++i)
    corpus.push_back(oracle::random_graph(20 + i, 0.3, rng));
  for (const auto& g : corpus) {
    for (GraphFormat f :
         {GraphFormat::graph6, GraphFormat::dimacs, GraphFormat::json}) {
      Graph back = import_graph(export_graph(g, f), f);
      CHECK(back.same_adjacency(g));  // graph6/dimacs drop labels by design
    }
  }
}

TEST_CASE("format guessing") {
  CHECK(guess_format("x.g6") == GraphFormat::graph6);
  CHECK(guess_format("x.dimacs") == GraphFormat::dimacs);
  CHECK(guess_format("x.col") == GraphFormat::dimacs);
  CHECK(guess_format("x.json") == GraphFormat::json);
  CHECK_THROWS_AS(guess_format("x.bin"), invalid_argument_error);
}
