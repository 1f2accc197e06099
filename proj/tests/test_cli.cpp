#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "chroma/chroma.hpp"

// Drives the installed binary: exit codes and emitted files are the
// contract scripted callers key off.

namespace {

namespace fs = std::filesystem;

const std::string kCli = CHROMA_CLI_PATH;

fs::path work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "chroma_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  std::string cmd = kCli + " " + args + " 2>" + (work_dir() / "stderr.txt").string();
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

chroma::json load_json(const fs::path& p) { return chroma::json::parse(slurp(p)); }

}  // namespace

TEST_CASE("construct writes graphs with the advertised counts") {
  fs::path g6 = work_dir() / "g6.g6";
  CHECK(run("construct cayley --m 6 -o " + g6.string()) == 0);
  chroma::Graph g = chroma::import_graph(slurp(g6), chroma::GraphFormat::graph6);
  CHECK(g.vertex_count() == 243);
  CHECK(g.edge_count() == 3645);

  fs::path dim = work_dir() / "g6.dimacs";
  CHECK(run("construct cayley --m 6 --format dimacs -o " + dim.string()) == 0);
  CHECK(slurp(dim).rfind("p edge 243 3645\n", 0) == 0);

  fs::path h = work_dir() / "h2.g6";
  CHECK(run("construct h --n 2 -o " + h.string()) == 0);
  CHECK(chroma::import_graph(slurp(h), chroma::GraphFormat::graph6).vertex_count() ==
        729);

  fs::path mp = work_dir() / "k33.g6";
  CHECK(run("construct multipartite --part 3 --parts 3 -o " + mp.string()) == 0);
  chroma::Graph k33x3 =
      chroma::import_graph(slurp(mp), chroma::GraphFormat::graph6);
  CHECK(k33x3.same_adjacency(chroma::make_complete_multipartite(3, 3)));
}

TEST_CASE("construct power and product compose") {
  fs::path k3 = work_dir() / "k3.g6";
  CHECK(run("construct multipartite --part 1 --parts 3 -o " + k3.string()) == 0);
  fs::path box = work_dir() / "box.g6";
  CHECK(run("construct product --type cartesian --left " + k3.string() +
            " --right " + k3.string() + " -o " + box.string()) == 0);
  chroma::Graph b = chroma::import_graph(slurp(box), chroma::GraphFormat::graph6);
  CHECK(b.same_adjacency(chroma::k3_box_k3()));

  fs::path p2 = work_dir() / "boxp2.g6";
  CHECK(run("construct power --k 2 --input " + box.string() + " -o " + p2.string()) ==
        0);
  chroma::Graph p = chroma::import_graph(slurp(p2), chroma::GraphFormat::graph6);
  CHECK(p.same_adjacency(chroma::graph_power(chroma::k3_box_k3(), 2)));
}

TEST_CASE("exit codes: usage and capacity") {
  CHECK(run("construct cayley") == 2);          // missing --m
  CHECK(run("frobnicate") == 2);                // unknown command
  CHECK(run("construct cayley --m 12") == 3);   // over the default cap
  CHECK(run("verify counting --r 2 --t 5") == 2);  // odd t rejected
  CHECK(run("construct cayley --m 6 --nonsense 1") == 2);
  // the cap is a flag, not a constant
  CHECK(run("construct cayley --m 7 --capacity-cap 100") == 3);
}

TEST_CASE("exit code 5 when the solver budget runs out") {
  // K3 box K3 is 3-choosable, so no bad 4-assignment exists and the
  // canonical space is astronomically large: the budget must trip.
  fs::path box = work_dir() / "budget_box.g6";
  {
    std::ofstream out(box);
    out << chroma::export_graph(chroma::k3_box_k3(), chroma::GraphFormat::graph6);
  }
  fs::path res = work_dir() / "budget.json";
  CHECK(run("color bad-assignment " + box.string() +
            " --t 4 --budget-ms 100 -o " + res.string()) == 5);
  chroma::json j = load_json(res);
  CHECK(j.at("status") == "BUDGET_EXHAUSTED");
  CHECK(j.at("assignments_checked").get<long long>() > 0);
}

TEST_CASE("CHROMA_POWER_CACHE checkpoints pipeline artifacts") {
  fs::path dir = work_dir() / "env_cache";
  fs::remove_all(dir);
  std::string cmd = "CHROMA_POWER_CACHE=" + dir.string() + " " + kCli +
                    " verify theorem --s 1 --k 2 -o " +
                    (work_dir() / "envrep.json").string() + " 2>/dev/null";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(fs::exists(dir / "h6_pow4.g6"));
  CHECK(fs::exists(dir / "cert_structure_n2.json"));
}

TEST_CASE("verify exit codes follow certificate status") {
  fs::path out = work_dir() / "cert.json";
  CHECK(run("verify distance-lemma --n 2 -o " + out.string()) == 0);
  chroma::json j = load_json(out);
  CHECK(j.at("status") == "VERIFIED");
  CHECK(j.at("claim") == "distance-lemma");

  CHECK(run("verify structure --n 2 -o " + out.string()) == 0);
  CHECK(load_json(out).at("stats").at("blocks") == 81);

  CHECK(run("verify chi-h --n 2 -o " + out.string()) == 0);
  CHECK(load_json(out).at("stats").at("chi") == 243);

  CHECK(run("verify power-composition --s 1 --k 2 -o " + out.string()) == 0);

  CHECK(run("verify counting --r 1 --t 4 -o " + out.string()) == 4);
  CHECK(load_json(out).at("status") == "INCONCLUSIVE");

  CHECK(run("verify counting --r 2 --t 6 -o " + out.string()) == 0);
  CHECK(load_json(out).at("status") == "INFEASIBLE_CERTIFIED");

  CHECK(run("verify counting --r 81 --t 268 -o " + out.string()) == 0);
}

TEST_CASE("verify theorem emits the full report") {
  fs::path out = work_dir() / "theorem.json";
  CHECK(run("verify theorem --s 1 --k 2 -o " + out.string()) == 0);
  chroma::json j = load_json(out);
  CHECK(j.at("chi") == 243);
  CHECK(j.at("chi_l_lower") == 269);
  CHECK(j.at("status") == "VERIFIED");
  CHECK(j.at("stages").size() == 6);

  // the emitted report re-checks from its serialized form alone
  j.erase("meta");
  CHECK(chroma::recheck_certificate(j).ok);

  fs::path md = work_dir() / "theorem.md";
  CHECK(run("verify theorem --s 1 --k 2 --format markdown -o " + md.string()) == 0);
  CHECK(slurp(md).find("chi(G^k) = 243") != std::string::npos);

  fs::path cmd = work_dir() / "cert.md";
  CHECK(run("verify distance-lemma --n 2 --format markdown -o " + cmd.string()) == 0);
  CHECK(slurp(cmd).find("VERIFIED") != std::string::npos);

  CHECK(run("verify theorem --s 1 --k 1") == 2);  // theorem needs k >= 2
}

TEST_CASE("identical invocations emit byte-identical JSON minus meta") {
  fs::path a = work_dir() / "a.json", b = work_dir() / "b.json";
  CHECK(run("verify distance-lemma --n 2 -o " + a.string()) == 0);
  CHECK(run("verify distance-lemma --n 2 -o " + b.string()) == 0);
  chroma::json ja = load_json(a), jb = load_json(b);
  CHECK(ja.contains("meta"));
  ja.erase("meta");
  jb.erase("meta");
  CHECK(ja.dump() == jb.dump());
}

TEST_CASE("color subcommands") {
  fs::path box = work_dir() / "box2.g6";
  {
    std::ofstream out(box);
    out << chroma::export_graph(chroma::k3_box_k3(), chroma::GraphFormat::graph6);
  }
  fs::path res = work_dir() / "color.json";
  CHECK(run("color chromatic " + box.string() + " -o " + res.string()) == 0);
  chroma::json j = load_json(res);
  CHECK(j.at("chi") == 3);
  CHECK(j.at("coloring").size() == 9);

  // list-feasible: K3 with pair lists is infeasible
  fs::path k3 = work_dir() / "k3b.g6";
  {
    std::ofstream out(k3);
    out << chroma::export_graph(chroma::make_complete(3), chroma::GraphFormat::graph6);
  }
  fs::path lists = work_dir() / "lists.json";
  {
    chroma::ListAssignment la(3);
    for (int v = 0; v < 3; ++v)
      la.set_list(v, chroma::ColorSet::of({1, 2}));
    std::ofstream out(lists);
    out << la.to_json().dump();
  }
  CHECK(run("color list-feasible " + k3.string() + " --lists " + lists.string() +
            " -o " + res.string()) == 0);
  CHECK(load_json(res).at("feasible") == false);

  // bad-assignment on K_{3,3} at t=2 finds the classical witness
  fs::path k33 = work_dir() / "k33b.g6";
  {
    std::ofstream out(k33);
    out << chroma::export_graph(chroma::make_complete_multipartite(3, 2),
                                chroma::GraphFormat::graph6);
  }
  CHECK(run("color bad-assignment " + k33.string() + " --t 2 -o " + res.string()) ==
        0);
  chroma::json v = load_json(res);
  CHECK(v.at("bound_type") == "lower_bound_witness");
  chroma::ListAssignment wit = chroma::ListAssignment::from_json(v.at("witness"));
  CHECK_FALSE(
      chroma::list_feasible(chroma::make_complete_multipartite(3, 2), wit).feasible);
}

TEST_CASE("thread count does not change emitted certificates") {
  fs::path a = work_dir() / "t1.json", b = work_dir() / "t2.json";
  CHECK(run("verify power-multipartite --n 2 --threads 1 -o " + a.string()) == 0);
  CHECK(run("verify power-multipartite --n 2 --threads 2 -o " + b.string()) == 0);
  chroma::json ja = load_json(a), jb = load_json(b);
  ja.erase("meta");
  jb.erase("meta");
  CHECK(ja.dump() == jb.dump());
}
