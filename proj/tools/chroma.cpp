// chroma: construct the Cayley/product graph families, run the exact
// coloring solvers, and emit machine-checkable certificates.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "chroma/chroma.hpp"

namespace {

using chroma::json;

// Exit codes are a contract for scripted callers:
//   0 success / VERIFIED / INFEASIBLE_CERTIFIED
//   1 FAILED certificate
//   2 bad arguments or unreadable input
//   3 capacity cap exceeded
//   4 INCONCLUSIVE
//   5 solver budget exhausted (bounds still reported)
//   6 internal error
constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitInconclusive = 4;
constexpr int kExitBudget = 5;
constexpr int kExitInternal = 6;

struct CommonOpts {
  std::string output = "-";
  std::string format = "json";
  int capacity_cap = chroma::kDefaultCapacity;
  int threads = 0;
  long long seed = 0;
  long long budget_ms = 600000;
  std::string cache_dir;
  std::chrono::steady_clock::time_point started =
      std::chrono::steady_clock::now();

  std::chrono::milliseconds budget() const {
    return std::chrono::milliseconds(budget_ms);
  }

  json meta() const {
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);
    return json{{"tool", "chroma"},
                {"version", "0.1.0"},
                {"seed", seed},
                {"elapsed_ms", elapsed.count()}};
  }

  void write(const std::string& bytes) const {
    if (output == "-") {
      std::cout << bytes;
      return;
    }
    std::ofstream out(output, std::ios::binary);
    if (!out) throw chroma::error("cannot open output file: " + output);
    out << bytes;
  }
};

void add_common(CLI::App* cmd, CommonOpts& opt,
                const std::string& default_format) {
  opt.format = default_format;
  cmd->add_option("--output,-o", opt.output, "output path, '-' for stdout");
  cmd->add_option("--format", opt.format, "output format");
  cmd->add_option("--capacity-cap", opt.capacity_cap,
                  "maximum vertex count for constructions");
  cmd->add_option("--threads", opt.threads,
                  "worker threads for BFS/power stages (0 = auto); results "
                  "do not depend on the count");
  cmd->add_option("--seed", opt.seed, "seed recorded in output metadata");
  cmd->add_option("--budget-ms", opt.budget_ms, "solver time budget");
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw chroma::error("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

chroma::Graph load_graph(const std::string& path, const std::string& fmt) {
  chroma::GraphFormat f = fmt.empty() ? chroma::guess_format(path)
                         : fmt == "graph6" ? chroma::GraphFormat::graph6
                         : fmt == "dimacs" ? chroma::GraphFormat::dimacs
                         : fmt == "json"
                             ? chroma::GraphFormat::json
                             : throw chroma::invalid_argument_error(
                                   "unknown graph format: " + fmt);
  return chroma::import_graph(read_file(path), f);
}

int emit_graph(const chroma::Graph& g, const CommonOpts& opt) {
  chroma::GraphFormat f = opt.format == "graph6" ? chroma::GraphFormat::graph6
                          : opt.format == "dimacs" ? chroma::GraphFormat::dimacs
                          : opt.format == "json"
                              ? chroma::GraphFormat::json
                              : throw chroma::invalid_argument_error(
                                    "unknown graph format: " + opt.format);
  opt.write(chroma::export_graph(g, f));
  std::cerr << "vertices=" << g.vertex_count() << " edges=" << g.edge_count()
            << "\n";
  return kExitOk;
}

int emit_certificate(const chroma::Certificate& cert, const CommonOpts& opt) {
  if (opt.format == "markdown") {
    opt.write(cert.to_markdown());
  } else if (opt.format == "json") {
    json j = cert.to_json();
    j["meta"] = opt.meta();
    opt.write(j.dump(2) + "\n");
  } else {
    throw chroma::invalid_argument_error("unknown certificate format: " +
                                         opt.format);
  }
  switch (cert.status) {
    case chroma::CertStatus::verified:
    case chroma::CertStatus::infeasible_certified: return kExitOk;
    case chroma::CertStatus::failed: return kExitFailed;
    case chroma::CertStatus::inconclusive: return kExitInconclusive;
  }
  return kExitInternal;
}

int emit_result_json(json j, const CommonOpts& opt, int code) {
  j["meta"] = opt.meta();
  opt.write(j.dump(2) + "\n");
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph powers, exact list coloring, and certificate checking"};
  app.require_subcommand(1);
  std::function<int()> action;

  // ------------------------------------------------------------ construct
  auto* construct = app.add_subcommand("construct", "build a graph family member");
  construct->require_subcommand(1);

  struct {
    CommonOpts opt;
    int m = 6;
  } cay;
  {
    auto* c = construct->add_subcommand("cayley", "Cayley graph G_m on Gamma_m");
    c->add_option("--m", cay.m, "ambient dimension")->required();
    add_common(c, cay.opt, "graph6");
    c->callback([&] {
      action = [&] {
        return emit_graph(chroma::build_cayley(cay.m, cay.opt.capacity_cap).graph,
                          cay.opt);
      };
    });
  }

  struct {
    CommonOpts opt;
    int n = 2;
  } hcmd;
  {
    auto* c = construct->add_subcommand("h", "H_{3n} = G_{3n} box K_3");
    c->add_option("--n", hcmd.n)->required();
    add_common(c, hcmd.opt, "graph6");
    c->callback([&] {
      action = [&] {
        return emit_graph(chroma::build_h(hcmd.n, hcmd.opt.capacity_cap), hcmd.opt);
      };
    });
  }

  struct {
    CommonOpts opt;
    int k = 1;
    std::string input;
    std::string in_format;
  } pow;
  {
    auto* c = construct->add_subcommand("power", "k-th power of a graph file");
    c->add_option("--k", pow.k)->required();
    c->add_option("--input", pow.input, "graph file")->required();
    c->add_option("--in-format", pow.in_format, "input format override");
    add_common(c, pow.opt, "graph6");
    c->callback([&] {
      action = [&] {
        chroma::Graph g = load_graph(pow.input, pow.in_format);
        if (g.vertex_count() > pow.opt.capacity_cap)
          throw chroma::capacity_error("input graph exceeds capacity cap");
        return emit_graph(chroma::graph_power(g, pow.k, pow.opt.threads), pow.opt);
      };
    });
  }

  struct {
    CommonOpts opt;
    std::string type;
    std::string left, right;
    std::string in_format;
  } prod;
  {
    auto* c = construct->add_subcommand("product", "cartesian or lexicographic product");
    c->add_option("--type", prod.type, "cartesian | lexicographic")->required();
    c->add_option("--left", prod.left)->required();
    c->add_option("--right", prod.right)->required();
    c->add_option("--in-format", prod.in_format);
    add_common(c, prod.opt, "graph6");
    c->callback([&] {
      action = [&] {
        chroma::Graph a = load_graph(prod.left, prod.in_format);
        chroma::Graph b = load_graph(prod.right, prod.in_format);
        if (static_cast<long long>(a.vertex_count()) * b.vertex_count() >
            prod.opt.capacity_cap)
          throw chroma::capacity_error("product exceeds capacity cap");
        if (prod.type == "cartesian")
          return emit_graph(chroma::cartesian_product(a, b), prod.opt);
        if (prod.type == "lexicographic")
          return emit_graph(chroma::lexicographic_product(a, b), prod.opt);
        throw chroma::invalid_argument_error("unknown product type: " + prod.type);
      };
    });
  }

  struct {
    CommonOpts opt;
    int part = 3, parts = 3;
  } multi;
  {
    auto* c = construct->add_subcommand("multipartite", "complete multipartite K_{part * parts}");
    c->add_option("--part", multi.part, "size of each partite set")->required();
    c->add_option("--parts", multi.parts, "number of partite sets")->required();
    add_common(c, multi.opt, "graph6");
    c->callback([&] {
      action = [&] {
        if (static_cast<long long>(multi.part) * multi.parts > multi.opt.capacity_cap)
          throw chroma::capacity_error("multipartite graph exceeds capacity cap");
        return emit_graph(chroma::make_complete_multipartite(multi.part, multi.parts),
                          multi.opt);
      };
    });
  }

  // --------------------------------------------------------------- verify
  auto* verify = app.add_subcommand("verify", "verify a structural claim and emit a certificate");
  verify->require_subcommand(1);

  struct {
    CommonOpts opt;
    int n = 2;
  } vdl, vpm, vst, vch;
  {
    auto* c = verify->add_subcommand("distance-lemma", "distance bound over Gamma_{3n}");
    c->add_option("--n", vdl.n)->required();
    add_common(c, vdl.opt, "json");
    c->callback([&] {
      action = [&] {
        auto bundle = chroma::build_cayley(3 * vdl.n, vdl.opt.capacity_cap);
        return emit_certificate(chroma::verify_distance_lemma(bundle), vdl.opt);
      };
    });
  }
  {
    auto* c = verify->add_subcommand("power-multipartite",
                                     "G_{3n}^{2n-1} = K_{3 * 3^{3n-2}}");
    c->add_option("--n", vpm.n)->required();
    add_common(c, vpm.opt, "json");
    c->callback([&] {
      action = [&] {
        auto bundle = chroma::build_cayley(3 * vpm.n, vpm.opt.capacity_cap);
        return emit_certificate(
            chroma::verify_power_multipartite(bundle, vpm.n, vpm.opt.threads),
            vpm.opt);
      };
    });
  }
  {
    auto* c = verify->add_subcommand("structure",
                                     "H_{3n}^{2n} = K_{3^{3n-2}}[K_3 box K_3]");
    c->add_option("--n", vst.n)->required();
    add_common(c, vst.opt, "json");
    c->callback([&] {
      action = [&] {
        return emit_certificate(
            chroma::verify_structure_theorem(vst.n, vst.opt.capacity_cap,
                                             vst.opt.threads),
            vst.opt);
      };
    });
  }
  {
    auto* c = verify->add_subcommand("chi-h", "chi of the block structure is 3^{3n-1}");
    c->add_option("--n", vch.n)->required();
    add_common(c, vch.opt, "json");
    c->callback([&] {
      action = [&] {
        return emit_certificate(chroma::verify_chi_of_h(vch.n, vch.opt.capacity_cap),
                                vch.opt);
      };
    });
  }

  struct {
    CommonOpts opt;
    int s = 1, k = 2;
  } vpc, vth;
  {
    auto* c = verify->add_subcommand("power-composition", "(H^{2s})^k = H^{2sk}");
    c->add_option("--s", vpc.s)->required();
    c->add_option("--k", vpc.k)->required();
    add_common(c, vpc.opt, "json");
    c->callback([&] {
      action = [&] {
        return emit_certificate(
            chroma::verify_power_composition(vpc.s, vpc.k, vpc.opt.capacity_cap,
                                             vpc.opt.threads),
            vpc.opt);
      };
    });
  }

  struct {
    CommonOpts opt;
    int r = 1, t = 4;
  } vco;
  {
    auto* c = verify->add_subcommand("counting", "list-infeasibility counting chain");
    c->add_option("--r", vco.r, "block count")->required();
    c->add_option("--t", vco.t, "even list size")->required();
    add_common(c, vco.opt, "json");
    c->callback([&] {
      action = [&] {
        auto inst = chroma::build_adversarial_lists(vco.r, vco.t,
                                                    vco.opt.capacity_cap);
        auto counting = chroma::verify_counting_argument(inst);
        return emit_certificate(counting.to_certificate(), vco.opt);
      };
    });
  }

  {
    auto* c = verify->add_subcommand("theorem", "full pipeline for chi vs chi_l of G^k");
    c->add_option("--s", vth.s)->required();
    c->add_option("--k", vth.k)->required();
    c->add_option("--cache-dir", vth.opt.cache_dir,
                  "checkpoint directory (default $CHROMA_POWER_CACHE)");
    add_common(c, vth.opt, "json");
    c->callback([&] {
      action = [&] {
        chroma::PipelineOptions popt;
        popt.capacity_cap = vth.opt.capacity_cap;
        popt.threads = vth.opt.threads;
        if (!vth.opt.cache_dir.empty()) popt.cache_dir = vth.opt.cache_dir;
        chroma::TheoremReport rep = chroma::run_theorem_pipeline(vth.s, vth.k, popt);
        if (vth.opt.format == "markdown") {
          vth.opt.write(rep.to_markdown());
        } else {
          json j = rep.to_json();
          j["meta"] = vth.opt.meta();
          vth.opt.write(j.dump(2) + "\n");
        }
        return rep.ok() ? kExitOk : kExitFailed;
      };
    });
  }

  struct {
    CommonOpts opt;
    std::string left, right;
    std::string in_format;
  } vlx;
  {
    auto* c = verify->add_subcommand("lexico", "chi(G[H]) = chi(G[K_{chi(H)}])");
    c->add_option("--left", vlx.left, "graph file for G")->required();
    c->add_option("--right", vlx.right, "graph file for H")->required();
    c->add_option("--in-format", vlx.in_format);
    add_common(c, vlx.opt, "json");
    c->callback([&] {
      action = [&] {
        chroma::Graph g = load_graph(vlx.left, vlx.in_format);
        chroma::Graph h = load_graph(vlx.right, vlx.in_format);
        return emit_certificate(
            chroma::verify_lexico_proposition(g, h, vlx.opt.budget()), vlx.opt);
      };
    });
  }

  // ---------------------------------------------------------------- color
  auto* color = app.add_subcommand("color", "exact coloring solvers");
  color->require_subcommand(1);

  struct {
    CommonOpts opt;
    std::string graph;
    std::string in_format;
  } cch;
  {
    auto* c = color->add_subcommand("chromatic", "exact chromatic number with witness");
    c->add_option("graph", cch.graph, "graph file")->required();
    c->add_option("--in-format", cch.in_format);
    add_common(c, cch.opt, "json");
    c->callback([&] {
      action = [&] {
        chroma::Graph g = load_graph(cch.graph, cch.in_format);
        try {
          chroma::ChromaticResult r = chroma::chromatic_number(g, cch.opt.budget());
          return emit_result_json(
              json{{"chi", r.chi},
                   {"coloring", r.coloring},
                   {"clique_size", r.clique_size},
                   {"clique", r.clique},
                   {"nodes", r.nodes}},
              cch.opt, kExitOk);
        } catch (const chroma::budget_error& e) {
          return emit_result_json(json{{"status", "BUDGET_EXHAUSTED"},
                                       {"lower", e.lower},
                                       {"upper", e.upper},
                                       {"nodes", e.nodes}},
                                  cch.opt, kExitBudget);
        }
      };
    });
  }

  struct {
    CommonOpts opt;
    std::string graph;
    std::string lists;
    std::string in_format;
  } clf;
  {
    auto* c = color->add_subcommand("list-feasible", "exact list-coloring feasibility");
    c->add_option("graph", clf.graph, "graph file")->required();
    c->add_option("--lists", clf.lists, "list assignment JSON")->required();
    c->add_option("--in-format", clf.in_format);
    add_common(c, clf.opt, "json");
    c->callback([&] {
      action = [&] {
        chroma::Graph g = load_graph(clf.graph, clf.in_format);
        chroma::ListAssignment la =
            chroma::ListAssignment::from_json(json::parse(read_file(clf.lists)));
        chroma::ListFeasibility r = chroma::list_feasible(g, la);
        json j{{"feasible", r.feasible}, {"nodes", r.nodes}};
        if (r.feasible) j["coloring"] = r.coloring;
        if (r.empty_list_vertex >= 0) j["empty_list_vertex"] = r.empty_list_vertex;
        return emit_result_json(std::move(j), clf.opt, kExitOk);
      };
    });
  }

  struct {
    CommonOpts opt;
    std::string graph;
    std::string in_format;
    int t = 2;
    int universe = 0;
  } cba;
  {
    auto* c = color->add_subcommand("bad-assignment",
                                    "search for a t-list assignment with no coloring");
    c->add_option("graph", cba.graph, "graph file")->required();
    c->add_option("--t", cba.t, "list size")->required();
    c->add_option("--universe", cba.universe, "color universe cap (0 = t*|V|)");
    c->add_option("--in-format", cba.in_format);
    add_common(c, cba.opt, "json");
    c->callback([&] {
      action = [&] {
        chroma::Graph g = load_graph(cba.graph, cba.in_format);
        try {
          chroma::ChoosabilityVerdict v =
              chroma::find_bad_assignment(g, cba.t, cba.universe, cba.opt.budget());
          json j{{"bound_type", chroma::to_string(v.bound_type)},
                 {"t", v.t},
                 {"stats",
                  {{"assignments_checked", v.stats.assignments_checked},
                   {"feasible_assignments", v.stats.feasible_assignments},
                   {"max_palette", v.stats.max_palette},
                   {"exhausted", v.stats.exhausted}}}};
          if (v.witness) j["witness"] = v.witness->to_json();
          return emit_result_json(std::move(j), cba.opt, kExitOk);
        } catch (const chroma::budget_error& e) {
          return emit_result_json(json{{"status", "BUDGET_EXHAUSTED"},
                                       {"assignments_checked", e.nodes}},
                                  cba.opt, kExitBudget);
        }
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    return action();
  } catch (const chroma::capacity_error& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const chroma::budget_error& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return kExitBudget;
  } catch (const chroma::parse_error& e) {
    std::cerr << "parse: " << e.what() << "\n";
    return kExitUsage;
  } catch (const chroma::invalid_argument_error& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const chroma::internal_error& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
