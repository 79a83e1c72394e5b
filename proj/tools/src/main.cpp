#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "experiment.hpp"
#include "vnfp/errors.hpp"

namespace fs = std::filesystem;
using vnfp::cli::set_key;

namespace {

struct FlagKey {
  const char* flag;
  const char* key;
  const char* help;
};

// Every flag below writes straight into the config document before parsing.
constexpr FlagKey kSolveFlags[] = {
    {"--family", "topology.family", "fat-tree, leaf-spine or dcell"},
    {"--size", "topology.size", "k for fat-tree/leaf-spine, n for dcell"},
    {"--topology-file", "topology.file", "load (or save) the topology here"},
    {"--nt", "tables.nt", "distance cache size per server"},
    {"--bfs", "tables.bfs", "stochastic or deterministic"},
    {"--table-seed", "tables.seed", "seed for the stochastic caches"},
    {"--table-threads", "tables.threads", "threads for cache construction (0 = all cores)"},
    {"--tables-file", "tables.file", "load (or save) the tables here"},
    {"--services", "problem.services", "number of services"},
    {"--server-capacity", "problem.server_capacity", "resource units per server"},
    {"--problem-seed", "problem.seed", "seed for problem generation"},
    {"--model", "model.name", "accurate, mm1k, mm1, utilization, cwtpl, ru or plus"},
    {"--weights", "search.weights", "number of weight vectors"},
    {"--subproblems-per-epoch", "search.subproblems_per_epoch", "weights per epoch"},
    {"--processes", "search.processes", "worker threads per epoch"},
    {"--max-evals", "search.max_evals", "evaluation budget per run"},
    {"--init-pop", "search.init_population", "initial population size"},
    {"--seed", "search.seed", "master search seed"},
    {"--out", "output_dir", "output directory (default $VNFP_OUT_DIR or vnfp-out)"},
    {"--repetitions", "repetitions", "independent runs"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Placement of virtual network function chains in data centers"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a data center topology");
  std::string gen_family;
  std::optional<std::uint32_t> gen_k, gen_n;
  vnfp::cli::GenOptions gen_opt;
  gen->add_option("family", gen_family, "fat-tree, leaf-spine or dcell")->required();
  gen->add_option("--k", gen_k, "switch port count (fat-tree, leaf-spine)");
  gen->add_option("--n", gen_n, "servers per cell (dcell)");
  gen->add_option("-o,--output", gen_opt.out, "output file");
  gen->add_flag("--edge-list", gen_opt.edge_list, "write a text edge list");

  // tables
  auto* tables = app.add_subcommand("tables", "Build routing tables and distance caches");
  vnfp::cli::TablesOptions tab_opt;
  std::string tab_bfs = "stochastic";
  tables->add_option("topology", tab_opt.topology, "topology file from gen")->required()->check(CLI::ExistingFile);
  tables->add_option("--nt", tab_opt.cache_size, "distance cache size per server")->capture_default_str();
  tables->add_option("--bfs", tab_bfs, "stochastic or deterministic")
      ->check(CLI::IsMember({"stochastic", "deterministic"}))
      ->capture_default_str();
  tables->add_option("--seed", tab_opt.seed, "seed for stochastic caches")->capture_default_str();
  tables->add_option("--threads", tab_opt.threads, "worker threads (0 = all cores)")->capture_default_str();
  tables->add_option("-o,--output", tab_opt.out, "output file");

  // solve
  auto* solve = app.add_subcommand("solve", "Run the optimizer and write archives");
  std::optional<fs::path> config_path;
  std::vector<std::string> sets;
  std::vector<std::optional<std::string>> flag_values(std::size(kSolveFlags));
  solve->add_option("config", config_path, "experiment config (JSON)")->check(CLI::ExistingFile);
  for (std::size_t i = 0; i < std::size(kSolveFlags); ++i) {
    solve->add_option(kSolveFlags[i].flag, flag_values[i], kSolveFlags[i].help);
  }
  solve->add_option("--set", sets, "override any config key: section.key=value (JSON value)");
  bool print_config = false;
  solve->add_flag("--print-config", print_config, "print the resolved config and exit");

  // report / hv
  auto* report = app.add_subcommand("report", "HV, archive sizes and feasibility rates as CSV");
  std::vector<fs::path> report_files;
  report->add_option("archives", report_files, "archive files (.jsonl)")->required()->check(CLI::ExistingFile);
  auto* hv = app.add_subcommand("hv", "Per-run hypervolume as CSV");
  std::vector<fs::path> hv_files;
  hv->add_option("archives", hv_files, "archive files (.jsonl)")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      auto family = vnfp::parse_family(gen_family);
      if (!family || *family == vnfp::TopologyFamily::custom) {
        throw std::invalid_argument("unknown topology family '" + gen_family + "'");
      }
      const bool dcell = *family == vnfp::TopologyFamily::dcell1;
      const auto& size = dcell ? gen_n : gen_k;
      if (!size) throw std::invalid_argument(dcell ? "dcell needs --n" : "this family needs --k");
      if ((dcell ? gen_k : gen_n).has_value()) {
        throw std::invalid_argument(dcell ? "dcell takes --n, not --k" : "this family takes --k, not --n");
      }
      gen_opt.kind = {*family, *size};
      vnfp::cli::cmd_gen(gen_opt, std::cout);
    } else if (tables->parsed()) {
      tab_opt.bfs = *vnfp::parse_bfs_mode(tab_bfs);
      vnfp::cli::cmd_tables(tab_opt, std::cout);
    } else if (solve->parsed()) {
      nlohmann::json doc = nlohmann::json::object();
      if (config_path) {
        std::ifstream in(*config_path);
        doc = nlohmann::json::parse(in);
      }
      for (std::size_t i = 0; i < std::size(kSolveFlags); ++i) {
        if (flag_values[i]) set_key(doc, kSolveFlags[i].key, *flag_values[i]);
      }
      for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + s + "'");
        set_key(doc, std::string_view(s).substr(0, eq), std::string_view(s).substr(eq + 1));
      }
      const auto config = vnfp::cli::config_from_json(doc);
      if (print_config) {
        std::cout << vnfp::cli::to_json(config).dump(2) << '\n';
        return 0;
      }
      vnfp::cli::cmd_solve(config, std::cout);
    } else if (report->parsed()) {
      vnfp::cli::cmd_report(report_files, std::cout, std::cerr);
    } else if (hv->parsed()) {
      vnfp::cli::cmd_hv(hv_files, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
