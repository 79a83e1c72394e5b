#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <stdexcept>

#include "archive_io.hpp"
#include "vnfp/hash.hpp"
#include "vnfp/metrics.hpp"
#include "vnfp/search.hpp"
#include "vnfp/services_io.hpp"
#include "vnfp/topology_io.hpp"

namespace vnfp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string rep_tag(std::size_t r) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "r%03zu", r);
  return buf;
}

void ensure_parent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

void write_text(const fs::path& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::shared_ptr<const Topology> obtain_topology(const ExperimentConfig& c, std::ostream& log) {
  if (c.topology_file && fs::exists(*c.topology_file)) {
    log << "loading topology " << c.topology_file->string() << '\n';
    return std::make_shared<const Topology>(load_topology(*c.topology_file));
  }
  auto topo = std::make_shared<const Topology>(build_topology(c.topology));
  if (c.topology_file) {
    ensure_parent(*c.topology_file);
    save_topology(*topo, *c.topology_file);
  }
  return topo;
}

std::shared_ptr<const TableSet> obtain_tables(const ExperimentConfig& c, const Topology& topo, std::ostream& log) {
  if (c.tables_file && fs::exists(*c.tables_file)) {
    log << "loading tables " << c.tables_file->string() << '\n';
    auto tables = std::make_shared<const TableSet>(load_tables(*c.tables_file));
    if (tables->topology_hash != topo.hash()) {
      throw std::invalid_argument("table file " + c.tables_file->string() + " was built for a different topology");
    }
    return tables;
  }
  TableOptions opt;
  opt.cache_size = c.table_cache_size;
  opt.bfs = c.bfs;
  opt.seed = c.table_seed;
  opt.threads = c.table_threads;
  auto tables = std::make_shared<const TableSet>(build_table_set(topo, opt));
  if (c.tables_file) {
    ensure_parent(*c.tables_file);
    save_tables(*tables, *c.tables_file);
  }
  return tables;
}

}  // namespace

fs::path cmd_gen(const GenOptions& options, std::ostream& out) {
  const Topology topo = build_topology(options.kind);
  const auto report = validate(topo);
  if (!report.ok()) throw std::runtime_error("generated topology failed validation");

  fs::path path = options.out;
  if (path.empty()) {
    path = default_output_dir() / (std::string(to_string(options.kind.family)) + "-" +
                                   std::to_string(options.kind.size) + (options.edge_list ? ".txt" : ".vnfg"));
  }
  ensure_parent(path);
  if (options.edge_list) write_text(path, to_edge_list(topo));
  else save_topology(topo, path);

  out << "family," << to_string(options.kind.family) << '\n'
      << "size," << options.kind.size << '\n'
      << "servers," << topo.n_servers() << '\n'
      << "switches," << topo.n_switches() << '\n'
      << "links," << topo.link_count() << '\n'
      << "file," << path.string() << '\n';
  return path;
}

TableMemory cmd_tables(const TablesOptions& options, std::ostream& out) {
  const Topology topo = load_topology(options.topology);
  TableOptions opt;
  opt.cache_size = options.cache_size;
  opt.bfs = options.bfs;
  opt.seed = options.seed;
  opt.threads = options.threads;

  const auto start = std::chrono::steady_clock::now();
  const TableSet tables = build_table_set(topo, opt);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  fs::path path = options.out;
  if (path.empty()) path = fs::path(options.topology).replace_extension(".vnft");
  ensure_parent(path);
  save_tables(tables, path);
  if (!(load_tables(path) == tables)) throw std::runtime_error("table file did not round-trip");

  const TableMemory mem = forwarding_memory(tables.forwarding);
  char pct[32];
  std::snprintf(pct, sizeof pct, "%.2f", mem.percent_saved());
  out << "servers," << topo.n_servers() << '\n'
      << "components," << topo.size() << '\n'
      << "cache_size," << tables.cache_size << '\n'
      << "bfs," << to_string(tables.bfs) << '\n'
      << "naive_rows," << mem.naive_rows << '\n'
      << "compressed_rows," << mem.compressed_rows << '\n'
      << "naive_ids," << mem.naive_ids() << '\n'
      << "compressed_ids," << mem.compressed_ids() << '\n'
      << "percent_saved," << pct << '\n'
      << "build_seconds," << seconds << '\n'
      << "file," << path.string() << '\n';
  return mem;
}

std::vector<RunSummary> cmd_solve(const ExperimentConfig& config, std::ostream& log) {
  config.validate();
  const fs::path dir = config.output_dir;
  fs::create_directories(dir);
  const std::string hash = hex64(config_hash(config));

  write_text(dir / "config.json", to_json(config).dump(2) + "\n");

  auto topo = obtain_topology(config, log);
  auto tables = obtain_tables(config, *topo, log);
  log << "topology " << to_string(topo->kind().family) << ' ' << topo->kind().size << ": " << topo->n_servers()
      << " servers, " << topo->n_switches() << " switches\n";

  std::ofstream run_log(dir / "run.log", std::ios::binary | std::ios::trunc);
  if (!run_log) throw std::runtime_error("cannot write " + (dir / "run.log").string());

  std::vector<RunSummary> runs;
  for (std::size_t r = 0; r < config.repetitions; ++r) {
    ProblemInstance problem = random_problem(topo, tables, config.problem, derive_seed(config.problem_seed, r));
    from_json(config.model_overrides, problem.model);
    problem.validate();

    SearchConfig search = config.search;
    search.seed = derive_seed(config.search.seed, r);

    const auto start = std::chrono::steady_clock::now();
    const SearchResult result = optimize(problem, search);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string tag = rep_tag(r);
    RunSummary run;
    run.repetition = r;
    run.seed = search.seed;
    run.evaluations = result.evaluations;
    run.initial_archive = result.initial_archive.size();
    run.final_archive = result.final_archive.size();
    run.seconds = seconds;
    run.initial_path = dir / ("initial-" + tag + ".jsonl");
    run.final_path = dir / ("final-" + tag + ".jsonl");

    json pj = problem_to_json(problem);
    pj["config_hash"] = hash;
    pj["problem_seed"] = derive_seed(config.problem_seed, r);
    write_text(dir / ("problem-" + tag + ".json"), pj.dump(2) + "\n");

    ArchiveHeader header{"initial", hash, search.seed, r, std::string(to_string(search.model)),
                         model_arity(search.model), result.initial_population.size()};
    write_archive(run.initial_path, header, result.initial_population);
    header.kind = "final";
    header.evaluations = result.evaluations;
    write_archive(run.final_path, header, result.final_archive.solutions());

    run_log << json{{"repetition", r},
                    {"config_hash", hash},
                    {"seed", search.seed},
                    {"model", to_string(search.model)},
                    {"evaluations", result.evaluations},
                    {"evaluations_per_weight", result.evaluations_per_weight},
                    {"epochs", result.epochs},
                    {"initial_archive", run.initial_archive},
                    {"final_archive", run.final_archive},
                    {"wall_seconds", seconds}}
                   .dump()
            << '\n';
    log << "repetition " << r << ": " << result.evaluations << " evaluations, final archive "
        << run.final_archive << " (initial " << run.initial_archive << "), " << seconds << " s\n";
    runs.push_back(std::move(run));
  }
  return runs;
}

std::vector<ReportRow> compute_report(std::span<const fs::path> files, std::ostream& warn) {
  std::vector<ArchiveFile> archives;
  archives.reserve(files.size());
  for (const auto& f : files) archives.push_back(read_archive(f));
  if (archives.empty()) return {};

  const std::size_t arity = archives.front().header.arity;
  for (std::size_t i = 1; i < archives.size(); ++i) {
    if (archives[i].header.arity != arity) {
      throw std::invalid_argument("mixed objective arity: " + files[0].string() + " has " + std::to_string(arity) +
                                  ", " + files[i].string() + " has " + std::to_string(archives[i].header.arity));
    }
  }

  std::vector<std::vector<Point>> fronts(archives.size());
  std::vector<ReportRow> rows(archives.size());
  std::vector<Point> all;
  for (std::size_t i = 0; i < archives.size(); ++i) {
    const auto& a = archives[i];
    std::vector<Point> feasible;
    for (const auto& r : a.records) {
      if (r.objectives) feasible.push_back(*r.objectives);
    }
    auto split = split_finite(feasible);
    fronts[i] = nondominated(split.finite);
    all.insert(all.end(), fronts[i].begin(), fronts[i].end());

    auto& row = rows[i];
    row.file = files[i].string();
    row.archive = a.header.kind;
    row.repetition = a.header.repetition;
    row.model = a.header.model;
    row.size = a.records.size();
    row.feasible_rate = a.records.empty() ? 0.0 : static_cast<double>(feasible.size()) / a.records.size();
    row.excluded_infinite = split.excluded;
    if (a.records.empty()) warn << "warning: " << row.file << " is empty; hv = 0\n";
    else if (fronts[i].empty()) warn << "warning: " << row.file << " has no feasible finite solutions; hv = 0\n";
  }
  if (!all.empty()) {
    const NormBounds bounds = bounds_of(all);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows[i].hv = fronts[i].empty() ? 0.0 : normalized_hypervolume(fronts[i], bounds);
    }
  }
  return rows;
}

void cmd_report(std::span<const fs::path> files, std::ostream& out, std::ostream& warn) {
  const auto rows = compute_report(files, warn);
  out << "file,archive,repetition,model,size,feasible_rate,excluded_infinite,hv\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.file << ',' << r.archive << ',' << r.repetition << ',' << r.model << ',' << r.size << ',';
    std::snprintf(buf, sizeof buf, "%.6f,%zu,%.10f", r.feasible_rate, r.excluded_infinite, r.hv);
    out << buf << '\n';
  }
}

void cmd_hv(std::span<const fs::path> files, std::ostream& out, std::ostream& warn) {
  const auto rows = compute_report(files, warn);
  out << "file,hv\n";
  char buf[32];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.10f", r.hv);
    out << r.file << ',' << buf << '\n';
  }
}

}  // namespace vnfp::cli
