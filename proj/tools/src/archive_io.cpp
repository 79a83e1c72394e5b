#include "archive_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "vnfp/services_io.hpp"

namespace vnfp::cli {

using nlohmann::json;

namespace {

json encode_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double decode_value(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::runtime_error("objective value must be a number or \"inf\"");
}

}  // namespace

ArchiveRecord to_record(const Solution& solution) {
  ArchiveRecord r;
  r.genotype = genotype_to_json(solution.genotype);
  if (solution.objectives) r.objectives = solution.objectives->values;
  r.unplaced = solution.feasibility.unplaced_instances;
  r.services_without = solution.feasibility.services_without_instances;
  r.eval_seed = solution.eval_seed;
  return r;
}

void write_archive(std::ostream& out, const ArchiveHeader& h, std::span<const Solution> solutions) {
  out << json{{"archive", h.kind},
              {"config_hash", h.config_hash},
              {"seed", h.seed},
              {"repetition", h.repetition},
              {"model", h.model},
              {"arity", h.arity},
              {"evaluations", h.evaluations},
              {"size", solutions.size()}}
             .dump()
      << '\n';
  for (const auto& s : solutions) {
    const auto r = to_record(s);
    json objectives = nullptr;
    if (r.objectives) {
      objectives = json::array();
      for (double v : *r.objectives) objectives.push_back(encode_value(v));
    }
    out << json{{"genotype", r.genotype},
                {"objectives", objectives},
                {"feasible", r.objectives.has_value()},
                {"unplaced", r.unplaced},
                {"services_without", r.services_without},
                {"eval_seed", r.eval_seed}}
               .dump()
        << '\n';
  }
}

void write_archive(const std::filesystem::path& path, const ArchiveHeader& header,
                   std::span<const Solution> solutions) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_archive(out, header, solutions);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

ArchiveFile read_archive(std::istream& in) {
  ArchiveFile file;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      if (!have_header) {
        auto& h = file.header;
        h.kind = j.at("archive").get<std::string>();
        h.config_hash = j.at("config_hash").get<std::string>();
        h.seed = j.at("seed").get<std::uint64_t>();
        h.repetition = j.value("repetition", std::uint64_t{0});
        h.model = j.at("model").get<std::string>();
        h.arity = j.at("arity").get<std::size_t>();
        h.evaluations = j.value("evaluations", std::size_t{0});
        have_header = true;
        continue;
      }
      ArchiveRecord r;
      r.genotype = j.at("genotype");
      if (const auto& o = j.at("objectives"); !o.is_null()) {
        std::vector<double> values;
        for (const auto& v : o) values.push_back(decode_value(v));
        if (values.size() != file.header.arity) throw std::runtime_error("objective arity differs from header");
        r.objectives = std::move(values);
      }
      r.unplaced = j.value("unplaced", 0u);
      r.services_without = j.value("services_without", 0u);
      r.eval_seed = j.value("eval_seed", std::uint64_t{0});
      file.records.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) throw std::runtime_error("archive has no header line");
  return file;
}

ArchiveFile read_archive(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return read_archive(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace vnfp::cli
