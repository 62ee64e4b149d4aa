// Batch front end: generate substrate topologies, run single simulations,
// run experiment sweeps, and compare report files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bavne/serialize.hpp"
#include "bavne/simulation.hpp"

namespace fs = std::filesystem;
using namespace bavne;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

void emit_error(const std::string& message) {
  Json j{{"error", message}};
  std::cerr << j.dump() << '\n';
}

// write-then-rename so partially written outputs never appear
void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> algorithm;
  std::string out;
  std::string format = "json";
  bool trace_fitness = false;
  bool plus_one = false;
  std::optional<std::string> qualified_links;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file mirroring the run schema");
  cmd->add_option("--seed", opts.seed, "override the config seed");
  cmd->add_option("--algorithm", opts.algorithm, "ba-vne | vne-pso | mc-vnm | lid-vne | mp-vne");
  cmd->add_option("--out", opts.out, "output file (or directory for sweep)");
  cmd->add_option("--format", opts.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--trace-fitness", opts.trace_fitness,
                "record per-iteration best-fitness traces in results");
  cmd->add_flag("--plus-one-denominator", opts.plus_one,
                "use the count+1 denominator in the domain bandwidth mean");
  cmd->add_option("--qualified-links", opts.qualified_links,
                  "bandwidth basis for the qualification threshold")
      ->check(CLI::IsMember({"residual", "capacity"}));
}

SimulationConfig load_config(const CommonOpts& opts) {
  SimulationConfig cfg;
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in) throw ConfigError("cannot read config file: " + opts.config_path);
    Json j;
    try {
      in >> j;
    } catch (const Json::exception& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    cfg = config_from_json(j);
  }
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.algorithm) {
    auto a = parse_algorithm(*opts.algorithm);
    if (!a) throw ConfigError("unknown algorithm: " + *opts.algorithm);
    cfg.algorithm = *a;
  }
  if (opts.trace_fitness) cfg.trace_fitness = true;
  if (opts.plus_one) cfg.threshold.plus_one = true;
  if (opts.qualified_links) cfg.threshold.use_capacity = *opts.qualified_links == "capacity";
  cfg.vnr.substrate_domains = cfg.substrate.domains;
  return cfg;
}

int cmd_generate(const CommonOpts& opts) {
  SimulationConfig cfg = load_config(opts);
  SubstrateNetwork net;
  try {
    net = generate_substrate(cfg.substrate, mix_seed(cfg.seed, 0x6e6574));
  } catch (const GenerationError& e) {
    emit_error(std::string(e.what()) + " (attempts=" + std::to_string(e.attempts) + ")");
    return kExitInternal;
  }
  std::string out_path = opts.out.empty() ? "network.json" : opts.out;
  write_atomic(out_path, to_json(net).dump(2) + "\n");
  double mean_bw = 0;
  for (const auto& l : net.links) mean_bw += l.bw_capacity;
  if (!net.links.empty()) mean_bw /= static_cast<double>(net.links.size());
  std::cout << "domains=" << net.domain_count << " nodes=" << net.nodes.size()
            << " links=" << net.links.size() << " mean_bw=" << format_number(mean_bw) << '\n';
  return kExitOk;
}

int cmd_run(const CommonOpts& opts) {
  SimulationConfig cfg = load_config(opts);
  SimulationReport report = run(cfg);
  std::string out_path;
  if (opts.format == "csv") {
    out_path = opts.out.empty() ? "report.csv" : opts.out;
    write_atomic(out_path, metrics_csv(report));
  } else {
    out_path = opts.out.empty() ? "report.json" : opts.out;
    write_atomic(out_path, to_json(report).dump(2) + "\n");
  }
  if (cfg.trace_fitness) {
    fs::path trace_path = fs::path(out_path);
    trace_path.replace_extension(".trace.csv");
    write_atomic(trace_path, fitness_trace_csv(report));
  }
  std::cout << "algorithm=" << to_string(cfg.algorithm) << " arrivals=" << report.total
            << " accepted=" << report.accepted << " acceptance="
            << (report.acceptance_rate ? format_number(*report.acceptance_rate) : "undefined")
            << " utilization=" << format_number(report.time_weighted_utilization) << '\n';
  return kExitOk;
}

int cmd_sweep(const CommonOpts& opts) {
  SimulationConfig cfg = load_config(opts);
  if (!cfg.sweep) throw ConfigError("sweep requires a sweep grid in the config");
  auto cells = sweep(cfg);
  fs::path dir = opts.out.empty() ? fs::path(".") : fs::path(opts.out);
  fs::create_directories(dir);
  for (const auto& [name, content] : experiment_csvs(cells, cfg))
    write_atomic(dir / name, content);
  write_atomic(dir / "sweep_config.json", to_json(cfg).dump(2) + "\n");
  std::cout << "cells=" << cells.size() << " out=" << dir.string() << '\n';
  return kExitOk;
}

struct CompareRow {
  std::string name;
  bool higher_is_better;
  std::vector<std::optional<double>> values;
};

int cmd_compare(const std::vector<std::string>& report_paths) {
  if (report_paths.size() < 2) throw ConfigError("compare needs at least two report files");
  std::vector<ReportSummary> summaries;
  for (const auto& path : report_paths) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read report: " + path);
    Json j;
    try {
      in >> j;
      summaries.push_back(summarize_report(j));
    } catch (const Json::exception& e) {
      throw ConfigError("malformed report " + path + ": " + e.what());
    }
  }

  std::vector<CompareRow> rows{
      {"selected_bandwidth", true, {}}, {"mean_cost", false, {}},   {"acceptance_rate", true, {}},
      {"mean_delay", false, {}},        {"utilization", false, {}},
  };
  for (const auto& s : summaries) {
    rows[0].values.push_back(s.mean_selected_bandwidth);
    rows[1].values.push_back(s.mean_cost);
    rows[2].values.push_back(s.acceptance_rate);
    rows[3].values.push_back(s.mean_delay);
    rows[4].values.push_back(s.time_weighted_utilization);
  }

  std::cout << std::left << std::setw(20) << "index";
  for (const auto& s : summaries) std::cout << std::setw(18) << s.algorithm;
  std::cout << '\n';
  for (const auto& row : rows) {
    std::optional<double> best;
    bool tie = false;
    for (const auto& v : row.values) {
      if (!v) continue;
      if (!best || (row.higher_is_better ? *v > *best : *v < *best)) {
        best = *v;
        tie = false;
      } else if (*v == *best) {
        tie = true;
      }
    }
    std::cout << std::left << std::setw(20) << row.name;
    for (const auto& v : row.values) {
      std::string cell = v ? format_number(*v) : "undefined";
      if (v && best && *v == *best) cell += tie ? " =" : " *";
      std::cout << std::setw(18) << cell;
    }
    std::cout << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bandwidth-aware multi-domain virtual network embedding toolkit"};
  app.require_subcommand(1);

  CommonOpts generate_opts, run_opts, sweep_opts;
  std::vector<std::string> compare_reports;

  add_common(app.add_subcommand("generate", "generate a substrate network"), generate_opts);
  add_common(app.add_subcommand("run", "run one simulation"), run_opts);
  add_common(app.add_subcommand("sweep", "run the experiment sweep and emit per-figure CSVs"),
             sweep_opts);
  app.add_subcommand("compare", "tabulate indices across report files")
      ->add_option("reports", compare_reports, "report JSON files")
      ->expected(-1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error(e.what());
    return kExitUsage;
  }

  try {
    if (app.got_subcommand("generate")) return cmd_generate(generate_opts);
    if (app.got_subcommand("run")) return cmd_run(run_opts);
    if (app.got_subcommand("sweep")) return cmd_sweep(sweep_opts);
    if (app.got_subcommand("compare")) return cmd_compare(compare_reports);
  } catch (const ConfigError& e) {
    emit_error(e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    emit_error(e.what());
    return kExitInternal;
  }
  return kExitUsage;
}
