// Copyright (c) netinv contributors.
// SPDX-License-Identifier: Apache-2.0
#include "netinv/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "netinv/errors.hpp"
#include "netinv/generators.hpp"
#include "netinv/serialize.hpp"

namespace netinv::cli {

namespace {

int log_level() {
  const char* env = std::getenv("PREIMAGE_LOG");
  return env ? std::atoi(env) : 0;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const RunConfig& config, std::ostream& out, const std::string& payload) {
  if (config.out_path.empty()) {
    out << payload;
    return;
  }
  std::ofstream file(config.out_path, std::ios::binary);
  if (!file) throw Error("cannot open output file: " + config.out_path);
  file << payload;
}

Preimage compute_from_config(const RunConfig& config, std::ostream& err) {
  const Network net = parse_model(read_file(config.model_path));
  BranchBudget budget;
  budget.max_branches = config.max_branches;
  budget.strict = config.strict_budget;
  EngineOptions options;
  options.symbolic = config.symbolic;
  options.threads = config.threads;

  Preimage preimage = config.symbolic ? compute_preimage_symbolic(net, budget, options)
                                      : compute_preimage(net, config.target, budget, options);
  if (log_level() >= 1) {
    err << "[netinv] enumerated " << preimage.enumerated_count << " of " << preimage.omega_bound << " branches, "
        << preimage.branches.size() << " feasible\n";
  }
  return preimage;
}

std::vector<std::size_t> parse_shape(const std::string& text) {
  std::vector<std::size_t> shape;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const long v = std::atol(item.c_str());
    if (v <= 0) throw Error("invalid shape component: " + item);
    shape.push_back(static_cast<std::size_t>(v));
  }
  if (shape.size() < 2) throw Error("a shape needs at least two comma-separated widths");
  return shape;
}

}  // namespace

std::vector<Rational> parse_target_csv(const std::string& csv) {
  std::vector<Rational> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    // Tolerate the unicode minus sign that copy-paste likes to produce.
    std::string cleaned;
    for (std::size_t i = 0; i < item.size();) {
      if (item.compare(i, 3, "\xE2\x88\x92") == 0) {
        cleaned.push_back('-');
        i += 3;
      } else if (item[i] == ' ') {
        ++i;
      } else {
        cleaned.push_back(item[i++]);
      }
    }
    try {
      out.push_back(Rational::from_string(cleaned));
    } catch (const std::invalid_argument& e) {
      throw Error(std::string("bad target component: ") + e.what());
    }
  }
  if (out.empty()) throw Error("empty target");
  return out;
}

GridSpec parse_grid(const std::string& text) {
  std::stringstream ss(text);
  std::string lo, hi, step;
  if (!std::getline(ss, lo, ':') || !std::getline(ss, hi, ':') || !std::getline(ss, step, ':')) {
    throw Error("grid spec must be lo:hi:step");
  }
  try {
    GridSpec grid{Rational::from_string(lo), Rational::from_string(hi), Rational::from_string(step)};
    if (grid.step.sign() <= 0 || grid.hi < grid.lo) throw Error("grid spec must satisfy lo <= hi, step > 0");
    return grid;
  } catch (const std::invalid_argument& e) {
    throw Error(std::string("bad grid spec: ") + e.what());
  }
}

int cmd_preimage(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Preimage preimage = compute_from_config(config, err);
    write_output(config, out,
                 config.format == RunConfig::Format::Json ? preimage_to_json(preimage) : preimage_to_text(preimage));
    return preimage.branches.empty() ? 2 : 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.verify == RunConfig::Verify::None) throw Error("verify mode is none; nothing to check");
    if (config.symbolic) throw Error("verification supports concrete targets only");
    const Network net = parse_model(read_file(config.model_path));
    const Preimage preimage = compute_from_config(config, err);

    VerificationReport report;
    if (config.verify == RunConfig::Verify::RoundTrip) {
      report = verify_round_trip(net, preimage, config.samples, config.seed);
    } else {
      report = verify_completeness_grid(net, config.target, preimage, config.grid);
    }
    write_output(config, out, report_to_json(report));
    return report.passed() ? 0 : 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

std::vector<BenchRow> run_bench(const std::vector<std::vector<std::size_t>>& shapes, std::uint64_t seed,
                                const Activation& hidden) {
  std::vector<BenchRow> rows;
  for (std::size_t si = 0; si < shapes.size(); ++si) {
    DetRng rng(seed + 1000003ULL * si);
    const Network net = random_network(shapes[si], hidden, rng);
    const std::vector<Rational> x0 = random_point(net.input_dim, rng);
    const std::vector<Rational> y = forward(net, x0);

    EngineStats stats;
    const auto start = std::chrono::steady_clock::now();
    const Preimage preimage = compute_preimage(net, y, {}, {}, &stats);
    const auto stop = std::chrono::steady_clock::now();

    BenchRow row;
    std::ostringstream shape_text;
    for (std::size_t k = 0; k < shapes[si].size(); ++k) {
      if (k) shape_text << 'x';
      shape_text << shapes[si][k];
    }
    row.shape = shape_text.str();
    row.omega = preimage.omega_bound;
    row.enumerated = preimage.enumerated_count;
    row.feasible = preimage.branches.size();
    row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    row.peak_constraints = std::max(stats.peak_branch_constraints, stats.peak_fm_constraints);
    rows.push_back(std::move(row));
  }
  return rows;
}

int cmd_bench(const std::vector<std::vector<std::size_t>>& shapes, std::uint64_t seed, const Activation& hidden,
              RunConfig::Format format, std::ostream& out, std::ostream& err) {
  try {
    const std::vector<BenchRow> rows = run_bench(shapes, seed, hidden);
    if (format == RunConfig::Format::Json) {
      nlohmann::ordered_json doc = nlohmann::ordered_json::array();
      for (const auto& r : rows) {
        nlohmann::ordered_json jr = nlohmann::ordered_json::object();
        jr["shape"] = r.shape;
        jr["omega_bound"] = r.omega;
        jr["enumerated"] = r.enumerated;
        jr["feasible"] = r.feasible;
        jr["wall_ms"] = r.wall_ms;
        jr["peak_constraints"] = r.peak_constraints;
        doc.push_back(std::move(jr));
      }
      out << doc.dump(2) << '\n';
    } else {
      out << "shape        omega  enumerated  feasible     wall_ms  peak_constraints\n";
      for (const auto& r : rows) {
        std::ostringstream line;
        line << r.shape;
        out << line.str();
        for (std::size_t pad = line.str().size(); pad < 11; ++pad) out << ' ';
        out << ' ' << r.omega << "  " << r.enumerated << "  " << r.feasible << "  " << r.wall_ms << "  "
            << r.peak_constraints << '\n';
      }
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact preimages of piecewise-linear feed-forward networks"};
  app.require_subcommand(1);

  RunConfig config;
  std::string target_csv;
  std::string grid_text = "-3:3:1/4";
  std::string verify_text = "none";
  std::string format_text = "json";
  std::uint64_t max_branches = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--model", config.model_path, "model JSON path")->required();
    cmd->add_option("--target", target_csv, "comma-separated rational target");
    cmd->add_option("--max-branches", max_branches, "branch budget (0 = unlimited)");
    cmd->add_flag("--strict-budget", config.strict_budget, "fail instead of truncating at the budget");
    cmd->add_flag("--symbolic", config.symbolic, "keep the target symbolic");
    cmd->add_option("--verify", verify_text, "none|roundtrip|grid");
    cmd->add_option("--samples", config.samples, "samples per branch for round-trip verification");
    cmd->add_option("--grid", grid_text, "lo:hi:step lattice for grid verification");
    cmd->add_option("--format", format_text, "json|text");
    cmd->add_option("--out", config.out_path, "output path (default stdout)");
    cmd->add_option("--seed", config.seed, "deterministic seed");
    cmd->add_option("--threads", config.threads, "worker threads (results are identical for any value)");
  };

  CLI::App* preimage_cmd = app.add_subcommand("preimage", "compute the analytical preimage of a target");
  add_common(preimage_cmd);
  CLI::App* verify_cmd = app.add_subcommand("verify", "compute a preimage and verify it against the network");
  add_common(verify_cmd);

  CLI::App* bench_cmd = app.add_subcommand("bench", "measure branch growth over layer shapes");
  std::vector<std::string> shape_texts;
  std::string hidden_text = "relu";
  std::string alpha_text = "1/10";
  std::string bench_format_text = "text";
  std::uint64_t bench_seed = 0;
  bench_cmd->add_option("--shape", shape_texts, "layer widths, e.g. 2,3,2 (repeatable)")->required();
  bench_cmd->add_option("--seed", bench_seed, "deterministic seed");
  bench_cmd->add_option("--hidden", hidden_text, "relu|prelu|identity hidden activation");
  bench_cmd->add_option("--alpha", alpha_text, "prelu alpha");
  bench_cmd->add_option("--format", bench_format_text, "json|text");

  std::vector<std::string> cli_args(args.rbegin(), args.rend());  // CLI11 wants reversed argv tail
  try {
    app.parse(cli_args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    auto parse_format = [&](const std::string& text) {
      if (text == "json") return RunConfig::Format::Json;
      if (text == "text") return RunConfig::Format::Text;
      throw Error("unknown format: " + text);
    };

    if (bench_cmd->parsed()) {
      std::vector<std::vector<std::size_t>> shapes;
      for (const auto& s : shape_texts) shapes.push_back(parse_shape(s));
      Activation hidden = Activation::relu();
      if (hidden_text == "prelu") {
        hidden = Activation::prelu(Rational::from_string(alpha_text));
      } else if (hidden_text == "identity") {
        hidden = Activation::identity();
      } else if (hidden_text != "relu") {
        throw Error("unknown hidden activation: " + hidden_text);
      }
      return cmd_bench(shapes, bench_seed, hidden, parse_format(bench_format_text), out, err);
    }

    config.format = parse_format(format_text);
    if (max_branches > 0) config.max_branches = max_branches;
    if (!grid_text.empty()) config.grid = parse_grid(grid_text);
    if (verify_text == "roundtrip") {
      config.verify = RunConfig::Verify::RoundTrip;
    } else if (verify_text == "grid") {
      config.verify = RunConfig::Verify::Grid;
    } else if (verify_text != "none") {
      throw Error("unknown verify mode: " + verify_text);
    }
    if (!config.symbolic) {
      if (target_csv.empty()) throw Error("--target is required unless --symbolic is set");
      config.target = parse_target_csv(target_csv);
    }

    if (verify_cmd->parsed()) return cmd_verify(config, out, err);
    return cmd_preimage(config, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace netinv::cli
