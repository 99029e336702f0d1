// rovctl: run ROV depth-positioning experiments from flat config files.
//
// Exit codes: 0 success, 1 output I/O failure, 2 config or usage error,
// 3 numerical divergence. Diagnostics go to stderr.

#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rovctl/config.hpp"
#include "rovctl/errors.hpp"
#include "rovctl/report.hpp"
#include "rovctl/simulation.hpp"

namespace fs = std::filesystem;
using namespace rovctl;

namespace {

enum Exit : int { kOk = 0, kIoError = 1, kConfigError = 2, kDiverged = 3 };

struct CommonArgs {
  std::string config;
  std::string out;
  std::vector<std::string> set;
  std::uint64_t seed = 0;
  bool no_ann = false;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_out = true) {
  cmd->add_option("--config", a.config, "Experiment config file")->required();
  if (with_out) cmd->add_option("--out", a.out, "Output directory (default $ROVCTL_OUT or ./out)");
  cmd->add_option("--set", a.set, "Override a config key, KEY=VALUE (repeatable)");
  cmd->add_option("--seed", a.seed, "Override the master seed");
  cmd->add_flag("--no-ann", a.no_ann, "Disable the neural-network compensator");
}

ConfigOverrides overrides_of(const CommonArgs& a, bool seed_given) {
  ConfigOverrides o;
  for (const std::string& s : a.set) o.set.push_back(parse_assignment(s));
  if (seed_given) o.seed = a.seed;
  o.no_ann = a.no_ann;
  return o;
}

fs::path out_dir(const CommonArgs& a) {
  if (!a.out.empty()) return a.out;
  if (const char* env = std::getenv("ROVCTL_OUT"); env && *env) return env;
  return "out";
}

std::string to_text(const auto& writer) {
  std::ostringstream os;
  writer(os);
  return os.str();
}

void write_run(const fs::path& dir, const SimRecord& rec, bool with_weights) {
  fs::create_directories(dir);
  write_file_atomic(dir / "trace.csv", trace_csv(rec));
  write_file_atomic(dir / "metrics.txt",
                    to_text([&](std::ostream& os) { write_metrics(os, rec.metrics); }));
  if (with_weights && !rec.weights.empty())
    write_file_atomic(dir / "weights.csv",
                      to_text([&](std::ostream& os) { write_weights_csv(os, rec); }));
}

int cmd_run(const CommonArgs& a, bool seed_given) {
  const SimConfig cfg = load_config(a.config, overrides_of(a, seed_given));
  const SimRecord rec = run_scenario(cfg);
  write_run(out_dir(a), rec, cfg.ann_enabled);
  std::cout << to_text([&](std::ostream& os) { write_metrics(os, rec.metrics); });
  return kOk;
}

int cmd_compare(const CommonArgs& a, bool seed_given, const std::string& baseline) {
  const ConfigOverrides ov = overrides_of(a, seed_given);
  SimConfig first = load_config(a.config, ov);
  SimConfig second;
  std::string label_a, label_b;
  if (baseline.empty()) {
    first.ann_enabled = true;
    second = first;
    second.ann_enabled = false;
    label_a = "ann_on";
    label_b = "ann_off";
  } else {
    second = load_config(baseline, ov);
    label_a = "config";
    label_b = "baseline";
  }
  auto fa = std::async(std::launch::async, [&] { return run_scenario(first); });
  auto fb = std::async(std::launch::async, [&] { return run_scenario(second); });
  const SimRecord ra = fa.get();
  const SimRecord rb = fb.get();

  const fs::path dir = out_dir(a);
  write_run(dir / label_a, ra, first.ann_enabled);
  write_run(dir / label_b, rb, second.ann_enabled);
  const std::string report = to_text(
      [&](std::ostream& os) { write_comparison(os, label_a, ra.metrics, label_b, rb.metrics); });
  write_file_atomic(dir / "comparison.txt", report);
  std::cout << report;
  return kOk;
}

int cmd_sweep(const CommonArgs& a, bool seed_given, const std::string& param,
              const std::vector<std::string>& values) {
  std::vector<SimConfig> configs;
  for (const std::string& v : values) {
    ConfigOverrides ov = overrides_of(a, seed_given);
    ov.set.emplace_back(param, v);
    configs.push_back(load_config(a.config, ov));
  }
  std::vector<std::future<SimRecord>> runs;
  for (const SimConfig& c : configs)
    runs.push_back(std::async(std::launch::async, [&c] { return run_scenario(c); }));

  std::ostringstream csv;
  csv << "value,rms_error,max_abs_error,velocity_overshoot,limit_cycle_amplitude\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const Metrics m = runs[i].get().metrics;
    csv << values[i] << ',' << format_double(m.rms_error) << ',' << format_double(m.max_abs_error)
        << ',' << format_double(m.velocity_overshoot) << ','
        << format_double(m.limit_cycle_amplitude) << '\n';
  }
  const fs::path dir = out_dir(a);
  fs::create_directories(dir);
  write_file_atomic(dir / "sweep.csv", csv.str());
  std::cout << csv.str();
  return kOk;
}

int cmd_validate(const CommonArgs& a, bool seed_given) {
  std::cout << dump_config(load_config(a.config, overrides_of(a, seed_given)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ROV dynamic-positioning experiments"};
  app.require_subcommand(1);

  CommonArgs run_args, cmp_args, sweep_args, val_args;
  std::string baseline, param, values_csv;

  auto* run = app.add_subcommand("run", "Run one scenario, write trace.csv and metrics.txt");
  add_common(run, run_args);
  auto* cmp = app.add_subcommand("compare", "Run with and without compensation (or against --baseline)");
  add_common(cmp, cmp_args);
  cmp->add_option("--baseline", baseline, "Second config to compare against");
  auto* sweep = app.add_subcommand("sweep", "Run the scenario for each value of one key");
  add_common(sweep, sweep_args);
  sweep->add_option("--param", param, "Config key to vary")->required();
  sweep->add_option("--values", values_csv, "Comma-separated values")->required();
  auto* val = app.add_subcommand("validate", "Print the resolved config without running");
  add_common(val, val_args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*run) return cmd_run(run_args, run->count("--seed") > 0);
    if (*cmp) return cmd_compare(cmp_args, cmp->count("--seed") > 0, baseline);
    if (*sweep) {
      std::vector<std::string> values;
      std::stringstream ss(values_csv);
      for (std::string v; std::getline(ss, v, ',');) values.push_back(v);
      return cmd_sweep(sweep_args, sweep->count("--seed") > 0, param, values);
    }
    if (*val) return cmd_validate(val_args, val->count("--seed") > 0);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidParameter& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalFault& e) {
    std::cerr << "diverged: " << e.what() << '\n';
    return kDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kConfigError;
}
