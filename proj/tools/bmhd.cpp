// bmhd: experiment runner for the compressible MHD spectral lab.
//
//   bmhd run config.toml
//   bmhd linear-decay --set dim=3 --set 's=[0, 0.5]' --out out/decay
//   bmhd harness --suite all --seed 42
//   bmhd plot out/decay/trace.csv -o decay.svg
//
// Exit codes: 0 pass, 2 acceptance-gate failure, 3 config error, 4 numeric failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bmhd/cli/commands.hpp"
#include "bmhd/cli/svg.hpp"
#include "bmhd/common/parallel.hpp"

using namespace bmhd;
using namespace bmhd::cli;

namespace {

struct Overrides {
  std::string config;
  std::string out;
  long long seed = -1;
  std::vector<std::string> sets;
  bool dump = false;
  // harness
  std::vector<std::string> suites;
  int samples = 0;
  // decay-report
  std::string input;
};

void apply_set(toml::table& params, const std::string& kv) {
  const auto eq = kv.find('=');
  require(eq != std::string::npos && eq > 0, ErrorKind::Config, "--set expects key=value, got '" + kv + "'");
  const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
  toml::table parsed;
  try {
    parsed = toml::parse("v = " + value);
  } catch (const toml::parse_error&) {
    parsed.insert("v", value);  // bare word: keep it as a string
  }
  params.insert_or_assign(key, *parsed.get("v"));
}

ExperimentConfig build(const std::string& kind, const Overrides& o) {
  ExperimentConfig c;
  if (!o.config.empty()) {
    c = load_config(o.config);
    require(c.kind == kind, ErrorKind::Config, "config kind '" + c.kind + "' does not match subcommand '" + kind + "'");
  } else {
    c.kind = kind;
    c.output_dir = "out/" + kind;
  }
  if (o.seed >= 0) c.seed = static_cast<std::uint64_t>(o.seed);
  if (!o.out.empty()) c.output_dir = o.out;
  if (!o.suites.empty()) {
    toml::array a;
    for (const auto& s : o.suites) a.push_back(s);
    c.params.insert_or_assign("suites", a);
  }
  if (o.samples > 0) c.params.insert_or_assign("n_samples", static_cast<std::int64_t>(o.samples));
  if (!o.input.empty()) c.params.insert_or_assign("input", o.input);
  for (const auto& kv : o.sets) apply_set(c.params, kv);
  validate(c);
  // The run must see exactly what a saved config would give back.
  require(parse_config(to_toml(c)) == c, ErrorKind::Config, "config does not round-trip through TOML");
  return c;
}

int execute(const ExperimentConfig& c, bool dump) {
  if (dump) {
    std::cout << to_toml(c);
    return kExitPass;
  }
  std::cerr << "bmhd " << c.kind << ": seed " << c.seed << ", output " << c.output_dir << ", threads " << thread_cap() << '\n';
  const int code = run(c, std::cerr);
  std::cout << c.kind << ' ' << (code == 0 ? "PASS" : "FAIL") << " exit=" << code << " manifest=" << c.output_dir
            << "/manifest.json\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral lab for compressible viscous MHD perturbations"};
  app.require_subcommand(1);
  Overrides o;
  std::string run_config;
  bool run_dump = false;
  CLI::App* run_cmd = app.add_subcommand("run", "run the experiment a config file describes");
  run_cmd->add_option("config", run_config, "TOML config")->required();
  run_cmd->add_flag("--dump-config", run_dump, "print the canonical config and exit");

  std::vector<std::pair<std::string, CLI::App*>> kinds;
  for (const auto& kind : experiment_kinds()) {
    CLI::App* sc = app.add_subcommand(kind, "run a " + kind + " experiment");
    sc->add_option("-c,--config", o.config, "TOML config (its kind must match)");
    sc->add_option("-o,--out", o.out, "output directory");
    sc->add_option("--seed", o.seed, "seed");
    sc->add_option("--set", o.sets, "override a param: key=value (TOML value)");
    sc->add_flag("--dump-config", o.dump, "print the canonical config and exit");
    if (kind == "harness") {
      sc->add_option("--suite", o.suites, "suite name or 'all' (repeatable)");
      sc->add_option("--samples", o.samples, "samples per check");
    }
    if (kind == "decay-report") sc->add_option("--input", o.input, "simulate output directory");
    kinds.emplace_back(kind, sc);
  }

  std::string csv_path, svg_path, title;
  std::vector<std::string> series;
  double t_lo = 0.0, t_hi = 0.0;
  CLI::App* plot_cmd = app.add_subcommand("plot", "render a trace or sweep CSV as SVG");
  plot_cmd->add_option("csv", csv_path, "trace.csv or sweep.csv written by this tool")->required();
  plot_cmd->add_option("-o,--out", svg_path, "output SVG (default: CSV path with .svg)");
  plot_cmd->add_option("--series", series, "series to draw (repeatable; default all)");
  plot_cmd->add_option("--title", title, "plot title");
  plot_cmd->add_option("--t-lo", t_lo, "fit window start for the slope annotation");
  plot_cmd->add_option("--t-hi", t_hi, "fit window end");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) return execute(load_config(run_config), run_dump);
    for (const auto& [kind, sc] : kinds)
      if (*sc) return execute(build(kind, o), o.dump);
    if (*plot_cmd) {
      PlotOptions po;
      po.series = series;
      po.title = title;
      po.fit_t_lo = t_lo;
      po.fit_t_hi = t_hi;
      const std::string svg = plot_csv(read_file(csv_path), po);
      if (svg_path.empty()) {
        svg_path = csv_path;
        const auto dot = svg_path.rfind('.');
        svg_path = (dot == std::string::npos ? svg_path : svg_path.substr(0, dot)) + ".svg";
      }
      std::ofstream out(svg_path, std::ios::binary | std::ios::trunc);
      require(static_cast<bool>(out), ErrorKind::Io, "cannot write '" + svg_path + "'");
      out << svg;
      std::cout << svg_path << " sha256=" << sha256_hex(svg) << '\n';
      return kExitPass;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitConfig;
}
