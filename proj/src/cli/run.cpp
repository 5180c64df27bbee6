#include <json.hpp>
#include <sstream>

#include "bmhd/cli/commands.hpp"
#include "bmhd/spectral/snapshot.hpp"

namespace bmhd::cli {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Parse:
    case ErrorKind::Io:
    case ErrorKind::Input:
    case ErrorKind::Dimension:
    case ErrorKind::Precondition:
      return kExitConfig;
    default:
      return kExitNumeric;
  }
}

void RunContext::gate(const std::string& name, bool passed, const std::string& detail) {
  gates.push_back({name, passed, detail});
  say(std::string(passed ? "gate pass  " : "gate FAIL  ") + name + ": " + detail);
}

void RunContext::say(const std::string& line) const {
  if (log) *log << line << '\n';
}

namespace {

void write_diagnostics(OutputDir& out, const ExperimentConfig& c, const RunContext& ctx, const std::string& kind,
                       const std::string& message) {
  out.write("diagnostics/config.toml", to_toml(c));
  nlohmann::ordered_json j;
  j["error_kind"] = kind;
  j["message"] = message;
  j["has_last_state"] = ctx.last_state.has_value();
  out.write("diagnostics/error.json", j.dump(2) + "\n");
  if (ctx.last_state) {
    const std::string rel = "diagnostics/last_state.bmhd";
    save_state((out.root() / rel).string(), *ctx.last_state);
    out.write(rel, read_file(out.root() / rel));
  }
}

}  // namespace

int run(const ExperimentConfig& c, std::ostream& log) {
  validate(c);
  OutputDir out(c.output_dir);
  out.write("config.toml", to_toml(c));
  RunContext ctx;
  ctx.log = &log;
  int code = kExitPass;
  std::string status = "pass";
  try {
    if (c.kind == "linear-decay") run_linear_decay(c, out, ctx);
    else if (c.kind == "symbol-sweep") run_symbol_sweep(c, out, ctx);
    else if (c.kind == "harness") run_harness(c, out, ctx);
    else if (c.kind == "simulate") run_simulate(c, out, ctx);
    else if (c.kind == "duhamel-check") run_duhamel_check(c, out, ctx);
    else if (c.kind == "decay-report") run_decay_report(c, out, ctx);
    for (const auto& g : ctx.gates)
      if (!g.passed) {
        code = kExitGate;
        status = "gate-failure";
      }
  } catch (const Error& e) {
    code = exit_code_for(e.kind());
    status = code == kExitConfig ? "config-error" : "numeric-failure";
    log << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    write_diagnostics(out, c, ctx, std::string(to_string(e.kind())), e.what());
  } catch (const std::exception& e) {
    code = kExitNumeric;
    status = "numeric-failure";
    log << "error: " << e.what() << '\n';
    write_diagnostics(out, c, ctx, "exception", e.what());
  }
  out.write_manifest(c, status, code);
  return code;
}

}  // namespace bmhd::cli
