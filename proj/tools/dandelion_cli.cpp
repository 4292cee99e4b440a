// dandelion: command-line front end for the star-graph credit loss model.
//
// Exit codes: 0 success, 2 argument or domain error, 3 I/O error.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <locale>
#include <map>
#include <sstream>
#include <stdexcept>

#include "dandelion/core_model.hpp"
#include "dandelion/distribution.hpp"
#include "dandelion/metrics.hpp"
#include "dandelion/oracle.hpp"
#include "dandelion/report_io.hpp"

namespace fs = std::filesystem;
using namespace dandelion;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

constexpr const char* kOutputDirEnv = "DANDELION_OUTPUT_DIR";

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  double p = 0.4;
  double rho = 0.0;
  int n = 100;
  double level = 0.99;
  int points = 201;
  double margin = 1e-3;
  int jump_threshold = 10;
  long long count = 0;
  std::uint64_t seed = 0;
  std::string format;
  std::string out;
};

fs::path resolve_output(const std::string& out) {
  fs::path path(out);
  if (path.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) path = fs::path(dir) / path;
  }
  return path;
}

// Writes payload to --out (or stdout). CSV/text payloads get a sidecar
// "<file>.manifest.json", or a one-line manifest on stderr when streaming.
void emit(const Options& opt, const RunManifest& manifest,
          const std::function<void(std::ostream&)>& write_payload, bool json_payload) {
  std::ostringstream body;
  body.imbue(std::locale::classic());
  write_payload(body);

  if (opt.out.empty()) {
    std::cout << body.str();
    std::cout.flush();
    if (!json_payload) std::cerr << manifest_json(manifest).dump() << '\n';
    return;
  }

  const fs::path path = resolve_output(opt.out);
  {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open output file " + path.string());
    file << body.str();
    if (!file) throw IoError("failed writing " + path.string());
  }
  if (!json_payload) {
    fs::path sidecar = path;
    sidecar += ".manifest.json";
    std::ofstream file(sidecar, std::ios::binary);
    if (!file) throw IoError("cannot open manifest file " + sidecar.string());
    file << manifest_json(manifest).dump(2) << '\n';
    if (!file) throw IoError("failed writing " + sidecar.string());
  }
}

void emit_json(const Options& opt, const RunManifest& manifest, nlohmann::ordered_json data) {
  nlohmann::ordered_json doc;
  doc["manifest"] = manifest_json(manifest);
  doc["data"] = std::move(data);
  emit(opt, manifest, [&](std::ostream& os) { os << doc.dump(2) << '\n'; }, true);
}

RunManifest base_manifest(const std::string& command, const Options& opt) {
  RunManifest m;
  m.command = command;
  m.parameters["p"] = format_double(opt.p);
  m.parameters["n"] = std::to_string(opt.n);
  m.timestamp = utc_timestamp();
  return m;
}

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (format == f) return;
  }
  throw std::invalid_argument("unsupported --format " + format);
}

void run_calibrate(const Options& opt) {
  require_format(opt.format, {"text", "json"});
  const ModelConfig cfg = make_config(opt.n, opt.p, opt.rho);
  const CalibratedParams params = calibrate(cfg);
  RunManifest m = base_manifest("calibrate", opt);
  m.parameters["rho"] = format_double(opt.rho);
  if (opt.format == "json") {
    emit_json(opt, m, calibration_json(cfg, params));
  } else {
    emit(opt, m, [&](std::ostream& os) { write_calibration_text(os, cfg, params); }, false);
  }
}

void run_pmf(const Options& opt) {
  require_format(opt.format, {"csv", "json"});
  const LossPmf pmf = loss_pmf(make_config(opt.n, opt.p, opt.rho));
  RunManifest m = base_manifest("pmf", opt);
  m.parameters["rho"] = format_double(opt.rho);
  if (opt.format == "json") {
    emit_json(opt, m, pmf_json(pmf));
  } else {
    emit(opt, m, [&](std::ostream& os) { write_pmf_csv(os, pmf); }, false);
  }
}

void run_metrics(const Options& opt) {
  require_format(opt.format, {"json", "csv"});
  const RiskReport report = risk_report(loss_pmf(make_config(opt.n, opt.p, opt.rho)), opt.level);
  RunManifest m = base_manifest("metrics", opt);
  m.parameters["rho"] = format_double(opt.rho);
  m.parameters["level"] = format_double(opt.level);
  if (opt.format == "json") {
    emit_json(opt, m, report_json(report));
  } else {
    emit(opt, m, [&](std::ostream& os) { write_report_csv(os, report); }, false);
  }
}

void run_scan(const Options& opt) {
  require_format(opt.format, {"csv", "json"});
  const GridSpec spec{opt.points, opt.margin, opt.jump_threshold};
  const ScanResult scan = scan_rho(opt.p, opt.n, spec, opt.level);
  RunManifest m = base_manifest("scan", opt);
  m.parameters["points"] = std::to_string(opt.points);
  m.parameters["margin"] = format_double(opt.margin);
  m.parameters["level"] = format_double(opt.level);
  m.parameters["jump_threshold"] = std::to_string(opt.jump_threshold);
  if (opt.format == "json") {
    emit_json(opt, m, scan_json(scan));
  } else {
    emit(opt, m, [&](std::ostream& os) { write_scan_csv(os, scan); }, false);
  }
}

void run_sample(const Options& opt) {
  require_format(opt.format, {"csv", "json"});
  if (opt.count < 1) throw std::domain_error("--count must be at least 1");
  const ModelConfig cfg = make_config(opt.n, opt.p, opt.rho);
  const auto draws = sample(cfg, static_cast<std::size_t>(opt.count), opt.seed);
  RunManifest m = base_manifest("sample", opt);
  m.parameters["rho"] = format_double(opt.rho);
  m.parameters["count"] = std::to_string(opt.count);
  m.seed = opt.seed;
  m.generator = std::string(kSamplerGenerator);
  if (opt.format == "json") {
    emit_json(opt, m, draws_json(draws));
  } else {
    emit(opt, m, [&](std::ostream& os) { write_draws_csv(os, draws); }, false);
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::locale::global(std::locale::classic());
  std::cout.imbue(std::locale::classic());

  CLI::App app{
      "Star-graph (Dandelion) Ising credit loss model.\n"
      "The loss L counts defaults among the N non-central credits; the central\n"
      "node is not included, so L takes values 0..N."};
  app.require_subcommand(1);
  app.set_version_flag("--version", DANDELION_VERSION);

  Options opt;
  std::map<CLI::App*, std::string> formats;
  auto add_model = [&](CLI::App* cmd, bool with_rho) {
    cmd->add_option("--p", opt.p, "default probability shared by every node")->required();
    cmd->add_option("--n", opt.n, "number of non-central credits")->capture_default_str();
    if (with_rho) {
      cmd->add_option("--rho", opt.rho, "central correlation")->required();
    }
    cmd->add_option("--out", opt.out,
                    "output file (stdout if omitted); relative paths are placed under $" +
                        std::string(kOutputDirEnv) + " when set");
  };

  auto* calibrate_cmd = app.add_subcommand("calibrate", "print natural parameters and log Z");
  add_model(calibrate_cmd, true);
  calibrate_cmd->add_option("--format", formats[calibrate_cmd], "text or json")->default_val("text");

  auto* pmf_cmd = app.add_subcommand("pmf", "loss pmf rows l,mass,log_mass");
  add_model(pmf_cmd, true);
  pmf_cmd->add_option("--format", formats[pmf_cmd], "csv or json")->default_val("csv");

  auto* metrics_cmd = app.add_subcommand("metrics", "VaR, mode, moments and peaks at one rho");
  add_model(metrics_cmd, true);
  metrics_cmd->add_option("--level", opt.level, "VaR confidence level")->capture_default_str();
  metrics_cmd->add_option("--format", formats[metrics_cmd], "json or csv")->default_val("json");

  auto* scan_cmd = app.add_subcommand("scan", "risk metrics over a rho grid");
  add_model(scan_cmd, false);
  scan_cmd->add_option("--points", opt.points, "grid size (>= 3)")->capture_default_str();
  scan_cmd->add_option("--margin", opt.margin, "distance kept from each rho bound")
      ->capture_default_str();
  scan_cmd->add_option("--level", opt.level, "VaR confidence level")->capture_default_str();
  scan_cmd->add_option("--jump-threshold", opt.jump_threshold,
                       "smallest adjacent mode change reported as rho_star")
      ->capture_default_str();
  scan_cmd->add_option("--format", formats[scan_cmd], "csv or json")->default_val("csv");

  auto* sample_cmd = app.add_subcommand("sample", "Monte Carlo draws of (l0, loss)");
  add_model(sample_cmd, true);
  sample_cmd->add_option("--count", opt.count, "number of draws")->required();
  sample_cmd->add_option("--seed", opt.seed, "generator seed")->capture_default_str();
  sample_cmd->add_option("--format", formats[sample_cmd], "csv or json")->default_val("csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  for (const auto& [cmd, format] : formats) {
    if (*cmd) opt.format = format;
  }

  try {
    if (*calibrate_cmd) run_calibrate(opt);
    else if (*pmf_cmd) run_pmf(opt);
    else if (*metrics_cmd) run_metrics(opt);
    else if (*scan_cmd) run_scan(opt);
    else if (*sample_cmd) run_sample(opt);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}
