#include "dandelion/report_io.hpp"

#include <chrono>
#include <ctime>
#include <ostream>
#include <stdexcept>

namespace dandelion {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json manifest_json(const RunManifest& manifest) {
  nlohmann::json j;
  j["command"] = manifest.command;
  j["parameters"] = manifest.parameters;
  j["seed"] = manifest.seed ? nlohmann::json(*manifest.seed) : nlohmann::json(nullptr);
  if (manifest.generator) j["generator"] = *manifest.generator;
  j["tool_version"] = manifest.tool_version;
  j["timestamp"] = manifest.timestamp;
  return j;
}

nlohmann::ordered_json calibration_json(const ModelConfig& cfg, const CalibratedParams& params) {
  const RhoInterval iv = rho_bounds(cfg.p);
  nlohmann::ordered_json j;
  j["n"] = cfg.n_credits;
  j["p"] = cfg.p;
  j["rho"] = cfg.rho;
  j["q"] = cfg.q();
  j["alpha"] = params.alpha;
  j["alpha0"] = params.alpha0;
  j["beta"] = params.beta;
  j["log_z"] = params.log_z;
  j["rho_interval"] = {iv.lower, iv.upper};
  return j;
}

void write_calibration_text(std::ostream& out, const ModelConfig& cfg,
                            const CalibratedParams& params) {
  const RhoInterval iv = rho_bounds(cfg.p);
  out << "n = " << cfg.n_credits << '\n'
      << "p = " << format_double(cfg.p) << '\n'
      << "rho = " << format_double(cfg.rho) << '\n'
      << "q = " << format_double(cfg.q()) << '\n'
      << "alpha = " << format_double(params.alpha) << '\n'
      << "alpha0 = " << format_double(params.alpha0) << '\n'
      << "beta = " << format_double(params.beta) << '\n'
      << "log_z = " << format_double(params.log_z) << '\n'
      << "rho_interval = (" << format_double(iv.lower) << ", " << format_double(iv.upper)
      << ")\n";
}

void write_pmf_csv(std::ostream& out, const LossPmf& pmf) {
  out << "l,mass,log_mass\n";
  for (int l = 0; l <= pmf.n(); ++l) {
    out << l << ',' << format_double(pmf.mass()[l]) << ',' << format_double(pmf.log_mass()[l])
        << '\n';
  }
}

nlohmann::ordered_json pmf_json(const LossPmf& pmf) {
  nlohmann::ordered_json j;
  j["n"] = pmf.n();
  j["mass"] = std::vector<double>(pmf.mass().begin(), pmf.mass().end());
  j["log_mass"] = std::vector<double>(pmf.log_mass().begin(), pmf.log_mass().end());
  return j;
}

void write_report_csv(std::ostream& out, const RiskReport& r) {
  out << "level,var,mode,mode_prob,mean,variance,peaks\n";
  out << format_double(r.var_level) << ',' << r.var_value << ',' << r.mode << ','
      << format_double(r.mode_prob) << ',' << format_double(r.mean) << ','
      << format_double(r.variance) << ',';
  for (std::size_t i = 0; i < r.peaks.size(); ++i) out << (i ? ";" : "") << r.peaks[i];
  out << '\n';
}

nlohmann::ordered_json report_json(const RiskReport& r) {
  nlohmann::ordered_json j;
  j["level"] = r.var_level;
  j["var"] = r.var_value;
  j["mode"] = r.mode;
  j["mode_prob"] = r.mode_prob;
  j["mean"] = r.mean;
  j["variance"] = r.variance;
  j["peaks"] = r.peaks;
  return j;
}

void write_scan_csv(std::ostream& out, const ScanResult& scan) {
  out << "rho,var,mode,mode_prob,mean,variance\n";
  for (std::size_t i = 0; i < scan.rho_grid.size(); ++i) {
    const RiskReport& r = scan.reports[i];
    out << format_double(scan.rho_grid[i]) << ',' << r.var_value << ',' << r.mode << ','
        << format_double(r.mode_prob) << ',' << format_double(r.mean) << ','
        << format_double(r.variance) << '\n';
  }
  out << "# rho_star=" << (scan.rho_star ? format_double(*scan.rho_star) : "none")
      << ",jump_size=" << scan.jump_size << '\n';
}

nlohmann::ordered_json scan_json(const ScanResult& scan) {
  nlohmann::ordered_json j;
  j["p"] = scan.p;
  j["n"] = scan.n_credits;
  j["level"] = scan.var_level;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < scan.rho_grid.size(); ++i) {
    const RiskReport& r = scan.reports[i];
    rows.push_back({{"rho", scan.rho_grid[i]},
                    {"var", r.var_value},
                    {"mode", r.mode},
                    {"mode_prob", r.mode_prob},
                    {"mean", r.mean},
                    {"variance", r.variance}});
  }
  j["points"] = std::move(rows);
  j["rho_star"] = scan.rho_star ? nlohmann::ordered_json(*scan.rho_star) : nullptr;
  j["jump_size"] = scan.jump_size;
  return j;
}

void write_draws_csv(std::ostream& out, std::span<const Draw> draws) {
  out << "draw_index,l0,loss\n";
  for (std::size_t i = 0; i < draws.size(); ++i) {
    out << i << ',' << draws[i].l0 << ',' << draws[i].loss << '\n';
  }
}

nlohmann::ordered_json draws_json(std::span<const Draw> draws) {
  std::vector<int> l0;
  std::vector<int> loss;
  l0.reserve(draws.size());
  loss.reserve(draws.size());
  for (const Draw& d : draws) {
    l0.push_back(d.l0);
    loss.push_back(d.loss);
  }
  nlohmann::ordered_json j;
  j["l0"] = std::move(l0);
  j["loss"] = std::move(loss);
  return j;
}

}  // namespace dandelion
