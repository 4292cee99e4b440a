#pragma once

// CSV / JSON serialization shared by the command-line tool and its tests.
// All numbers are written locale-independently in shortest round-trip form.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "dandelion/core_model.hpp"
#include "dandelion/distribution.hpp"
#include "dandelion/format.hpp"
#include "dandelion/metrics.hpp"
#include "dandelion/oracle.hpp"

namespace dandelion {

/// Provenance record written next to (or inside) every output.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> generator;
  std::string tool_version = DANDELION_VERSION;
  std::string timestamp;
};

/// Current UTC time, e.g. "2026-10-17T08:30:00Z".
std::string utc_timestamp();

nlohmann::json manifest_json(const RunManifest& manifest);

/// Calibration summary as ordered key/value pairs.
nlohmann::ordered_json calibration_json(const ModelConfig& cfg, const CalibratedParams& params);
void write_calibration_text(std::ostream& out, const ModelConfig& cfg,
                            const CalibratedParams& params);

void write_pmf_csv(std::ostream& out, const LossPmf& pmf);
nlohmann::ordered_json pmf_json(const LossPmf& pmf);

void write_report_csv(std::ostream& out, const RiskReport& report);
nlohmann::ordered_json report_json(const RiskReport& report);

/// Rows rho,var,mode,mode_prob,mean,variance followed by a "# rho_star=..." footer.
void write_scan_csv(std::ostream& out, const ScanResult& scan);
nlohmann::ordered_json scan_json(const ScanResult& scan);

void write_draws_csv(std::ostream& out, std::span<const Draw> draws);
nlohmann::ordered_json draws_json(std::span<const Draw> draws);

}  // namespace dandelion
