// report.hpp
// Structured text (JSON) forms of scenario configs and run summaries.
//
// Report schema, keys in this order:
//   format       "dsqc-run-report/1"
//   config       scenario config, same schema as a config file
//   aggregates   mean_error_rate, abort_fraction, decode_accuracy,
//                detection_rate, z_error_rate, x_error_rate, checked,
//                eta_q, eta_t, loss_rate, eve_accuracy
//   trials       one object per trial, see kTrialKeys
// Undefined rates (nothing to average) are written as null.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dsqc/harness.hpp"
#include "json.hpp"

namespace dsqc {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportFormat = "dsqc-run-report/1";
extern const std::vector<std::string> kAggregateKeys;
extern const std::vector<std::string> kTrialKeys;
extern const std::vector<std::string> kConfigKeys;

Json config_to_json(const ScenarioConfig& cfg);
/// Missing keys keep `base` values. Unknown keys and bad values raise ConfigError.
ScenarioConfig config_from_json(const Json& j, const ScenarioConfig& base = {});
ScenarioConfig load_config(const std::filesystem::path& path);

Json summary_to_json(const RunSummary& summary);
std::string render_report(const RunSummary& summary);

/// Writes the report to `path`; I/O failures name the path.
void emit_report(const RunSummary& summary, const std::filesystem::path& path);

Json load_report(const std::filesystem::path& path);

struct ReplayResult {
    bool identical = false;
    std::vector<std::string> mismatches;  // JSON pointers that differ
};

/// Re-runs the report's config and compares every field.
ReplayResult replay_report(const Json& report, unsigned threads = 1);

/// Path of the transcript log written next to a report.
std::filesystem::path transcript_path(const std::filesystem::path& report_path);

/// Runs `cfg`, writing the report and its per-trial transcript log.
RunSummary run_and_emit(const ScenarioConfig& cfg, const std::filesystem::path& path, unsigned threads = 1);

}  // namespace dsqc
