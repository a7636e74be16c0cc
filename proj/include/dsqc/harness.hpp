// harness.hpp
// Scenario configuration, Monte Carlo execution and aggregation.
//
// Trial i runs on seed splitmix64(master_seed + splitmix64(i + 1)), so the
// result of a trial depends only on the config and its index. Aggregates are
// folded in trial-index order regardless of execution order.

#pragma once

#include <complex>
#include <functional>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsqc/channel.hpp"
#include "dsqc/protocols.hpp"

namespace dsqc {

/// Invalid configuration; carries one line per offending field.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const { return issues_; }

private:
    std::vector<std::string> issues_;
};

struct MessageSpec {
    /// Explicit dits, sent identically in every trial.
    std::optional<std::vector<int>> dits;
    /// Otherwise a fresh uniformly random message of this length per trial.
    std::size_t random_length = 256;
};

struct ScenarioConfig {
    std::string name = "custom";
    Protocol protocol = Protocol::Entangled;
    Variant variant = Variant::Eager;
    int d = 2;
    /// Pair amplitudes a_j; empty means uniform.
    std::vector<std::complex<double>> profile;
    MessageSpec message;
    double decoy_fraction = 0.1;
    double threshold = 0.05;
    CheckMode check_mode = CheckMode::Decoy;
    std::optional<bool> anti_correlated;
    ChannelModel channel;
    Adversary adversary;
    std::size_t trials = 100;
    /// Master seed; required.
    std::optional<std::uint64_t> seed;
    /// Longest message one session carries; longer messages are chunked.
    std::size_t session_capacity = 4096;

    /// Every problem found, as "field: reason". Empty when valid.
    std::vector<std::string> problems() const;
    void validate() const;

    AmplitudeProfile amplitude_profile() const;
    ProtocolConfig protocol_config() const;
};

/// Per-trial figures, all recomputable from the sessions of that trial.
struct TrialSummary {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::size_t sessions = 0;
    std::size_t message_len = 0;
    std::size_t aborted_sessions = 0;
    std::size_t checked = 0;
    std::size_t check_errors = 0;
    std::size_t z_checked = 0, z_errors = 0;
    std::size_t x_checked = 0, x_errors = 0;
    std::size_t positions = 0;
    std::size_t message_positions = 0;
    std::size_t lost = 0;
    std::size_t decoded = 0;
    std::size_t decoded_correct = 0;
    std::size_t transcript_bits = 0;
    std::optional<double> eta_t;
    std::optional<double> eve_accuracy;

    bool aborted() const { return aborted_sessions > 0; }
    std::optional<double> error_rate() const;
    double eta_q() const;
};

struct Aggregates {
    std::optional<double> mean_error_rate;  // mean of per-trial check error rates
    double abort_fraction = 0;
    std::optional<double> decode_accuracy;  // pooled over decoded dits
    std::optional<double> detection_rate;   // pooled check errors / checked
    std::optional<double> z_error_rate;
    std::optional<double> x_error_rate;
    std::size_t checked = 0;
    double eta_q = 0;
    std::optional<double> eta_t;
    double loss_rate = 0;
    std::optional<double> eve_accuracy;
};

struct TrialResult {
    TrialSummary summary;
    std::vector<SessionReport> sessions;
};

struct RunSummary {
    ScenarioConfig config;
    std::vector<TrialSummary> trials;
    Aggregates aggregates;
};

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t index);

/// One trial; independent of every other trial.
TrialResult run_trial(const ScenarioConfig& cfg, std::size_t index);

/// Figures for one trial from the message chunks it sent and their sessions.
TrialSummary summarize_trial(std::size_t index, std::uint64_t seed, const std::vector<SecretMessage>& chunks,
                             const std::vector<SessionReport>& sessions);

/// Deterministic fold over trials in the given order.
Aggregates aggregate(const std::vector<TrialSummary>& trials);

struct RunOptions {
    unsigned threads = 1;
    /// Receives each finished trial (in index order) before its sessions are dropped.
    std::function<void(const TrialResult&)> on_trial;
};

RunSummary run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {});

struct Preset {
    std::string name;
    std::string description;
    ScenarioConfig config;
};

const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);

}  // namespace dsqc
