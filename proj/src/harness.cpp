#include "dsqc/harness.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <thread>

namespace dsqc {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
    std::string s = "invalid scenario config:";
    for (const auto& i : issues) s += "\n  " + i;
    return s;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::invalid_argument(join_issues(issues)), issues_(std::move(issues)) {}

std::vector<std::string> ScenarioConfig::problems() const {
    std::vector<std::string> out;
    const bool d_ok = d >= kMinDim && d <= kMaxDim;
    if (name.empty()) out.push_back("name: must not be empty");
    if (!d_ok) out.push_back("d: must lie in [2, 16], got " + std::to_string(d));
    if (!profile.empty()) {
        if (d_ok && profile.size() != static_cast<std::size_t>(d)) {
            out.push_back("profile: expected " + std::to_string(d) + " amplitudes, got " +
                          std::to_string(profile.size()));
        } else {
            double norm = 0;
            bool finite = true;
            for (const auto& a : profile) {
                finite = finite && std::isfinite(a.real()) && std::isfinite(a.imag());
                norm += std::norm(a);
            }
            if (!finite)
                out.push_back("profile: non-finite amplitude");
            else if (std::abs(norm - 1.0) > kTolerance)
                out.push_back("profile: squared amplitudes sum to " + std::to_string(norm) + ", not 1");
        }
    }
    if (message.dits && d_ok) {
        for (std::size_t i = 0; i < message.dits->size(); ++i)
            if ((*message.dits)[i] < 0 || (*message.dits)[i] >= d) {
                out.push_back("message.dits: entry " + std::to_string(i) + " outside [0, d)");
                break;
            }
    }
    if (!(decoy_fraction >= 0.0 && decoy_fraction < 1.0)) out.push_back("decoy_fraction: must lie in [0, 1)");
    if (!(threshold >= 0.0 && threshold <= 1.0)) out.push_back("threshold: must lie in [0, 1]");
    if (protocol == Protocol::SinglePhoton && check_mode == CheckMode::ZCorrelation)
        out.push_back("check_mode: z-correlation needs the entangled protocol");
    if (channel.loss) {
        if (!(channel.loss->lambda >= 0.0) || !std::isfinite(channel.loss->lambda))
            out.push_back("channel.loss.lambda: must be finite and >= 0");
        if (!(channel.loss->length >= 0.0) || !std::isfinite(channel.loss->length))
            out.push_back("channel.loss.length: must be finite and >= 0");
    }
    if (!(channel.depolarize_p >= 0.0 && channel.depolarize_p <= 1.0))
        out.push_back("channel.depolarize_p: must lie in [0, 1]");
    if (trials == 0) out.push_back("trials: must be at least 1");
    if (!seed) out.push_back("seed: required");
    if (session_capacity == 0) out.push_back("session_capacity: must be at least 1");
    return out;
}

void ScenarioConfig::validate() const {
    auto p = problems();
    if (!p.empty()) throw ConfigError(std::move(p));
}

AmplitudeProfile ScenarioConfig::amplitude_profile() const {
    if (profile.empty()) return AmplitudeProfile::uniform(d);
    Ket<double> a(static_cast<Eigen::Index>(profile.size()));
    for (std::size_t j = 0; j < profile.size(); ++j) a(static_cast<Eigen::Index>(j)) = profile[j];
    return AmplitudeProfile(std::move(a));
}

ProtocolConfig ScenarioConfig::protocol_config() const {
    ProtocolConfig p;
    p.decoy_fraction = decoy_fraction;
    p.threshold = threshold;
    p.anti_correlated = anti_correlated;
    p.check_mode = check_mode;
    p.variant = variant;
    return p;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t index) {
    return splitmix64(master_seed + splitmix64(static_cast<std::uint64_t>(index) + 1));
}

TrialResult run_trial(const ScenarioConfig& cfg, std::size_t index) {
    cfg.validate();
    const std::uint64_t seed = trial_seed(*cfg.seed, index);
    RandomStream rng(seed);
    RandomStream message_rng = rng.split();
    const SecretMessage msg = cfg.message.dits ? SecretMessage{cfg.d, *cfg.message.dits}
                                               : SecretMessage::random(cfg.d, cfg.message.random_length, message_rng);
    const auto chunks = chunk_message(msg, cfg.session_capacity);
    const auto pcfg = cfg.protocol_config();

    TrialResult result;
    for (const auto& chunk : chunks) {
        RandomStream session_rng = rng.split();
        if (cfg.protocol == Protocol::Entangled)
            result.sessions.push_back(
                run_entangled_dsqc(chunk, cfg.amplitude_profile(), pcfg, cfg.channel, cfg.adversary, session_rng));
        else
            result.sessions.push_back(run_single_photon_dsqc(chunk, pcfg, cfg.channel, cfg.adversary, session_rng));
    }
    result.summary = summarize_trial(index, seed, chunks, result.sessions);
    return result;
}

std::optional<double> TrialSummary::error_rate() const {
    if (checked == 0) return std::nullopt;
    return static_cast<double>(check_errors) / static_cast<double>(checked);
}

double TrialSummary::eta_q() const {
    return positions == 0 ? 0.0 : static_cast<double>(message_positions) / static_cast<double>(positions);
}

TrialSummary summarize_trial(std::size_t index, std::uint64_t seed, const std::vector<SecretMessage>& chunks,
                             const std::vector<SessionReport>& sessions) {
    if (chunks.size() != sessions.size()) throw std::logic_error("one session per message chunk expected");
    TrialSummary t;
    t.index = index;
    t.seed = seed;
    double eta_t_weighted = 0, eve_weighted = 0;
    std::size_t eta_t_weight = 0, eve_weight = 0;
    for (std::size_t s = 0; s < sessions.size(); ++s) {
        const auto& r = sessions[s];
        const auto& sent = chunks[s].dits;
        ++t.sessions;
        t.message_len += sent.size();
        t.aborted_sessions += r.aborted ? 1 : 0;
        t.checked += r.check.checked;
        t.check_errors += r.check.errors;
        t.z_checked += r.check.z.checked;
        t.z_errors += r.check.z.errors;
        t.x_checked += r.check.x.checked;
        t.x_errors += r.check.x.errors;
        t.positions += r.total_positions;
        t.message_positions += r.message_positions;
        t.lost += r.losses.message + r.losses.check;
        t.transcript_bits += r.transcript.bit_count();
        if (r.decoded) {
            for (std::size_t i = 0; i < r.decoded->size(); ++i) {
                if (!(*r.decoded)[i]) continue;
                ++t.decoded;
                t.decoded_correct += *(*r.decoded)[i] == sent.at(i) ? 1 : 0;
            }
            if (r.delivered_message > 0) {
                eta_t_weighted += r.efficiency.eta_t * static_cast<double>(r.delivered_message);
                eta_t_weight += r.delivered_message;
            }
        }
        if (r.eve_accuracy) {
            eve_weighted += *r.eve_accuracy * static_cast<double>(r.delivered_message);
            eve_weight += r.delivered_message;
        }
    }
    if (eta_t_weight > 0) t.eta_t = eta_t_weighted / static_cast<double>(eta_t_weight);
    if (eve_weight > 0) t.eve_accuracy = eve_weighted / static_cast<double>(eve_weight);
    return t;
}

Aggregates aggregate(const std::vector<TrialSummary>& trials) {
    Aggregates a;
    if (trials.empty()) return a;
    double rate_sum = 0, eta_q_sum = 0, eta_t_sum = 0, eve_sum = 0;
    std::size_t rate_n = 0, eta_t_n = 0, eve_n = 0, aborted = 0;
    std::size_t errors = 0, z_checked = 0, z_errors = 0, x_checked = 0, x_errors = 0;
    std::size_t decoded = 0, correct = 0, positions = 0, lost = 0;
    for (const auto& t : trials) {
        if (auto r = t.error_rate()) {
            rate_sum += *r;
            ++rate_n;
        }
        aborted += t.aborted() ? 1 : 0;
        a.checked += t.checked;
        errors += t.check_errors;
        z_checked += t.z_checked;
        z_errors += t.z_errors;
        x_checked += t.x_checked;
        x_errors += t.x_errors;
        decoded += t.decoded;
        correct += t.decoded_correct;
        positions += t.positions;
        lost += t.lost;
        eta_q_sum += t.eta_q();
        if (t.eta_t) {
            eta_t_sum += *t.eta_t;
            ++eta_t_n;
        }
        if (t.eve_accuracy) {
            eve_sum += *t.eve_accuracy;
            ++eve_n;
        }
    }
    auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };
    const auto n = static_cast<double>(trials.size());
    if (rate_n > 0) a.mean_error_rate = rate_sum / static_cast<double>(rate_n);
    a.abort_fraction = static_cast<double>(aborted) / n;
    a.decode_accuracy = ratio(correct, decoded);
    a.detection_rate = ratio(errors, a.checked);
    a.z_error_rate = ratio(z_errors, z_checked);
    a.x_error_rate = ratio(x_errors, x_checked);
    a.eta_q = eta_q_sum / n;
    if (eta_t_n > 0) a.eta_t = eta_t_sum / static_cast<double>(eta_t_n);
    a.loss_rate = positions == 0 ? 0.0 : static_cast<double>(lost) / static_cast<double>(positions);
    if (eve_n > 0) a.eve_accuracy = eve_sum / static_cast<double>(eve_n);
    return a;
}

RunSummary run_scenario(const ScenarioConfig& cfg, const RunOptions& options) {
    cfg.validate();
    RunSummary summary;
    summary.config = cfg;
    summary.trials.resize(cfg.trials);

    // Finished trials are handed to on_trial strictly in index order.
    std::vector<std::optional<TrialResult>> pending(cfg.trials);
    std::size_t next_to_emit = 0;
    std::mutex mu;
    auto finish = [&](std::size_t i, TrialResult r) {
        std::lock_guard lock(mu);
        summary.trials[i] = r.summary;
        pending[i] = std::move(r);
        while (next_to_emit < cfg.trials && pending[next_to_emit]) {
            if (options.on_trial) options.on_trial(*pending[next_to_emit]);
            pending[next_to_emit].reset();
            ++next_to_emit;
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(cfg.trials)));
    if (workers == 1) {
        for (std::size_t i = 0; i < cfg.trials; ++i) finish(i, run_trial(cfg, i));
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                try {
                    for (std::size_t i = next++; i < cfg.trials; i = next++) finish(i, run_trial(cfg, i));
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!failure) failure = std::current_exception();
                    next = cfg.trials;
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }
    summary.aggregates = aggregate(summary.trials);
    return summary;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Preset> make_presets() {
    std::vector<Preset> out;

    ScenarioConfig base;
    base.seed = 20070501;
    base.d = 2;
    base.profile = {std::sqrt(0.8), std::sqrt(0.2)};

    {
        ScenarioConfig c = base;
        c.name = "baseline-ideal";
        c.trials = 100;
        c.message.random_length = 256;
        out.push_back({c.name, "d=2 pure pairs (|a|^2 = 0.8), ideal channel, no eavesdropper", c});
    }
    {
        ScenarioConfig c = base;
        c.name = "eve-intercept";
        c.trials = 50;
        c.message.random_length = 1800;  // 2000 positions, 200 decoys per trial
        c.adversary = Adversary::intercept_resend(BasisPolicy::RandomZX);
        out.push_back({c.name, "d=2, intercept-resend in a random Z/X basis against decoys", c});
    }
    {
        ScenarioConfig c = base;
        c.name = "eve-z-only-no-decoy";
        c.trials = 50;
        c.message.random_length = 256;
        c.check_mode = CheckMode::ZCorrelation;
        c.adversary = Adversary::intercept_resend(BasisPolicy::FixedZ);
        out.push_back({c.name, "d=2, Z-basis interceptor against a Z-correlation-only check (no decoys)", c});
    }
    {
        ScenarioConfig c = base;
        c.name = "lossy-channel";
        c.trials = 100;
        c.message.random_length = 900;  // 1000 slots per trial
        c.channel.loss = Attenuation{std::numbers::ln2, 1.0};
        out.push_back({c.name, "d=2, attenuation with lambda*L = ln 2", c});
    }
    {
        ScenarioConfig c = base;
        c.name = "depolarizing";
        c.trials = 50;
        c.message.random_length = 1800;
        c.threshold = 0.1;
        c.channel.depolarize_p = 0.1;
        out.push_back({c.name, "d=2, depolarizing channel p = 0.1, no eavesdropper", c});
    }
    {
        ScenarioConfig c = base;
        c.name = "delayed-encoding";
        c.protocol = Protocol::SinglePhoton;
        c.variant = Variant::Delayed;
        c.d = 4;
        c.profile.clear();
        c.trials = 100;
        c.message.random_length = 256;
        out.push_back({c.name, "d=4 single photons, message carried by the combined reveal", c});
    }
    return out;
}

}  // namespace

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = make_presets();
    return all;
}

const Preset& find_preset(const std::string& name) {
    for (const auto& p : presets())
        if (p.name == name) return p;
    throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace dsqc
