#include "dsqc/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dsqc {

const std::vector<std::string> kConfigKeys = {
    "name",  "protocol",       "variant",  "d",       "profile", "message", "decoy_fraction", "threshold",
    "check_mode", "anti_correlated", "channel", "adversary", "trials", "seed", "session_capacity",
};

const std::vector<std::string> kAggregateKeys = {
    "mean_error_rate", "abort_fraction", "decode_accuracy", "detection_rate", "z_error_rate", "x_error_rate",
    "checked",         "eta_q",          "eta_t",           "loss_rate",      "eve_accuracy",
};

const std::vector<std::string> kTrialKeys = {
    "index",     "seed",         "sessions", "message_len", "aborted_sessions", "checked",
    "check_errors", "z_checked", "z_errors", "x_checked",   "x_errors",         "positions",
    "message_positions", "lost", "decoded",  "decoded_correct", "transcript_bits", "eta_t",
    "eve_accuracy",
};

namespace {

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

template <typename Enum>
struct Names {
    Enum value;
    const char* name;
};

constexpr Names<Protocol> kProtocols[] = {{Protocol::Entangled, "entangled"},
                                          {Protocol::SinglePhoton, "single-photon"}};
constexpr Names<Variant> kVariants[] = {{Variant::Eager, "eager"}, {Variant::Delayed, "delayed"}};
constexpr Names<CheckMode> kCheckModes[] = {{CheckMode::Decoy, "decoy"}, {CheckMode::ZCorrelation, "z-correlation"}};
constexpr Names<AdversaryKind> kAdversaries[] = {{AdversaryKind::None, "none"},
                                                 {AdversaryKind::InterceptResend, "intercept-resend"},
                                                 {AdversaryKind::Passive, "passive"}};
constexpr Names<BasisPolicy> kPolicies[] = {{BasisPolicy::RandomZX, "random-zx"},
                                            {BasisPolicy::FixedZ, "fixed-z"},
                                            {BasisPolicy::FixedX, "fixed-x"}};

template <typename Enum, std::size_t N>
Enum parse_enum(const Json& j, const Names<Enum> (&table)[N]) {
    const auto s = j.get<std::string>();
    std::string allowed;
    for (const auto& e : table) {
        if (s == e.name) return e.value;
        allowed += std::string(allowed.empty() ? "" : ", ") + e.name;
    }
    throw std::invalid_argument("'" + s + "' is not one of " + allowed);
}

/// Collects per-field failures instead of stopping at the first.
template <typename T>
T get_unsigned(const Json& v) {
    if (!v.is_number_unsigned()) throw std::invalid_argument("expected a nonnegative integer");
    return v.get<T>();
}

class FieldReader {
public:
    explicit FieldReader(std::vector<std::string>& issues) : issues_(issues) {}

    template <typename F>
    void read(const Json& obj, const std::string& key, const std::string& path, F&& assign) {
        if (!obj.contains(key)) return;
        try {
            assign(obj.at(key));
        } catch (const std::exception& e) {
            issues_.push_back(path + ": " + e.what());
        }
    }

    void reject_unknown(const Json& obj, const std::vector<std::string>& known, const std::string& prefix) {
        for (const auto& [k, v] : obj.items())
            if (std::find(known.begin(), known.end(), k) == known.end())
                issues_.push_back(prefix + k + ": unknown key");
    }

private:
    std::vector<std::string>& issues_;
};

}  // namespace

Json config_to_json(const ScenarioConfig& cfg) {
    Json j;
    j["name"] = cfg.name;
    j["protocol"] = to_string(cfg.protocol);
    j["variant"] = to_string(cfg.variant);
    j["d"] = cfg.d;
    if (cfg.profile.empty()) {
        j["profile"] = "uniform";
    } else {
        Json amps = Json::array();
        for (const auto& a : cfg.profile) amps.push_back(Json::array({a.real(), a.imag()}));
        j["profile"] = Json{{"amplitudes", amps}};
    }
    if (cfg.message.dits)
        j["message"] = Json{{"dits", *cfg.message.dits}};
    else
        j["message"] = Json{{"random_length", cfg.message.random_length}};
    j["decoy_fraction"] = cfg.decoy_fraction;
    j["threshold"] = cfg.threshold;
    j["check_mode"] = to_string(cfg.check_mode);
    j["anti_correlated"] = cfg.anti_correlated ? Json(*cfg.anti_correlated) : Json(nullptr);
    Json channel;
    channel["loss"] = cfg.channel.loss ? Json{{"lambda", cfg.channel.loss->lambda}, {"length", cfg.channel.loss->length}}
                                       : Json(nullptr);
    channel["depolarize_p"] = cfg.channel.depolarize_p;
    j["channel"] = channel;
    j["adversary"] = Json{{"kind", to_string(cfg.adversary.kind)}, {"policy", to_string(cfg.adversary.policy)}};
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed ? Json(*cfg.seed) : Json(nullptr);
    j["session_capacity"] = cfg.session_capacity;
    return j;
}

ScenarioConfig config_from_json(const Json& j, const ScenarioConfig& base) {
    if (!j.is_object()) throw ConfigError({"config: expected a JSON object"});
    ScenarioConfig c = base;
    std::vector<std::string> issues;
    FieldReader r(issues);
    r.reject_unknown(j, kConfigKeys, "");

    r.read(j, "name", "name", [&](const Json& v) { c.name = v.get<std::string>(); });
    r.read(j, "protocol", "protocol", [&](const Json& v) { c.protocol = parse_enum(v, kProtocols); });
    r.read(j, "variant", "variant", [&](const Json& v) { c.variant = parse_enum(v, kVariants); });
    r.read(j, "d", "d", [&](const Json& v) { c.d = v.get<int>(); });
    r.read(j, "profile", "profile", [&](const Json& v) {
        if (v.is_string()) {
            if (v.get<std::string>() != "uniform") throw std::invalid_argument("expected \"uniform\" or an object");
            c.profile.clear();
            return;
        }
        if (!v.is_object() || v.size() != 1)
            throw std::invalid_argument("expected {\"amplitudes\": [...]} or {\"probabilities\": [...]}");
        c.profile.clear();
        if (v.contains("amplitudes")) {
            for (const auto& a : v.at("amplitudes")) {
                if (a.is_number())
                    c.profile.emplace_back(a.get<double>(), 0.0);
                else
                    c.profile.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
            }
        } else if (v.contains("probabilities")) {
            for (const auto& p : v.at("probabilities")) {
                const double x = p.get<double>();
                if (!(x >= 0)) throw std::invalid_argument("negative probability");
                c.profile.emplace_back(std::sqrt(x), 0.0);
            }
        } else {
            throw std::invalid_argument("expected key \"amplitudes\" or \"probabilities\"");
        }
    });
    r.read(j, "message", "message", [&](const Json& v) {
        r.reject_unknown(v, {"dits", "random_length"}, "message.");
        if (v.contains("dits")) {
            c.message.dits = v.at("dits").get<std::vector<int>>();
        } else {
            c.message.dits.reset();
            r.read(v, "random_length", "message.random_length",
                   [&](const Json& x) { c.message.random_length = get_unsigned<std::size_t>(x); });
        }
    });
    r.read(j, "decoy_fraction", "decoy_fraction", [&](const Json& v) { c.decoy_fraction = v.get<double>(); });
    r.read(j, "threshold", "threshold", [&](const Json& v) { c.threshold = v.get<double>(); });
    r.read(j, "check_mode", "check_mode", [&](const Json& v) { c.check_mode = parse_enum(v, kCheckModes); });
    r.read(j, "anti_correlated", "anti_correlated", [&](const Json& v) {
        if (v.is_null())
            c.anti_correlated.reset();
        else
            c.anti_correlated = v.get<bool>();
    });
    r.read(j, "channel", "channel", [&](const Json& v) {
        r.reject_unknown(v, {"loss", "depolarize_p"}, "channel.");
        r.read(v, "loss", "channel.loss", [&](const Json& x) {
            if (x.is_null()) {
                c.channel.loss.reset();
                return;
            }
            r.reject_unknown(x, {"lambda", "length"}, "channel.loss.");
            c.channel.loss = Attenuation{x.at("lambda").get<double>(), x.at("length").get<double>()};
        });
        r.read(v, "depolarize_p", "channel.depolarize_p",
               [&](const Json& x) { c.channel.depolarize_p = x.get<double>(); });
    });
    r.read(j, "adversary", "adversary", [&](const Json& v) {
        r.reject_unknown(v, {"kind", "policy"}, "adversary.");
        r.read(v, "kind", "adversary.kind", [&](const Json& x) { c.adversary.kind = parse_enum(x, kAdversaries); });
        r.read(v, "policy", "adversary.policy",
               [&](const Json& x) { c.adversary.policy = parse_enum(x, kPolicies); });
    });
    r.read(j, "trials", "trials", [&](const Json& v) { c.trials = get_unsigned<std::size_t>(v); });
    r.read(j, "seed", "seed", [&](const Json& v) {
        if (v.is_null())
            c.seed.reset();
        else
            c.seed = get_unsigned<std::uint64_t>(v);
    });
    r.read(j, "session_capacity", "session_capacity",
           [&](const Json& v) { c.session_capacity = get_unsigned<std::size_t>(v); });

    if (!issues.empty()) throw ConfigError(std::move(issues));
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path.string() + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError({"config '" + path.string() + "': " + e.what()});
    }
    return config_from_json(j);
}

Json summary_to_json(const RunSummary& summary) {
    Json j;
    j["format"] = kReportFormat;
    j["config"] = config_to_json(summary.config);

    const auto& a = summary.aggregates;
    Json agg;
    agg["mean_error_rate"] = opt(a.mean_error_rate);
    agg["abort_fraction"] = a.abort_fraction;
    agg["decode_accuracy"] = opt(a.decode_accuracy);
    agg["detection_rate"] = opt(a.detection_rate);
    agg["z_error_rate"] = opt(a.z_error_rate);
    agg["x_error_rate"] = opt(a.x_error_rate);
    agg["checked"] = a.checked;
    agg["eta_q"] = a.eta_q;
    agg["eta_t"] = opt(a.eta_t);
    agg["loss_rate"] = a.loss_rate;
    agg["eve_accuracy"] = opt(a.eve_accuracy);
    j["aggregates"] = agg;

    Json trials = Json::array();
    for (const auto& t : summary.trials) {
        Json tj;
        tj["index"] = t.index;
        tj["seed"] = t.seed;
        tj["sessions"] = t.sessions;
        tj["message_len"] = t.message_len;
        tj["aborted_sessions"] = t.aborted_sessions;
        tj["checked"] = t.checked;
        tj["check_errors"] = t.check_errors;
        tj["z_checked"] = t.z_checked;
        tj["z_errors"] = t.z_errors;
        tj["x_checked"] = t.x_checked;
        tj["x_errors"] = t.x_errors;
        tj["positions"] = t.positions;
        tj["message_positions"] = t.message_positions;
        tj["lost"] = t.lost;
        tj["decoded"] = t.decoded;
        tj["decoded_correct"] = t.decoded_correct;
        tj["transcript_bits"] = t.transcript_bits;
        tj["eta_t"] = opt(t.eta_t);
        tj["eve_accuracy"] = opt(t.eve_accuracy);
        trials.push_back(std::move(tj));
    }
    j["trials"] = std::move(trials);
    return j;
}

std::string render_report(const RunSummary& summary) { return summary_to_json(summary).dump(2) + "\n"; }

void emit_report(const RunSummary& summary, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open report '" + path.string() + "' for writing");
    out << render_report(summary);
    out.flush();
    if (!out) throw std::runtime_error("failed writing report '" + path.string() + "'");
}

Json load_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open report '" + path.string() + "'");
    try {
        Json j = Json::parse(in);
        if (!j.contains("format") || j.at("format") != kReportFormat)
            throw std::runtime_error("not a " + std::string(kReportFormat) + " report");
        return j;
    } catch (const std::exception& e) {
        throw std::runtime_error("report '" + path.string() + "': " + e.what());
    }
}

ReplayResult replay_report(const Json& report, unsigned threads) {
    const auto cfg = config_from_json(report.at("config"));
    RunOptions opts;
    opts.threads = threads;
    const Json fresh = summary_to_json(run_scenario(cfg, opts));

    ReplayResult result;
    const nlohmann::json expected = nlohmann::json::parse(report.dump());
    const nlohmann::json actual = nlohmann::json::parse(fresh.dump());
    for (const auto& op : nlohmann::json::diff(expected, actual)) result.mismatches.push_back(op.at("path"));
    result.identical = result.mismatches.empty() && report.dump() == fresh.dump();
    return result;
}

std::filesystem::path transcript_path(const std::filesystem::path& report_path) {
    auto p = report_path;
    p += ".transcripts.jsonl";
    return p;
}

RunSummary run_and_emit(const ScenarioConfig& cfg, const std::filesystem::path& path, unsigned threads) {
    const auto log_path = transcript_path(path);
    std::ofstream log(log_path, std::ios::binary | std::ios::trunc);
    if (!log) throw std::runtime_error("cannot open transcript log '" + log_path.string() + "' for writing");

    RunOptions opts;
    opts.threads = threads;
    opts.on_trial = [&](const TrialResult& trial) {
        for (std::size_t s = 0; s < trial.sessions.size(); ++s) {
            const auto& entries = trial.sessions[s].transcript.entries();
            for (std::size_t i = 0; i < entries.size(); ++i) {
                Json line;
                line["trial"] = trial.summary.index;
                line["session"] = s;
                line["seq"] = i;
                line["sender"] = to_string(entries[i].sender);
                line["kind"] = to_string(entries[i].kind);
                line["bits"] = entries[i].bits;
                line["payload"] = entries[i].payload;
                log << line.dump() << '\n';
            }
        }
    };
    RunSummary summary = run_scenario(cfg, opts);
    log.flush();
    if (!log) throw std::runtime_error("failed writing transcript log '" + log_path.string() + "'");
    emit_report(summary, path);
    return summary;
}

}  // namespace dsqc
