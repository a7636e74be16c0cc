// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "dsqc/metrics.hpp"
#include "dsqc/report.hpp"

using namespace dsqc;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

bool within_4_sigma(std::size_t hits, std::size_t n, double p) {
    const double sigma = std::sqrt(static_cast<double>(n) * p * (1 - p));
    return std::abs(static_cast<double>(hits) - static_cast<double>(n) * p) <= 4 * sigma;
}

Outcome protocol_correctness() {
    Outcome out;
    RandomStream rng(1001);
    std::size_t sessions = 0;
    for (int d : {2, 3, 4, 5, 8, 16}) {
        for (auto protocol : {Protocol::Entangled, Protocol::SinglePhoton}) {
            for (auto variant : {Variant::Eager, Variant::Delayed}) {
                std::size_t wrong = 0;
                for (int i = 0; i < 100; ++i) {
                    std::vector<double> p(d);
                    double s = 0;
                    for (auto& x : p) s += (x = 0.05 + rng.uniform_real());
                    for (auto& x : p) x /= s;
                    const auto profile = AmplitudeProfile::from_probabilities(p);
                    const auto msg = SecretMessage::random(d, 256, rng);
                    ProtocolConfig cfg;
                    cfg.variant = variant;
                    const auto r = protocol == Protocol::Entangled
                                       ? run_entangled_dsqc(msg, profile, cfg, {}, {}, rng)
                                       : run_single_photon_dsqc(msg, cfg, {}, {}, rng);
                    ++sessions;
                    if (!r.decoded) {
                        wrong += msg.dits.size();
                        continue;
                    }
                    for (std::size_t k = 0; k < msg.dits.size(); ++k) wrong += (*r.decoded)[k] != msg.dits[k];
                }
                out.require(wrong == 0, std::string(to_string(protocol)) + "/" + to_string(variant) +
                                            " d=" + std::to_string(d) + ": " + std::to_string(wrong) + " errors");
            }
        }
    }
    if (out.pass) out.detail = std::to_string(sessions) + " sessions, 0 dit errors";
    return out;
}

Outcome marginal_uniformity() {
    Outcome out;
    const auto profile = AmplitudeProfile::from_probabilities({0.5, 0.3, 0.2});
    RandomStream rng(1002);
    const std::size_t n = 100000;
    std::vector<std::size_t> counts(3);
    for (std::size_t i = 0; i < n; ++i) {
        StateStore store;
        auto [a, b] = store.add(randomized_pair(profile, rng).first);
        ++counts[store.measure(b, Basis::Zd, rng).outcome];
    }
    for (int k = 0; k < 3; ++k) out.require(within_4_sigma(counts[k], n, 1.0 / 3), "outcome " + std::to_string(k));
    out.detail += fmt("frequencies %.4f %.4f %.4f", counts[0] / double(n), counts[1] / double(n), counts[2] / double(n));
    return out;
}

ScenarioConfig attack_scenario(int d, BasisPolicy policy, CheckMode mode) {
    ScenarioConfig c;
    c.name = "acceptance-attack";
    c.d = d;
    c.message.random_length = 1800;
    c.threshold = 1.0;  // keep every session so the full statistics are visible
    c.check_mode = mode;
    c.adversary = Adversary::intercept_resend(policy);
    c.trials = 50;
    c.seed = 1003 + d;
    return c;
}

Outcome decoy_detection() {
    Outcome out;
    for (int d : {2, 3, 5}) {
        const auto s = run_scenario(attack_scenario(d, BasisPolicy::RandomZX, CheckMode::Decoy));
        const double expected = 0.5 * (d - 1) / d;
        const double oracle = expected_detection_rate(d, BasisPolicy::RandomZX);
        const double rate = s.aggregates.detection_rate.value_or(-1);
        out.require(s.aggregates.checked >= 10000, "too few decoys at d=" + std::to_string(d));
        out.require(std::abs(oracle - expected) < 1e-12, "enumeration disagrees at d=" + std::to_string(d));
        out.require(std::abs(rate - expected) <= 0.02, fmt("d=%.0f rate %.4f", d, rate));
        out.detail += (out.detail.empty() ? "" : ", ") + fmt("d=%.0f %.4f (expect %.4f)", d, rate, expected);
    }
    return out;
}

Outcome no_decoy_vulnerability() {
    Outcome out;
    auto zonly = attack_scenario(2, BasisPolicy::FixedZ, CheckMode::ZCorrelation);
    zonly.profile = {std::sqrt(0.8), std::sqrt(0.2)};
    zonly.threshold = 0.05;
    const auto leak = run_scenario(zonly);
    const auto& a = leak.aggregates;
    out.require(a.checked > 0 && a.detection_rate == 0.0, "Z-correlation check saw errors");
    out.require(a.abort_fraction == 0.0, "sessions aborted");
    out.require(a.eve_accuracy == 1.0, fmt("eve accuracy %.4f", a.eve_accuracy.value_or(-1)));
    out.require(a.decode_accuracy == 1.0, "Bob's decode damaged");

    auto decoys = zonly;
    decoys.check_mode = CheckMode::Decoy;
    decoys.threshold = 1.0;
    const auto caught = run_scenario(decoys);
    const double rate = caught.aggregates.detection_rate.value_or(-1);
    out.require(caught.aggregates.checked >= 10000, "too few decoys");
    out.require(std::abs(rate - 0.25) <= 0.02, fmt("decoy rate %.4f", rate));
    out.detail += (out.detail.empty() ? "" : "; ") +
                  fmt("z-only: 0/%.0f errors, eve accuracy %.3f; decoys: %.4f", double(a.checked),
                      a.eve_accuracy.value_or(-1), rate);
    return out;
}

Outcome entropy_efficiency() {
    Outcome out;
    RandomStream rng(1005);
    for (int d = 2; d <= kMaxDim; ++d) {
        const auto u = AmplitudeProfile::uniform(d);
        out.require(std::abs(von_neumann_entropy(u) - std::log2(d)) <= 1e-12, "entropy d=" + std::to_string(d));
        out.require(std::abs(entangled_total_efficiency(u) - 1.0 / 3) <= 1e-12, "eta_t d=" + std::to_string(d));
        for (int i = 0; i < 50; ++i) {
            std::vector<double> p(d);
            double s = 0;
            for (auto& x : p) s += (x = 0.01 + rng.uniform_real());
            for (auto& x : p) x /= s;
            const double eta = entangled_total_efficiency(AmplitudeProfile::from_probabilities(p));
            out.require(eta > 1.0 / 3, fmt("eta_t %.15f not above 1/3", eta));
        }
    }
    const double e8 = entangled_total_efficiency(AmplitudeProfile::from_probabilities({0.8, 0.2}));
    out.require(std::abs(e8 - 0.40918938036700935) <= 1e-12, fmt("eta_t(0.8) = %.15f", e8));
    if (out.pass) out.detail = fmt("d=2..16 exact at 1e-12; eta_t(0.8, 0.2) = %.12f", e8);
    return out;
}

double same_index_frequency(double a, double b, RandomStream& rng, std::size_t n) {
    std::size_t same = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto psi = make_anti_correlated_pair(AmplitudeProfile::from_probabilities({a * a, b * b}));
        const int ra = measure(psi, Subsystem::A, Basis::Xd, rng).outcome;
        const int rb = measure(psi, Subsystem::B, Basis::Xd, rng).outcome;
        same += ra == rb;
    }
    return static_cast<double>(same) / static_cast<double>(n);
}

Outcome x_basis_statistics() {
    Outcome out;
    RandomStream rng(1006);
    const double a = std::sqrt(0.8), b = std::sqrt(0.2);
    // |01> = (|++> - |+-> + |-+> - |-->)/2, |10> = (|++> + |+-> - |-+> - |-->)/2.
    const double pp = (a + b) / 2, mm = -(a + b) / 2, pm = (b - a) / 2, mp = (a - b) / 2;
    const double oracle = pp * pp + mm * mm;
    out.require(std::abs(pp * pp + mm * mm + pm * pm + mp * mp - 1) < 1e-12, "expansion not normalised");
    out.require(std::abs(oracle - (a + b) * (a + b) / 2) < 1e-12, "oracle mismatch");
    const double f = same_index_frequency(a, b, rng, 100000);
    out.require(std::abs(f - oracle) <= 0.02, fmt("frequency %.4f", f));
    const double r = 1 / std::sqrt(2.0);
    const double g = same_index_frequency(r, r, rng, 100000);
    out.require(g >= 0.98, fmt("maximal frequency %.4f", g));
    out.detail += (out.detail.empty() ? "" : "; ") + fmt("a=sqrt(0.8): %.4f (expect %.4f); a=b: %.4f", f, oracle, g);
    return out;
}

Outcome attenuation() {
    Outcome out;
    RandomStream rng(1007);
    for (double ll : {std::numbers::ln2, 1.0, 2.0}) {
        ChannelModel model;
        model.loss = Attenuation{ll, 1.0};
        const std::size_t n = 100000;
        std::size_t delivered = 0;
        for (std::size_t i = 0; i < n; ++i) {
            StateStore store;
            delivered += transmit(store, store.add(zd_ket(2, 0)), model, Adversary::none(), rng).delivered;
        }
        const double rate = static_cast<double>(delivered) / n;
        out.require(std::abs(rate - std::exp(-ll)) <= 0.01, fmt("lambda L = %.3f: %.4f", ll, rate));
        out.detail += (out.detail.empty() ? "" : ", ") + fmt("%.3f -> %.4f (expect %.4f)", ll, rate, std::exp(-ll));
    }
    return out;
}

Outcome algebraic_invariants() {
    Outcome out;
    double worst = 0;
    for (int d = kMinDim; d <= kMaxDim; ++d) {
        const auto h = hadamard_d<double>(d);
        worst = std::max(worst, max_unitarity_deviation(h.matrix()));
        for (int m = 0; m < d; ++m) {
            worst = std::max(worst, max_unitarity_deviation(shift_unitary<double>(d, m).matrix()));
            worst = std::max(worst, max_unitarity_deviation(phase_shift_unitary<double>(d, m).matrix()));
        }
        for (int j = 0; j < d; ++j) {
            worst = std::max(worst, (apply(h, zd_ket<double>(d, j)).amps() - xd_ket<double>(d, j).amps()).norm());
            for (int l = 0; l < d; ++l) {
                worst = std::max(worst, std::abs(fidelity(zd_ket<double>(d, j), xd_ket<double>(d, l)) - 1.0 / d));
                for (int m = 0; m < d; ++m) {
                    // U_m^x |l>_x = |l + m>_x up to a global phase.
                    const auto shifted = apply(phase_shift_unitary<double>(d, m), xd_ket<double>(d, l));
                    worst = std::max(worst, 1 - fidelity(shifted, xd_ket<double>(d, (l + m) % d)));
                }
            }
        }
    }
    out.require(worst <= 1e-10, fmt("worst deviation %.3e", worst));
    out.detail += fmt("worst deviation %.3e over d=2..16", worst);
    return out;
}

Outcome determinism() {
    Outcome out;
    for (const auto& preset : presets()) {
        const auto first = render_report(run_scenario(preset.config));
        const auto second = render_report(run_scenario(preset.config));
        RunOptions threaded;
        threaded.threads = 4;
        const auto third = render_report(run_scenario(preset.config, threaded));
        out.require(first == second && first == third, preset.name + " differs between runs");
    }
    if (out.pass) out.detail = std::to_string(presets().size()) + " presets byte-identical across 3 runs";
    return out;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "protocol correctness", protocol_correctness},
        {2, "marginal uniformity", marginal_uniformity},
        {3, "decoy detection", decoy_detection},
        {4, "no-decoy vulnerability", no_decoy_vulnerability},
        {5, "entropy and efficiency", entropy_efficiency},
        {6, "X-basis statistics", x_basis_statistics},
        {7, "attenuation", attenuation},
        {8, "algebraic invariants", algebraic_invariants},
        {9, "determinism", determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s  [%d] %-24s %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        failed += !o.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
