// Entangled-pair session: Alice keeps photon A of each pair, sends B.

#include <cmath>
#include <stdexcept>

#include "dsqc/metrics.hpp"
#include "dsqc/protocols.hpp"
#include "session.hpp"

namespace dsqc {

SessionReport run_entangled_dsqc(const SecretMessage& msg, const AmplitudeProfile& profile, const ProtocolConfig& cfg,
                                 const ChannelModel& channel, const Adversary& adversary, RandomStream& rng) {
    session::validate_inputs(msg, cfg, channel, Protocol::Entangled);
    if (msg.d != profile.dim()) throw std::domain_error("message and amplitude profile dimensions differ");
    const int d = msg.d;
    const bool anti = cfg.anti_correlated_for(d);
    const int offset = anti ? 1 : 0;

    // (1) Prepare pairs; decoys replace B photons at the secret check positions.
    const auto layout = SequenceLayout::make(msg.dits.size(), cfg, rng);
    const auto n = layout.total_len;
    std::vector<bool> is_check(n, false);
    for (auto p : layout.check_positions) is_check[p] = true;

    StateStore store;
    std::vector<PhotonSlot> kept(n), traveling(n);
    std::vector<PreparationRecord> prep(n);
    for (std::size_t p = 0; p < n; ++p) {
        if (is_check[p] && cfg.check_mode == CheckMode::Decoy) {
            auto [photon, rec] = make_decoy(d, rng);
            traveling[p] = store.add(std::move(photon));
            prep[p] = rec;
        } else {
            auto [pair, rec] = randomized_pair(profile, rng, anti);
            std::tie(kept[p], traveling[p]) = store.add(std::move(pair));
            prep[p] = rec;
        }
        prep[p].position = p;
    }

    // (2) Encode each message dit m as U_m on the traveling photon.
    if (cfg.variant == Variant::Eager)
        for (std::size_t i = 0; i < layout.message_positions.size(); ++i)
            store.apply(traveling[layout.message_positions[i]], shift_unitary(d, msg.dits[i]));

    // (3) Send S_B.
    const auto received = session::send_sequence(store, traveling, channel, adversary, rng);
    Transcript t(d, n);
    session::confirm_receipt(t, received);

    // (4) Check.
    std::vector<PreparationRecord> reveals;
    for (auto p : layout.check_positions) {
        if (!received[p].delivered) continue;
        if (cfg.check_mode == CheckMode::Decoy) {
            reveals.push_back(prep[p]);
        } else {
            // Alice measures her half in Z_d and predicts Bob's outcome.
            const auto r_a = store.measure(kept[p], Basis::Zd, rng);
            PreparationRecord rec;
            rec.kind = PreparationKind::Decoy;
            rec.basis = Basis::Zd;
            rec.index = session::mod(r_a.outcome + offset, d);
            rec.position = p;
            reveals.push_back(rec);
        }
    }
    SessionReport report = session::base_report(Protocol::Entangled, cfg, d, layout, received);
    report.check = session::check_transmission(t, store, received, reveals, cfg.threshold, rng);
    report.aborted = report.check.rate > cfg.threshold;
    if (report.aborted) {
        report.transcript = std::move(t);
        return report;
    }

    // (5) Both measure the remaining photons in Z_d.
    std::vector<int> r_a, r_b, eve, sent;
    bool eve_everywhere = true;
    for (std::size_t i = 0; i < layout.message_positions.size(); ++i) {
        const auto p = layout.message_positions[i];
        if (!received[p].delivered) continue;
        r_a.push_back(store.measure(kept[p], Basis::Zd, rng).outcome);
        r_b.push_back(store.measure(received[p].slot, Basis::Zd, rng).outcome);
        sent.push_back(msg.dits[i]);
        if (received[p].intercepted)
            eve.push_back(received[p].intercepted->outcome);
        else
            eve_everywhere = false;
    }

    // (6) Public announcement.
    std::vector<std::int64_t> announce(r_a.size());
    for (std::size_t i = 0; i < r_a.size(); ++i)
        announce[i] = cfg.variant == Variant::Eager ? r_a[i] : session::mod(sent[i] - r_a[i], d);
    t.append(Party::Alice,
             cfg.variant == Variant::Eager ? PayloadKind::OutcomeAnnounce : PayloadKind::DifferenceAnnounce,
             std::move(announce));

    // (7) Bob decodes.
    const auto bob = decode_entangled(t, r_b, offset, cfg.variant);
    report.decoded = session::scatter(layout, received, bob);
    if (!eve.empty() && eve_everywhere)
        report.eve_accuracy = session::accuracy(decode_entangled(t, eve, offset, cfg.variant), sent);

    if (report.delivered_message > 0) {
        const double k = static_cast<double>(report.delivered_message);
        const double bits = std::log2(static_cast<double>(d));
        report.efficiency.eta_t = total_efficiency(k * bits, k * pair_cost(profile), k * bits);
    }
    report.transcript = std::move(t);
    return report;
}

}  // namespace dsqc
