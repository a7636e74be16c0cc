// Single-photon session: every photon is a random Z_d or X_d eigenstate.

#include <cmath>

#include "dsqc/metrics.hpp"
#include "dsqc/protocols.hpp"
#include "session.hpp"

namespace dsqc {

SessionReport run_single_photon_dsqc(const SecretMessage& msg, const ProtocolConfig& cfg, const ChannelModel& channel,
                                     const Adversary& adversary, RandomStream& rng) {
    session::validate_inputs(msg, cfg, channel, Protocol::SinglePhoton);
    const int d = msg.d;

    // (S1) Prepare; Z_d photons are encoded with U_m, X_d photons with U_m^x.
    const auto layout = SequenceLayout::make(msg.dits.size(), cfg, rng);
    const auto n = layout.total_len;
    std::vector<bool> is_check(n, false);
    for (auto p : layout.check_positions) is_check[p] = true;

    StateStore store;
    std::vector<PhotonSlot> traveling(n);
    std::vector<PreparationRecord> prep(n);
    for (std::size_t p = 0; p < n; ++p) {
        auto [photon, rec] = is_check[p] ? make_decoy(d, rng) : make_single_photon(d, rng);
        traveling[p] = store.add(std::move(photon));
        prep[p] = rec;
        prep[p].position = p;
    }
    if (cfg.variant == Variant::Eager) {
        for (std::size_t i = 0; i < layout.message_positions.size(); ++i) {
            const auto p = layout.message_positions[i];
            const int m = msg.dits[i];
            store.apply(traveling[p], prep[p].basis == Basis::Zd ? shift_unitary(d, m) : phase_shift_unitary(d, m));
        }
    }

    // (S2) Send.
    const auto received = session::send_sequence(store, traveling, channel, adversary, rng);
    Transcript t(d, n);
    session::confirm_receipt(t, received);

    // (S3) Decoy check.
    std::vector<PreparationRecord> reveals;
    for (auto p : layout.check_positions)
        if (received[p].delivered) reveals.push_back(prep[p]);
    SessionReport report = session::base_report(Protocol::SinglePhoton, cfg, d, layout, received);
    report.check = session::check_transmission(t, store, received, reveals, cfg.threshold, rng);
    report.aborted = report.check.rate > cfg.threshold;
    if (report.aborted) {
        report.transcript = std::move(t);
        return report;
    }

    // (S4) Alice reveals the original states (combined with the message when delayed).
    std::vector<std::int64_t> reveal;
    std::vector<int> sent;
    for (std::size_t i = 0; i < layout.message_positions.size(); ++i) {
        const auto p = layout.message_positions[i];
        if (!received[p].delivered) continue;
        reveal.push_back(prep[p].basis == Basis::Zd ? 0 : 1);
        reveal.push_back(cfg.variant == Variant::Eager ? prep[p].index
                                                       : session::mod(prep[p].index + msg.dits[i], d));
        sent.push_back(msg.dits[i]);
    }
    t.append(Party::Alice, PayloadKind::OriginalStateReveal, std::move(reveal));

    // Bob measures in the revealed bases.
    const auto& revealed = t.entries().back().payload;
    std::vector<int> bob, eve;
    bool eve_everywhere = true;
    std::size_t k = 0;
    for (auto p : layout.message_positions) {
        if (!received[p].delivered) continue;
        const Basis basis = revealed[2 * k] == 0 ? Basis::Zd : Basis::Xd;
        bob.push_back(store.measure(received[p].slot, basis, rng).outcome);
        if (received[p].intercepted)
            eve.push_back(received[p].intercepted->outcome);
        else
            eve_everywhere = false;
        ++k;
    }

    // (S5) Decode.
    report.decoded = session::scatter(layout, received, decode_single_photon(t, bob, cfg.variant));
    if (!eve.empty() && eve_everywhere)
        report.eve_accuracy = session::accuracy(decode_single_photon(t, eve, cfg.variant), sent);

    if (report.delivered_message > 0) {
        const double k_del = static_cast<double>(report.delivered_message);
        const double bits = std::log2(static_cast<double>(d));
        report.efficiency.eta_t = total_efficiency(k_del * bits, k_del * bits, k_del * (bits + 1.0));
    }
    report.transcript = std::move(t);
    return report;
}

}  // namespace dsqc
