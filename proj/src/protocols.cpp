#include "dsqc/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "session.hpp"

namespace dsqc {

const char* to_string(Protocol p) { return p == Protocol::Entangled ? "entangled" : "single-photon"; }
const char* to_string(Variant v) { return v == Variant::Eager ? "eager" : "delayed"; }
const char* to_string(CheckMode m) { return m == CheckMode::Decoy ? "decoy" : "z-correlation"; }

void ProtocolConfig::validate(Protocol protocol) const {
    if (!(decoy_fraction >= 0.0 && decoy_fraction < 1.0))
        throw std::domain_error("decoy_fraction must lie in [0, 1)");
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw std::domain_error("threshold must lie in [0, 1]");
    if (protocol == Protocol::SinglePhoton && check_mode == CheckMode::ZCorrelation)
        throw std::domain_error("z-correlation checking needs entangled pairs");
}

void SecretMessage::validate() const {
    detail::check_dim(d);
    for (std::size_t i = 0; i < dits.size(); ++i)
        if (dits[i] < 0 || dits[i] >= d)
            throw std::domain_error("message dit " + std::to_string(i) + " outside [0, d)");
}

SecretMessage SecretMessage::random(int d, std::size_t length, RandomStream& rng) {
    detail::check_dim(d);
    SecretMessage m{d, std::vector<int>(length)};
    for (auto& x : m.dits) x = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(d)));
    return m;
}

std::vector<SecretMessage> chunk_message(const SecretMessage& msg, std::size_t capacity) {
    if (capacity == 0) throw std::domain_error("chunk capacity must be positive");
    std::vector<SecretMessage> out;
    for (std::size_t i = 0; i < msg.dits.size(); i += capacity) {
        const auto end = std::min(msg.dits.size(), i + capacity);
        out.push_back({msg.d, std::vector<int>(msg.dits.begin() + static_cast<std::ptrdiff_t>(i),
                                               msg.dits.begin() + static_cast<std::ptrdiff_t>(end))});
    }
    if (out.empty()) out.push_back({msg.d, {}});
    return out;
}

SequenceLayout SequenceLayout::make(std::size_t message_len, const ProtocolConfig& cfg, RandomStream& rng) {
    SequenceLayout layout;
    std::size_t checks = 0;
    if (cfg.sequence_length) {
        if (*cfg.sequence_length < message_len)
            throw std::domain_error("message of " + std::to_string(message_len) + " dits does not fit in " +
                                    std::to_string(*cfg.sequence_length) + " positions");
        checks = *cfg.sequence_length - message_len;
    } else if (cfg.decoy_fraction > 0.0) {
        // Smallest count with checks / (checks + message) >= fraction.
        checks = static_cast<std::size_t>(
            std::ceil(cfg.decoy_fraction * static_cast<double>(message_len) / (1.0 - cfg.decoy_fraction) - 1e-9));
    }
    layout.total_len = message_len + checks;

    std::vector<std::size_t> order(layout.total_len);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < checks; ++i) {
        const auto j = i + rng.uniform_index(layout.total_len - i);
        std::swap(order[i], order[j]);
    }
    layout.check_positions.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(checks));
    std::sort(layout.check_positions.begin(), layout.check_positions.end());
    std::vector<bool> is_check(layout.total_len, false);
    for (auto p : layout.check_positions) is_check[p] = true;
    for (std::size_t p = 0; p < layout.total_len; ++p)
        if (!is_check[p]) layout.message_positions.push_back(p);
    return layout;
}

ErrorAnalysis error_rate_analysis(std::span<const PreparationRecord> reveals,
                                  std::span<const MeasurementRecord> outcomes) {
    if (reveals.size() != outcomes.size())
        throw std::logic_error("error_rate_analysis: " + std::to_string(reveals.size()) + " reveals but " +
                               std::to_string(outcomes.size()) + " outcomes");
    ErrorAnalysis a;
    for (std::size_t i = 0; i < reveals.size(); ++i) {
        if (reveals[i].basis != outcomes[i].basis)
            throw std::logic_error("error_rate_analysis: outcome " + std::to_string(i) +
                                   " was not measured in the revealed basis");
        const bool error = reveals[i].index != outcomes[i].outcome;
        auto& per = reveals[i].basis == Basis::Zd ? a.z : a.x;
        ++per.checked;
        ++a.checked;
        if (error) {
            ++per.errors;
            ++a.errors;
        }
    }
    if (a.checked > 0) a.rate = static_cast<double>(a.errors) / static_cast<double>(a.checked);
    return a;
}

namespace {

const TranscriptEntry& message_entry(const Transcript& t, PayloadKind kind) {
    const auto* e = t.find(kind);
    if (!e) throw std::logic_error(std::string("transcript has no ") + to_string(kind) + " entry");
    return *e;
}

}  // namespace

std::vector<int> decode_entangled(const Transcript& transcript, std::span<const int> outcomes, int offset,
                                  Variant variant) {
    const int d = transcript.dim();
    const auto kind = variant == Variant::Eager ? PayloadKind::OutcomeAnnounce : PayloadKind::DifferenceAnnounce;
    const auto& announced = message_entry(transcript, kind).payload;
    if (announced.size() != outcomes.size())
        throw std::logic_error("announcement and outcome counts differ");
    std::vector<int> out(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        // Eager: R_B = R_A + c + m.  Delayed: R_B = R_A + c, D = m - R_A.
        const long long a = announced[i];
        out[i] = variant == Variant::Eager ? session::mod(outcomes[i] - a - offset, d)
                                           : session::mod(a + outcomes[i] - offset, d);
    }
    return out;
}

std::vector<int> decode_single_photon(const Transcript& transcript, std::span<const int> outcomes, Variant variant) {
    const int d = transcript.dim();
    const auto& reveal = message_entry(transcript, PayloadKind::OriginalStateReveal).payload;
    if (reveal.size() != 2 * outcomes.size()) throw std::logic_error("reveal and outcome counts differ");
    std::vector<int> out(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const long long value = reveal[2 * i + 1];
        out[i] = variant == Variant::Eager ? session::mod(outcomes[i] - value, d)
                                           : session::mod(value - outcomes[i], d);
    }
    return out;
}

SessionReport delayed_encode_entangled(const SecretMessage& msg, const AmplitudeProfile& profile, ProtocolConfig cfg,
                                       const ChannelModel& channel, const Adversary& adversary, RandomStream& rng) {
    cfg.variant = Variant::Delayed;
    return run_entangled_dsqc(msg, profile, cfg, channel, adversary, rng);
}

SessionReport delayed_encode_single_photon(const SecretMessage& msg, ProtocolConfig cfg, const ChannelModel& channel,
                                           const Adversary& adversary, RandomStream& rng) {
    cfg.variant = Variant::Delayed;
    return run_single_photon_dsqc(msg, cfg, channel, adversary, rng);
}

// ---------------------------------------------------------------------------

namespace session {

void validate_inputs(const SecretMessage& msg, const ProtocolConfig& cfg, const ChannelModel& channel,
                     Protocol protocol) {
    msg.validate();
    cfg.validate(protocol);
    channel.validate();
}

std::vector<TransmitResult> send_sequence(StateStore& store, const std::vector<PhotonSlot>& traveling,
                                          const ChannelModel& channel, const Adversary& adversary,
                                          RandomStream& rng) {
    std::vector<TransmitResult> out;
    out.reserve(traveling.size());
    for (const auto& slot : traveling) out.push_back(transmit(store, slot, channel, adversary, rng));
    return out;
}

void confirm_receipt(Transcript& t, const std::vector<TransmitResult>& received) {
    t.append(Party::Bob, PayloadKind::ReceiptConfirm, {});
    std::vector<std::int64_t> lost;
    for (std::size_t p = 0; p < received.size(); ++p)
        if (!received[p].delivered) lost.push_back(static_cast<std::int64_t>(p));
    t.append(Party::Bob, PayloadKind::LossReport, std::move(lost));
}

ErrorAnalysis check_transmission(Transcript& t, StateStore& store, const std::vector<TransmitResult>& received,
                                 const std::vector<PreparationRecord>& reveals, double threshold, RandomStream& rng) {
    std::vector<std::int64_t> payload;
    for (const auto& r : reveals) {
        payload.push_back(static_cast<std::int64_t>(r.position));
        payload.push_back(r.basis == Basis::Zd ? 0 : 1);
        payload.push_back(r.index);
    }
    t.append(Party::Alice, PayloadKind::DecoyReveal, std::move(payload));

    // Bob's side: only the transcript and his own photons.
    const auto& revealed = t.entries().back().payload;
    std::vector<PreparationRecord> expected;
    std::vector<MeasurementRecord> outcomes;
    for (std::size_t i = 0; i < revealed.size(); i += 3) {
        PreparationRecord rec;
        rec.kind = PreparationKind::Decoy;
        rec.position = static_cast<std::size_t>(revealed[i]);
        rec.basis = revealed[i + 1] == 0 ? Basis::Zd : Basis::Xd;
        rec.index = static_cast<int>(revealed[i + 2]);
        const auto& photon = received.at(rec.position);
        if (!photon.delivered) throw std::logic_error("Alice revealed a position Bob reported lost");
        outcomes.push_back(store.measure(photon.slot, rec.basis, rng));
        expected.push_back(rec);
    }
    const auto analysis = error_rate_analysis(expected, outcomes);
    t.append(Party::Bob, PayloadKind::CheckVerdict, {analysis.rate > threshold ? 0 : 1});
    return analysis;
}

SessionReport base_report(Protocol protocol, const ProtocolConfig& cfg, int d, const SequenceLayout& layout,
                          const std::vector<TransmitResult>& received) {
    SessionReport r;
    r.protocol = protocol;
    r.variant = cfg.variant;
    r.check_mode = cfg.check_mode;
    r.d = d;
    r.total_positions = layout.total_len;
    r.message_positions = layout.message_positions.size();
    r.check_positions = layout.check_positions.size();
    r.transmissions = received.size();
    for (auto p : layout.message_positions)
        if (received[p].delivered)
            ++r.delivered_message;
        else
            ++r.losses.message;
    for (auto p : layout.check_positions)
        if (!received[p].delivered) ++r.losses.check;
    if (layout.total_len > 0)
        r.efficiency.eta_q = static_cast<double>(r.message_positions) / static_cast<double>(layout.total_len);
    return r;
}

DecodedDits scatter(const SequenceLayout& layout, const std::vector<TransmitResult>& received,
                    const std::vector<int>& delivered_dits) {
    DecodedDits out(layout.message_positions.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < layout.message_positions.size(); ++i)
        if (received[layout.message_positions[i]].delivered) out[i] = delivered_dits.at(k++);
    return out;
}

double accuracy(const std::vector<int>& guess, const std::vector<int>& truth) {
    if (truth.empty()) return 1.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += guess.at(i) == truth[i];
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace session
}  // namespace dsqc
