// Internal helpers shared by the two protocol sessions.

#pragma once

#include <cstddef>
#include <vector>

#include "dsqc/protocols.hpp"

namespace dsqc::session {

inline int mod(long long v, int d) { return static_cast<int>(((v % d) + d) % d); }

void validate_inputs(const SecretMessage& msg, const ProtocolConfig& cfg, const ChannelModel& channel,
                     Protocol protocol);

/// Every traveling photon crosses the channel exactly once, in sequence order.
std::vector<TransmitResult> send_sequence(StateStore& store, const std::vector<PhotonSlot>& traveling,
                                          const ChannelModel& channel, const Adversary& adversary,
                                          RandomStream& rng);

/// Bob confirms receipt and reports undelivered positions.
void confirm_receipt(Transcript& t, const std::vector<TransmitResult>& received);

/// Alice reveals the check records; Bob reads them back off the transcript,
/// measures his photons in the revealed bases and publishes his verdict.
ErrorAnalysis check_transmission(Transcript& t, StateStore& store, const std::vector<TransmitResult>& received,
                                 const std::vector<PreparationRecord>& reveals, double threshold, RandomStream& rng);

SessionReport base_report(Protocol protocol, const ProtocolConfig& cfg, int d, const SequenceLayout& layout,
                          const std::vector<TransmitResult>& received);

/// Spreads per-delivered-position dits back to message order.
DecodedDits scatter(const SequenceLayout& layout, const std::vector<TransmitResult>& received,
                    const std::vector<int>& delivered_dits);

/// Fraction of positions where `guess` matches `truth`.
double accuracy(const std::vector<int>& guess, const std::vector<int>& truth);

}  // namespace dsqc::session
