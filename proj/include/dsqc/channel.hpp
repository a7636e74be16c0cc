// channel.hpp
// One-way quantum channel from Alice to Bob: loss, adversary, depolarization,
// applied in that order. The classical channel is authenticated and public.

#pragma once

#include <optional>

#include "dsqc/qudit.hpp"
#include "dsqc/random.hpp"
#include "dsqc/sources.hpp"

namespace dsqc {

struct Attenuation {
    double lambda = 0.0;  // per unit length
    double length = 0.0;
};

struct ChannelModel {
    std::optional<Attenuation> loss;
    double depolarize_p = 0.0;

    static ChannelModel ideal() { return {}; }

    /// e^{-lambda L}, or 1 without loss.
    double survival_probability() const;
    /// Throws std::domain_error on out-of-range parameters.
    void validate() const;
};

enum class AdversaryKind { None, InterceptResend, Passive };
enum class BasisPolicy { RandomZX, FixedZ, FixedX };

struct Adversary {
    AdversaryKind kind = AdversaryKind::None;
    BasisPolicy policy = BasisPolicy::RandomZX;

    static Adversary none() { return {}; }
    static Adversary passive() { return {AdversaryKind::Passive, BasisPolicy::RandomZX}; }
    static Adversary intercept_resend(BasisPolicy p) { return {AdversaryKind::InterceptResend, p}; }
};

const char* to_string(AdversaryKind k);
const char* to_string(BasisPolicy p);

struct TransmitResult {
    bool delivered = false;
    PhotonSlot slot;
    /// Eve's measurement, when she intercepted this photon.
    std::optional<MeasurementRecord> intercepted;
    bool depolarized = false;
};

/// Sends the photon in `slot` through the channel. Collapses shared states in
/// `store` as needed; a resent or replaced photon gets a fresh store entry.
TransmitResult transmit(StateStore& store, const PhotonSlot& slot, const ChannelModel& model,
                        const Adversary& adversary, RandomStream& rng);

/// Per-decoy detection probability of intercept-resend against decoys drawn
/// uniformly from the Z_d and X_d eigenstates. Computed by enumerating every
/// (decoy basis, decoy index, Eve basis, Eve outcome) branch.
double expected_detection_rate(int d, BasisPolicy policy);

}  // namespace dsqc
