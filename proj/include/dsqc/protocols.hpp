// protocols.hpp
// Two-party sessions of the entangled-pair and single-photon protocols.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dsqc/channel.hpp"
#include "dsqc/qudit.hpp"
#include "dsqc/random.hpp"
#include "dsqc/sources.hpp"
#include "dsqc/transcript.hpp"

namespace dsqc {

enum class Protocol { Entangled, SinglePhoton };
enum class Variant { Eager, Delayed };

/// How the transmission is checked before the message phase.
enum class CheckMode {
    Decoy,         // Z_d/X_d decoys at secret positions
    ZCorrelation,  // sampled ordinary pairs, Z_d correlation only (entangled protocol)
};

const char* to_string(Protocol p);
const char* to_string(Variant v);
const char* to_string(CheckMode m);

struct ProtocolConfig {
    /// Fraction of sequence positions used for checking, in [0, 1).
    double decoy_fraction = 0.1;
    /// Abort when the check error rate is strictly above this.
    double threshold = 0.05;
    /// Pair form is (I (x) U_1) sum_j a_j |jj>; unset means d == 2.
    std::optional<bool> anti_correlated;
    CheckMode check_mode = CheckMode::Decoy;
    Variant variant = Variant::Eager;
    /// Fixed total sequence length; unset sizes the sequence from the message.
    std::optional<std::size_t> sequence_length;

    bool anti_correlated_for(int d) const { return anti_correlated.value_or(d == 2); }
    /// Throws std::domain_error when a field is out of range for `protocol`.
    void validate(Protocol protocol) const;
};

struct SecretMessage {
    int d = 2;
    std::vector<int> dits;

    void validate() const;
    static SecretMessage random(int d, std::size_t length, RandomStream& rng);
};

/// Splits a message into pieces of at most `capacity` dits.
std::vector<SecretMessage> chunk_message(const SecretMessage& msg, std::size_t capacity);

struct SequenceLayout {
    std::size_t total_len = 0;
    std::vector<std::size_t> check_positions;    // sorted, secret until revealed
    std::vector<std::size_t> message_positions;  // sorted complement

    /// Draws check positions uniformly. Throws when the message does not fit.
    static SequenceLayout make(std::size_t message_len, const ProtocolConfig& cfg, RandomStream& rng);
};

struct BasisErrors {
    std::size_t checked = 0;
    std::size_t errors = 0;
    std::optional<double> rate() const {
        if (checked == 0) return std::nullopt;
        return static_cast<double>(errors) / static_cast<double>(checked);
    }
};

struct ErrorAnalysis {
    double rate = 0.0;
    std::size_t checked = 0;
    std::size_t errors = 0;
    BasisErrors z;
    BasisErrors x;
};

/// Mismatch rate between revealed preparations and Bob's outcomes, which must
/// be aligned element by element and measured in the revealed basis.
ErrorAnalysis error_rate_analysis(std::span<const PreparationRecord> reveals,
                                  std::span<const MeasurementRecord> outcomes);

struct Efficiency {
    double eta_q = 0.0;
    double eta_t = 0.0;
};

struct LossCounts {
    std::size_t message = 0;
    std::size_t check = 0;
};

/// Decoded dits in message order; nullopt marks an undelivered position.
using DecodedDits = std::vector<std::optional<int>>;

struct SessionReport {
    Protocol protocol = Protocol::Entangled;
    Variant variant = Variant::Eager;
    CheckMode check_mode = CheckMode::Decoy;
    int d = 2;

    std::optional<DecodedDits> decoded;  // absent when aborted
    ErrorAnalysis check;
    bool aborted = false;
    Efficiency efficiency;
    LossCounts losses;

    std::size_t total_positions = 0;
    std::size_t message_positions = 0;
    std::size_t check_positions = 0;
    std::size_t delivered_message = 0;
    std::size_t transmissions = 0;

    /// Fraction of delivered message dits Eve decodes from her intercepts plus
    /// the public transcript. Set only when she intercepted.
    std::optional<double> eve_accuracy;

    Transcript transcript{2, 0};

    double decoy_error_rate() const { return check.rate; }
};

SessionReport run_entangled_dsqc(const SecretMessage& msg, const AmplitudeProfile& profile, const ProtocolConfig& cfg,
                                 const ChannelModel& channel, const Adversary& adversary, RandomStream& rng);

SessionReport run_single_photon_dsqc(const SecretMessage& msg, const ProtocolConfig& cfg, const ChannelModel& channel,
                                     const Adversary& adversary, RandomStream& rng);

/// Encoding deferred until after the check: Alice publishes (msg - R_A) mod d.
SessionReport delayed_encode_entangled(const SecretMessage& msg, const AmplitudeProfile& profile, ProtocolConfig cfg,
                                       const ChannelModel& channel, const Adversary& adversary, RandomStream& rng);

/// Encoding deferred into the reveal: Alice publishes (basis, index + msg mod d).
SessionReport delayed_encode_single_photon(const SecretMessage& msg, ProtocolConfig cfg, const ChannelModel& channel,
                                           const Adversary& adversary, RandomStream& rng);

// Receiver-side decoders. They see only the public transcript and the
// receiver's own outcomes, one per delivered message position in order, and
// return one dit per delivered position.

std::vector<int> decode_entangled(const Transcript& transcript, std::span<const int> outcomes, int offset,
                                  Variant variant);

std::vector<int> decode_single_photon(const Transcript& transcript, std::span<const int> outcomes, Variant variant);

}  // namespace dsqc
