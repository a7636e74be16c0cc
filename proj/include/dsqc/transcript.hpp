// transcript.hpp
// Ordered log of the public classical channel for one session.
//
// Bit accounting. With wp = ceil(log2 max(2, sequence length)) and
// wd = ceil(log2 d), each entry costs:
//   ReceiptConfirm       1 bit, empty payload
//   CheckVerdict         1 bit, payload [1 = continue | 0 = abort]
//   LossReport           wp per lost position, payload [pos...]
//   DecoyReveal          wp + 1 + wd per checked position, payload [pos, basis, index]...
//   OutcomeAnnounce      wd per delivered message position, payload [dit...]
//   DifferenceAnnounce   wd per delivered message position, payload [dit...]
//   OriginalStateReveal  1 + wd per delivered message position, payload [basis, index]...
// Basis is encoded 0 = Z_d, 1 = X_d. Message-phase entries list delivered
// message positions in sequence order; their positions are implicit.
//
// JSON-lines form, one entry per line, keys in this order:
//   {"seq": i, "sender": "alice"|"bob", "kind": <kind>, "bits": n, "payload": [...]}

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dsqc {

enum class Party { Alice, Bob };

enum class PayloadKind {
    ReceiptConfirm,
    DecoyReveal,
    CheckVerdict,
    OutcomeAnnounce,
    OriginalStateReveal,
    DifferenceAnnounce,
    LossReport,
};

const char* to_string(Party p);
const char* to_string(PayloadKind k);
PayloadKind payload_kind_from_string(const std::string& s);

struct TranscriptEntry {
    Party sender = Party::Alice;
    PayloadKind kind = PayloadKind::ReceiptConfirm;
    std::vector<std::int64_t> payload;
    std::size_t bits = 0;
};

class Transcript {
public:
    Transcript(int d, std::size_t sequence_length);

    /// Validates the payload layout and appends; returns the entry's bit cost.
    std::size_t append(Party sender, PayloadKind kind, std::vector<std::int64_t> payload);

    const std::vector<TranscriptEntry>& entries() const { return entries_; }
    std::size_t bit_count() const { return bit_count_; }
    /// Sum of bits over entries of one kind.
    std::size_t bits_of(PayloadKind kind) const;
    /// Last entry of the given kind, or nullptr.
    const TranscriptEntry* find(PayloadKind kind) const;

    int dim() const { return d_; }
    std::size_t sequence_length() const { return sequence_length_; }
    unsigned position_width() const { return position_width_; }
    unsigned dit_width() const { return dit_width_; }

    void write_jsonl(std::ostream& out) const;
    /// Rebuilds a transcript from its JSON-lines form, re-validating every entry.
    static Transcript read_jsonl(std::istream& in, int d, std::size_t sequence_length);

private:
    int d_;
    std::size_t sequence_length_;
    unsigned position_width_;
    unsigned dit_width_;
    std::vector<TranscriptEntry> entries_;
    std::size_t bit_count_ = 0;
};

/// ceil(log2 n) for n >= 1.
unsigned ceil_log2(std::uint64_t n);

}  // namespace dsqc
