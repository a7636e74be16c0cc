#include "dsqc/transcript.hpp"

#include "json.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace dsqc {

unsigned ceil_log2(std::uint64_t n) {
    unsigned w = 0;
    while ((std::uint64_t{1} << w) < n) ++w;
    return w;
}

const char* to_string(Party p) { return p == Party::Alice ? "alice" : "bob"; }

namespace {

struct KindName {
    PayloadKind kind;
    const char* name;
};

constexpr KindName kKindNames[] = {
    {PayloadKind::ReceiptConfirm, "receipt-confirm"},
    {PayloadKind::DecoyReveal, "decoy-reveal"},
    {PayloadKind::CheckVerdict, "check-verdict"},
    {PayloadKind::OutcomeAnnounce, "outcome-announce"},
    {PayloadKind::OriginalStateReveal, "original-state-reveal"},
    {PayloadKind::DifferenceAnnounce, "difference-announce"},
    {PayloadKind::LossReport, "loss-report"},
};

void require(bool ok, PayloadKind kind, const char* what) {
    if (!ok) throw std::logic_error(std::string("malformed ") + to_string(kind) + " payload: " + what);
}

}  // namespace

const char* to_string(PayloadKind k) {
    for (const auto& kn : kKindNames)
        if (kn.kind == k) return kn.name;
    return "?";
}

PayloadKind payload_kind_from_string(const std::string& s) {
    for (const auto& kn : kKindNames)
        if (s == kn.name) return kn.kind;
    throw std::invalid_argument("unknown transcript payload kind '" + s + "'");
}

Transcript::Transcript(int d, std::size_t sequence_length)
    : d_(d),
      sequence_length_(sequence_length),
      position_width_(ceil_log2(std::max<std::size_t>(2, sequence_length))),
      dit_width_(ceil_log2(static_cast<std::uint64_t>(std::max(d, 2)))) {}

std::size_t Transcript::append(Party sender, PayloadKind kind, std::vector<std::int64_t> payload) {
    const auto n = payload.size();
    const auto len = static_cast<std::int64_t>(sequence_length_);
    auto is_pos = [&](std::int64_t v) { return v >= 0 && v < len; };
    auto is_dit = [&](std::int64_t v) { return v >= 0 && v < d_; };
    auto is_basis = [](std::int64_t v) { return v == 0 || v == 1; };

    std::size_t bits = 0;
    switch (kind) {
        case PayloadKind::ReceiptConfirm:
            require(n == 0, kind, "expected empty payload");
            bits = 1;
            break;
        case PayloadKind::CheckVerdict:
            require(n == 1 && is_basis(payload[0]), kind, "expected one verdict bit");
            bits = 1;
            break;
        case PayloadKind::LossReport:
            require(std::all_of(payload.begin(), payload.end(), is_pos), kind, "position out of range");
            bits = n * position_width_;
            break;
        case PayloadKind::DecoyReveal:
            require(n % 3 == 0, kind, "expected (position, basis, index) triples");
            for (std::size_t i = 0; i < n; i += 3)
                require(is_pos(payload[i]) && is_basis(payload[i + 1]) && is_dit(payload[i + 2]), kind,
                        "field out of range");
            bits = (n / 3) * (position_width_ + 1 + dit_width_);
            break;
        case PayloadKind::OutcomeAnnounce:
        case PayloadKind::DifferenceAnnounce:
            require(std::all_of(payload.begin(), payload.end(), is_dit), kind, "dit out of range");
            bits = n * dit_width_;
            break;
        case PayloadKind::OriginalStateReveal:
            require(n % 2 == 0, kind, "expected (basis, index) pairs");
            for (std::size_t i = 0; i < n; i += 2)
                require(is_basis(payload[i]) && is_dit(payload[i + 1]), kind, "field out of range");
            bits = (n / 2) * (1 + dit_width_);
            break;
    }
    entries_.push_back({sender, kind, std::move(payload), bits});
    bit_count_ += bits;
    return bits;
}

std::size_t Transcript::bits_of(PayloadKind kind) const {
    std::size_t total = 0;
    for (const auto& e : entries_)
        if (e.kind == kind) total += e.bits;
    return total;
}

const TranscriptEntry* Transcript::find(PayloadKind kind) const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
        if (it->kind == kind) return &*it;
    return nullptr;
}

void Transcript::write_jsonl(std::ostream& out) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        nlohmann::ordered_json j;
        j["seq"] = i;
        j["sender"] = to_string(e.sender);
        j["kind"] = to_string(e.kind);
        j["bits"] = e.bits;
        j["payload"] = e.payload;
        out << j.dump() << '\n';
    }
}

Transcript Transcript::read_jsonl(std::istream& in, int d, std::size_t sequence_length) {
    Transcript t(d, sequence_length);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        const auto sender = j.at("sender").get<std::string>() == "alice" ? Party::Alice : Party::Bob;
        const auto bits = t.append(sender, payload_kind_from_string(j.at("kind").get<std::string>()),
                                   j.at("payload").get<std::vector<std::int64_t>>());
        if (bits != j.at("bits").get<std::size_t>())
            throw std::runtime_error("transcript line " + std::to_string(t.entries().size()) +
                                     ": recorded bit count does not match payload");
    }
    return t;
}

}  // namespace dsqc
