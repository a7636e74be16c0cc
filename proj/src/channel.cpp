#include "dsqc/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace dsqc {

double ChannelModel::survival_probability() const {
    if (!loss) return 1.0;
    return std::exp(-loss->lambda * loss->length);
}

void ChannelModel::validate() const {
    if (loss && (!(loss->lambda >= 0.0) || !(loss->length >= 0.0) || !std::isfinite(loss->lambda * loss->length)))
        throw std::domain_error("attenuation parameters must be finite and nonnegative");
    if (!(depolarize_p >= 0.0 && depolarize_p <= 1.0))
        throw std::domain_error("depolarize_p must lie in [0, 1]");
}

const char* to_string(AdversaryKind k) {
    switch (k) {
        case AdversaryKind::None: return "none";
        case AdversaryKind::InterceptResend: return "intercept-resend";
        case AdversaryKind::Passive: return "passive";
    }
    return "?";
}

const char* to_string(BasisPolicy p) {
    switch (p) {
        case BasisPolicy::RandomZX: return "random-zx";
        case BasisPolicy::FixedZ: return "fixed-z";
        case BasisPolicy::FixedX: return "fixed-x";
    }
    return "?";
}

namespace {

Basis eve_basis(BasisPolicy policy, RandomStream& rng) {
    switch (policy) {
        case BasisPolicy::FixedZ: return Basis::Zd;
        case BasisPolicy::FixedX: return Basis::Xd;
        case BasisPolicy::RandomZX: break;
    }
    return rng.uniform_index(2) == 0 ? Basis::Zd : Basis::Xd;
}

}  // namespace

TransmitResult transmit(StateStore& store, const PhotonSlot& slot, const ChannelModel& model,
                        const Adversary& adversary, RandomStream& rng) {
    if (slot.lost) throw std::logic_error("transmit called on a lost slot");
    model.validate();

    TransmitResult result;
    result.slot = slot;
    const int d = store.dim(slot);

    if (model.loss && !rng.bernoulli(model.survival_probability())) {
        result.slot.lost = true;
        return result;
    }

    if (adversary.kind == AdversaryKind::InterceptResend) {
        const Basis basis = eve_basis(adversary.policy, rng);
        const MeasurementRecord rec = store.measure(result.slot, basis, rng);
        result.slot = store.add(basis_ket(d, basis, rec.outcome));
        result.intercepted = rec;
    }

    if (model.depolarize_p > 0.0 && rng.bernoulli(model.depolarize_p)) {
        // Discarding a Z_d measurement of the traveling half leaves the partner
        // in its reduced state, so this is the exact replacement channel.
        if (result.slot.subsystem != Subsystem::Whole) store.measure(result.slot, Basis::Zd, rng);
        const int k = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(d)));
        result.slot = store.add(zd_ket(d, k));
        result.depolarized = true;
    }

    result.delivered = true;
    return result;
}

double expected_detection_rate(int d, BasisPolicy policy) {
    detail::check_dim(d);
    const Basis bases[] = {Basis::Zd, Basis::Xd};
    double rate = 0.0;
    for (Basis decoy_basis : bases) {
        for (int idx = 0; idx < d; ++idx) {
            const PureStated decoy = basis_ket(d, decoy_basis, idx);
            const double p_decoy = 0.5 / d;
            for (Basis eb : bases) {
                double p_eve_basis = 0.5;
                if (policy == BasisPolicy::FixedZ) p_eve_basis = eb == Basis::Zd ? 1.0 : 0.0;
                if (policy == BasisPolicy::FixedX) p_eve_basis = eb == Basis::Xd ? 1.0 : 0.0;
                if (p_eve_basis == 0.0) continue;
                for (int k = 0; k < d; ++k) {
                    const PureStated resent = basis_ket(d, eb, k);
                    const double p_k = fidelity(resent, decoy);
                    // Bob measures the resent photon in the decoy's basis.
                    const double p_error = 1.0 - fidelity(decoy, resent);
                    rate += p_decoy * p_eve_basis * p_k * p_error;
                }
            }
        }
    }
    return rate;
}

}  // namespace dsqc
