#include "dsqc/sources.hpp"

#include <cmath>
#include <stdexcept>

namespace dsqc {

AmplitudeProfile::AmplitudeProfile(Ket<double> a) : a_(std::move(a)) {
    detail::check_dim(dim());
    if (!detail::all_finite(a_)) throw std::domain_error("amplitude profile has a non-finite entry");
    if (std::abs(a_.squaredNorm() - 1.0) > kTolerance)
        throw std::domain_error("amplitude profile is not normalised");
}

AmplitudeProfile AmplitudeProfile::uniform(int d) {
    detail::check_dim(d);
    return AmplitudeProfile(Ket<double>::Constant(d, 1.0 / std::sqrt(static_cast<double>(d))));
}

AmplitudeProfile AmplitudeProfile::from_probabilities(const std::vector<double>& p) {
    Ket<double> a(static_cast<Eigen::Index>(p.size()));
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (!(p[j] >= 0.0)) throw std::domain_error("negative probability in amplitude profile");
        a(static_cast<Eigen::Index>(j)) = std::sqrt(p[j]);
    }
    return AmplitudeProfile(std::move(a));
}

std::vector<double> AmplitudeProfile::probabilities() const {
    std::vector<double> p(static_cast<std::size_t>(dim()));
    for (int j = 0; j < dim(); ++j) p[j] = std::norm(a_(j));
    return p;
}

JointStated make_pure_pair(const AmplitudeProfile& profile) {
    const int d = profile.dim();
    Ket<double> amps = Ket<double>::Zero(static_cast<Eigen::Index>(d) * d);
    for (int j = 0; j < d; ++j) amps(static_cast<Eigen::Index>(j) * d + j) = profile.amplitudes()(j);
    return JointStated(d, std::move(amps));
}

JointStated make_anti_correlated_pair(const AmplitudeProfile& profile) {
    return apply_local(make_pure_pair(profile), Subsystem::B, shift_unitary(profile.dim(), 1));
}

std::pair<JointStated, PreparationRecord> randomized_pair(const AmplitudeProfile& profile, RandomStream& rng,
                                                          bool anti_correlated) {
    const int d = profile.dim();
    const int m = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(d)));
    const auto u = shift_unitary(d, m);
    JointStated pair = anti_correlated ? make_anti_correlated_pair(profile) : make_pure_pair(profile);
    pair = apply_local(apply_local(pair, Subsystem::A, u), Subsystem::B, u);
    PreparationRecord rec;
    rec.kind = PreparationKind::EntangledPair;
    rec.shift = m;
    return {std::move(pair), rec};
}

namespace {

std::pair<PureStated, PreparationRecord> random_eigenstate(int d, RandomStream& rng, PreparationKind kind) {
    detail::check_dim(d);
    PreparationRecord rec;
    rec.kind = kind;
    rec.basis = rng.uniform_index(2) == 0 ? Basis::Zd : Basis::Xd;
    rec.index = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(d)));
    return {basis_ket(d, rec.basis, rec.index), rec};
}

}  // namespace

std::pair<PureStated, PreparationRecord> make_decoy(int d, RandomStream& rng) {
    return random_eigenstate(d, rng, PreparationKind::Decoy);
}

std::pair<PureStated, PreparationRecord> make_single_photon(int d, RandomStream& rng) {
    return random_eigenstate(d, rng, PreparationKind::SinglePhoton);
}

std::pair<PureStated, PreparationRecord> make_decoy_from_pair(const AmplitudeProfile& profile, RandomStream& rng,
                                                              bool anti_correlated) {
    const int d = profile.dim();
    StateStore store;
    auto [pair, pair_rec] = randomized_pair(profile, rng, anti_correlated);
    auto [a, b] = store.add(std::move(pair));
    store.measure(a, Basis::Zd, rng);
    PureStated photon = store.local_state(b);
    const int index = detail::sample(outcome_probabilities(photon, Basis::Zd), rng);

    PreparationRecord rec;
    rec.kind = PreparationKind::Decoy;
    rec.index = index;
    rec.basis = rng.uniform_index(2) == 0 ? Basis::Zd : Basis::Xd;
    if (rec.basis == Basis::Xd) photon = apply(hadamard_d(d), photon);
    return {std::move(photon), rec};
}

// ---------------------------------------------------------------------------

PhotonSlot StateStore::add(PureStated s) {
    states_.emplace_back(std::move(s));
    return {states_.size() - 1, Subsystem::Whole, false};
}

std::pair<PhotonSlot, PhotonSlot> StateStore::add(JointStated s) {
    states_.emplace_back(std::move(s));
    const StateId id = states_.size() - 1;
    return {{id, Subsystem::A, false}, {id, Subsystem::B, false}};
}

namespace {

void check_slot(const StateStore::Entry& e, const PhotonSlot& slot) {
    const bool joint = std::holds_alternative<JointStated>(e);
    if (joint && slot.subsystem == Subsystem::Whole)
        throw std::logic_error("slot on a joint state must name subsystem A or B");
    if (!joint && slot.subsystem != Subsystem::Whole)
        throw std::logic_error("slot on a single-photon state must be Whole");
}

}  // namespace

MeasurementRecord StateStore::measure(const PhotonSlot& slot, Basis basis, RandomStream& rng) {
    auto& e = states_.at(slot.state);
    check_slot(e, slot);
    MeasurementRecord rec = std::holds_alternative<PureStated>(e)
                                ? dsqc::measure(std::get<PureStated>(e), basis, rng)
                                : dsqc::measure(std::get<JointStated>(e), slot.subsystem, basis, rng);
    rec.post_state = slot.state;
    return rec;
}

std::vector<double> StateStore::probabilities(const PhotonSlot& slot, Basis basis) const {
    const auto& e = states_.at(slot.state);
    check_slot(e, slot);
    if (const auto* p = std::get_if<PureStated>(&e)) return outcome_probabilities(*p, basis);
    return outcome_probabilities(std::get<JointStated>(e), slot.subsystem, basis);
}

PureStated StateStore::local_state(const PhotonSlot& slot) const {
    const auto& e = states_.at(slot.state);
    check_slot(e, slot);
    if (const auto* p = std::get_if<PureStated>(&e)) return *p;
    return factor(std::get<JointStated>(e), slot.subsystem);
}

void StateStore::apply(const PhotonSlot& slot, const Unitaryd& u) {
    auto& e = states_.at(slot.state);
    check_slot(e, slot);
    if (auto* p = std::get_if<PureStated>(&e))
        *p = dsqc::apply(u, *p);
    else
        e = apply_local(std::get<JointStated>(e), slot.subsystem, u);
}

}  // namespace dsqc
