// sources.hpp
// Preparation of pure entangled pairs, decoy photons and single photons, plus
// the state store that lets a photon travel apart from its shared state.

#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "dsqc/qudit.hpp"
#include "dsqc/random.hpp"

namespace dsqc {

/// Coefficients a_j of sum_j a_j |j>_A |j>_B, normalised.
class AmplitudeProfile {
public:
    explicit AmplitudeProfile(Ket<double> a);

    static AmplitudeProfile uniform(int d);
    /// Real amplitudes sqrt(p_j) from outcome probabilities p_j.
    static AmplitudeProfile from_probabilities(const std::vector<double>& p);

    int dim() const { return static_cast<int>(a_.size()); }
    const Ket<double>& amplitudes() const { return a_; }
    /// |a_j|^2.
    std::vector<double> probabilities() const;

private:
    Ket<double> a_;
};

enum class PreparationKind { EntangledPair, Decoy, SinglePhoton };

struct PreparationRecord {
    PreparationKind kind = PreparationKind::Decoy;
    int shift = 0;  // EntangledPair only
    Basis basis = Basis::Zd;
    int index = 0;
    std::size_t position = 0;

    friend bool operator==(const PreparationRecord&, const PreparationRecord&) = default;
};

/// sum_j a_j |j>_A |j>_B.
JointStated make_pure_pair(const AmplitudeProfile& profile);

/// make_pure_pair followed by U_1 on B. At d = 2 this is a|01> + b|10>.
JointStated make_anti_correlated_pair(const AmplitudeProfile& profile);

/// (U_m (x) U_m) applied to the canonical pair, m uniform in [0, d).
std::pair<JointStated, PreparationRecord> randomized_pair(const AmplitudeProfile& profile, RandomStream& rng,
                                                          bool anti_correlated = false);

/// Uniformly random eigenstate of a uniformly random basis in {Z_d, X_d}.
std::pair<PureStated, PreparationRecord> make_decoy(int d, RandomStream& rng);
std::pair<PureStated, PreparationRecord> make_single_photon(int d, RandomStream& rng);

/// Alternative decoy route: measure A of a pair in Z_d, then apply I or H_d
/// to B. Statistically identical to make_decoy; kept for cross-validation.
std::pair<PureStated, PreparationRecord> make_decoy_from_pair(const AmplitudeProfile& profile, RandomStream& rng,
                                                              bool anti_correlated = false);

using StateId = std::size_t;

/// A physical photon: which stored state it belongs to, and which part.
struct PhotonSlot {
    StateId state = 0;
    Subsystem subsystem = Subsystem::Whole;
    bool lost = false;
};

/// Owns every quantum state of one session. Slots refer into it by id.
class StateStore {
public:
    using Entry = std::variant<PureStated, JointStated>;

    /// Adds a single photon; returns its slot.
    PhotonSlot add(PureStated s);
    /// Adds a pair; returns the (A, B) slots.
    std::pair<PhotonSlot, PhotonSlot> add(JointStated s);

    const Entry& at(StateId id) const { return states_.at(id); }
    std::size_t size() const { return states_.size(); }
    int dim(const PhotonSlot& slot) const {
        return std::visit([](const auto& s) { return s.dim(); }, states_.at(slot.state));
    }

    /// Measures the photon in `slot`, collapsing whatever it is part of.
    MeasurementRecord measure(const PhotonSlot& slot, Basis basis, RandomStream& rng);
    std::vector<double> probabilities(const PhotonSlot& slot, Basis basis) const;

    /// Local state of the photon when it is not entangled with anything.
    PureStated local_state(const PhotonSlot& slot) const;

    void apply(const PhotonSlot& slot, const Unitaryd& u);

private:
    std::vector<Entry> states_;
};

}  // namespace dsqc
