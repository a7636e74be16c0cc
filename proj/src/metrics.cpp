#include "dsqc/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace dsqc {

void EfficiencyInput::validate() const {
    if (useful_qubits < 0 || total_qubits < 0 || message_bits < 0 || classical_bits < 0)
        throw std::domain_error("efficiency inputs must be nonnegative");
    if (useful_qubits > total_qubits) throw std::domain_error("useful qubits exceed total qubits");
}

double von_neumann_entropy(const AmplitudeProfile& profile) {
    double s = 0.0;
    for (double p : profile.probabilities())
        if (p > 0.0) s -= p * std::log2(p);
    return s;
}

double intrinsic_efficiency(double useful_qubits, double total_qubits) {
    if (!(total_qubits > 0)) throw std::domain_error("intrinsic efficiency needs q_t > 0");
    return useful_qubits / total_qubits;
}

double total_efficiency(double message_bits, double total_qubits, double classical_bits) {
    const double denom = total_qubits + classical_bits;
    if (!(denom > 0)) throw std::domain_error("total efficiency needs q_t + b_t > 0");
    return message_bits / denom;
}

double pair_cost(const AmplitudeProfile& profile, PairAccounting accounting) {
    if (accounting == PairAccounting::PhotonCount) return 2.0 * std::log2(static_cast<double>(profile.dim()));
    return 2.0 * von_neumann_entropy(profile);
}

double entangled_total_efficiency(const AmplitudeProfile& profile) {
    const double bits = std::log2(static_cast<double>(profile.dim()));
    return total_efficiency(bits, pair_cost(profile), bits);
}

double attenuation_survival(double lambda, double length) {
    if (!(lambda >= 0) || !(length >= 0)) throw std::domain_error("attenuation needs lambda, L >= 0");
    return std::exp(-lambda * length);
}

}  // namespace dsqc
