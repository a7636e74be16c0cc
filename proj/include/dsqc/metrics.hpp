// metrics.hpp
// Entropy and efficiency figures of merit.

#pragma once

#include "dsqc/sources.hpp"

namespace dsqc {

struct EfficiencyInput {
    double useful_qubits = 0;    // q_u
    double total_qubits = 0;     // q_t
    double message_bits = 0;     // m_u
    double classical_bits = 0;   // b_t

    void validate() const;
};

/// -sum_i |a_i|^2 log2 |a_i|^2 in bits, with 0 log 0 = 0.
double von_neumann_entropy(const AmplitudeProfile& profile);

/// eta_q = q_u / q_t.
double intrinsic_efficiency(double useful_qubits, double total_qubits);

/// eta_t = m_u / (q_t + b_t).
double total_efficiency(double message_bits, double total_qubits, double classical_bits);
inline double total_efficiency(const EfficiencyInput& in) {
    in.validate();
    return total_efficiency(in.message_bits, in.total_qubits, in.classical_bits);
}

/// How much quantum resource one pair costs.
enum class PairAccounting {
    Entropy,      // 2 S(rho) bits
    PhotonCount,  // 2 photons of log2 d qubits each
};

double pair_cost(const AmplitudeProfile& profile, PairAccounting accounting = PairAccounting::Entropy);

/// log2 d / (log2 d + 2 S(rho)): per-dit total efficiency of the entangled protocol.
double entangled_total_efficiency(const AmplitudeProfile& profile);

/// e^{-lambda L}.
double attenuation_survival(double lambda, double length);

}  // namespace dsqc
