#pragma once

#include <array>
#include <cstdint>

namespace cqc {

/// Frame-level state of the bosonic thermal-loss channel.
struct ChannelRealization {
    double eta = 1.0;  ///< transmittance, (0,1]
    double nb = 0.0;   ///< mean thermal photon number, >= 0

    void validate() const;
};

/// Pauli error probabilities [p_I, p_X, p_Y, p_Z] of a depolarizing channel.
struct PauliVector {
    double p_i = 1.0;
    double p_x = 0.0;
    double p_y = 0.0;
    double p_z = 0.0;

    std::array<double, 4> as_array() const { return {p_i, p_x, p_y, p_z}; }
};

/// sqrt(2 eta nb (1 + eta nb)) / (1 - eta). +inf for a lossless channel with nb > 0.
double covertness_constant(const ChannelRealization& r);

/// 1 - eta / [1 + (1 - eta) nb]^4.
double depolarizing_probability(const ChannelRealization& r);

PauliVector pauli_vector(double p);

/// Shannon entropy in bits, with 0 log 0 = 0.
double pauli_entropy(const PauliVector& v);

/// Hashing-bound rate (1 - H(p))^+ in qubits per transmitted qubit.
double achievable_rate(const ChannelRealization& r);

/// Covertness bound on the transmission probability, 2 delta c_cov / sqrt(n). Not capped.
double q_ceiling(double c_cov, double delta, std::uint64_t n);

}  // namespace cqc
