#include "cqc/physics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cqc/error.hpp"

namespace cqc {

void ChannelRealization::validate() const {
    detail::require(eta > 0.0 && eta <= 1.0, "channel: eta must lie in (0,1]");
    detail::require(nb >= 0.0 && std::isfinite(nb), "channel: nb must be finite and >= 0");
}

double covertness_constant(const ChannelRealization& r) {
    if (r.nb == 0.0) return 0.0;
    if (r.eta == 1.0) return std::numeric_limits<double>::infinity();
    const double s = r.eta * r.nb;
    return std::sqrt(2.0 * s * (1.0 + s)) / (1.0 - r.eta);
}

double depolarizing_probability(const ChannelRealization& r) {
    const double base = 1.0 + (1.0 - r.eta) * r.nb;
    const double b2 = base * base;
    return std::clamp(1.0 - r.eta / (b2 * b2), 0.0, 1.0);
}

PauliVector pauli_vector(double p) {
    detail::require(p >= 0.0 && p <= 1.0, "pauli_vector: p must lie in [0,1]");
    const double q = 0.25 * p;
    return {1.0 - 3.0 * q, q, q, q};
}

double pauli_entropy(const PauliVector& v) {
    double h = 0.0;
    for (double pi : v.as_array()) {
        if (pi > 0.0) h -= pi * std::log2(pi);
    }
    return h;
}

double achievable_rate(const ChannelRealization& r) {
    const double h = pauli_entropy(pauli_vector(depolarizing_probability(r)));
    return std::clamp(1.0 - h, 0.0, 1.0);
}

double q_ceiling(double c_cov, double delta, std::uint64_t n) {
    detail::require(delta > 0.0, "q_ceiling: delta must be > 0");
    detail::require(n >= 1, "q_ceiling: n must be >= 1");
    return 2.0 * delta * c_cov / std::sqrt(static_cast<double>(n));
}

}  // namespace cqc
