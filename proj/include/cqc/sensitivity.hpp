#pragma once

#include <span>
#include <vector>

#include "cqc/risk_constrained.hpp"
#include "cqc/samples.hpp"

namespace cqc {

/// Partial derivatives of the optimal throughput along the symmetric-budget line.
struct SensitivityPoint {
    double eps = 0.0;
    double s_cov = 0.0;
    double s_rel = 0.0;
    bool atom_suspected = false;  ///< a differenced rate quantile sits on the atom at R_ach = 0
    bool kink_suspected = false;  ///< the q_max = 1 cap switches inside the difference stencil
    bool one_sided = false;
};

/// Relative finite-difference step: h = eps * kSensitivityStep.
inline constexpr double kSensitivityStep = 0.1;

/**
 * Central differences of t_star in each budget with the other held at eps.
 * Falls back to a backward difference when eps + h would leave (0,1).
 */
std::vector<SensitivityPoint> sensitivities_symmetric(const SampleSet& s, const ProtocolParams& p,
                                                      std::span<const double> eps_grid,
                                                      double relative_step = kSensitivityStep);

struct SensitivityPair {
    double s_cov;
    double s_rel;
};

/**
 * Closed-form sensitivities from the quantile densities:
 *   s_cov = (2 delta / sqrt(n)) r_max / f_ccov   (0 when capped)
 *   s_rel = q_max / f_rach
 * Throws SingularSensitivityError when a density that is used is not positive.
 */
SensitivityPair sensitivity_formula(double q_max, double r_max, const ProtocolParams& p, double eps,
                                    double density_ccov_at_quantile, double density_rach_at_quantile,
                                    bool capped);

}  // namespace cqc
