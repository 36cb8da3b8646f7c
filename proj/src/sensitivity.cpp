#include "cqc/sensitivity.hpp"

#include <cmath>

#include "cqc/error.hpp"

namespace cqc {

std::vector<SensitivityPoint> sensitivities_symmetric(const SampleSet& s, const ProtocolParams& p,
                                                      std::span<const double> eps_grid, double relative_step) {
    detail::require(relative_step > 0.0 && relative_step < 1.0, "sensitivity: relative step must lie in (0,1)");
    std::vector<SensitivityPoint> out;
    out.reserve(eps_grid.size());
    for (double eps : eps_grid) {
        detail::require(eps > 0.0 && eps < 1.0, "sensitivity: eps must lie in (0,1)");
        const double h = eps * relative_step;
        SensitivityPoint pt{.eps = eps};
        double lo = eps - h;
        double hi = eps + h;
        if (hi >= 1.0) {
            hi = eps;
            pt.one_sided = true;
        }

        const OptimumReport cov_lo = optimize(s, p, {lo, eps});
        const OptimumReport cov_hi = optimize(s, p, {hi, eps});
        const OptimumReport rel_lo = optimize(s, p, {eps, lo});
        const OptimumReport rel_hi = optimize(s, p, {eps, hi});
        pt.s_cov = (cov_hi.t_star - cov_lo.t_star) / (hi - lo);
        pt.s_rel = (rel_hi.t_star - rel_lo.t_star) / (hi - lo);
        pt.atom_suspected = rel_lo.r_max == 0.0 || rel_hi.r_max == 0.0;
        pt.kink_suspected = cov_lo.q_capped != cov_hi.q_capped;
        out.push_back(pt);
    }
    return out;
}

SensitivityPair sensitivity_formula(double q_max, double r_max, const ProtocolParams& p, double eps,
                                    double density_ccov_at_quantile, double density_rach_at_quantile,
                                    bool capped) {
    p.validate();
    detail::require(eps > 0.0 && eps < 1.0, "sensitivity: eps must lie in (0,1)");
    SensitivityPair out{0.0, 0.0};
    if (!capped) {
        if (!(density_ccov_at_quantile > 0.0)) {
            throw SingularSensitivityError("sensitivity: c_cov density vanishes at the quantile");
        }
        out.s_cov = 2.0 * p.delta / std::sqrt(static_cast<double>(p.n)) * r_max / density_ccov_at_quantile;
    }
    if (!(density_rach_at_quantile > 0.0)) {
        throw SingularSensitivityError("sensitivity: R_ach density vanishes at the quantile");
    }
    out.s_rel = q_max / density_rach_at_quantile;
    return out;
}

}  // namespace cqc
