#include "cqc/risk_constrained.hpp"

#include <cmath>

#include "cqc/error.hpp"
#include "cqc/physics.hpp"

namespace cqc {

void ProtocolParams::validate() const {
    detail::require(n >= 1, "protocol: n must be >= 1");
    detail::require(delta > 0.0 && delta < 0.5, "protocol: delta must lie in (0,0.5)");
}

OptimumReport optimize(const SampleSet& s, const ProtocolParams& p, const RiskBudgets& b) {
    p.validate();
    b.validate();
    OptimumReport r;
    const double ceiling = q_ceiling(strict_outage_quantile(s.ccov(), b.eps_cov), p.delta, p.n);
    r.q_capped = ceiling > 1.0;
    r.q_max = r.q_capped ? 1.0 : ceiling;
    r.r_max = strict_outage_quantile(s.rach(), b.eps_rel);
    r.t_star = r.r_max > 0.0 ? r.q_max * r.r_max : 0.0;
    r.total_payload = static_cast<double>(p.n) * r.t_star;
    const double resolution = 1.0 / static_cast<double>(s.size());
    r.below_resolution = b.eps_cov < resolution || b.eps_rel < resolution;
    return r;
}

std::vector<FrontierRow> frontier_sweep(const SampleSet& s, const ProtocolParams& p,
                                        std::span<const double> eps_grid, unsigned threads) {
    for (double e : eps_grid) detail::require(e > 0.0 && e < 1.0, "frontier: eps must lie in (0,1)");
    std::vector<FrontierRow> rows(eps_grid.size());
    detail::parallel_for(eps_grid.size(), threads, [&](std::size_t i) {
        rows[i] = {eps_grid[i], optimize(s, p, {eps_grid[i], eps_grid[i]})};
    });
    return rows;
}

std::vector<std::vector<OptimumReport>> surface_sweep(const SampleSet& s, const ProtocolParams& p,
                                                      std::span<const double> eps_cov_grid,
                                                      std::span<const double> eps_rel_grid, unsigned threads) {
    std::vector<std::vector<OptimumReport>> out(eps_cov_grid.size(),
                                                std::vector<OptimumReport>(eps_rel_grid.size()));
    detail::parallel_for(eps_cov_grid.size(), threads, [&](std::size_t i) {
        for (std::size_t j = 0; j < eps_rel_grid.size(); ++j) {
            out[i][j] = optimize(s, p, {eps_cov_grid[i], eps_rel_grid[j]});
        }
    });
    return out;
}

std::vector<ScalingRow> n_scaling_sweep(const SampleSet& s, double delta, double eps,
                                        std::span<const std::uint64_t> n_grid) {
    std::vector<ScalingRow> rows;
    rows.reserve(n_grid.size());
    for (auto n : n_grid) rows.push_back({n, optimize(s, {n, delta}, {eps, eps})});
    return rows;
}

std::vector<std::optional<double>> decade_gains(std::span<const FrontierRow> rows) {
    detail::require(rows.size() == std::size(kDecadeBudgets), "decade_gains: expected 5 frontier rows");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        detail::require(std::abs(rows[i].eps / kDecadeBudgets[i] - 1.0) < 1e-12,
                        "decade_gains: rows must be at 1e-5, 1e-4, 1e-3, 1e-2, 1e-1");
    }
    std::vector<std::optional<double>> gains;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const double den = rows[i].report.t_star;
        if (den > 0.0) {
            gains.emplace_back(rows[i + 1].report.t_star / den);
        } else {
            gains.emplace_back(std::nullopt);
        }
    }
    return gains;
}

std::vector<double> logspace(double lo_exp, double hi_exp, std::size_t points) {
    std::vector<double> v;
    for (double e : linspace(lo_exp, hi_exp, points)) v.push_back(std::pow(10.0, e));
    return v;
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
    detail::require(points >= 1, "grid needs at least one point");
    std::vector<double> v(points);
    if (points == 1) {
        v[0] = lo;
        return v;
    }
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) v[i] = lo + step * static_cast<double>(i);
    v.back() = hi;
    return v;
}

}  // namespace cqc
