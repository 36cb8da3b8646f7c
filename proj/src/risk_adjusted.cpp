#include "cqc/risk_adjusted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cqc/error.hpp"

namespace cqc {

void RiskWeights::validate() const {
    detail::require(lambda_cov >= 0.0 && lambda_rel >= 0.0, "risk weights must be >= 0");
}

void GridSpec::validate() const { detail::require(points_per_axis >= 2, "grid needs >= 2 points per axis"); }

namespace {

double covertness_scale(const ProtocolParams& p) {
    return std::sqrt(static_cast<double>(p.n)) / (2.0 * p.delta);
}

double combine(double q, double r, double cov_penalty, double rel_penalty) {
    return q * r - cov_penalty - rel_penalty;
}

}  // namespace

double objective(const SampleSet& s, const Strategy& st, const RiskWeights& w, const ProtocolParams& p) {
    p.validate();
    w.validate();
    const double cov = w.lambda_cov * strict_cdf(s.ccov(), st.q * covertness_scale(p));
    const double rel = w.lambda_rel * strict_cdf(s.rach(), st.r);
    return combine(st.q, st.r, cov, rel);
}

GridOptimum grid_maximize(const SampleSet& s, const RiskWeights& w, const ProtocolParams& p, const GridSpec& g) {
    p.validate();
    w.validate();
    g.validate();
    const std::vector<double> axis = linspace(0.0, 1.0, g.points_per_axis);
    const std::size_t m = axis.size();

    // The objective separates: the penalties depend on q or r alone.
    std::vector<double> cov(m), rel(m);
    const double scale = covertness_scale(p);
    for (std::size_t i = 0; i < m; ++i) {
        cov[i] = w.lambda_cov * strict_cdf(s.ccov(), axis[i] * scale);
        rel[i] = w.lambda_rel * strict_cdf(s.rach(), axis[i]);
    }

    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) best = std::max(best, combine(axis[i], axis[j], cov[i], rel[j]));
    }

    GridOptimum out;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double v = combine(axis[i], axis[j], cov[i], rel[j]);
            if (v >= best - kTieTolerance) {
                out.strategy = {axis[i], axis[j]};
                out.value = v;
                const double sparse_limit = strict_outage_quantile(s.ccov(), 0.5) / scale;
                out.outside_sparse_regime = axis[i] > sparse_limit;
                return out;
            }
        }
    }
    throw std::logic_error("grid_maximize: no maximizer found");
}

std::vector<LambdaSweepRow> lambda_sweep(const SampleSet& s, const ProtocolParams& p, const GridSpec& g,
                                         LambdaAxis axis, std::span<const double> values, double fixed_other,
                                         unsigned threads) {
    std::vector<LambdaSweepRow> rows(values.size());
    detail::parallel_for(values.size(), threads, [&](std::size_t i) {
        const RiskWeights w = axis == LambdaAxis::cov ? RiskWeights{values[i], fixed_other}
                                                      : RiskWeights{fixed_other, values[i]};
        rows[i] = {w, grid_maximize(s, w, p, g)};
    });
    return rows;
}

std::vector<std::vector<GridOptimum>> heatmap_sweep(const SampleSet& s, const ProtocolParams& p,
                                                    const GridSpec& g, std::span<const double> lambda_cov_values,
                                                    std::span<const double> lambda_rel_values, unsigned threads) {
    const std::size_t cols = lambda_rel_values.size();
    std::vector<std::vector<GridOptimum>> out(lambda_cov_values.size(), std::vector<GridOptimum>(cols));
    detail::parallel_for(lambda_cov_values.size() * cols, threads, [&](std::size_t k) {
        const std::size_t i = k / cols, j = k % cols;
        out[i][j] = grid_maximize(s, {lambda_cov_values[i], lambda_rel_values[j]}, p, g);
    });
    return out;
}

FocResidual foc_residual(const Strategy& st, const RiskWeights& w, const ProtocolParams& p,
                         const Density& density_ccov, const Density& density_rach) {
    p.validate();
    w.validate();
    const double scale = covertness_scale(p);
    return {st.r - w.lambda_cov * scale * density_ccov(st.q * scale), st.q - w.lambda_rel * density_rach(st.r)};
}

}  // namespace cqc
