#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cqc/quantiles.hpp"
#include "cqc/samples.hpp"

namespace cqc {

/// Frame length n and covertness threshold delta.
struct ProtocolParams {
    std::uint64_t n = 10'000'000;
    double delta = 0.05;

    void validate() const;
};

struct OptimumReport {
    double q_max = 0.0;
    double r_max = 0.0;
    double t_star = 0.0;         ///< q_max * r_max, qubits per channel use
    double total_payload = 0.0;  ///< n * t_star
    bool q_capped = false;       ///< uncapped covertness bound exceeded 1
    bool below_resolution = false;  ///< a budget is below 1/K; quantile is the sample minimum

    bool feasible() const { return t_star > 0.0; }
};

/// Risk-constrained optimum: the corner of the feasible rectangle.
OptimumReport optimize(const SampleSet& s, const ProtocolParams& p, const RiskBudgets& b);

struct FrontierRow {
    double eps;
    OptimumReport report;
};

/// optimize() at eps_cov = eps_rel = eps for each grid value, in grid order.
std::vector<FrontierRow> frontier_sweep(const SampleSet& s, const ProtocolParams& p,
                                        std::span<const double> eps_grid, unsigned threads = 1);

/// Row-major [i][j] = optimize at (eps_cov_grid[i], eps_rel_grid[j]).
std::vector<std::vector<OptimumReport>> surface_sweep(const SampleSet& s, const ProtocolParams& p,
                                                      std::span<const double> eps_cov_grid,
                                                      std::span<const double> eps_rel_grid,
                                                      unsigned threads = 1);

struct ScalingRow {
    std::uint64_t n;
    OptimumReport report;
};

std::vector<ScalingRow> n_scaling_sweep(const SampleSet& s, double delta, double eps,
                                        std::span<const std::uint64_t> n_grid);

/// Budgets at which decade gains are reported.
inline constexpr double kDecadeBudgets[] = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1};

/// t_star(eps_{i+1}) / t_star(eps_i); nullopt marks an infeasible (zero) denominator.
std::vector<std::optional<double>> decade_gains(std::span<const FrontierRow> rows);

/// `points` values 10^lo ... 10^hi, evenly spaced in the exponent.
std::vector<double> logspace(double lo_exp, double hi_exp, std::size_t points);
std::vector<double> linspace(double lo, double hi, std::size_t points);

}  // namespace cqc
