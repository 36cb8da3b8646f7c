#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cqc/risk_constrained.hpp"
#include "cqc/samples.hpp"

namespace cqc {

/// k = sqrt(2 eta0) / (1 - eta0).
double benchmark_k(const BenchmarkChannel& c);

/// Exact eps-quantile of c_cov for the exponential-noise channel.
double benchmark_ccov_quantile(const BenchmarkChannel& c, double eps_cov);

/// Exact optimal transmission probability, capped at 1.
double benchmark_qmax(const BenchmarkChannel& c, const ProtocolParams& p, double eps_cov);

/// Exact optimal code rate: achievable rate at noise level -ln(eps_rel)/rate.
double benchmark_rmax(const BenchmarkChannel& c, double eps_rel);

/// Noise level whose covertness constant equals x (positive root of eta0 t^2 + t - (x/k)^2).
double benchmark_noise_root(const BenchmarkChannel& c, double x);

double benchmark_ccov_cdf(const BenchmarkChannel& c, double x);
double benchmark_ccov_density(const BenchmarkChannel& c, double x);

/// d R_ach(eta0, x) / dx, analytic. Nonpositive.
double benchmark_rate_slope(const BenchmarkChannel& c, double noise);

/// Density of R_ach at its eps_rel-quantile: lambda eps / |dR/dx| at x = -ln(eps)/lambda.
double benchmark_rach_density_at_quantile(const BenchmarkChannel& c, double eps_rel);

struct ValidationRow {
    double eps;
    std::string metric;  ///< "q_max" or "R_max"
    double theory;
    double mc;
    std::optional<double> rel_error_percent;  ///< empty when both values are ~0
};

/// Below this an R_max value is reported as ~0 and the error column is not applicable.
inline constexpr double kNegligibleRate = 1e-3;

/// Monte Carlo versus closed form at symmetric budgets.
std::vector<ValidationRow> validate(const BenchmarkChannel& c, const ProtocolParams& p,
                                    std::span<const double> eps_list, std::size_t K, std::uint64_t seed,
                                    unsigned threads = 1);

/// Same comparison against an existing benchmark sample set.
std::vector<ValidationRow> validate(const BenchmarkChannel& c, const ProtocolParams& p,
                                    std::span<const double> eps_list, const SampleSet& s);

}  // namespace cqc
