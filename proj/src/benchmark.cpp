#include "cqc/benchmark.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "cqc/error.hpp"
#include "cqc/physics.hpp"

namespace cqc {

double benchmark_k(const BenchmarkChannel& c) {
    c.validate();
    return std::sqrt(2.0 * c.eta0) / (1.0 - c.eta0);
}

double benchmark_ccov_quantile(const BenchmarkChannel& c, double eps_cov) {
    detail::require(eps_cov > 0.0 && eps_cov < 1.0, "benchmark: eps_cov must lie in (0,1)");
    const double z = 1.0 - (2.0 * c.eta0 / c.rate) * std::log1p(-eps_cov);
    const double z2m1 = (z - 1.0) * (z + 1.0);
    assert(z2m1 >= 0.0);
    return benchmark_k(c) * std::sqrt(z2m1 / (4.0 * c.eta0));
}

double benchmark_qmax(const BenchmarkChannel& c, const ProtocolParams& p, double eps_cov) {
    p.validate();
    return std::min(1.0, q_ceiling(benchmark_ccov_quantile(c, eps_cov), p.delta, p.n));
}

double benchmark_rmax(const BenchmarkChannel& c, double eps_rel) {
    c.validate();
    detail::require(eps_rel > 0.0 && eps_rel < 1.0, "benchmark: eps_rel must lie in (0,1)");
    return achievable_rate({c.eta0, -std::log(eps_rel) / c.rate});
}

double benchmark_noise_root(const BenchmarkChannel& c, double x) {
    detail::require(x >= 0.0, "benchmark: c_cov argument must be >= 0");
    const double k = benchmark_k(c);
    const double s = 4.0 * c.eta0 * (x / k) * (x / k);
    // (-1 + sqrt(1 + s)) / (2 eta0), written to avoid cancellation for small s.
    return s / (1.0 + std::sqrt(1.0 + s)) / (2.0 * c.eta0);
}

double benchmark_ccov_cdf(const BenchmarkChannel& c, double x) {
    if (x <= 0.0) return 0.0;
    return -std::expm1(-c.rate * benchmark_noise_root(c, x));
}

double benchmark_ccov_density(const BenchmarkChannel& c, double x) {
    if (x < 0.0) return 0.0;
    const double k = benchmark_k(c);
    const double root = benchmark_noise_root(c, x);
    const double droot_dx = 2.0 * x / (k * k * std::sqrt(1.0 + 4.0 * c.eta0 * (x / k) * (x / k)));
    return c.rate * std::exp(-c.rate * root) * droot_dx;
}

double benchmark_rate_slope(const BenchmarkChannel& c, double noise) {
    c.validate();
    const ChannelRealization r{c.eta0, noise};
    if (achievable_rate(r) <= 0.0) return 0.0;
    const double p = depolarizing_probability(r);
    const double dh_dp = 0.75 * std::log2((4.0 - 3.0 * p) / p);
    const double base = 1.0 + (1.0 - c.eta0) * noise;
    const double dp_dx = 4.0 * c.eta0 * (1.0 - c.eta0) / std::pow(base, 5);
    return -dh_dp * dp_dx;
}

double benchmark_rach_density_at_quantile(const BenchmarkChannel& c, double eps_rel) {
    detail::require(eps_rel > 0.0 && eps_rel < 1.0, "benchmark: eps_rel must lie in (0,1)");
    const double slope = benchmark_rate_slope(c, -std::log(eps_rel) / c.rate);
    if (slope == 0.0) return std::numeric_limits<double>::infinity();
    return c.rate * eps_rel / std::abs(slope);
}

namespace {

ValidationRow compare(double eps, const char* metric, double theory, double mc) {
    ValidationRow row{eps, metric, theory, mc, std::nullopt};
    const bool both_zero = std::abs(theory) < kNegligibleRate && std::abs(mc) < kNegligibleRate;
    if (!(both_zero && std::string(metric) == "R_max") && theory != 0.0) {
        row.rel_error_percent = 100.0 * std::abs(mc - theory) / std::abs(theory);
    }
    return row;
}

}  // namespace

std::vector<ValidationRow> validate(const BenchmarkChannel& c, const ProtocolParams& p,
                                    std::span<const double> eps_list, const SampleSet& s) {
    detail::require(s.digest() == channel_digest(ChannelSpec{c}),
                    "benchmark validation: sample set was drawn from a different channel");
    std::vector<ValidationRow> rows;
    for (double eps : eps_list) {
        const OptimumReport mc = optimize(s, p, {eps, eps});
        rows.push_back(compare(eps, "q_max", benchmark_qmax(c, p, eps), mc.q_max));
        rows.push_back(compare(eps, "R_max", benchmark_rmax(c, eps), mc.r_max));
    }
    return rows;
}

std::vector<ValidationRow> validate(const BenchmarkChannel& c, const ProtocolParams& p,
                                    std::span<const double> eps_list, std::size_t K, std::uint64_t seed,
                                    unsigned threads) {
    return validate(c, p, eps_list, generate_sample_set(ChannelSpec{c}, K, seed, threads));
}

}  // namespace cqc
