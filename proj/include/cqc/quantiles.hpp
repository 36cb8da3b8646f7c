#pragma once

#include <span>

namespace cqc {

/// Covertness and reliability risk budgets, each in (0,1).
struct RiskBudgets {
    double eps_cov = 0.1;
    double eps_rel = 0.1;

    void validate() const;
};

/// Fraction of samples strictly below x. `sorted` must be ascending and nonempty.
double strict_cdf(std::span<const double> sorted, double x);

/**
 * sup{x : P[X < x] <= eps} for the empirical law of `sorted`.
 *
 * For the empirical law this is the order statistic x_(m+1) with
 * m = floor(eps K), clamped to the largest sample.
 */
double strict_outage_quantile(std::span<const double> sorted, double eps);

/// floor(eps * K), snapping products within an ulp of an integer.
std::size_t outage_rank(double eps, std::size_t K);

}  // namespace cqc
