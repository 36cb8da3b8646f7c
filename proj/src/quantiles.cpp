#include "cqc/quantiles.hpp"

#include <algorithm>
#include <cmath>

#include "cqc/error.hpp"

namespace cqc {

void RiskBudgets::validate() const {
    detail::require(eps_cov > 0.0 && eps_cov < 1.0, "risk budget eps_cov must lie in (0,1)");
    detail::require(eps_rel > 0.0 && eps_rel < 1.0, "risk budget eps_rel must lie in (0,1)");
}

double strict_cdf(std::span<const double> sorted, double x) {
    detail::require(!sorted.empty(), "strict_cdf: empty sample array");
    const auto below = std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    return static_cast<double>(below) / static_cast<double>(sorted.size());
}

std::size_t outage_rank(double eps, std::size_t K) {
    const double prod = eps * static_cast<double>(K);
    const double nearest = std::nearbyint(prod);
    // 0.1 * 1e6 evaluates to 99999.99999999999; treat it as 100000.
    if (std::abs(prod - nearest) <= std::abs(std::nextafter(prod, 2.0 * prod + 1.0) - prod)) {
        return static_cast<std::size_t>(nearest);
    }
    return static_cast<std::size_t>(std::floor(prod));
}

double strict_outage_quantile(std::span<const double> sorted, double eps) {
    detail::require(!sorted.empty(), "strict_outage_quantile: empty sample array");
    detail::require(eps >= 0.0 && eps < 1.0, "strict_outage_quantile: eps must lie in [0,1)");
    const std::size_t m = outage_rank(eps, sorted.size());
    return sorted[std::min(m, sorted.size() - 1)];
}

}  // namespace cqc
