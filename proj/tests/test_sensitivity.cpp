#include <cmath>

#include "cqc/benchmark.hpp"
#include "cqc/error.hpp"
#include "cqc/sensitivity.hpp"
#include "doctest.h"

using namespace cqc;

namespace {

const BenchmarkChannel kBench{0.9, 10.0};
const ProtocolParams kProtocol{10'000'000, 0.05};

}  // namespace

TEST_CASE("degenerate sample set has zero sensitivity") {
    const SampleSet s(std::vector<double>(100, 2.0), std::vector<double>(100, 0.5), 0, {});
    const std::vector<double> grid{1e-3, 0.01, 0.1, 0.95};
    for (const auto& pt : sensitivities_symmetric(s, kProtocol, grid)) {
        CHECK(pt.s_cov == 0.0);
        CHECK(pt.s_rel == 0.0);
        CHECK_FALSE(pt.atom_suspected);
    }
    CHECK(sensitivities_symmetric(s, kProtocol, grid).back().one_sided);
    const std::vector<double> bad{0.0};
    CHECK_THROWS_AS(sensitivities_symmetric(s, kProtocol, bad), ParameterError);
}

TEST_CASE("atom at zero rate is flagged") {
    std::vector<double> r(100, 0.0);
    for (std::size_t i = 50; i < 100; ++i) r[i] = 0.01 * static_cast<double>(i - 49);
    const SampleSet s(std::vector<double>(100, 2.0), r, 0, {});
    const std::vector<double> grid{0.49, 0.1};
    const auto pts = sensitivities_symmetric(s, kProtocol, grid);
    CHECK(pts[0].atom_suspected);
    CHECK(pts[1].atom_suspected);
}

TEST_CASE("cap kink is flagged") {
    std::vector<double> c(100);
    for (std::size_t i = 0; i < 100; ++i) c[i] = static_cast<double>(i + 1);
    const SampleSet s(c, std::vector<double>(100, 0.5), 0, {});
    // n = 1: q = 0.1 c, capped above c = 10. The stencil spans c = 9 and c = 11.
    const std::vector<double> grid{0.095};
    const auto pts = sensitivities_symmetric(s, {1, 0.05}, grid);
    CHECK(pts[0].kink_suspected);
}

TEST_CASE("finite differences on the benchmark channel") {
    const auto s = generate_sample_set(kBench, 1'000'000, 21);
    const std::vector<double> grid{0.05, 0.1, 0.2, 0.3, 0.5};
    const auto pts = sensitivities_symmetric(s, kProtocol, grid);
    for (const auto& pt : pts) {
        CHECK(pt.s_cov >= -1e-15);
        CHECK(pt.s_rel >= -1e-15);
        const double q = benchmark_qmax(kBench, kProtocol, pt.eps);
        const double r = benchmark_rmax(kBench, pt.eps);
        const auto exact = sensitivity_formula(q, r, kProtocol, pt.eps,
                                               benchmark_ccov_density(kBench, benchmark_ccov_quantile(kBench, pt.eps)),
                                               benchmark_rach_density_at_quantile(kBench, pt.eps), false);
        CHECK(std::abs(pt.s_cov / exact.s_cov - 1.0) < 0.1);
        CHECK(std::abs(pt.s_rel / exact.s_rel - 1.0) < 0.1);
    }
    // s_rel against q_max times a finite difference of the closed-form rate quantile.
    const double eps = 0.1, h = 1e-6;
    const double drdeps = (benchmark_rmax(kBench, eps + h) - benchmark_rmax(kBench, eps - h)) / (2 * h);
    CHECK(std::abs(pts[1].s_rel / (benchmark_qmax(kBench, kProtocol, eps) * drdeps) - 1.0) < 0.1);
}

TEST_CASE("closed-form sensitivities") {
    CHECK(sensitivity_formula(1.0, 0.4, kProtocol, 0.1, 0.5, 2.0, true).s_cov == 0.0);
    CHECK(sensitivity_formula(1.0, 0.4, kProtocol, 0.1, 0.0, 2.0, true).s_rel == 0.5);

    const auto unit = sensitivity_formula(3e-5, 0.4, kProtocol, 0.1, 1.0, 1.0, false);
    CHECK(unit.s_cov == doctest::Approx(2 * 0.05 / std::sqrt(1e7) * 0.4));
    CHECK(unit.s_rel == 3e-5);

    CHECK_THROWS_AS(sensitivity_formula(3e-5, 0.4, kProtocol, 0.1, 0.0, 1.0, false), SingularSensitivityError);
    CHECK_THROWS_AS(sensitivity_formula(3e-5, 0.4, kProtocol, 0.1, 1.0, 0.0, false), SingularSensitivityError);

    // Inverse-function derivative of the exact covertness quantile.
    const double eps = 0.1, h = 1e-7;
    const double dQ = (benchmark_ccov_quantile(kBench, eps + h) - benchmark_ccov_quantile(kBench, eps - h)) / (2 * h);
    const double r = benchmark_rmax(kBench, eps);
    const auto s = sensitivity_formula(benchmark_qmax(kBench, kProtocol, eps), r, kProtocol, eps,
                                       benchmark_ccov_density(kBench, benchmark_ccov_quantile(kBench, eps)),
                                       benchmark_rach_density_at_quantile(kBench, eps), false);
    CHECK(std::abs(s.s_cov / (2 * 0.05 / std::sqrt(1e7) * r * dQ) - 1.0) < 1e-3);
}
