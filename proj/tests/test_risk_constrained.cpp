#include <algorithm>
#include <cmath>
#include <random>

#include "cqc/error.hpp"
#include "cqc/risk_constrained.hpp"
#include "doctest.h"

using namespace cqc;

namespace {

const StochasticChannel kBaseline{{-0.0126, 0.05}, {0.005, 0.001, 0.0, 0.5}};

SampleSet synthetic(std::vector<double> c, std::vector<double> r) {
    std::sort(c.begin(), c.end());
    std::sort(r.begin(), r.end());
    return SampleSet(std::move(c), std::move(r), 0, {});
}

SampleSet random_set(std::mt19937_64& rng, std::size_t K) {
    std::lognormal_distribution<double> c(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> cc(K), rr(K);
    for (auto& x : cc) x = c(rng);
    for (auto& x : rr) x = u(rng) < 0.1 ? 0.0 : u(rng);  // atom at zero
    return synthetic(cc, rr);
}

}  // namespace

TEST_CASE("optimize on the benchmark channel") {
    const auto s = generate_sample_set(BenchmarkChannel{0.9, 10.0}, 1'000'000, 1);
    const auto r = optimize(s, {10'000'000, 0.05}, {0.1, 0.1});
    // Closed forms at eps = 0.1: q = 4.37547e-5, R = 0.220380.
    CHECK(std::abs(r.q_max / 4.37547e-5 - 1.0) < 0.02);
    CHECK(std::abs(r.r_max / 0.220380 - 1.0) < 0.05);
    CHECK(r.t_star == r.q_max * r.r_max);
    CHECK(r.total_payload == 1e7 * r.t_star);
    CHECK_FALSE(r.q_capped);
    CHECK_FALSE(r.below_resolution);
}

TEST_CASE("collapsed rectangle and cap") {
    const auto s = synthetic({1, 2, 3, 4}, {0, 0, 0.5, 0.9});
    const auto r = optimize(s, {100, 0.05}, {0.3, 0.3});
    CHECK(r.r_max == 0.0);
    CHECK(r.t_star == 0.0);
    CHECK_FALSE(r.feasible());

    const auto big = synthetic({1e6, 2e6}, {0.5, 0.6});
    const auto capped = optimize(big, {1, 0.05}, {0.1, 0.1});
    CHECK(capped.q_max == 1.0);
    CHECK(capped.q_capped);
    CHECK(capped.t_star == 0.5);

    CHECK(optimize(s, {100, 0.05}, {1e-3, 0.3}).below_resolution);
    CHECK_THROWS_AS(optimize(s, {100, 0.05}, {0.0, 0.3}), ParameterError);
    CHECK_THROWS_AS(optimize(s, {100, 0.5}, {0.1, 0.3}), ParameterError);
    CHECK_THROWS_AS(optimize(s, {0, 0.05}, {0.1, 0.3}), ParameterError);
}

TEST_CASE("rectangle optimality against a brute-force scan") {
    std::mt19937_64 rng(31);
    const ProtocolParams p{400, 0.05};
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t K = 10 + rng() % 30;
        const auto s = random_set(rng, K);
        const double eps_cov = 0.02 + 0.9 * (rng() % 1000) / 1000.0;
        const double eps_rel = 0.02 + 0.9 * (rng() % 1000) / 1000.0;

        // Candidate grid: 200 uniform points plus every sample-induced threshold.
        std::vector<double> qs, rs;
        for (int i = 0; i < 200; ++i) {
            qs.push_back(i / 199.0);
            rs.push_back(i / 199.0);
        }
        for (double c : s.ccov()) qs.push_back(std::min(1.0, 2.0 * p.delta * c / std::sqrt(400.0)));
        for (double r : s.rach()) rs.push_back(r);

        double best = 0.0;
        for (double q : qs) {
            std::size_t cov_out = 0;
            for (double c : s.ccov()) cov_out += q > 2.0 * p.delta * c / std::sqrt(400.0);
            if (cov_out > eps_cov * K) continue;
            for (double r : rs) {
                std::size_t rel_out = 0;
                for (double a : s.rach()) rel_out += r > a;
                if (rel_out > eps_rel * K) continue;
                best = std::max(best, q * r);
            }
        }
        const auto rep = optimize(s, p, {eps_cov, eps_rel});
        CHECK(rep.t_star == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("Pareto monotonicity on random sample sets") {
    std::mt19937_64 rng(5);
    const auto grid = logspace(-3, -0.05, 20);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = random_set(rng, 1000);
        const auto surface = surface_sweep(s, {10'000, 0.05}, grid, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            for (std::size_t j = 0; j < grid.size(); ++j) {
                if (i > 0) REQUIRE(surface[i][j].t_star >= surface[i - 1][j].t_star);
                if (j > 0) REQUIRE(surface[i][j].t_star >= surface[i][j - 1].t_star);
            }
        }
    }
}

TEST_CASE("frontier and surface sweeps on the baseline channel") {
    const auto s = generate_sample_set(kBaseline, 200'000, 3);
    const ProtocolParams p{10'000'000, 0.05};
    const auto grid = logspace(-5, -1, 30);

    const auto rows = frontier_sweep(s, p, grid, 3);
    REQUIRE(rows.size() == 30);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].report.t_star >= rows[i - 1].report.t_star);
    CHECK(frontier_sweep(s, p, grid, 1).size() == 30);

    const std::vector<double> single{0.01};
    const auto one = frontier_sweep(s, p, single);
    REQUIRE(one.size() == 1);
    const auto direct = optimize(s, p, {0.01, 0.01});
    CHECK(one[0].report.t_star == direct.t_star);
    CHECK(one[0].report.q_max == direct.q_max);
    CHECK(direct.total_payload >= 50.0);
    CHECK(direct.total_payload <= 500.0);

    const auto g20 = logspace(-5, -1, 20);
    const auto surf = surface_sweep(s, p, g20, g20, 2);
    for (std::size_t i = 0; i < 20; ++i) {
        for (std::size_t j = 0; j < 20; ++j) {
            if (i) CHECK(surf[i][j].t_star >= surf[i - 1][j].t_star);
            if (j) CHECK(surf[i][j].t_star >= surf[i][j - 1].t_star);
        }
    }
    const std::vector<double> e1{0.05};
    CHECK(surface_sweep(s, p, e1, e1)[0][0].t_star == optimize(s, p, {0.05, 0.05}).t_star);
}

TEST_CASE("collapsed reliability column") {
    const auto s = synthetic({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {0, 0, 0, 0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
    const std::vector<double> cov{0.05, 0.2, 0.5};
    const std::vector<double> rel{0.05, 0.35, 0.45};
    const auto surf = surface_sweep(s, {100, 0.05}, cov, rel);
    for (std::size_t i = 0; i < cov.size(); ++i) {
        CHECK(surf[i][0].t_star == 0.0);
        CHECK(surf[i][1].t_star == 0.0);
        CHECK(surf[i][2].t_star > 0.0);
    }
}

TEST_CASE("square-root scaling") {
    const auto s = generate_sample_set(kBaseline, 10'000, 4);
    const std::vector<std::uint64_t> ns{1'000'000, 4'000'000, 16'000'000};
    const auto rows = n_scaling_sweep(s, 0.05, 0.01, ns);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK_FALSE(rows[i].report.q_capped);
        CHECK(std::abs(rows[i].report.total_payload / rows[i - 1].report.total_payload - 2.0) < 1e-12 * 2.0);
    }
    const double c = strict_outage_quantile(s.ccov(), 0.01);
    const double r = strict_outage_quantile(s.rach(), 0.01);
    CHECK(rows[0].report.total_payload == doctest::Approx(1000.0 * 2.0 * 0.05 * c * r).epsilon(1e-12));

    const std::vector<std::uint64_t> tiny{1, 4};
    const auto capped = n_scaling_sweep(s, 0.2, 0.5, tiny);
    CHECK(capped[0].report.q_capped);
    CHECK(std::abs(capped[1].report.total_payload / capped[0].report.total_payload - 2.0) > 1e-3);

    const std::vector<std::uint64_t> single{1000};
    CHECK(n_scaling_sweep(s, 0.05, 0.01, single).size() == 1);
}

TEST_CASE("decade gains") {
    auto rows_with = [](std::vector<double> t) {
        std::vector<FrontierRow> rows;
        for (std::size_t i = 0; i < 5; ++i) {
            OptimumReport r;
            r.t_star = t[i];
            rows.push_back({kDecadeBudgets[i], r});
        }
        return rows;
    };
    const auto flat = decade_gains(rows_with({2, 2, 2, 2, 2}));
    REQUIRE(flat.size() == 4);
    for (const auto& g : flat) CHECK(g == 1.0);

    const auto zero = decade_gains(rows_with({0, 1, 2, 4, 8}));
    CHECK_FALSE(zero[0].has_value());
    CHECK(zero[1] == 2.0);

    auto bad = rows_with({1, 1, 1, 1, 1});
    bad[2].eps = 2e-3;
    CHECK_THROWS_AS(decade_gains(bad), ParameterError);
}

TEST_CASE("grid helpers") {
    const auto l = linspace(0, 1, 401);
    CHECK(l.front() == 0.0);
    CHECK(l.back() == 1.0);
    CHECK(l[200] == 0.5);
    const auto g = logspace(-2, 6, 40);
    CHECK(g.front() == doctest::Approx(1e-2));
    CHECK(g.back() == doctest::Approx(1e6));
}
