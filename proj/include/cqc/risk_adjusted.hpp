#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cqc/risk_constrained.hpp"
#include "cqc/samples.hpp"

namespace cqc {

/// Outage prices; both >= 0.
struct RiskWeights {
    double lambda_cov = 0.0;
    double lambda_rel = 0.0;

    void validate() const;
};

/// Fixed operating point: transmission probability q and code rate r.
struct Strategy {
    double q = 0.0;
    double r = 0.0;

    friend bool operator==(const Strategy&, const Strategy&) = default;
};

/// Uniform grid linspace(0,1,points_per_axis) on both q and r.
struct GridSpec {
    std::size_t points_per_axis = 401;

    void validate() const;
};

/// Grid maxima closer than this to the best value count as ties.
inline constexpr double kTieTolerance = 1e-12;

/// q r - lambda_cov P[c_cov < q sqrt(n) / 2 delta] - lambda_rel P[R_ach < r], with empirical laws.
double objective(const SampleSet& s, const Strategy& st, const RiskWeights& w, const ProtocolParams& p);

struct GridOptimum {
    Strategy strategy;
    double value = 0.0;
    /// q exceeds 2 delta median(c_cov) / sqrt(n); the small-q covertness surrogate is not trustworthy there.
    bool outside_sparse_regime = false;
};

/// Exhaustive grid search. Ties go to the smallest q, then the smallest r.
GridOptimum grid_maximize(const SampleSet& s, const RiskWeights& w, const ProtocolParams& p,
                          const GridSpec& g = {});

enum class LambdaAxis { cov, rel };

struct LambdaSweepRow {
    RiskWeights weights;
    GridOptimum optimum;
};

/// One grid_maximize per value of the varying weight; the other is held at `fixed_other`.
std::vector<LambdaSweepRow> lambda_sweep(const SampleSet& s, const ProtocolParams& p, const GridSpec& g,
                                         LambdaAxis axis, std::span<const double> values, double fixed_other,
                                         unsigned threads = 1);

/// Row-major [i][j] for (lambda_cov_values[i], lambda_rel_values[j]).
std::vector<std::vector<GridOptimum>> heatmap_sweep(const SampleSet& s, const ProtocolParams& p,
                                                    const GridSpec& g, std::span<const double> lambda_cov_values,
                                                    std::span<const double> lambda_rel_values,
                                                    unsigned threads = 1);

struct FocResidual {
    double res_q;
    double res_r;
};

using Density = std::function<double(double)>;

/// Stationarity residuals of a smooth risk-adjusted objective at `st`.
FocResidual foc_residual(const Strategy& st, const RiskWeights& w, const ProtocolParams& p,
                         const Density& density_ccov, const Density& density_rach);

}  // namespace cqc
