// Monte-Carlo side of the mean-value results: discretize the ball (or cube),
// sample it uniformly, estimate functional means and variances across a grid
// of dimensions, and report how fast the variance collapses.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pball/distributions.hpp"
#include "pball/expr.hpp"
#include "pball/meanvalue.hpp"

namespace pball {

enum class ExperimentRegionKind { Full, FirstQuadrant, Cube, CubeDerivative };

struct ExperimentRegion {
    ExperimentRegionKind kind = ExperimentRegionKind::Full;
    double a = 0.0;  // cube bounds
    double b = 1.0;
};

// In cube-derivative experiments the sampled coordinates are derivative
// values u_k; a functional may act on them directly (arc-length style) or on
// the accumulated path x_k = (1/n) * sum_{j<=k} u_j (area style).
enum class CubeFunctionalOf { Coordinate, Path };

struct ExperimentConfig {
    PNormOrder order = PNormOrder::rational(2, 1);
    double scale = 1.0;
    ExperimentRegion region;
    std::vector<FunctionalSpec> functionals;  // at least one, each arity <= 2
    std::optional<std::string> h_source;      // outer y-expression, optional
    CubeFunctionalOf functional_of = CubeFunctionalOf::Coordinate;
    std::vector<int> n_grid = {16, 64, 256, 1024};
    int samples_per_n = 20000;
    std::uint64_t seed = 0;
    int chunk_size = 1024;       // samples per derived stream
    int threads = 0;             // 0 = hardware concurrency
    int pair_subsamples = 10000; // tuple budget for arity-2 functionals
};

struct ReportRow {
    int n = 0;
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;  // sqrt(variance / samples)
};

struct ExchangeComparison {
    double empirical_mean = 0.0;  // mean of h(Y_1,..,Y_k) at the largest n
    double empirical_sd = 0.0;
    double empirical_std_error = 0.0;
    std::optional<double> h_of_means;  // h at the analytic component means
};

struct ExperimentReport {
    // one row per n; the observable is h(Y_1,..,Y_k) when h is configured,
    // otherwise the first functional
    std::vector<ReportRow> rows;
    std::optional<double> analytic_mean;
    double variance_slope = 0.0;
    bool slope_degenerate = false;  // all variances vanished
    bool slope_pass = false;        // slope <= -0.8, or degenerate
    std::vector<double> component_means;  // per-functional means at largest n
    std::optional<ExchangeComparison> exchange;
};

ExperimentReport run_ball_experiment(const ExperimentConfig& config);
ExperimentReport run_cube_experiment(const ExperimentConfig& config);

// Least-squares slope of ln(variance) against ln(n) over rows with positive
// variance.  Degenerate reports (fewer than three usable rows) yield -inf.
double variance_slope(const ExperimentReport& report);

// CSV with the exact header n,mean,variance,stderr.
std::string report_csv(const ExperimentReport& report);

// JSON document echoing the effective config plus all diagnostics.
std::string report_json(const ExperimentConfig& config, const ExperimentReport& report);

}  // namespace pball
