// Exact mean-values of integral functionals on p-norm balls: closed-form
// reductions to weighted finite-dimensional integrals, evaluated by
// probability-transform tensor quadrature (importance Monte Carlo beyond
// three axes), plus the nonlinear exchange formula and cube-domain means.

#pragma once

#include <cstdint>
#include <span>

#include "pball/ball_geometry.hpp"
#include "pball/distributions.hpp"
#include "pball/expr.hpp"

namespace pball {

enum class MeanMethod { TensorQuadrature, ImportanceMC };

struct MeanValueResult {
    double value = 0.0;
    MeanMethod method = MeanMethod::TensorQuadrature;
    double error_estimate = 0.0;  // upper-bound estimate of the absolute error
    long long evaluations = 0;
};

struct MeanOptions {
    // Coordinate axes use composite Gauss-Legendre on (0,1) through the
    // quantile transform, with panels geometrically graded toward the
    // endpoints (edges at 2^-k for k <= edge_levels) to absorb the
    // logarithmic endpoint behavior of the quantile; interior_panels cover
    // the middle.  The error estimate comes from a coarser companion grid.
    int edge_levels = 40;
    int interior_panels = 16;
    int outer_nodes_per_axis = 32;  // uniform panels for the smooth t axes
    int quadrature_max_arity = 3;   // beyond this, importance MC
    long long mc_samples = 1'000'000;
    std::uint64_t mc_seed = 0x6d65616e76616cULL;
};

// E[g(X_1,..,X_m)] with X_i i.i.d. GenNormal(order, scale); order must be
// even-rational, g must be t-free with full [0,1] intervals.
MeanValueResult mean_even(const FunctionalSpec& g, const PNormOrder& order, double scale,
                          const MeanOptions& opts = {});

// Same with GenExponent coordinates (half-line weight).
MeanValueResult mean_odd(const FunctionalSpec& g, const PNormOrder& order, double scale,
                         const MeanOptions& opts = {});

// Mean of the interval/t-dependent functional
//   integral over I_1 x..x I_m of E[g(X_1,..,X_m, t_1,..,t_m)] dt;
// reduces exactly to |I_1|..|I_m| times mean_even/mean_odd for t-free g.
MeanValueResult mean_general(const FunctionalSpec& g, const PNormOrder& order, double scale,
                             Region region, const MeanOptions& opts = {});

// Nonlinear exchange: E h(Y_1,..,Y_m) = h(EY_1,..,EY_m).  h must be a pure
// y-expression whose arity equals the number of component means.
double exchange(const Expr& h, std::span<const MeanValueResult> component_means);

// Which coordinates the cube bounds constrain: the path values themselves or
// their derivative samples.  The averaged 1D integral is the same either
// way; the tag records what the coordinates mean to the caller.
enum class CubeMode { Value, Derivative };

// (1/(b-a)) * integral of g over [a,b] by adaptive quadrature; the limit
// mean of f(x) = integral of g(x(t)) dt over the cube a <= x(t) <= b (or
// a <= x'(t) <= b in derivative mode).
MeanValueResult cube_mean(const Expr& g, double a, double b, CubeMode mode,
                          const MeanOptions& opts = {});

}  // namespace pball
