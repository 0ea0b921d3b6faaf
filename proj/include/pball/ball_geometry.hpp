// Exact finite-dimensional geometry of p-balls: the generalized Dirichlet
// integral, p-ball volumes, the shell concentration ratio, and exact uniform
// sampling inside full or first-quadrant p-balls.

#pragma once

#include <span>
#include <vector>

#include "pball/distributions.hpp"
#include "pball/rng.hpp"

namespace pball {

enum class Region { Full, FirstQuadrant };

// {x in R^n : sum_k |x_k|^p <= radius^p}, optionally intersected with the
// nonnegative orthant.  Membership uses |x_k|, so the full region is
// geometrically well defined for every order; the parity/region pairing that
// the coordinate limit laws require is enforced by the experiment layer, not
// here.
struct PBall {
    PBall(int n, PNormOrder order, double radius, Region region);

    int n;
    PNormOrder order;
    double radius;
    Region region;
};

// Integral of x_1^(e_1 - 1) ... x_n^(e_n - 1) over the positive part of the
// Euclidean unit ball:
//   2^(-n) Gamma(e_1/2)...Gamma(e_n/2) / Gamma(1 + (e_1+...+e_n)/2),
// evaluated in log space.  All exponents must be positive.
double dirichlet_integral(std::span<const double> exponents);

// ln volume; first-quadrant volume is Gamma(1+1/p)^n / Gamma(1+n/p) * R^n,
// the full ball multiplies by 2^n.  Log space keeps n in the thousands
// representable.
double log_pball_volume(const PBall& ball);
double pball_volume(const PBall& ball);

// V(rB)/V(RB) = (r/R)^n for 0 < r <= R, any order.
double shell_ratio(int n, double r, double R);

// Exact uniform point in the ball: x = radius * U^(1/n) * g / ||g||_p with
// g_1..g_n i.i.d. from the order-p limit law (signed for the full region,
// nonnegative for the first quadrant) and U uniform on (0,1).
std::vector<double> sample_uniform_pball(const PBall& ball, RandomStream& rng);

// Membership check with a small relative tolerance on the radius, so points
// produced by the sampler never fail it to rounding.
bool pball_contains(const PBall& ball, std::span<const double> x);

}  // namespace pball
