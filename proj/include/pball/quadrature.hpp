// Deterministic quadrature building blocks: compensated summation,
// Gauss-Legendre rules, and an adaptive Gauss7/Kronrod15 integrator.

#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace pball {

// Neumaier-compensated accumulator.  Sums are reproducible to ~1e-14 as long
// as partial accumulators are merged in a fixed order.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }

    void merge(const CompensatedSum& other) {
        add(other.sum_);
        add(other.comp_);
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// k-point Gauss-Legendre rule on [-1, 1], nodes by Newton iteration.
QuadratureRule gauss_legendre(int k);

// `panels` equal subdivisions of [a, b] with a k-point Gauss-Legendre rule
// on each; weights sum to b - a.
QuadratureRule composite_gauss_legendre(int points_per_panel, int panels, double a, double b);

struct AdaptiveResult {
    double value = 0.0;
    double error = 0.0;  // accumulated error estimate
    long long evaluations = 0;
    bool converged = true;
};

// Adaptive bisection with a Gauss7/Kronrod15 pair on each interval.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol = 1e-12, double abs_tol = 1e-14,
                                  int max_depth = 48);

}  // namespace pball
