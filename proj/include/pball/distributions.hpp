// The distribution family arising as coordinate laws of p-norm balls:
// high-order normal (full line, even-rational order), high-order exponent
// (half line), the Gamma family reached from them by the power transform,
// and the exact finite-n coordinate marginal of the discretized ball.

#pragma once

#include <cstdint>

#include "pball/rng.hpp"

namespace pball {

enum class OrderClass { EvenRational, OddRational, GeneralReal };

// The norm exponent p together with its parity classification.  Parity is
// only meaningful for explicitly rational orders: floating-point values of p
// cannot be classified reliably, so a bare real constructs a general-real
// order.  Even-rational orders select full-line support, everything else
// selects half-line support.
class PNormOrder {
public:
    // p = p0/q0 in lowest terms; classification from the parity of the
    // reduced numerator.  Requires p0 >= 1, q0 >= 1.
    static PNormOrder rational(long long p0, long long q0);

    // general real order, p > 0
    static PNormOrder real(double p);

    double value() const { return p_; }
    OrderClass classification() const { return class_; }
    bool even_rational() const { return class_ == OrderClass::EvenRational; }
    bool full_line() const { return even_rational(); }
    bool is_rational() const { return class_ != OrderClass::GeneralReal; }

    // reduced numerator/denominator; zero when the order is general-real
    long long p0() const { return p0_; }
    long long q0() const { return q0_; }

private:
    PNormOrder(double p, OrderClass c, long long p0, long long q0)
        : p_(p), class_(c), p0_(p0), q0_(q0) {}

    double p_;
    OrderClass class_;
    long long p0_;
    long long q0_;
};

// Full-line density 1/(2 R Gamma(1/p) p^(1/p-1)) * exp(-|x|^p / (p R^p)).
// Requires an even-rational order; p = 2 is the standard normal at R = 1.
class GenNormal {
public:
    GenNormal(PNormOrder order, double scale);

    double pdf(double x) const;
    double cdf(double x) const;
    double quantile(double q) const;
    double sample(RandomStream& rng) const;
    // E|X|^k for even k (and E X^k = 0 for odd k)
    double moment(int k) const;

    const PNormOrder& order() const { return order_; }
    double scale() const { return scale_; }

private:
    PNormOrder order_;
    double scale_;
    double log_norm_;
};

// Half-line density 1/(R Gamma(1/p) p^(1/p-1)) * exp(-x^p / (p R^p)) on
// [0, inf).  Order must be odd-rational or general-real; any p > 0 is
// accepted for pure distribution use (the ball provenance needs p >= 1,
// which callers on the geometry side enforce).  p = 1 with R = 1/lambda is
// the usual exponential distribution.
class GenExponent {
public:
    GenExponent(PNormOrder order, double scale);

    // rate parametrization: R = (p*lambda)^(-1/p)
    static GenExponent from_rate(PNormOrder order, double lambda);

    double pdf(double x) const;
    double cdf(double x) const;
    double quantile(double q) const;
    double sample(RandomStream& rng) const;
    double moment(int k) const;

    const PNormOrder& order() const { return order_; }
    double scale() const { return scale_; }
    double rate() const;  // lambda with R = (p*lambda)^(-1/p)

private:
    PNormOrder order_;
    double scale_;
    double log_norm_;
};

// Gamma(alpha, beta) with beta a rate: density beta^alpha/Gamma(alpha) *
// z^(alpha-1) e^(-beta z) on (0, inf).
class GammaDist {
public:
    GammaDist(double alpha, double beta);

    double pdf(double z) const;
    double cdf(double z) const;
    double quantile(double q) const;
    double sample(RandomStream& rng) const;
    double mean() const { return alpha_ / beta_; }
    double variance() const { return alpha_ / (beta_ * beta_); }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

private:
    double alpha_;
    double beta_;
    double log_norm_;  // alpha*ln(beta) - lnGamma(alpha)
};

// The Gamma image of an order-p law under z = (x/R)^p / (p*beta): always
// GammaDist(1/p, beta).
GammaDist gamma_from_order(const GenNormal& d, double beta);
GammaDist gamma_from_order(const GenExponent& d, double beta);

// Exact marginal law of one coordinate of a uniform point in the
// n-dimensional p-ball of radius (n R^p)^(1/p):
//   rho_n(x) = C_n (n R^p)^(-n/p) (n R^p - |x|^p)^((n-1)/p)
// with C_n = p Gamma(1+n/p) / (2 Gamma(1/p) Gamma(1+(n-1)/p)) on the full
// line and without the factor 2 on the half line.  Converges to GenNormal /
// GenExponent as n grows.
class FiniteCoordDensity {
public:
    FiniteCoordDensity(PNormOrder order, double scale, int n);

    double pdf(double x) const;  // 0 outside the support
    double support_max() const { return support_max_; }
    double support_min() const { return order_.full_line() ? -support_max_ : 0.0; }

    const PNormOrder& order() const { return order_; }
    double scale() const { return scale_; }
    int n() const { return n_; }

private:
    PNormOrder order_;
    double scale_;
    int n_;
    double support_max_;
    double log_cn_;
    double log_mass_;  // (n/p) * ln(n R^p)
};

}  // namespace pball
