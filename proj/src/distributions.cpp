#include "pball/distributions.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pball/specfun.hpp"

namespace pball {

namespace {

double pow_abs(double x, double p) { return std::pow(std::fabs(x), p); }

// ln of the half-line normalization R * Gamma(1/p) * p^(1/p - 1)
double half_line_log_norm(double p, double scale) {
    return std::log(scale) + log_gamma(1.0 / p) + (1.0 / p - 1.0) * std::log(p);
}

double check_scale(double scale, const char* who) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw std::domain_error(std::string(who) + ": scale must be positive");
    }
    return scale;
}

// E|X|^k = R^k p^(k/p) Gamma((k+1)/p) / Gamma(1/p)
double abs_moment(double p, double scale, int k) {
    if (k < 0) throw std::domain_error("moment: order must be nonnegative");
    if (k == 0) return 1.0;
    const double kk = static_cast<double>(k);
    return std::exp(kk * std::log(scale) + (kk / p) * std::log(p) + log_gamma((kk + 1.0) / p) -
                    log_gamma(1.0 / p));
}

// magnitude draw shared by both families: R * (p*G)^(1/p), G ~ Gamma(1/p, 1)
double sample_magnitude(double p, double scale, RandomStream& rng) {
    const double g = rng.gamma(1.0 / p);
    return scale * std::pow(p * g, 1.0 / p);
}

}  // namespace

PNormOrder PNormOrder::rational(long long p0, long long q0) {
    if (p0 < 1 || q0 < 1) {
        throw std::domain_error("PNormOrder: numerator and denominator must be >= 1");
    }
    const long long g = std::gcd(p0, q0);
    p0 /= g;
    q0 /= g;
    const OrderClass c = (p0 % 2 == 0) ? OrderClass::EvenRational : OrderClass::OddRational;
    return PNormOrder(static_cast<double>(p0) / static_cast<double>(q0), c, p0, q0);
}

PNormOrder PNormOrder::real(double p) {
    if (!(p > 0.0) || !std::isfinite(p)) {
        throw std::domain_error("PNormOrder: p must be positive and finite");
    }
    return PNormOrder(p, OrderClass::GeneralReal, 0, 0);
}

// ---------------------------------------------------------------------------
// GenNormal

GenNormal::GenNormal(PNormOrder order, double scale) : order_(order), scale_(scale) {
    if (!order.even_rational()) {
        throw std::domain_error("GenNormal: order must be even-rational (full-line support)");
    }
    check_scale(scale, "GenNormal");
    log_norm_ = std::log(2.0) + half_line_log_norm(order.value(), scale);
}

double GenNormal::pdf(double x) const {
    const double p = order_.value();
    return std::exp(-pow_abs(x, p) / (p * std::pow(scale_, p)) - log_norm_);
}

double GenNormal::cdf(double x) const {
    const double p = order_.value();
    if (x == 0.0) return 0.5;
    const double t = reg_lower_gamma(1.0 / p, pow_abs(x, p) / (p * std::pow(scale_, p)));
    return x > 0.0 ? 0.5 + 0.5 * t : 0.5 - 0.5 * t;
}

double GenNormal::quantile(double q) const {
    if (!(q > 0.0 && q < 1.0)) {
        throw std::domain_error("quantile: probability must lie in (0,1)");
    }
    const double p = order_.value();
    const double u = 2.0 * q - 1.0;
    if (u == 0.0) return 0.0;
    const double g = inv_reg_lower_gamma(1.0 / p, std::fabs(u));
    const double mag = scale_ * std::pow(p * g, 1.0 / p);
    return u > 0.0 ? mag : -mag;
}

double GenNormal::sample(RandomStream& rng) const {
    const double mag = sample_magnitude(order_.value(), scale_, rng);
    return rng.coin() ? mag : -mag;
}

double GenNormal::moment(int k) const {
    if (k < 0) throw std::domain_error("moment: order must be nonnegative");
    if (k % 2 == 1) return 0.0;
    return abs_moment(order_.value(), scale_, k);
}

// ---------------------------------------------------------------------------
// GenExponent

GenExponent::GenExponent(PNormOrder order, double scale) : order_(order), scale_(scale) {
    if (order.even_rational()) {
        throw std::domain_error(
            "GenExponent: order must be odd-rational or general-real (half-line support)");
    }
    check_scale(scale, "GenExponent");
    log_norm_ = half_line_log_norm(order.value(), scale);
}

GenExponent GenExponent::from_rate(PNormOrder order, double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("GenExponent: rate must be positive");
    const double p = order.value();
    return GenExponent(order, std::pow(p * lambda, -1.0 / p));
}

double GenExponent::rate() const {
    const double p = order_.value();
    return std::pow(scale_, -p) / p;
}

double GenExponent::pdf(double x) const {
    if (x < 0.0) {
        throw std::domain_error("GenExponent::pdf: argument must be nonnegative");
    }
    const double p = order_.value();
    return std::exp(-std::pow(x, p) / (p * std::pow(scale_, p)) - log_norm_);
}

double GenExponent::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    const double p = order_.value();
    return reg_lower_gamma(1.0 / p, std::pow(x, p) / (p * std::pow(scale_, p)));
}

double GenExponent::quantile(double q) const {
    if (!(q > 0.0 && q < 1.0)) {
        throw std::domain_error("quantile: probability must lie in (0,1)");
    }
    const double p = order_.value();
    const double g = inv_reg_lower_gamma(1.0 / p, q);
    return scale_ * std::pow(p * g, 1.0 / p);
}

double GenExponent::sample(RandomStream& rng) const {
    return sample_magnitude(order_.value(), scale_, rng);
}

double GenExponent::moment(int k) const { return abs_moment(order_.value(), scale_, k); }

// ---------------------------------------------------------------------------
// GammaDist

GammaDist::GammaDist(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw std::domain_error("GammaDist: shape and rate must be positive");
    }
    log_norm_ = alpha * std::log(beta) - log_gamma(alpha);
}

double GammaDist::pdf(double z) const {
    if (z < 0.0) return 0.0;
    if (z == 0.0) {
        if (alpha_ > 1.0) return 0.0;
        if (alpha_ == 1.0) return beta_;
        return std::numeric_limits<double>::infinity();
    }
    return std::exp(log_norm_ + (alpha_ - 1.0) * std::log(z) - beta_ * z);
}

double GammaDist::cdf(double z) const {
    if (z <= 0.0) return 0.0;
    return reg_lower_gamma(alpha_, beta_ * z);
}

double GammaDist::quantile(double q) const {
    if (!(q > 0.0 && q < 1.0)) {
        throw std::domain_error("quantile: probability must lie in (0,1)");
    }
    return inv_reg_lower_gamma(alpha_, q) / beta_;
}

double GammaDist::sample(RandomStream& rng) const { return rng.gamma(alpha_) / beta_; }

GammaDist gamma_from_order(const GenNormal& d, double beta) {
    return GammaDist(1.0 / d.order().value(), beta);
}

GammaDist gamma_from_order(const GenExponent& d, double beta) {
    return GammaDist(1.0 / d.order().value(), beta);
}

// ---------------------------------------------------------------------------
// FiniteCoordDensity

FiniteCoordDensity::FiniteCoordDensity(PNormOrder order, double scale, int n)
    : order_(order), scale_(scale), n_(n) {
    check_scale(scale, "FiniteCoordDensity");
    if (n < 1) throw std::domain_error("FiniteCoordDensity: n must be >= 1");
    const double p = order.value();
    const double nn = static_cast<double>(n);
    support_max_ = std::pow(nn, 1.0 / p) * scale;
    log_cn_ = std::log(p) + log_gamma(1.0 + nn / p) - log_gamma(1.0 / p) -
              log_gamma(1.0 + (nn - 1.0) / p);
    if (order.full_line()) log_cn_ -= std::log(2.0);
    log_mass_ = (nn / p) * std::log(nn * std::pow(scale, p));
}

double FiniteCoordDensity::pdf(double x) const {
    if (!order_.full_line() && x < 0.0) return 0.0;
    const double p = order_.value();
    const double mass = static_cast<double>(n_) * std::pow(scale_, p);
    const double rem = mass - pow_abs(x, p);
    if (rem < 0.0) return 0.0;
    if (n_ == 1) return std::exp(log_cn_ - log_mass_);
    if (rem == 0.0) return 0.0;
    return std::exp(log_cn_ - log_mass_ + ((n_ - 1.0) / p) * std::log(rem));
}

}  // namespace pball
