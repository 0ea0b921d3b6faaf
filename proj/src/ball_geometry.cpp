#include "pball/ball_geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pball/specfun.hpp"

namespace pball {

PBall::PBall(int n_, PNormOrder order_, double radius_, Region region_)
    : n(n_), order(order_), radius(radius_), region(region_) {
    if (n < 1) throw std::domain_error("PBall: dimension must be >= 1");
    if (!(order.value() >= 1.0)) throw std::domain_error("PBall: order must satisfy p >= 1");
    if (!(radius > 0.0)) throw std::domain_error("PBall: radius must be positive");
}

double dirichlet_integral(std::span<const double> exponents) {
    if (exponents.empty()) {
        throw std::domain_error("dirichlet_integral: exponent list must be nonempty");
    }
    double log_num = 0.0;
    double sum = 0.0;
    for (double e : exponents) {
        if (!(e > 0.0)) {
            throw std::domain_error("dirichlet_integral: exponents must be positive, got " +
                                    std::to_string(e));
        }
        log_num += log_gamma(e / 2.0);
        sum += e;
    }
    const double n = static_cast<double>(exponents.size());
    return std::exp(log_num - n * std::log(2.0) - log_gamma(1.0 + sum / 2.0));
}

double log_pball_volume(const PBall& ball) {
    const double p = ball.order.value();
    const double n = static_cast<double>(ball.n);
    double lv = n * std::log(ball.radius) + n * log_gamma(1.0 + 1.0 / p) - log_gamma(1.0 + n / p);
    if (ball.region == Region::Full) lv += n * std::log(2.0);
    return lv;
}

double pball_volume(const PBall& ball) { return std::exp(log_pball_volume(ball)); }

double shell_ratio(int n, double r, double R) {
    if (n < 1) throw std::domain_error("shell_ratio: dimension must be >= 1");
    if (!(r > 0.0) || !(R > 0.0)) throw std::domain_error("shell_ratio: radii must be positive");
    if (r > R) throw std::domain_error("shell_ratio: inner radius exceeds outer radius");
    return std::pow(r / R, static_cast<double>(n));
}

std::vector<double> sample_uniform_pball(const PBall& ball, RandomStream& rng) {
    const double p = ball.order.value();
    const double inv_p = 1.0 / p;
    std::vector<double> x(static_cast<std::size_t>(ball.n));

    // i.i.d. draws from the density proportional to exp(-|t|^p / p)
    double norm_p = 0.0;
    for (auto& xi : x) {
        const double g = rng.gamma(inv_p);
        double t = std::pow(p * g, inv_p);
        norm_p += p * g;  // |t|^p = p*g, no need to re-exponentiate
        if (ball.region == Region::Full && rng.coin()) t = -t;
        xi = t;
    }
    const double norm = std::pow(norm_p, inv_p);

    const double scale = ball.radius * std::pow(rng.uniform(), 1.0 / ball.n) / norm;
    for (auto& xi : x) xi *= scale;
    return x;
}

bool pball_contains(const PBall& ball, std::span<const double> x) {
    if (static_cast<int>(x.size()) != ball.n) return false;
    const double p = ball.order.value();
    double acc = 0.0;
    for (double xi : x) {
        if (ball.region == Region::FirstQuadrant && xi < 0.0) return false;
        acc += std::pow(std::fabs(xi), p);
    }
    return acc <= std::pow(ball.radius, p) * (1.0 + 1e-12);
}

}  // namespace pball
