#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pball/distributions.hpp"
#include "pball/rng.hpp"
#include "pball/specfun.hpp"
#include "test_util.hpp"

using namespace pball;

namespace {

// frozen high-precision constants, cross-checked by the quadrature oracle in
// the specfun suite
const double kGammaQuarter = 3.6256099082219083119;  // Gamma(1/4)
const double kGammaThird = 2.6789385347077476337;    // Gamma(1/3)

PNormOrder even(long long p0, long long q0 = 1) { return PNormOrder::rational(p0, q0); }

// full-line + half-line normalization by test-side quadrature
template <typename Dist>
double integrate_pdf(const Dist& d, bool full_line) {
    const double upper = d.quantile(1.0 - 1e-13);
    const double half = testutil::adaptive_simpson([&d](double x) { return d.pdf(x); },
                                                   full_line ? 0.0 : 1e-300, upper, 1e-13);
    return full_line ? 2.0 * half : half;
}

}  // namespace

TEST_CASE("order classification") {
    CHECK(PNormOrder::rational(2, 1).classification() == OrderClass::EvenRational);
    CHECK(PNormOrder::rational(4, 3).classification() == OrderClass::EvenRational);
    CHECK(PNormOrder::rational(3, 2).classification() == OrderClass::OddRational);
    CHECK(PNormOrder::rational(1, 1).classification() == OrderClass::OddRational);
    CHECK(PNormOrder::real(2.0).classification() == OrderClass::GeneralReal);

    // reduction to lowest terms decides parity
    const PNormOrder reduced = PNormOrder::rational(6, 4);
    CHECK(reduced.classification() == OrderClass::OddRational);
    CHECK(reduced.p0() == 3);
    CHECK(reduced.q0() == 2);
    CHECK(reduced.value() == doctest::Approx(1.5));

    CHECK_THROWS_AS(PNormOrder::rational(0, 1), std::domain_error);
    CHECK_THROWS_AS(PNormOrder::real(-1.0), std::domain_error);
}

TEST_CASE("family constructors enforce support parity") {
    CHECK_THROWS_AS(GenNormal(PNormOrder::rational(3, 1), 1.0), std::domain_error);
    CHECK_THROWS_AS(GenNormal(PNormOrder::real(2.0), 1.0), std::domain_error);
    CHECK_THROWS_AS(GenExponent(PNormOrder::rational(2, 1), 1.0), std::domain_error);
    CHECK_NOTHROW(GenExponent(PNormOrder::real(2.0), 1.0));
}

TEST_CASE("gn_pdf identities") {
    const GenNormal std_normal(even(2), 1.0);
    CHECK(std::fabs(std_normal.pdf(0.0) - 1.0 / std::sqrt(2.0 * M_PI)) < 1e-15);
    // oracle: independent normal density evaluation
    CHECK(std::fabs(std_normal.pdf(1.0) - std::exp(-0.5) / std::sqrt(2.0 * M_PI)) < 1e-15);

    const GenNormal fourth(even(4), 1.0);
    CHECK(std::fabs(fourth.pdf(0.0) - std::sqrt(2.0) / kGammaQuarter) < 1e-13);

    // symmetry in x
    for (double x = 0.1; x < 4.0; x += 0.3) {
        CHECK(fourth.pdf(x) == fourth.pdf(-x));
    }
}

TEST_CASE("ge_pdf identities") {
    const GenExponent exp2 = GenExponent::from_rate(PNormOrder::rational(1, 1), 2.0);
    CHECK(std::fabs(exp2.pdf(0.0) - 2.0) < 1e-14);

    const GenExponent exp1 = GenExponent::from_rate(PNormOrder::rational(1, 1), 1.0);
    CHECK(std::fabs(exp1.pdf(1.0) - std::exp(-1.0)) < 1e-15);
    CHECK(exp1.rate() == doctest::Approx(1.0));

    const GenExponent third = GenExponent::from_rate(PNormOrder::rational(3, 1), 1.0);
    CHECK(std::fabs(third.pdf(0.0) - 3.0 / kGammaThird) < 1e-13);
    // the exponent of the rate form: 3 lambda^(1/3)/Gamma(1/3) e^(-lambda x^3)
    const double lambda = 2.0;
    const GenExponent third2 = GenExponent::from_rate(PNormOrder::rational(3, 1), lambda);
    for (double x = 0.0; x < 2.0; x += 0.25) {
        const double expected =
            3.0 * std::pow(lambda, 1.0 / 3.0) / kGammaThird * std::exp(-lambda * x * x * x);
        CHECK(third2.pdf(x) == doctest::Approx(expected).epsilon(1e-12));
    }

    CHECK_THROWS_AS(exp1.pdf(-0.1), std::domain_error);
}

TEST_CASE("normalization across the order grid") {
    // even-rational orders route to the full line, the rest to the half line
    for (auto [p0, q0] : {std::pair{2LL, 1LL}, {4LL, 3LL}, {2LL, 1LL}, {4LL, 1LL}, {6LL, 1LL}}) {
        const GenNormal d(PNormOrder::rational(p0, q0), 1.3);
        CHECK(std::fabs(integrate_pdf(d, true) - 1.0) < 1e-9);
    }
    for (auto [p0, q0] : {std::pair{1LL, 1LL}, {3LL, 2LL}, {5LL, 2LL}, {3LL, 1LL}}) {
        const GenExponent d(PNormOrder::rational(p0, q0), 0.8);
        CHECK(std::fabs(integrate_pdf(d, false) - 1.0) < 1e-9);
    }
}

TEST_CASE("cdf closed forms and pdf consistency") {
    const GenNormal std_normal(even(2), 1.0);
    CHECK(std_normal.cdf(0.0) == 0.5);
    // against the erf-based normal cdf
    for (double x = -3.0; x <= 3.0; x += 0.5) {
        const double reference = 0.5 * (1.0 + std::erf(x / std::sqrt(2.0)));
        CHECK(std::fabs(std_normal.cdf(x) - reference) < 1e-12);
    }

    const GenExponent exp1 = GenExponent::from_rate(PNormOrder::rational(1, 1), 1.0);
    CHECK(std::fabs(exp1.cdf(std::log(2.0)) - 0.5) < 1e-13);

    // quadrature oracle for the 4-order cdf
    const GenNormal fourth(even(4), 1.0);
    const double oracle =
        0.5 + testutil::adaptive_simpson([&fourth](double x) { return fourth.pdf(x); }, 0.0, 1.0);
    CHECK(std::fabs(fourth.cdf(1.0) - oracle) < 1e-11);

    // numerical-derivative agreement between cdf and pdf
    for (const double x : {0.3, 0.9, 1.7}) {
        const double h = 1e-5;
        const double deriv = (fourth.cdf(x + h) - fourth.cdf(x - h)) / (2.0 * h);
        CHECK(std::fabs(deriv - fourth.pdf(x)) < 1e-6);
    }
}

TEST_CASE("quantiles") {
    const GenNormal fourth(even(4), 1.0);
    CHECK(fourth.quantile(0.5) == 0.0);

    const GenExponent exp1 = GenExponent::from_rate(PNormOrder::rational(1, 1), 1.0);
    CHECK(std::fabs(exp1.quantile(1.0 - std::exp(-1.0)) - 1.0) < 1e-11);

    const GenNormal std_normal(even(2), 1.0);
    CHECK(std::fabs(std_normal.quantile(0.975) - testutil::normal_quantile_oracle(0.975)) < 1e-9);
    CHECK(std_normal.quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-6));

    CHECK_THROWS_AS(std_normal.quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(std_normal.quantile(1.0), std::domain_error);
}

TEST_CASE("cdf/quantile roundtrip across a q-grid") {
    const GenNormal gn(even(4, 3), 0.9);
    const GenExponent ge(PNormOrder::rational(5, 2), 1.4);
    for (double q = 0.001; q < 0.9995; q += 0.007) {
        CHECK(std::fabs(gn.cdf(gn.quantile(q)) - q) < 1e-8);
        CHECK(std::fabs(ge.cdf(ge.quantile(q)) - q) < 1e-8);
    }
}

TEST_CASE("sampling: moments at fixed seeds") {
    const int n = 100000;

    RandomStream rng(41);
    const GenExponent exp1 = GenExponent::from_rate(PNormOrder::rational(1, 1), 1.0);
    std::vector<double> draws(n);
    for (auto& d : draws) d = exp1.sample(rng);
    CHECK(std::fabs(testutil::sample_stats(draws).mean - 1.0) < 0.02);

    const GenNormal std_normal(even(2), 1.0);
    for (auto& d : draws) d = std_normal.sample(rng);
    auto stats = testutil::sample_stats(draws);
    CHECK(std::fabs(stats.mean) < 0.02);
    CHECK(std::fabs(stats.variance - 1.0) < 0.02);

    // fourth moment of the 4-order law against the closed form
    const GenNormal fourth(even(4), 1.0);
    std::vector<double> fourths(n);
    for (int i = 0; i < n; ++i) {
        const double x = fourth.sample(rng);
        fourths[static_cast<std::size_t>(i)] = x * x * x * x;
    }
    const auto m4 = testutil::sample_stats(fourths);
    CHECK(std::fabs(m4.mean - fourth.moment(4)) < 4.0 * m4.std_error);
}

TEST_CASE("sampling: KS against the cdf") {
    const int n = 100000;
    const double critical = testutil::ks_critical_1pct(n);
    RandomStream rng(101);

    auto run_ks = [&](const auto& dist) {
        std::vector<double> draws(n);
        for (auto& d : draws) d = dist.sample(rng);
        return testutil::ks_distance(std::move(draws),
                                     [&dist](double x) { return dist.cdf(x); });
    };

    CHECK(run_ks(GenNormal(even(2), 1.0)) < critical);
    CHECK(run_ks(GenNormal(even(4), 1.0)) < critical);
    CHECK(run_ks(GenExponent::from_rate(PNormOrder::rational(1, 1), 1.0)) < critical);
    CHECK(run_ks(GenExponent(PNormOrder::rational(3, 1), 1.0)) < critical);
    CHECK(run_ks(GenExponent(PNormOrder::rational(3, 2), 1.0)) < critical);
}

TEST_CASE("moments: closed form against quadrature") {
    const GenNormal gn(even(4), 1.2);
    for (int k : {2, 4, 6}) {
        const double upper = gn.quantile(1.0 - 1e-14);
        const double oracle = 2.0 * testutil::adaptive_simpson(
                                        [&](double x) { return std::pow(x, k) * gn.pdf(x); }, 0.0,
                                        upper, 1e-14);
        CHECK(std::fabs(gn.moment(k) - oracle) < 1e-8 * std::fabs(oracle));
    }
    CHECK(gn.moment(1) == 0.0);
    CHECK(gn.moment(3) == 0.0);

    const GenExponent ge = GenExponent::from_rate(PNormOrder::rational(1, 1), 1.0);
    CHECK(std::fabs(ge.moment(2) - 2.0) < 1e-12);

    const GenNormal std_normal(even(2), 1.0);
    CHECK(std::fabs(std_normal.moment(2) - 1.0) < 1e-13);
}

TEST_CASE("moments match empirical estimates for k <= 4") {
    RandomStream rng(67);
    const GenExponent d(PNormOrder::rational(3, 1), 1.0);
    const int n = 100000;
    std::vector<double> powers(n);
    for (int k = 1; k <= 4; ++k) {
        RandomStream fresh(67 + static_cast<std::uint64_t>(k));
        for (auto& v : powers) v = std::pow(d.sample(fresh), k);
        const auto stats = testutil::sample_stats(powers);
        CHECK(std::fabs(stats.mean - d.moment(k)) < 4.0 * stats.std_error);
    }
}

TEST_CASE("gamma transform") {
    // alpha = 1/p exactly
    const GammaDist g1 = gamma_from_order(GenExponent::from_rate(PNormOrder::rational(1, 1), 1.0), 1.0);
    CHECK(g1.alpha() == 1.0);
    CHECK(g1.beta() == 1.0);
    for (double z = 0.1; z < 4.0; z += 0.3) {
        CHECK(std::fabs(g1.cdf(z) - (1.0 - std::exp(-z))) < 1e-13);
    }

    const GammaDist g3 = gamma_from_order(GenExponent(PNormOrder::rational(3, 1), 1.0), 2.0);
    CHECK(g3.alpha() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(g3.beta() == 2.0);

    // pushforward: Z = X^p/(p*beta) of order-p draws is Gamma(1/p, beta)
    const int n = 100000;
    const double critical = testutil::ks_critical_1pct(n);
    RandomStream rng(7);

    const GenNormal std_normal(even(2), 1.0);
    const GammaDist half = gamma_from_order(std_normal, 1.0);
    std::vector<double> z(n);
    for (auto& v : z) {
        const double x = std_normal.sample(rng);
        v = std::pow(std::fabs(x), 2.0) / 2.0;
    }
    CHECK(testutil::ks_distance(std::move(z), [&half](double v) { return half.cdf(v); }) <
          critical);
}

TEST_CASE("gamma distribution basics") {
    const GammaDist g(2.5, 1.5);
    CHECK(g.mean() == doctest::Approx(2.5 / 1.5));
    CHECK(g.variance() == doctest::Approx(2.5 / 2.25));
    // normalization + sample statistics
    const double total =
        testutil::adaptive_simpson([&g](double z) { return g.pdf(z); }, 1e-12, 40.0, 1e-13);
    CHECK(std::fabs(total - 1.0) < 1e-9);

    RandomStream rng(19);
    std::vector<double> draws(100000);
    for (auto& d : draws) d = g.sample(rng);
    const auto stats = testutil::sample_stats(draws);
    CHECK(std::fabs(stats.mean - g.mean()) < 4.0 * stats.std_error);
    CHECK(std::fabs(stats.variance - g.variance()) < 0.05);

    CHECK_THROWS_AS(GammaDist(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(GammaDist(1.0, -1.0), std::domain_error);
}

TEST_CASE("finite coordinate marginal: small n closed forms") {
    // n = 1 on the full line is the uniform density on [-R, R]
    const FiniteCoordDensity one(even(2), 1.0, 1);
    CHECK(one.pdf(0.3) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(one.pdf(0.99) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(one.pdf(1.2) == 0.0);

    // n = 3, p = 2: marginal of the uniform ball of radius sqrt(3);
    // oracle = exact slice area over ball volume, pi(rho^2 - x^2) / V3(rho)
    const FiniteCoordDensity three(even(2), 1.0, 3);
    const double rho = std::sqrt(3.0);
    CHECK(three.support_max() == doctest::Approx(rho));
    for (double x = 0.0; x < rho; x += 0.2) {
        const double volume = 4.0 / 3.0 * M_PI * rho * rho * rho;
        const double oracle = M_PI * (rho * rho - x * x) / volume;
        CHECK(three.pdf(x) == doctest::Approx(oracle).epsilon(1e-12));
    }

    // integrates to one
    const FiniteCoordDensity f(PNormOrder::rational(3, 1), 1.0, 7);
    const double total = testutil::adaptive_simpson([&f](double x) { return f.pdf(x); }, 0.0,
                                                    f.support_max(), 1e-12);
    CHECK(std::fabs(total - 1.0) < 1e-9);

    const FiniteCoordDensity g(even(2), 1.0, 7);
    const double total2 = testutil::adaptive_simpson([&g](double x) { return g.pdf(x); },
                                                     -g.support_max(), g.support_max(), 1e-12);
    CHECK(std::fabs(total2 - 1.0) < 1e-9);
}

TEST_CASE("finite coordinate marginal converges to the limit law") {
    for (const long long p0 : {1LL, 2LL, 3LL, 4LL}) {
        const PNormOrder order = PNormOrder::rational(p0, 1);
        const bool full = order.full_line();

        auto limit_pdf = [&](double x) {
            if (full) return GenNormal(order, 1.0).pdf(x);
            return GenExponent(order, 1.0).pdf(x);
        };

        double previous = std::numeric_limits<double>::infinity();
        for (const int n : {8, 32, 128, 512}) {
            const FiniteCoordDensity fc(order, 1.0, n);
            double sup = 0.0;
            const double lo = full ? -4.0 : 0.0;
            for (double x = lo; x <= 4.0 + 1e-9; x += 0.05) {
                sup = std::max(sup, std::fabs(fc.pdf(x) - limit_pdf(x)));
            }
            CHECK(sup < previous);
            previous = sup;
            if (n == 512) CHECK(sup <= 0.01);
        }
    }
}

TEST_CASE("finite marginal at large n matches gn_pdf pointwise") {
    const FiniteCoordDensity fc(even(2), 1.0, 4096);
    CHECK(std::fabs(fc.pdf(1.0) - std::exp(-0.5) / std::sqrt(2.0 * M_PI)) < 2e-4);
}
