// Acceptance suite: end-to-end checks of the library's headline claims, one
// printed pass/fail line per criterion.  Exits nonzero if any criterion
// fails.
//
// Comparisons of a sampled mean at the largest n against an analytic limit
// use a tolerance of four per-sample standard deviations at that n.  The
// finite-n discretization carries an O(1/n) offset from the limit value
// while the functionals concentrate (their spread also shrinks with n), so
// the per-sample deviation is the scale on which the limit statement is
// testable at desk scale; sqrt(variance/samples) alone would reject any
// finite n no matter how many samples are drawn.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "pball/ball_geometry.hpp"
#include "pball/concentration.hpp"
#include "pball/distributions.hpp"
#include "pball/meanvalue.hpp"
#include "pball/rng.hpp"
#include "pball/specfun.hpp"
#include "test_util.hpp"

using namespace pball;

namespace {

int failures = 0;

void report(int index, bool pass, const std::string& name, const std::string& detail) {
    std::printf("[%d] %s  %s (%s)\n", index, pass ? "PASS" : "FAIL", name.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

// 1. closed-form density identities at p = 2 and p = 1
void criterion_distribution_identities() {
    const GenNormal std_normal(PNormOrder::rational(2, 1), 1.0);
    double worst = 0.0;
    for (int i = 0; i <= 40; ++i) {
        const double x = -4.0 + 0.2 * i;
        const double reference = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
        worst = std::max(worst, std::fabs(std_normal.pdf(x) - reference));
    }
    const double lambda = 1.3;
    const GenExponent exponential = GenExponent::from_rate(PNormOrder::rational(1, 1), lambda);
    for (int i = 0; i <= 40; ++i) {
        const double x = 0.125 * i;
        const double reference = lambda * std::exp(-lambda * x);
        worst = std::max(worst, std::fabs(exponential.pdf(x) - reference));
    }
    report(1, worst <= 1e-12, "distribution identities (standard normal, exponential)",
           fmt("max |diff| = %.2e, tol 1e-12", worst));
}

// 2. unit mass of every pdf plus the normalization of the mean functionals
void criterion_normalization() {
    double worst_pdf = 0.0;
    for (auto [p0, q0] : {std::pair{2LL, 1LL}, {4LL, 3LL}, {4LL, 1LL}, {6LL, 1LL}}) {
        const GenNormal d(PNormOrder::rational(p0, q0), 1.0);
        const double mass = 2.0 * testutil::adaptive_simpson(
                                      [&d](double x) { return d.pdf(x); }, 0.0,
                                      d.quantile(1.0 - 1e-13), 1e-13);
        worst_pdf = std::max(worst_pdf, std::fabs(mass - 1.0));
    }
    for (auto [p0, q0] : {std::pair{1LL, 1LL}, {3LL, 2LL}, {5LL, 2LL}, {3LL, 1LL}}) {
        const GenExponent d(PNormOrder::rational(p0, q0), 1.0);
        const double mass = testutil::adaptive_simpson([&d](double x) { return d.pdf(x); }, 1e-300,
                                                       d.quantile(1.0 - 1e-13), 1e-13);
        worst_pdf = std::max(worst_pdf, std::fabs(mass - 1.0));
    }

    double worst_mean = 0.0;
    const FunctionalSpec one = FunctionalSpec::parse("1");
    for (auto [p0, q0] : {std::pair{2LL, 1LL}, {4LL, 3LL}, {4LL, 1LL}, {6LL, 1LL}}) {
        for (double scale : {0.5, 1.0, 2.0}) {
            const double m = mean_even(one, PNormOrder::rational(p0, q0), scale).value;
            worst_mean = std::max(worst_mean, std::fabs(m - 1.0));
        }
    }
    for (auto [p0, q0] : {std::pair{1LL, 1LL}, {3LL, 2LL}, {5LL, 2LL}, {3LL, 1LL}}) {
        for (double scale : {0.5, 1.0, 2.0}) {
            const double m = mean_odd(one, PNormOrder::rational(p0, q0), scale).value;
            worst_mean = std::max(worst_mean, std::fabs(m - 1.0));
        }
    }
    report(2, worst_pdf <= 1e-9 && worst_mean <= 1e-10, "normalization suite",
           fmt("max pdf mass error = %.2e (tol 1e-9), max mean error = %.2e (tol 1e-10)",
               worst_pdf, worst_mean));
}

// 3. finite-n marginals converge monotonically to their limit laws
void criterion_convergence() {
    bool monotone = true;
    double worst_final = 0.0;
    for (const long long p0 : {1LL, 2LL, 3LL, 4LL}) {
        const PNormOrder order = PNormOrder::rational(p0, 1);
        const bool full = order.full_line();
        auto limit_pdf = [&](double x) {
            return full ? GenNormal(order, 1.0).pdf(x) : GenExponent(order, 1.0).pdf(x);
        };
        double previous = std::numeric_limits<double>::infinity();
        for (const int n : {8, 32, 128, 512}) {
            const FiniteCoordDensity fc(order, 1.0, n);
            double sup = 0.0;
            for (double x = full ? -4.0 : 0.0; x <= 4.0 + 1e-9; x += 0.05) {
                sup = std::max(sup, std::fabs(fc.pdf(x) - limit_pdf(x)));
            }
            if (sup >= previous) monotone = false;
            previous = sup;
            if (n == 512) worst_final = std::max(worst_final, sup);
        }
    }
    report(3, monotone && worst_final <= 0.01, "finite-n marginal convergence",
           fmt("monotone across n, sup distance at n=512 = %.4f (tol 0.01)", worst_final));
}

// 4. volumes: closed forms plus a 10^7-point rejection oracle at n=4, p=3
void criterion_volumes() {
    const double pi_error =
        std::fabs(pball_volume(PBall(2, PNormOrder::rational(2, 1), 1.0, Region::Full)) - M_PI);
    const double cross_error =
        std::fabs(pball_volume(PBall(3, PNormOrder::rational(1, 1), 1.0, Region::Full)) -
                  4.0 / 3.0);

    RandomStream rng(1234);
    const long long samples = 10000000;
    long long inside = 0;
    for (long long i = 0; i < samples; ++i) {
        double acc = 0.0;
        for (int d = 0; d < 4; ++d) {
            const double x = rng.uniform(-1.0, 1.0);
            acc += std::fabs(x) * x * x;
        }
        if (acc <= 1.0) ++inside;
    }
    const double phat = static_cast<double>(inside) / static_cast<double>(samples);
    const double mc = 16.0 * phat;
    const double se = 16.0 * std::sqrt(phat * (1.0 - phat) / static_cast<double>(samples));
    const double exact = pball_volume(PBall(4, PNormOrder::rational(3, 1), 1.0, Region::Full));

    const bool pass = pi_error <= 1e-12 && cross_error <= 1e-12 && std::fabs(exact - mc) <= 3 * se;
    report(4, pass, "generalized Dirichlet volumes",
           fmt("pi/cross-polytope errors <= %.1e; |V - MC| = %.2e vs 3 SE = %.2e",
               std::max(pi_error, cross_error), std::fabs(exact - mc), 3 * se));
}

// 5. the power transform of order-p draws is Gamma(1/p, beta)
void criterion_gamma_transform() {
    const int draws = 100000;
    const double critical = testutil::ks_critical_1pct(draws);
    double worst = 0.0;

    struct Case {
        long long p0;
        double beta;
    };
    RandomStream rng(555);
    for (const Case c : {Case{2, 1.0}, Case{3, 2.0}, Case{1, 1.0}}) {
        const PNormOrder order = PNormOrder::rational(c.p0, 1);
        const double p = order.value();
        std::vector<double> z(draws);
        GammaDist target(1.0 / p, c.beta);
        if (order.even_rational()) {
            const GenNormal d(order, 1.0);
            target = gamma_from_order(d, c.beta);
            for (auto& v : z) {
                const double x = d.sample(rng);
                v = std::pow(std::fabs(x), p) / (p * c.beta);
            }
        } else {
            const GenExponent d(order, 1.0);
            target = gamma_from_order(d, c.beta);
            for (auto& v : z) {
                const double x = d.sample(rng);
                v = std::pow(x, p) / (p * c.beta);
            }
        }
        worst = std::max(worst, testutil::ks_distance(
                                    std::move(z), [&](double v) { return target.cdf(v); }));
    }
    report(5, worst < critical, "Gamma transform of order-p draws",
           fmt("max KS = %.5f vs 1%% critical %.5f over 1e5 draws", worst, critical));
}

// 6. the cube-domain intro functionals at desk scale
void criterion_cube_examples() {
    ExperimentConfig arc;
    arc.region.kind = ExperimentRegionKind::CubeDerivative;
    arc.functionals.push_back(FunctionalSpec::parse("sqrt(1+x1^2)"));
    arc.samples_per_n = 20000;
    arc.seed = 2024;
    const ExperimentReport arc_report = run_cube_experiment(arc);
    const double arc_exact = 0.5 * std::sqrt(2.0) + 0.5 * std::log(1.0 + std::sqrt(2.0));
    const ReportRow& arc_last = arc_report.rows.back();
    const double arc_diff = std::fabs(arc_last.mean - arc_exact);
    const double arc_tol = 4.0 * std::sqrt(arc_last.variance);

    ExperimentConfig area = arc;
    area.functionals.clear();
    area.functionals.push_back(FunctionalSpec::parse("x1"));
    area.functional_of = CubeFunctionalOf::Path;
    const ExperimentReport area_report = run_cube_experiment(area);
    const ReportRow& area_last = area_report.rows.back();
    const double area_diff = std::fabs(area_last.mean - 0.25);
    const double area_tol = 4.0 * std::sqrt(area_last.variance);

    report(6, arc_diff <= arc_tol && area_diff <= area_tol,
           "cube-domain examples: arc length and area at n=1024",
           fmt("arc |diff| = %.2e (tol %.2e); area |diff| = %.2e", arc_diff, arc_tol, area_diff));
}

struct BallCheck {
    std::string g;
    bool even;
    double slope;
    double diff;
    double tol;
    bool pass;
};

BallCheck run_ball_check(const char* g, bool even) {
    ExperimentConfig config;
    config.order = even ? PNormOrder::rational(2, 1) : PNormOrder::rational(1, 1);
    config.region.kind = even ? ExperimentRegionKind::Full : ExperimentRegionKind::FirstQuadrant;
    config.functionals.push_back(FunctionalSpec::parse(g));
    config.samples_per_n = 20000;
    config.seed = 77;
    const ExperimentReport report = run_ball_experiment(config);
    const ReportRow& last = report.rows.back();
    BallCheck check;
    check.g = g;
    check.even = even;
    check.slope = report.variance_slope;
    check.diff = std::fabs(last.mean - report.analytic_mean.value());
    check.tol = 4.0 * std::sqrt(last.variance);
    check.pass = check.diff <= check.tol && report.variance_slope <= -0.8;
    return check;
}

// 7. complete concentration on the ball functionals
void criterion_concentration() {
    bool pass = true;
    std::string detail;
    for (const auto& [g, even] : std::vector<std::pair<const char*, bool>>{
             {"x1^2", true}, {"cos(x1)", true}, {"x1", false}, {"x1^2", false}}) {
        const BallCheck check = run_ball_check(g, even);
        pass = pass && check.pass;
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s[p=%d]: slope %.2f, |diff| %.1e vs %.1e; ",
                      check.g.c_str(), even ? 2 : 1, check.slope, check.diff, check.tol);
        detail += buf;
    }
    report(7, pass, "complete concentration across the n-grid", detail);
}

// 8. nonlinear exchange formula at n=1024
void criterion_exchange() {
    ExperimentConfig config;
    config.order = PNormOrder::rational(2, 1);
    config.region.kind = ExperimentRegionKind::Full;
    config.functionals.push_back(FunctionalSpec::parse("x1^2"));
    config.functionals.push_back(FunctionalSpec::parse("cos(x1)"));
    config.h_source = "sin(y1+y2)";
    config.samples_per_n = 20000;
    config.seed = 88;
    const ExperimentReport report_data = run_ball_experiment(config);
    const ExchangeComparison& cmp = report_data.exchange.value();
    const double diff = std::fabs(cmp.empirical_mean - cmp.h_of_means.value());
    const double tol = 4.0 * cmp.empirical_sd;
    report(8, diff <= tol, "nonlinear exchange E sin(Y1+Y2) = sin(EY1+EY2)",
           fmt("|empirical - analytic| = %.2e vs tol %.2e", diff, tol));
}

// 9. repeated CLI runs produce byte-identical report files
void criterion_determinism() {
#ifdef PBALL_CLI_PATH
    const std::string base = "concentrate --g \"cos(x1)\" --p0 2 --q0 1 --R 1 --region full "
                             "--n-grid 8,16,32 --samples 500 --seed 9 --threads 2";
    const std::string cli = PBALL_CLI_PATH;
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const int rc1 = std::system((cli + " " + base + " --out /tmp/pball_acc_a >/dev/null").c_str());
    const int rc2 = std::system((cli + " " + base + " --out /tmp/pball_acc_b >/dev/null").c_str());
    const bool same_csv = slurp("/tmp/pball_acc_a.csv") == slurp("/tmp/pball_acc_b.csv");
    const bool same_json = slurp("/tmp/pball_acc_a.json") == slurp("/tmp/pball_acc_b.json");
    const bool pass = rc1 == 0 && rc2 == 0 && same_csv && same_json &&
                      !slurp("/tmp/pball_acc_a.csv").empty();
    report(9, pass, "determinism: identical seeds give byte-identical CSV/JSON",
           same_csv && same_json ? "files match byte for byte" : "files differ");
#else
    report(9, false, "determinism", "CLI path not configured");
#endif
}

// report-only: the t-dependent functional of the general form; the variance
// is surfaced without asserting a direction
void remark_t_dependent_report() {
    ExperimentConfig config;
    config.order = PNormOrder::rational(1, 1);
    config.region.kind = ExperimentRegionKind::FirstQuadrant;
    config.functionals.push_back(FunctionalSpec::parse("x1*t1"));
    config.n_grid = {16, 64, 256};
    config.samples_per_n = 4000;
    config.seed = 31;
    const ExperimentReport report_data = run_ball_experiment(config);
    std::printf("[i] REPORT  t-dependent functional g=x1*t1 (no pass/fail): analytic %.6f; ",
                report_data.analytic_mean.value_or(std::nan("")));
    for (const ReportRow& row : report_data.rows) {
        std::printf("var(n=%d)=%.3e ", row.n, row.variance);
    }
    std::printf("\n");
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion_distribution_identities();
    criterion_normalization();
    criterion_convergence();
    criterion_volumes();
    criterion_gamma_transform();
    criterion_cube_examples();
    criterion_concentration();
    criterion_exchange();
    criterion_determinism();
    remark_t_dependent_report();
    if (failures == 0) {
        std::printf("RESULT: all 9 criteria passed\n");
        return 0;
    }
    std::printf("RESULT: %d criteria FAILED\n", failures);
    return 1;
}
