#include "pball/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace pball {

namespace {

// Kronrod-15 abscissae on [0,1] side of the symmetric rule; odd indices are
// the embedded Gauss-7 points.
const double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
const double kGK15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
const double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct PanelEstimate {
    double value;
    double error;
};

PanelEstimate gk15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f_center = f(center);
    double kronrod = kGK15Weights[7] * f_center;
    double gauss = kG7Weights[3] * f_center;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kGK15Nodes[i];
        const double fsum = f(center - dx) + f(center + dx);
        kronrod += kGK15Weights[i] * fsum;
        if (i % 2 == 1) gauss += kG7Weights[i / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;

    const double diff = std::fabs(kronrod - gauss);
    // QUADPACK-style sharpened estimate
    const double err = diff > 0.0 ? std::pow(200.0 * diff, 1.5) : 0.0;
    return {kronrod, std::min(err, diff * 200.0)};
}

void legendre_eval(int k, double x, double& value, double& deriv) {
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= k; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    value = p1;
    deriv = k * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

QuadratureRule gauss_legendre(int k) {
    if (k < 1) throw std::domain_error("gauss_legendre: need at least one point");
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(k));
    rule.weights.resize(static_cast<std::size_t>(k));
    if (k == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
        return rule;
    }
    const int half = (k + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (k + 0.5));
        double value = 0.0, deriv = 1.0;
        for (int it = 0; it < 100; ++it) {
            legendre_eval(k, z, value, deriv);
            const double step = value / deriv;
            z -= step;
            if (std::fabs(step) < 1e-15) break;
        }
        legendre_eval(k, z, value, deriv);
        rule.nodes[static_cast<std::size_t>(i)] = -z;
        rule.nodes[static_cast<std::size_t>(k - 1 - i)] = z;
        const double w = 2.0 / ((1.0 - z * z) * deriv * deriv);
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(k - 1 - i)] = w;
    }
    return rule;
}

QuadratureRule composite_gauss_legendre(int points_per_panel, int panels, double a, double b) {
    if (panels < 1) throw std::domain_error("composite_gauss_legendre: need at least one panel");
    const QuadratureRule base = gauss_legendre(points_per_panel);
    QuadratureRule rule;
    rule.nodes.reserve(static_cast<std::size_t>(points_per_panel) * panels);
    rule.weights.reserve(static_cast<std::size_t>(points_per_panel) * panels);
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        const double mid = lo + 0.5 * width;
        for (int i = 0; i < points_per_panel; ++i) {
            rule.nodes.push_back(mid + 0.5 * width * base.nodes[static_cast<std::size_t>(i)]);
            rule.weights.push_back(0.5 * width * base.weights[static_cast<std::size_t>(i)]);
        }
    }
    return rule;
}

namespace {

void integrate_recursive(const std::function<double(double)>& f, double a, double b,
                         double rel_tol, double abs_tol, int depth, int max_depth,
                         CompensatedSum& value, CompensatedSum& error, long long& evals,
                         bool& converged) {
    const PanelEstimate est = gk15(f, a, b);
    evals += 15;
    const double tol = std::max(abs_tol, rel_tol * std::fabs(est.value));
    if (est.error <= tol || depth >= max_depth) {
        if (est.error > tol) converged = false;
        value.add(est.value);
        error.add(est.error);
        return;
    }
    const double mid = 0.5 * (a + b);
    integrate_recursive(f, a, mid, rel_tol, abs_tol, depth + 1, max_depth, value, error, evals,
                        converged);
    integrate_recursive(f, mid, b, rel_tol, abs_tol, depth + 1, max_depth, value, error, evals,
                        converged);
}

}  // namespace

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol, double abs_tol, int max_depth) {
    AdaptiveResult result;
    if (a == b) return result;
    CompensatedSum value, error;
    integrate_recursive(f, a, b, rel_tol, abs_tol, 0, max_depth, value, error,
                        result.evaluations, result.converged);
    result.value = value.value();
    result.error = error.value();
    return result;
}

}  // namespace pball
