#include "pball/meanvalue.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pball/quadrature.hpp"
#include "pball/rng.hpp"

namespace pball {

namespace {

constexpr int kPointsPerPanel = 8;

// Probability-transform axis on (0,1).  The quantile map has logarithmic
// endpoint singularities, so the panel grid is geometrically refined toward
// 0 and 1 (edges at 2^-k down to 2^-edge_levels) with uniform panels across
// the middle; an 8-point Gauss-Legendre rule sits on every panel.  Weights
// sum to 1 up to rounding.
QuadratureRule graded_axis_rule(int edge_levels, int interior_panels) {
    edge_levels = std::max(4, edge_levels);
    interior_panels = std::max(2, interior_panels);
    std::vector<double> edges;
    edges.push_back(0.0);
    for (int k = edge_levels; k >= 3; --k) edges.push_back(std::ldexp(1.0, -k));
    for (int j = 1; j < interior_panels; ++j) {
        edges.push_back(0.125 + 0.75 * j / interior_panels);
    }
    for (int k = 3; k <= edge_levels; ++k) edges.push_back(1.0 - std::ldexp(1.0, -k));
    edges.push_back(1.0);

    const QuadratureRule base = gauss_legendre(kPointsPerPanel);
    QuadratureRule rule;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double mid = 0.5 * (edges[p] + edges[p + 1]);
        const double half = 0.5 * (edges[p + 1] - edges[p]);
        for (int i = 0; i < kPointsPerPanel; ++i) {
            rule.nodes.push_back(mid + half * base.nodes[static_cast<std::size_t>(i)]);
            rule.weights.push_back(half * base.weights[static_cast<std::size_t>(i)]);
        }
    }
    return rule;
}

struct TransformedAxis {
    std::vector<double> values;
    std::vector<double> weights;
};

TransformedAxis transformed_axis(const std::function<double(double)>& quantile, int edge_levels,
                                 int interior_panels) {
    const QuadratureRule rule = graded_axis_rule(edge_levels, interior_panels);
    TransformedAxis axis;
    axis.values.resize(rule.nodes.size());
    axis.weights = rule.weights;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        axis.values[i] = quantile(rule.nodes[i]);
    }
    return axis;
}

// sum over the m-fold tensor grid of w_(i1)..w_(im) * g(x_(i1),..,x_(im))
double tensor_pass(const Expr& g, int arity, const TransformedAxis& axis, long long& evals) {
    std::vector<std::size_t> index(static_cast<std::size_t>(arity), 0);
    std::vector<double> xs(static_cast<std::size_t>(arity), 0.0);
    const std::size_t n = axis.values.size();
    CompensatedSum sum;
    for (;;) {
        double w = 1.0;
        for (int d = 0; d < arity; ++d) {
            const std::size_t i = index[static_cast<std::size_t>(d)];
            w *= axis.weights[i];
            xs[static_cast<std::size_t>(d)] = axis.values[i];
        }
        sum.add(w * eval(g, EvalEnv{.x = xs}));
        ++evals;
        int d = 0;
        for (; d < arity; ++d) {
            auto& i = index[static_cast<std::size_t>(d)];
            if (++i < n) break;
            i = 0;
        }
        if (d == arity) break;
    }
    return sum.value();
}

MeanValueResult iid_mean_quadrature(const Expr& g, int arity,
                                    const std::function<double(double)>& quantile,
                                    const MeanOptions& opts) {
    // keep the tensor cost bounded when three axes are in play
    int levels = opts.edge_levels;
    int interior = opts.interior_panels;
    if (arity >= 3) {
        levels = std::min(levels, 12);
        interior = std::min(interior, 4);
    }
    MeanValueResult result;
    result.method = MeanMethod::TensorQuadrature;
    const TransformedAxis coarse =
        transformed_axis(quantile, levels - 6, std::max(2, interior / 2));
    const TransformedAxis fine = transformed_axis(quantile, levels, interior);
    const double coarse_value = tensor_pass(g, arity, coarse, result.evaluations);
    const double fine_value = tensor_pass(g, arity, fine, result.evaluations);
    result.value = fine_value;
    result.error_estimate =
        std::max(std::fabs(fine_value - coarse_value), 4e-16 * std::fabs(fine_value));
    return result;
}

template <typename Sampler>
MeanValueResult importance_mc(const Expr& g, int arity, Sampler&& draw, const MeanOptions& opts) {
    MeanValueResult result;
    result.method = MeanMethod::ImportanceMC;
    RandomStream rng(opts.mc_seed);
    std::vector<double> xs(static_cast<std::size_t>(arity), 0.0);
    CompensatedSum sum, sumsq;
    for (long long s = 0; s < opts.mc_samples; ++s) {
        for (auto& x : xs) x = draw(rng);
        const double y = eval(g, EvalEnv{.x = xs});
        sum.add(y);
        sumsq.add(y * y);
    }
    const double n = static_cast<double>(opts.mc_samples);
    const double mean = sum.value() / n;
    double var = (sumsq.value() - n * mean * mean) / (n - 1.0);
    if (var < 0.0) var = 0.0;
    result.value = mean;
    result.error_estimate = 3.0 * std::sqrt(var / n);
    result.evaluations = opts.mc_samples;
    return result;
}

void require_plain(const FunctionalSpec& g, const char* who) {
    if (g.uses_t()) {
        throw std::invalid_argument(std::string(who) +
                                    ": integrand must be t-free (use mean_general)");
    }
    if (!g.full_intervals()) {
        throw std::invalid_argument(std::string(who) +
                                    ": intervals must all be [0,1] (use mean_general)");
    }
}

// t-dependent tensor quadrature: outer composite rules on the intervals,
// inner probability-transformed axes for the coordinates.
double general_pass(const Expr& g, int arity, std::span<const Interval> intervals,
                    const std::function<double(double)>& quantile, int outer_nodes,
                    int edge_levels, int interior_panels, long long& evals) {
    const std::size_t m = static_cast<std::size_t>(arity);
    std::vector<QuadratureRule> outer(m);
    for (std::size_t j = 0; j < m; ++j) {
        const int panels = std::max(1, outer_nodes / kPointsPerPanel);
        outer[j] = composite_gauss_legendre(kPointsPerPanel, panels, intervals[j].lo,
                                            intervals[j].hi);
    }
    const TransformedAxis inner = transformed_axis(quantile, edge_levels, interior_panels);

    std::vector<std::size_t> ti(m, 0);
    std::vector<double> ts(m, 0.0);
    CompensatedSum total;
    for (;;) {
        double tw = 1.0;
        for (std::size_t j = 0; j < m; ++j) {
            tw *= outer[j].weights[ti[j]];
            ts[j] = outer[j].nodes[ti[j]];
        }

        // inner expectation at this t-tuple
        std::vector<std::size_t> xi(m, 0);
        std::vector<double> xs(m, 0.0);
        CompensatedSum inner_sum;
        const std::size_t ni = inner.values.size();
        for (;;) {
            double w = 1.0;
            for (std::size_t j = 0; j < m; ++j) {
                w *= inner.weights[xi[j]];
                xs[j] = inner.values[xi[j]];
            }
            inner_sum.add(w * eval(g, EvalEnv{.x = xs, .t = ts}));
            ++evals;
            std::size_t d = 0;
            for (; d < m; ++d) {
                if (++xi[d] < ni) break;
                xi[d] = 0;
            }
            if (d == m) break;
        }
        total.add(tw * inner_sum.value());

        std::size_t d = 0;
        for (; d < m; ++d) {
            if (++ti[d] < outer[d].nodes.size()) break;
            ti[d] = 0;
        }
        if (d == m) break;
    }
    return total.value();
}

std::function<double(double)> coordinate_quantile(const PNormOrder& order, double scale,
                                                  Region region) {
    if (region == Region::Full) {
        if (!order.even_rational()) {
            throw std::invalid_argument(
                "full-line coordinate law requires an even-rational order");
        }
        GenNormal d(order, scale);
        return [d](double u) { return d.quantile(u); };
    }
    if (order.even_rational()) {
        throw std::invalid_argument(
            "first-quadrant coordinate law requires an odd-rational or general-real order");
    }
    GenExponent d(order, scale);
    return [d](double u) { return d.quantile(u); };
}

}  // namespace

MeanValueResult mean_even(const FunctionalSpec& g, const PNormOrder& order, double scale,
                          const MeanOptions& opts) {
    require_plain(g, "mean_even");
    if (!order.even_rational()) {
        throw std::invalid_argument("mean_even: order must be even-rational");
    }
    GenNormal d(order, scale);
    if (g.arity() <= opts.quadrature_max_arity) {
        return iid_mean_quadrature(g.integrand(), g.arity(),
                                   [&d](double u) { return d.quantile(u); }, opts);
    }
    return importance_mc(g.integrand(), g.arity(),
                         [&d](RandomStream& rng) { return d.sample(rng); }, opts);
}

MeanValueResult mean_odd(const FunctionalSpec& g, const PNormOrder& order, double scale,
                         const MeanOptions& opts) {
    require_plain(g, "mean_odd");
    if (order.even_rational()) {
        throw std::invalid_argument("mean_odd: order must be odd-rational or general-real");
    }
    GenExponent d(order, scale);
    if (g.arity() <= opts.quadrature_max_arity) {
        return iid_mean_quadrature(g.integrand(), g.arity(),
                                   [&d](double u) { return d.quantile(u); }, opts);
    }
    return importance_mc(g.integrand(), g.arity(),
                         [&d](RandomStream& rng) { return d.sample(rng); }, opts);
}

MeanValueResult mean_general(const FunctionalSpec& g, const PNormOrder& order, double scale,
                             Region region, const MeanOptions& opts) {
    if (!g.uses_t()) {
        // the t-integration factors out as the product of interval lengths
        double factor = 1.0;
        for (const Interval& iv : g.intervals()) factor *= iv.length();
        FunctionalSpec plain = FunctionalSpec::parse(g.source());
        MeanValueResult inner = region == Region::Full ? mean_even(plain, order, scale, opts)
                                                       : mean_odd(plain, order, scale, opts);
        inner.value *= factor;
        inner.error_estimate *= factor;
        return inner;
    }

    const auto quantile = coordinate_quantile(order, scale, region);
    // nested tensor quadrature is affordable for one or two axes
    if (g.arity() <= 2) {
        const int levels = g.arity() == 1 ? opts.edge_levels : std::min(opts.edge_levels, 20);
        const int interior = g.arity() == 1 ? opts.interior_panels
                                            : std::min(opts.interior_panels, 8);
        MeanValueResult result;
        result.method = MeanMethod::TensorQuadrature;
        const double coarse =
            general_pass(g.integrand(), g.arity(), g.intervals(), quantile,
                         opts.outer_nodes_per_axis / 2, levels - 6, std::max(2, interior / 2),
                         result.evaluations);
        const double fine = general_pass(g.integrand(), g.arity(), g.intervals(), quantile,
                                         opts.outer_nodes_per_axis, levels, interior,
                                         result.evaluations);
        result.value = fine;
        result.error_estimate = std::max(std::fabs(fine - coarse), 4e-16 * std::fabs(fine));
        return result;
    }

    // high-arity t-dependent functionals: Monte Carlo over both x and t
    MeanValueResult result;
    result.method = MeanMethod::ImportanceMC;
    RandomStream rng(opts.mc_seed);
    const std::size_t m = static_cast<std::size_t>(g.arity());
    double box = 1.0;
    for (const Interval& iv : g.intervals()) box *= iv.length();
    std::vector<double> xs(m, 0.0), ts(m, 0.0);
    CompensatedSum sum, sumsq;
    std::optional<GenNormal> even;
    std::optional<GenExponent> odd;
    if (region == Region::Full) {
        even.emplace(order, scale);
    } else {
        odd.emplace(order, scale);
    }
    for (long long s = 0; s < opts.mc_samples; ++s) {
        for (std::size_t j = 0; j < m; ++j) {
            xs[j] = even ? even->sample(rng) : odd->sample(rng);
            ts[j] = rng.uniform(g.intervals()[j].lo, g.intervals()[j].hi);
        }
        const double y = eval(g.integrand(), EvalEnv{.x = xs, .t = ts});
        sum.add(y);
        sumsq.add(y * y);
    }
    const double n = static_cast<double>(opts.mc_samples);
    const double mean = sum.value() / n;
    double var = (sumsq.value() - n * mean * mean) / (n - 1.0);
    if (var < 0.0) var = 0.0;
    result.value = box * mean;
    result.error_estimate = box * 3.0 * std::sqrt(var / n);
    result.evaluations = opts.mc_samples;
    return result;
}

double exchange(const Expr& h, std::span<const MeanValueResult> component_means) {
    const ExprInfo info = arity_check(h);
    if (info.arity > 0 && !info.is_h) {
        throw std::invalid_argument("exchange: h must be an expression over y-variables");
    }
    if (info.arity != static_cast<int>(component_means.size())) {
        throw std::invalid_argument("exchange: h has arity " + std::to_string(info.arity) +
                                    " but " + std::to_string(component_means.size()) +
                                    " component means were supplied");
    }
    std::vector<double> ys;
    ys.reserve(component_means.size());
    for (const MeanValueResult& r : component_means) ys.push_back(r.value);
    return eval(h, EvalEnv{.y = ys});
}

MeanValueResult cube_mean(const Expr& g, double a, double b, CubeMode /*mode*/,
                          const MeanOptions&) {
    if (!(a < b)) throw std::domain_error("cube_mean: need a < b");
    const ExprInfo info = arity_check(g);
    if (info.is_h || info.uses_t || info.arity > 1) {
        throw std::invalid_argument("cube_mean: integrand must be an expression in x1 alone");
    }
    const AdaptiveResult q = integrate_adaptive(
        [&g](double u) {
            const double xs[1] = {u};
            return eval(g, EvalEnv{.x = xs});
        },
        a, b, 1e-13, 1e-15);
    MeanValueResult result;
    result.method = MeanMethod::TensorQuadrature;
    result.value = q.value / (b - a);
    result.error_estimate = std::max(q.error / (b - a), 4e-16 * std::fabs(result.value));
    result.evaluations = q.evaluations;
    return result;
}

}  // namespace pball
