#include "sigmacalc/errors.hpp"
#include "sigmacalc/malmsten.hpp"
#include "sigmacalc/summation.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace sigmacalc {

namespace {

GaussLegendreRule build_rule(int n)
{
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16)
                break;
        }
        // recompute the derivative at the converged node
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        rule.nodes[n / 2] = 0.0;
    return rule;
}

double apply_rule(const GaussLegendreRule& rule, const RealFunction& f, double a, double b)
{
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    NeumaierSum<double> acc;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * acc.value();
}

void refine(const GaussLegendreRule& rule, const RealFunction& f, double a, double b, double whole,
            double tol, int depth, int max_depth, QuadratureResult& out, NeumaierSum<double>& sum,
            NeumaierSum<double>& err)
{
    const double mid = 0.5 * (a + b);
    const double left = apply_rule(rule, f, a, mid);
    const double right = apply_rule(rule, f, mid, b);
    const double split = left + right;
    const double diff = std::abs(split - whole);
    if (!std::isfinite(split))
        throw DomainError("integrand is not finite on the panel");
    if (diff <= tol || depth >= max_depth) {
        if (diff > tol)
            out.tolerance_met = false;
        sum += split;
        err += diff;
        out.panels += 2;
        return;
    }
    refine(rule, f, a, mid, left, 0.5 * tol, depth + 1, max_depth, out, sum, err);
    refine(rule, f, mid, b, right, 0.5 * tol, depth + 1, max_depth, out, sum, err);
}

} // namespace

const GaussLegendreRule& gauss_legendre(int n)
{
    if (n < 1 || n > 1024)
        throw InvalidParameterError("Gauss-Legendre order must lie in [1, 1024]");
    static std::mutex mutex;
    static std::map<int, GaussLegendreRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

void QuadratureSpec::validate() const
{
    if (!(small_t_threshold > 0.0))
        throw InvalidParameterError("small_t_threshold must be positive");
    if (nodes_per_panel < 2)
        throw InvalidParameterError("nodes_per_panel must be at least 2");
    if (!(target_tol > 0.0))
        throw InvalidParameterError("target_tol must be positive");
    if (max_depth < 0)
        throw InvalidParameterError("max_depth must be nonnegative");
    for (std::size_t i = 0; i < split_points.size(); ++i) {
        if (!(split_points[i] > 0.0))
            throw InvalidParameterError("split points must be positive");
        if (i > 0 && !(split_points[i] > split_points[i - 1]))
            throw InvalidParameterError("split points must be strictly increasing");
    }
    if (!split_points.empty() && !(tail_cut > split_points.back()))
        throw InvalidParameterError("tail_cut must lie beyond the last split point");
}

QuadratureResult integrate(const RealFunction& f, double a, double b, double tol,
                           const QuadratureSpec& spec)
{
    QuadratureResult out;
    if (a == b)
        return out;
    const auto& rule = gauss_legendre(spec.nodes_per_panel);
    NeumaierSum<double> sum, err;
    const double whole = apply_rule(rule, f, a, b);
    refine(rule, f, a, b, whole, tol, 0, spec.max_depth, out, sum, err);
    out.value = sum.value();
    out.error_estimate = err.value();
    return out;
}

} // namespace sigmacalc
