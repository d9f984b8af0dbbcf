#include "sigmacalc/malmsten.hpp"

#include "sigmacalc/errors.hpp"
#include "sigmacalc/parallel.hpp"
#include "sigmacalc/special.hpp"
#include "sigmacalc/summation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sigmacalc {

namespace detail {

// -sum_{i>=1} C(x-1, m+1+i) u^i with u = e^{-t} - 1
double bracket_series(int m, double x, double t)
{
    const double u = std::expm1(-t);
    double c = binom_real(x - 1.0, m + 2);
    double upow = u;
    NeumaierSum<double> acc;
    for (int i = 1; i < 4000; ++i) {
        const double term = c * upow;
        acc += term;
        if (c == 0.0 || (i > 4 && std::abs(term) <= 1e-18 * std::abs(acc.value())))
            break;
        // C(x-1, k+1) = C(x-1, k) (x-1-k)/(k+1) with k = m+1+i
        const int k = m + 1 + i;
        c = c * (x - 1.0 - k) / (k + 1.0);
        upow *= u;
    }
    return -acc.value();
}

double bracket_direct(int m, double x, double t)
{
    const double u = std::expm1(-t);
    const double e = std::expm1((1.0 - x) * t);
    NeumaierSum<double> acc(binom_real(x - 1.0, m + 1));
    acc -= e / std::pow(u, m + 1);
    for (int j = 1; j <= m; ++j)
        acc += binom_real(x - 1.0, j) / std::pow(u, m + 1 - j);
    return acc.value();
}

} // namespace detail

double malmsten_bracket(int m, double x, double t, double small_t_threshold)
{
    if (m < 0)
        throw InvalidParameterError("m must be nonnegative");
    if (!(x > 0.0))
        throw DomainError("malmsten bracket needs x > 0");
    if (!(t > 0.0))
        throw DomainError("malmsten bracket needs t > 0");
    if (is_vanishing_lattice_point(m, x))
        return 0.0;
    const double u = std::abs(std::expm1(-t));
    if (t < small_t_threshold && (std::abs(x - 1.0) + m + 2.0) * u <= 0.5)
        return detail::bracket_series(m, x, t);
    return detail::bracket_direct(m, x, t);
}

double malmsten_integrand(int m, double x, double t, const QuadratureSpec& spec)
{
    return malmsten_bracket(m, x, t, spec.small_t_threshold) * std::exp(-t) / t;
}

namespace {

QuadratureResult integrate_half_line(const RealFunction& f, double x, const QuadratureSpec& spec)
{
    spec.validate();
    std::vector<double> edges{0.0};
    for (double s : spec.split_points)
        edges.push_back(s);
    const double t_end = spec.tail_cut / std::min(1.0, x);
    if (t_end > edges.back())
        edges.push_back(t_end);

    std::vector<std::pair<double, double>> panels;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        panels.emplace_back(edges[i], edges[i + 1]);
    const double tol = spec.target_tol / static_cast<double>(panels.size());

    auto parts = parallel_map<QuadratureResult>(
        panels, [&](const std::pair<double, double>& p) {
            return integrate(f, p.first, p.second, tol, spec);
        });

    QuadratureResult out;
    NeumaierSum<double> value, err;
    for (const auto& r : parts) {
        value += r.value;
        err += r.error_estimate;
        out.panels += r.panels;
        out.tolerance_met = out.tolerance_met && r.tolerance_met;
    }
    out.value = value.value();
    out.error_estimate = err.value();
    return out;
}

double checked(const QuadratureResult& r, const std::string& what)
{
    if (!r.tolerance_met)
        throw QuadratureError(what + ": panel refinement exhausted its budget (error estimate "
                                  + std::to_string(r.error_estimate) + ")",
                              r);
    return r.value;
}

} // namespace

QuadratureResult malmsten_ln_detailed(double x, const QuadratureSpec& spec)
{
    if (!(x > 0.0))
        throw DomainError("malmsten_ln needs x > 0");
    if (x == 1.0)
        return {};
    return integrate_half_line(
        [x](double t) { return -std::expm1((1.0 - x) * t) * std::exp(-t) / t; }, x, spec);
}

QuadratureResult malmsten_ln_Gm_detailed(int m, double x, const QuadratureSpec& spec)
{
    if (m < 0)
        throw InvalidParameterError("m must be nonnegative");
    if (!(x > 0.0))
        throw DomainError("malmsten_ln_Gm needs x > 0");
    if (is_vanishing_lattice_point(m, x))
        return {};
    return integrate_half_line([m, x, &spec](double t) { return malmsten_integrand(m, x, t, spec); },
                               x, spec);
}

double malmsten_ln(double x, const QuadratureSpec& spec)
{
    return checked(malmsten_ln_detailed(x, spec), "malmsten_ln");
}

double malmsten_ln_Gm(int m, double x, const QuadratureSpec& spec)
{
    return checked(malmsten_ln_Gm_detailed(m, x, spec), "malmsten_ln_Gm");
}

double cauchy_repeated_integral(const RealFunction& g, int m, double x, const QuadratureSpec& spec)
{
    if (m < 0)
        throw InvalidParameterError("m must be nonnegative");
    if (!(x > 0.0))
        throw DomainError("cauchy_repeated_integral needs x > 0");
    spec.validate();
    if (x == 1.0)
        return 0.0;
    double factorial = 1.0;
    for (int i = 2; i <= m; ++i)
        factorial *= i;
    auto f = [&g, m, x, factorial](double t) { return std::pow(x - t, m) / factorial * g(t); };
    return checked(integrate(f, 1.0, x, spec.target_tol, spec), "cauchy_repeated_integral");
}

} // namespace sigmacalc
