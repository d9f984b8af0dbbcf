#pragma once

#include "sigmacalc/difference.hpp"

#include <stdexcept>
#include <vector>

namespace sigmacalc {

struct QuadratureSpec {
    double small_t_threshold = 0.5;
    std::vector<double> split_points{1e-3, 1.0, 10.0};
    int nodes_per_panel = 64;
    double tail_cut = 45.0;
    double target_tol = 1e-10;
    int max_depth = 12;

    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool tolerance_met = true;
    int panels = 0;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, QuadratureResult best)
        : std::runtime_error(what), best_(best)
    {
    }
    const QuadratureResult& best() const { return best_; }

private:
    QuadratureResult best_;
};

struct GaussLegendreRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

// Cached; safe to call concurrently.
const GaussLegendreRule& gauss_legendre(int n);

// Panel-wise Gauss-Legendre with bisection refinement on [a, b].
QuadratureResult integrate(const RealFunction& f, double a, double b, double tol,
                           const QuadratureSpec& spec);

// Sigma^{m+1}_x (1 - e^{(1-x)t}) in closed form.
double malmsten_bracket(int m, double x, double t, double small_t_threshold = 0.5);

double malmsten_integrand(int m, double x, double t, const QuadratureSpec& spec = {});

QuadratureResult malmsten_ln_detailed(double x, const QuadratureSpec& spec = {});
QuadratureResult malmsten_ln_Gm_detailed(int m, double x, const QuadratureSpec& spec = {});

// Throw QuadratureError when the tolerance is not met.
double malmsten_ln(double x, const QuadratureSpec& spec = {});
double malmsten_ln_Gm(int m, double x, const QuadratureSpec& spec = {});

// int_1^x (x-t)^m / m! g(t) dt
double cauchy_repeated_integral(const RealFunction& g, int m, double x,
                                const QuadratureSpec& spec = {});

namespace detail {
double bracket_series(int m, double x, double t);
double bracket_direct(int m, double x, double t);
} // namespace detail

} // namespace sigmacalc
