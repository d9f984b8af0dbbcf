#pragma once

#include "sigmacalc/parallel.hpp"
#include "sigmacalc/sigma.hpp"

#include <cstdint>

namespace sigmacalc {

enum class GammaRoute { sigma, recurrence, limit_product, malmsten };

std::string to_string(GammaRoute r);

struct MultipleGammaValue {
    int m = 1;
    double x = 1.0;
    double ln_value = 0.0;
    GammaRoute route = GammaRoute::sigma;
};

// ln G_m(x) = Sigma^m ln (x)
MultipleGammaValue ln_multiple_gamma(int m, double x, const SigmaControl& ctrl = {});

enum class BarnesVariant { outside_gamma, classic };

// ln of the n-th partial product for the Barnes G function.
double barnes_limit_product(double x, std::int64_t n, BarnesVariant variant,
                            Exec exec = Exec::parallel);

// Richardson extrapolation in 1/n over n_max, n_max/2, ..., n_max/2^(levels-1).
double barnes_limit_extrapolated(double x, std::int64_t n_max, BarnesVariant variant,
                                 int levels = 5);

double ln_K(double x, const SigmaControl& ctrl = {});

// Sigma^2 of -1 + (x+1)ln(x+1) - x ln x
double psi_minus2_shifted(double x, const SigmaControl& ctrl = {});

// D ln G_k(1), k <= kMaxLogDerivativeOrder; computed once per k.
inline constexpr int kMaxLogDerivativeOrder = 6;
double log_derivative_at_one(int k);

// D ln G_{m+1}(x)
double multiple_gamma_log_derivative(int m, double x);

struct NewtonSeriesValue {
    double value = 0.0;
    bool cancellation_warning = false;
};

inline constexpr int kNewtonSeriesSafeTerms = 30;

// Partial sum of sum_k C(x-1, k+m) Delta^k ln(1) with `terms` terms.
NewtonSeriesValue newton_series_ln_Gm(int m, double x, int terms);

} // namespace sigmacalc
