#pragma once

#include <numbers>
#include <vector>

namespace sigmacalc {

struct EulerConstants {
    static constexpr double gamma = std::numbers::egamma_v<double>;
    static constexpr double psi1_at_1 = std::numbers::pi_v<double> * std::numbers::pi_v<double> / 6.0;
};

double digamma(double x);
double trigamma(double x);

// True when x is one of 1, ..., m+1, where every Sigma^{m+1} g vanishes.
bool is_vanishing_lattice_point(int m, double x);

// Closed forms of Sigma^{m+1} g.
double sigma_binom_closed(int k, int m, double x);
double sigma_newton_poly(const std::vector<double>& coeffs, int m, double x);
double sigma_reciprocal_closed(int m, double x);
double sigma_digamma_closed(int m, double x);
double sigma_inv_square_closed(int m, double x);
double sigma_neg_falling_closed(int n, int m, double x);

// d/dx C(x-1, m), written without the psi(x) - psi(x-m) pole.
double binom_shift_derivative(int m, double x);

} // namespace sigmacalc
