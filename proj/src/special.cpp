#include "sigmacalc/special.hpp"

#include "sigmacalc/difference.hpp"
#include "sigmacalc/errors.hpp"
#include "sigmacalc/summation.hpp"

#include <cmath>

namespace sigmacalc {

namespace {

constexpr double kAsymptoticStart = 10.0;

void require_positive(double x, const char* name)
{
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError(std::string(name) + " requires x > 0");
}

} // namespace

double digamma(double x)
{
    require_positive(x, "digamma");
    double shift = 0.0;
    while (x < kAsymptoticStart) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double r = 1.0 / (x * x);
    // Bernoulli tail: B_{2k} / (2k x^{2k})
    const double tail =
        r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r / 12.0))))));
    return shift + std::log(x) - 0.5 / x - tail;
}

double trigamma(double x)
{
    require_positive(x, "trigamma");
    double shift = 0.0;
    while (x < kAsymptoticStart) {
        shift += 1.0 / (x * x);
        x += 1.0;
    }
    const double r = 1.0 / (x * x);
    const double tail =
        r * (1.0 / 6 - r * (1.0 / 30 - r * (1.0 / 42 - r * (1.0 / 30 - r * (5.0 / 66 - r * (691.0 / 2730 - r * 7.0 / 6))))));
    return shift + 1.0 / x + 0.5 * r + tail / x;
}

bool is_vanishing_lattice_point(int m, double x)
{
    return x == std::floor(x) && x >= 1.0 && x <= m + 1.0;
}

double sigma_binom_closed(int k, int m, double x)
{
    if (k < 0 || m < 0)
        throw InvalidParameterError("sigma_binom_closed needs k, m >= 0");
    return k == 0 ? binom_real(x - 1.0, m + 1) : binom_real(x, k + m + 1);
}

double sigma_newton_poly(const std::vector<double>& coeffs, int m, double x)
{
    if (m < 0)
        throw InvalidParameterError("m must be nonnegative");
    NeumaierSum<double> acc;
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        acc += coeffs[k] * sigma_binom_closed(static_cast<int>(k), m, x);
    return acc.value();
}

double sigma_reciprocal_closed(int m, double x)
{
    require_positive(x, "sigma_reciprocal_closed");
    if (is_vanishing_lattice_point(m, x))
        return 0.0;
    return binom_real(x - 1.0, m) * (digamma(x) - digamma(m + 1.0));
}

double sigma_digamma_closed(int m, double x)
{
    require_positive(x, "sigma_digamma_closed");
    if (is_vanishing_lattice_point(m, x))
        return 0.0;
    return binom_real(x - 1.0, m + 1) * (digamma(x) - digamma(m + 2.0) + digamma(1.0));
}

double binom_shift_derivative(int m, double x)
{
    // C(x-1,m) = prod_{l=1}^m (x-l) / m!, differentiate the product term by term.
    double factorial = 1.0;
    for (int l = 2; l <= m; ++l)
        factorial *= l;
    NeumaierSum<double> acc;
    for (int i = 1; i <= m; ++i) {
        double prod = 1.0;
        for (int l = 1; l <= m; ++l)
            if (l != i)
                prod *= (x - l);
        acc += prod;
    }
    return acc.value() / factorial;
}

double sigma_inv_square_closed(int m, double x)
{
    require_positive(x, "sigma_inv_square_closed");
    if (is_vanishing_lattice_point(m, x))
        return 0.0;
    const double b = binom_real(x - 1.0, m);
    NeumaierSum<double> acc;
    acc -= binom_shift_derivative(m, x) * (digamma(x) - digamma(m + 1.0));
    acc -= b * (trigamma(x) - EulerConstants::psi1_at_1);
    for (int j = 1; j <= m; ++j) {
        const double sign = (j % 2 == 1) ? 1.0 : -1.0;
        acc += binom_real(x - 1.0, m - j) * (sign / j) * (digamma(1.0) - digamma(j + 1.0));
    }
    return acc.value();
}

double sigma_neg_falling_closed(int n, int m, double x)
{
    require_positive(x, "sigma_neg_falling_closed");
    if (n < 0 || m < 0)
        throw InvalidParameterError("sigma_neg_falling_closed needs n, m >= 0");
    if (is_vanishing_lattice_point(m, x))
        return 0.0;
    NeumaierSum<double> acc;
    for (int k = 0; k <= n; ++k) {
        const double c = binom_real(n, k) * ((k % 2 == 0) ? 1.0 : -1.0);
        if (m == 0) {
            acc += c * (digamma(x + k) - digamma(k + 1.0));
            continue;
        }
        NeumaierSum<double> term;
        term += binom_real(x + k - 1.0, m) * (digamma(x + k) - digamma(m + 1.0));
        for (int j = 0; j <= m; ++j)
            term -= binom_real(x - 1.0, j) * binom_real(k, m - j)
                    * (digamma(k + 1.0) - digamma(m + 1.0 - j));
        acc += c * term.value();
    }
    return acc.value();
}

} // namespace sigmacalc
