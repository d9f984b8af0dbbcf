#include "sigmacalc/sigma.hpp"

#include "sigmacalc/class_check.hpp"
#include "sigmacalc/errors.hpp"
#include "sigmacalc/parallel.hpp"
#include "sigmacalc/summation.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace sigmacalc {

namespace {

constexpr double kLowerTighten = 1e-4;

bool is_positive_integer(double x) { return x >= 1.0 && x == std::floor(x) && x < 9.0e15; }

void require_point(double x)
{
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError("principal sums are evaluated at x > 0");
}

int correction_terms(const CatalogFunction& g, int base, const SigmaControl& ctrl)
{
    return base + (g.convexity.max_order ? 0 : ctrl.p_boost);
}

Summand summand_of(const CatalogFunction& g)
{
    return {g.eval, [&g](int j, double x) { return eval_delta(g, j, x); }};
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

SigmaResult exact_lattice(double value, std::int64_t n, Route route)
{
    SigmaResult r;
    r.value = value;
    r.n_used = n;
    r.converged = true;
    r.route = route;
    r.termination = Termination::exact_lattice;
    return r;
}

// Sigma^i g(x) for i = 1..m, each at a tighter tolerance; index 0 unused.
std::vector<double> lower_iterates(const CatalogFunction& g, int m, double x, const SigmaControl& ctrl)
{
    std::vector<double> lower(m + 1, 0.0);
    if (m == 0)
        return lower;
    SigmaControl inner = ctrl;
    inner.tolerance = ctrl.tolerance * kLowerTighten;
    const Summand h = summand_of(g);
    const int terms = correction_terms(g, g.p_min, ctrl);
    for (int i = 1; i <= m; ++i) {
        std::vector<double> below(lower.begin(), lower.begin() + i);
        try {
            lower[i] = principal_sum_limit(h, i - 1, x, terms, below, inner).value;
        } catch (const NonConvergenceError& e) {
            lower[i] = e.best().value;
        }
    }
    return lower;
}

} // namespace

void SigmaControl::validate() const
{
    if (!(tolerance > 0.0))
        throw InvalidParameterError("tolerance must be positive");
    if (p_boost < 0)
        throw InvalidParameterError("p_boost must be nonnegative");
    if (n_start < 1)
        throw InvalidParameterError("n_start must be positive");
    if (growth < 2)
        throw InvalidParameterError("growth factor must be at least 2");
    if (n_max < n_start)
        throw InvalidParameterError("n_max must be at least n_start");
    if (stagnation_limit < 1)
        throw InvalidParameterError("stagnation_limit must be positive");
}

std::string to_string(Route r)
{
    switch (r) {
    case Route::limit: return "limit";
    case Route::iterated: return "iterated";
    case Route::cauchy: return "cauchy";
    case Route::closed_form: return "closed-form";
    }
    return "?";
}

std::string to_string(Termination t)
{
    switch (t) {
    case Termination::converged: return "converged";
    case Termination::exact_lattice: return "exact-lattice";
    case Termination::closed_form: return "closed-form";
    case Termination::n_max_reached: return "n-max-reached";
    case Termination::stagnated: return "stagnated";
    }
    return "?";
}

SigmaResult principal_sum_limit(const Summand& h, int m, double x, int terms,
                                const std::vector<double>& lower, const SigmaControl& ctrl)
{
    ctrl.validate();
    require_point(x);
    if (m < 0 || terms < 0)
        throw InvalidParameterError("principal_sum_limit needs m >= 0 and terms >= 0");
    if (static_cast<int>(lower.size()) < m + 1)
        throw InvalidParameterError("principal_sum_limit needs the lower iterates 1..m");

    // f_n together with a rounding-noise bound eps * sum |terms|
    struct Approx {
        double value;
        double noise;
    };
    auto term = [&](double nd, double kd) {
        const double hk = h.value(kd);
        if (m == 0)
            return hk - h.value(x + kd);
        const double c = binom_real(nd - kd - 1.0, m);
        return c * (hk - h.value(x + kd)) + (binom_real(x + nd - kd - 1.0, m) - c) * hk;
    };
    auto f = [&](std::int64_t n) {
        const double nd = static_cast<double>(n);
        NeumaierSum<double> acc(lattice_sum(1, n, [&](std::int64_t k) {
            return term(nd, static_cast<double>(k));
        }, Exec::parallel));
        double mag = lattice_sum(1, n, [&](std::int64_t k) {
            const double kd = static_cast<double>(k);
            return std::abs(binom_real(x + nd - kd - 1.0, m) * h.value(kd))
                   + std::abs(binom_real(nd - kd - 1.0, m) * h.value(x + kd));
        }, Exec::parallel);
        const double head = binom_real(nd - 1.0, m) * h.value(x);
        acc -= head;
        mag += std::abs(head);
        for (int j = 1; j <= m; ++j) {
            const double t = binom_real(nd, j) * lower[m - j + 1];
            acc -= t;
            mag += std::abs(t);
        }
        for (int j = 1; j <= terms; ++j) {
            const double t = binom_real(x, m + j) * h.delta(j - 1, nd);
            acc += t;
            mag += std::abs(t);
        }
        return Approx{acc.value(), 4.0 * std::numeric_limits<double>::epsilon() * mag};
    };

    SigmaResult best;
    best.remainder_estimate = std::numeric_limits<double>::infinity();
    std::int64_t n = std::max<std::int64_t>(ctrl.n_start, m + terms + 2);
    Approx first = f(n);
    double prev = first.value;
    double prev_noise = first.noise;
    std::vector<double> recent{prev};
    int stalled = 0;
    Termination stop = Termination::n_max_reached;
    while (n <= ctrl.n_max / ctrl.growth) {
        n *= ctrl.growth;
        const Approx a = f(n);
        const double cur = a.value;
        recent.push_back(cur);
        if (recent.size() > 3)
            recent.erase(recent.begin());
        double diff = std::abs(cur - prev);
        if (!std::isfinite(diff))
            diff = std::numeric_limits<double>::infinity();
        if (diff < best.remainder_estimate) {
            best.value = cur;
            best.n_used = n;
            best.remainder_estimate = diff;
            stalled = 0;
        } else if (++stalled >= ctrl.stagnation_limit) {
            stop = Termination::stagnated;
            break;
        }
        const bool at_floor = diff <= a.noise + prev_noise;
        if (diff <= ctrl.tolerance * std::max(1.0, std::abs(cur)) || at_floor) {
            SigmaResult r;
            r.value = cur;
            r.n_used = n;
            r.remainder_estimate = std::max(diff, a.noise);
            r.converged = true;
            r.termination = Termination::converged;
            r.recent = recent;
            if (diff > ctrl.tolerance * std::max(1.0, std::abs(cur)))
                r.warnings.push_back("stopped at the rounding floor of f_n (" + fmt(a.noise) + ")");
            return r;
        }
        prev = cur;
        prev_noise = a.noise;
    }
    best.recent = recent;
    best.converged = false;
    best.termination = stop;
    throw NonConvergenceError("principal sum did not converge at x = " + fmt(x) + " (best |f_2n - f_n| = "
                                  + fmt(best.remainder_estimate) + ", n = " + std::to_string(best.n_used)
                                  + ", " + to_string(stop) + ")",
                              best);
}

double sigma_integer(const CatalogFunction& g, int m, std::int64_t n)
{
    if (m < 0)
        throw InvalidParameterError("m must be nonnegative");
    if (n < 1)
        throw DomainError("sigma_integer needs n >= 1");
    if (n <= m + 1)
        return 0.0;
    const double nd = static_cast<double>(n);
    return lattice_sum(1, n, [&](std::int64_t k) {
        const double kd = static_cast<double>(k);
        return binom_real(nd - kd - 1.0, m) * g.eval(kd);
    }, Exec::parallel);
}

double sigma_integer_alt(const CatalogFunction& g, int m, std::int64_t q)
{
    if (m < 0 || q < 0)
        throw InvalidParameterError("sigma_integer_alt needs m, q >= 0");
    NeumaierSum<double> acc;
    for (std::int64_t k = 1; k <= q; ++k)
        acc += binom_real(static_cast<double>(m + q), static_cast<int>(m + k))
               * eval_delta(g, static_cast<int>(k - 1), 1.0);
    return acc.value();
}

void require_admissible(const CatalogFunction& g, int m)
{
    if (m < 0)
        throw InvalidParameterError("m must be nonnegative");
    if (!g.convexity.max_order)
        return;
    const int need = g.p_min + m;
    const int bound = *g.convexity.max_order;
    if (bound >= need)
        return;

    std::string citation;
    if (m >= 1 && g.has_known_sigma(0)) {
        const CatalogFunction s = sigma_of(g);
        const int q = g.p_min + 1;
        const KSign sign = check_K(s, q, s.k_window);
        citation = "check_K(" + s.id + ", q=" + std::to_string(q) + ") = " + to_string(sign)
                   + " on window [" + fmt(s.k_window.start) + ", " + fmt(s.k_window.last())
                   + "] step " + fmt(s.k_window.step);
    } else {
        const KSign sign = check_K(g, need, g.k_window);
        citation = "check_K(" + g.id + ", q=" + std::to_string(need) + ") = " + to_string(sign)
                   + " on window [" + fmt(g.k_window.start) + ", " + fmt(g.k_window.last())
                   + "] step " + fmt(g.k_window.step);
    }
    throw AdmissibilityError("Sigma^" + std::to_string(m + 1) + " " + g.id + " refused: needs K^"
                                 + std::to_string(need) + ", declared K-order bound "
                                 + std::to_string(bound) + "; " + citation,
                             citation);
}

SigmaResult sigma_eval(const CatalogFunction& g, int m, double x, const SigmaControl& ctrl)
{
    ctrl.validate();
    require_point(x);
    require_admissible(g, m);
    const Route route = m == 0 ? Route::limit : Route::iterated;
    if (is_positive_integer(x))
        return exact_lattice(sigma_integer(g, m, static_cast<std::int64_t>(x)),
                             static_cast<std::int64_t>(x), route);
    const auto lower = lower_iterates(g, m, x, ctrl);
    SigmaResult r;
    try {
        r = principal_sum_limit(summand_of(g), m, x, correction_terms(g, g.p_min, ctrl), lower, ctrl);
    } catch (const NonConvergenceError& e) {
        SigmaResult best = e.best();
        best.route = route;
        throw NonConvergenceError(g.label() + ": " + e.what(), best);
    }
    r.route = route;
    return r;
}

SigmaResult sigma_via_cauchy(const CatalogFunction& g, int m, double x, const SigmaControl& ctrl)
{
    ctrl.validate();
    require_point(x);
    require_admissible(g, m);
    if (is_positive_integer(x))
        return exact_lattice(sigma_integer(g, m, static_cast<std::int64_t>(x)),
                             static_cast<std::int64_t>(x), Route::cauchy);

    // h(t) = C(x-t-1, m) g(t); differences by the Leibniz rule
    CatalogFunction aux;
    aux.id = "cauchy_aux(" + g.label() + ")";
    aux.eval = [&g, m, x](double t) { return binom_real(x - t - 1.0, m) * g.eval(t); };
    aux.exact_delta = [&g, m, x](int j, double t) {
        NeumaierSum<double> acc;
        double c = 1.0;
        for (int i = 0; i <= std::min(j, m); ++i) {
            const double du = ((i % 2 == 0) ? 1.0 : -1.0) * binom_real(x - t - 1.0 - i, m - i);
            acc += c * du * eval_delta(g, j - i, t + i);
            c = c * (j - i) / (i + 1);
        }
        return acc.value();
    };
    const int p_aux = g.p_min + m;
    aux.p_min = p_aux;

    SigmaResult r;
    try {
        r = principal_sum_limit({aux.eval, aux.exact_delta}, 0, x, correction_terms(g, p_aux, ctrl),
                                {0.0}, ctrl);
    } catch (const NonConvergenceError& e) {
        SigmaResult best = e.best();
        best.route = Route::cauchy;
        throw NonConvergenceError(g.label() + " (cauchy): " + e.what(), best);
    }
    r.route = Route::cauchy;
    if (ctrl.check_auxiliary) {
        const auto p = check_D(aux, p_aux);
        if (!p || *p > p_aux)
            r.warnings.push_back("auxiliary function not confirmed in D^" + std::to_string(p_aux)
                                 + " (observed " + (p ? std::to_string(*p) : "none") + ")");
    }
    return r;
}

SigmaResult sigma_closed(const CatalogFunction& g, int m, double x)
{
    require_point(x);
    require_admissible(g, m);
    if (!g.has_known_sigma(m))
        throw InvalidParameterError(g.label() + " has no closed form for Sigma^"
                                    + std::to_string(m + 1));
    SigmaResult r;
    r.value = g.known_sigma(m, x);
    r.converged = true;
    r.route = Route::closed_form;
    r.termination = Termination::closed_form;
    return r;
}

TaylorSides verify_taylor_sigma(const CatalogFunction& g, int m, double a, double x,
                                const SigmaControl& ctrl)
{
    if (!(a > 0.0))
        throw DomainError("verify_taylor_sigma needs a > 0");
    if (!(x >= 0.0) || !std::isfinite(x))
        throw DomainError("verify_taylor_sigma needs x >= 0");
    require_admissible(g, m);

    TaylorSides out;
    out.lhs = sigma_eval(g, m, x + a, ctrl).value;

    NeumaierSum<double> rhs;
    for (int j = 0; j <= m; ++j)
        rhs += binom_real(x, j) * sigma_eval(g, m - j, a, ctrl).value;

    // [Sigma_t C(x-t, m) g(t+a-1)] at t = x+1
    Summand k;
    k.value = [&g, m, x, a](double t) { return binom_real(x - t, m) * g.eval(t + a - 1.0); };
    k.delta = [&g, m, x, a](int j, double t) {
        NeumaierSum<double> acc;
        double c = 1.0;
        for (int i = 0; i <= std::min(j, m); ++i) {
            const double du = ((i % 2 == 0) ? 1.0 : -1.0) * binom_real(x - t - i, m - i);
            acc += c * du * eval_delta(g, j - i, t + i + a - 1.0);
            c = c * (j - i) / (i + 1);
        }
        return acc.value();
    };
    const double point = x + 1.0;
    if (is_positive_integer(point)) {
        const auto n = static_cast<std::int64_t>(point);
        rhs += lattice_sum(1, n, [&](std::int64_t i) { return k.value(static_cast<double>(i)); },
                           Exec::parallel);
    } else {
        rhs += principal_sum_limit(k, 0, point, correction_terms(g, g.p_min + m, ctrl), {0.0}, ctrl)
                   .value;
    }
    out.rhs = rhs.value();
    return out;
}

double delta_sigma_roundtrip(const CatalogFunction& g, int m, double x, const SigmaControl& ctrl)
{
    require_point(x);
    NeumaierSum<double> acc;
    for (int k = 0; k <= m + 1; ++k) {
        const double sign = ((m + 1 - k) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * binom_real(m + 1, k) * sigma_eval(g, m, x + k, ctrl).value;
    }
    return acc.value();
}

} // namespace sigmacalc
