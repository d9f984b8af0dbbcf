#pragma once

#include "sigmacalc/catalog.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sigmacalc {

struct SigmaControl {
    double tolerance = 1e-10; // on |f_{2n} - f_n|, relative once |value| > 1
    int p_boost = 8;          // extra correction terms, K^infinity functions only
    std::int64_t n_start = 16;
    int growth = 2;
    std::int64_t n_max = std::int64_t{1} << 22;
    int stagnation_limit = 4; // doublings without improvement before giving up
    bool check_auxiliary = true;

    void validate() const;
};

enum class Route { limit, iterated, cauchy, closed_form };

enum class Termination { converged, exact_lattice, closed_form, n_max_reached, stagnated };

std::string to_string(Route r);
std::string to_string(Termination t);

struct SigmaResult {
    double value = 0.0;
    std::int64_t n_used = 0;
    double remainder_estimate = 0.0;
    bool converged = false;
    Route route = Route::limit;
    Termination termination = Termination::converged;
    std::vector<double> recent; // last f_n values, oldest first
    std::vector<std::string> warnings;
};

class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, SigmaResult best)
        : std::runtime_error(what), best_(std::move(best))
    {
    }
    const SigmaResult& best() const { return best_; }

private:
    SigmaResult best_;
};

class AdmissibilityError : public std::runtime_error {
public:
    AdmissibilityError(const std::string& what, std::string citation)
        : std::runtime_error(what), citation_(std::move(citation))
    {
    }
    const std::string& citation() const { return citation_; }

private:
    std::string citation_;
};

// A summand for the generic principal-sum limit.
struct Summand {
    std::function<double(double)> value;
    std::function<double(int, double)> delta;
};

// Sigma^{m+1} g(x) from f_n with `terms` Newton correction terms; lower[i] = Sigma^i g(x).
SigmaResult principal_sum_limit(const Summand& h, int m, double x, int terms,
                                const std::vector<double>& lower, const SigmaControl& ctrl);

double sigma_integer(const CatalogFunction& g, int m, std::int64_t n);
double sigma_integer_alt(const CatalogFunction& g, int m, std::int64_t q);

// Throws AdmissibilityError when the declared class of g rules out Sigma^{m+1} g.
void require_admissible(const CatalogFunction& g, int m);

SigmaResult sigma_eval(const CatalogFunction& g, int m, double x, const SigmaControl& ctrl = {});
SigmaResult sigma_via_cauchy(const CatalogFunction& g, int m, double x,
                             const SigmaControl& ctrl = {});
SigmaResult sigma_closed(const CatalogFunction& g, int m, double x);

struct TaylorSides {
    double lhs = 0.0;
    double rhs = 0.0;
};

TaylorSides verify_taylor_sigma(const CatalogFunction& g, int m, double a, double x,
                                const SigmaControl& ctrl = {});

double delta_sigma_roundtrip(const CatalogFunction& g, int m, double x,
                             const SigmaControl& ctrl = {});

} // namespace sigmacalc
