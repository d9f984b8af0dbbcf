#pragma once

#include "sigmacalc/difference.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sigmacalc {

enum class ConvexityTag { all_orders_alternating, all_orders_convex, order_bounded };

// Expected tail sign of Delta^{q+1} g.
enum class KExpectation { positive, negative, mixed, any };

struct ConvexityProfile {
    ConvexityTag tag = ConvexityTag::all_orders_alternating;
    // Highest q with g in K^q; empty means every order.
    std::optional<int> max_order;
    std::function<KExpectation(int q)> expected;

    std::string describe() const;
};

struct CatalogParams {
    std::optional<int> k;
    std::optional<int> n;
    std::optional<double> t;
    std::vector<double> coeffs;

    // "k=2", "t=0.5", "coeffs=0,1,2"; entries separated by ';'.
    static CatalogParams parse(std::string_view text);
    std::string to_string() const;
};

struct CatalogFunction {
    std::string id;
    CatalogParams params;
    RealFunction eval;
    std::function<double(int j, double x)> exact_delta; // may be empty
    int p_min = 0;
    ConvexityProfile convexity;
    std::function<double(int m, double x)> known_sigma; // may be empty
    std::optional<int> known_sigma_max_m;               // empty: any m
    std::optional<ConvexityProfile> sigma_convexity;    // overrides the derived profile of Sigma g
    GridWindow k_window{10.0, 200, 1.0};

    std::string label() const;
    bool has_known_sigma(int m) const
    {
        return known_sigma && (!known_sigma_max_m || m <= *known_sigma_max_m);
    }
};

struct CatalogEntryInfo {
    std::string id;
    std::vector<std::string> param_schema;
    std::string p_min_rule;
    int p_min_default;
    std::string convexity;
    std::string description;
};

CatalogFunction catalog_get(std::string_view id, const CatalogParams& params = {});
std::vector<CatalogEntryInfo> catalog_list();

// Delta^j g(x), exact formula when the entry has one.
double eval_delta(const CatalogFunction& g, int j, double x);

// Sigma g as a catalog function (needs known_sigma for m = 0).
CatalogFunction sigma_of(const CatalogFunction& g);

// The identity map as a Newton polynomial.
CatalogFunction identity_function();

std::string to_string(KExpectation e);

} // namespace sigmacalc
