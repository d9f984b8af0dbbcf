#pragma once

#include "sigmacalc/catalog.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace sigmacalc {

enum class KSign { eventually_positive, eventually_negative, mixed, inconclusive };

std::string to_string(KSign s);

struct ClassReport {
    std::string subject;
    int p_max = 0;
    std::optional<int> p_D_estimate; // empty: none <= p_max
    GridWindow d_window;
    GridWindow window;               // K samples
    std::map<int, KSign> K_evidence; // q -> tail sign of Delta^{q+1}
};

inline const GridWindow kDefaultDWindow{10.0, 99991, 1.0};

// Smallest p <= p_max whose p-th differences decay over the last decade of window.
std::optional<int> check_D(const CatalogFunction& g, int p_max,
                           const GridWindow& window = kDefaultDWindow);

// Tail sign of Delta_h^{q+1} g; strict mode looks only at the final 50 samples.
KSign check_K(const CatalogFunction& g, int q, const GridWindow& window, bool strict = false);

ClassReport class_report(const CatalogFunction& g, int p_max = 8, int q_max = 6,
                         const GridWindow& d_window = kDefaultDWindow);

// Differences between the declared metadata of g and the evidence; empty when consistent.
std::vector<std::string> metadata_mismatches(const ClassReport& report, const CatalogFunction& g);

nlohmann::json to_json(const ClassReport& report);

} // namespace sigmacalc
