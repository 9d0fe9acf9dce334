#pragma once

#include <span>
#include <vector>

namespace imputeval {

// Pearson correlation; NaN when either series is constant or too short.
double pearson(std::span<const double> x, std::span<const double> y);

// Spearman rank correlation (average ranks over ties).
double spearman(std::span<const double> x, std::span<const double> y);

// Average ranks (1-based) with ties sharing their mean rank.
std::vector<double> average_ranks(std::span<const double> v);

}  // namespace imputeval
