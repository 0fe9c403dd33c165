#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fxcast::svg {

struct ChartOptions {
    int width = 800;
    int height = 480;
    int margin = 50;
    std::string title;
};

// Single polyline through `values` at unit x spacing.
std::string line_chart(const std::vector<double>& values, const ChartOptions& options);

// Two polylines on shared axes (actual in one color, predicted in another).
std::string overlay_chart(const std::vector<double>& actual,
                          const std::vector<double>& predicted, const ChartOptions& options);

// Bars over `bins` equal-width bins; bins = 0 picks ceil(sqrt(n)).
std::string histogram(const std::vector<double>& values, std::size_t bins,
                      const ChartOptions& options);

}  // namespace fxcast::svg
