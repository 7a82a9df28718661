#pragma once

#include <vector>

#include "creyes/fovea.hpp"

namespace creyes {

// Mean-intensity features for the linear network: one value per grid cell per
// memory layer, layers in stored order (newest first), cells row-major.
// Cell boundaries split the frame as evenly as integer division allows.
std::vector<double> linear_features(const ObservationCanvas& canvas);

// Number of feature values linear_features produces for a given config.
std::size_t linear_feature_count(const FoveaConfig& cfg);

}  // namespace creyes
