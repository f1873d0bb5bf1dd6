#pragma once

#include <string>

#include "pdtk/model.hpp"

namespace pdtk {

// Loads a degradation model from JSON. Two layouts are accepted:
//  - explicit: x_labels, prior, channel (array of per-source rows), with
//    optional x_values and y_labels;
//  - gaussian: x_values, sigma, grid {lo, hi, n_bins}, with an optional prior
//    that defaults to uniform.
// A missing file is an io failure; an empty or malformed file is an invalid
// argument naming the file.
DegradationModel load_model(const std::string& path);

}  // namespace pdtk
