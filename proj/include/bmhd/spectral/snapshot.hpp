#pragma once

#include <string>
#include <vector>

#include "bmhd/spectral/field.hpp"

namespace bmhd {

/// Binary layout: "BMHD1", d (int32), N (int32), L (float64), then each field's
/// coefficients in row-major order as (re, im) float64 pairs, little-endian.
void save_snapshot(const std::string& path, const std::vector<SpectralField>& fields);
std::vector<SpectralField> load_snapshot(const std::string& path);

void save_state(const std::string& path, const StateVector& s);
StateVector load_state(const std::string& path);

}  // namespace bmhd
