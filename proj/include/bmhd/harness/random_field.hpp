#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "bmhd/spectral/field.hpp"

namespace bmhd::harness {

enum class SpectrumLaw { Block, PowerLaw, Gaussian };

SpectrumLaw parse_spectrum_law(const std::string& name);
std::string to_string(SpectrumLaw law);

/// Random real field description. Coefficients are keyed by the integer
/// wavevector, so the same (seed, stream, sample) gives the same field on any
/// grid that contains its modes; refining N at fixed L does not change it.
struct RandomFieldSpec {
  std::uint64_t seed = 1;
  SpectrumLaw law = SpectrumLaw::PowerLaw;
  double beta = 2.0;        // power law |c| ~ |xi|^-beta
  double center = 4.0;      // Gaussian bump in |xi|
  double width = 1.0;
  double xi_max = 7.0;      // ball support |xi| <= xi_max
  double amplitude = 1.0;   // sup norm after scaling; <= 0 keeps raw coefficients
  std::optional<std::pair<int, int>> support_blocks;  // restrict to 3/4 2^lo <= |xi| <= 8/3 2^hi

  void validate() const;
};

/// One accepted step of a local search: a fresh random direction keyed by
/// key, scaled by size. Block coefficients move additively, phases of the
/// other laws rotate by size * pi * N(0, 1), so the envelope is kept.
struct Perturbation {
  std::uint64_t key = 0;
  double size = 0.0;
};

/// Zero mean, no Nyquist content, Hermitian symmetric. Block law draws
/// complex normal coefficients; the other laws use the envelope with uniform
/// random phases. The path is applied before the amplitude scaling.
SpectralField random_field(const Grid& g, const RandomFieldSpec& spec, std::uint64_t sample,
                           std::uint64_t stream = 0, std::span<const Perturbation> path = {});

/// Number of modes a RandomFieldSpec populates on g.
std::size_t support_size(const Grid& g, const RandomFieldSpec& spec);

}  // namespace bmhd::harness
