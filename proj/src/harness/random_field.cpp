#include "bmhd/harness/random_field.hpp"

#include <cmath>

#include "bmhd/common/error.hpp"
#include "bmhd/common/rng.hpp"
#include "bmhd/spectral/operators.hpp"

namespace bmhd::harness {

SpectrumLaw parse_spectrum_law(const std::string& name) {
  if (name == "block") return SpectrumLaw::Block;
  if (name == "power-law" || name == "power_law") return SpectrumLaw::PowerLaw;
  if (name == "gaussian") return SpectrumLaw::Gaussian;
  fail(ErrorKind::Config, "unknown spectrum law '" + name + "' (block, power-law, gaussian)");
}

std::string to_string(SpectrumLaw law) {
  switch (law) {
    case SpectrumLaw::Block: return "block";
    case SpectrumLaw::PowerLaw: return "power-law";
    default: return "gaussian";
  }
}

void RandomFieldSpec::validate() const {
  require(std::isfinite(xi_max) && xi_max > 0.0, ErrorKind::Config, "random field: xi_max must be positive");
  require(std::isfinite(beta), ErrorKind::Config, "random field: beta must be finite");
  require(width > 0.0, ErrorKind::Config, "random field: gaussian width must be positive");
  require(std::isfinite(amplitude), ErrorKind::Config, "random field: amplitude must be finite");
  if (support_blocks)
    require(support_blocks->first <= support_blocks->second, ErrorKind::Config,
            "random field: support_blocks must be an increasing range");
}

namespace {

double envelope(const RandomFieldSpec& spec, double m) {
  if (m <= 0.0 || m > spec.xi_max) return 0.0;
  if (spec.support_blocks) {
    const double lo = 0.75 * std::ldexp(1.0, spec.support_blocks->first);
    const double hi = (8.0 / 3.0) * std::ldexp(1.0, spec.support_blocks->second);
    if (m < lo || m > hi) return 0.0;
  }
  switch (spec.law) {
    case SpectrumLaw::Block: return 1.0;
    case SpectrumLaw::PowerLaw: return std::pow(m, -spec.beta);
    default: {
      const double z = (m - spec.center) / spec.width;
      return std::exp(-0.5 * z * z);
    }
  }
}

std::uint64_t enc(int k) { return static_cast<std::uint64_t>(static_cast<std::int64_t>(k)); }

}  // namespace

SpectralField random_field(const Grid& g, const RandomFieldSpec& spec, std::uint64_t sample, std::uint64_t stream,
                           std::span<const Perturbation> path) {
  spec.validate();
  const Geometry& geo = geometry(g);
  SpectralField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::size_t j = geo.conj[i];
    if (j <= i || geo.nyquist[i]) continue;  // partner filled below; zero and Nyquist modes stay empty
    const double env = envelope(spec, geo.kmag[i]);
    if (env == 0.0) continue;
    const auto& k = geo.k[i];
    Rng r(Rng::hash({spec.seed, stream, sample, enc(k[0]), enc(k[1]), enc(k[2])}));
    cplx z;
    if (spec.law == SpectrumLaw::Block) {
      z = cplx(r.normal(), r.normal());
      for (const Perturbation& p : path) {
        Rng q(Rng::hash({spec.seed, stream, sample, p.key, enc(k[0]), enc(k[1]), enc(k[2])}));
        z += p.size * cplx(q.normal(), q.normal());
      }
    } else {
      double th = 2.0 * M_PI * r.uniform();
      for (const Perturbation& p : path) {
        Rng q(Rng::hash({spec.seed, stream, sample, p.key, enc(k[0]), enc(k[1]), enc(k[2])}));
        th += p.size * M_PI * q.normal();
      }
      z = cplx(std::cos(th), std::sin(th));
    }
    f.c[i] = env * z;
    f.c[j] = std::conj(f.c[i]);
  }
  if (spec.amplitude > 0.0) {
    const double m = lp_norm(inverse_transform(f), INFINITY);
    if (m > 0.0) f *= spec.amplitude / m;
  }
  return f;
}

std::size_t support_size(const Grid& g, const RandomFieldSpec& spec) {
  const Geometry& geo = geometry(g);
  std::size_t n = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!geo.nyquist[i] && envelope(spec, geo.kmag[i]) > 0.0) ++n;
  return n;
}

}  // namespace bmhd::harness
