#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bmhd/spectral/field.hpp"

namespace bmhd {

// ---- transforms ----------------------------------------------------------

SpectralField transform(const PhysicalField& f);
/// Rejects spectra whose inverse has an imaginary part above 1e-9 relative.
PhysicalField inverse_transform(const SpectralField& f);

/// Batched transforms; fields are paired into single complex FFTs.
std::vector<SpectralField> transform_many(const std::vector<const PhysicalField*>& in);
std::vector<PhysicalField> inverse_transform_many(const std::vector<const SpectralField*>& in);

PhysicalField physical(const Grid& g, const std::function<double(const Vec3&)>& f);

// ---- multipliers ---------------------------------------------------------

using Symbol = std::function<cplx(const Vec3&)>;

/// Multiplies each coefficient by symbol(xi). Nyquist components are averaged
/// over their two aliases so odd symbols keep Hermitian symmetry. A symbol
/// that is not finite at xi = 0 zeroes the mean; anywhere else it is an error.
SpectralField fourier_multiplier(const SpectralField& f, const Symbol& symbol);

/// Real radial multiplier m(|xi|) applied through the SIMD scaling kernel.
SpectralField radial_multiplier(const SpectralField& f, const std::function<double(double)>& m);

SpectralField derivative(const SpectralField& f, int axis);
VectorField gradient(const SpectralField& f);
SpectralField divergence(const VectorField& v);
SpectralField laplacian(const SpectralField& f);
/// (-Delta)^{-1}, mean set to zero.
SpectralField inverse_neg_laplacian(const SpectralField& f);
/// Lambda^s = |D|^s; for s < 0 the mean is set to zero.
SpectralField lambda_power(const SpectralField& f, double s);

/// P = Id + grad (-Delta)^{-1} div.
VectorField leray_project(const VectorField& v);

/// Zeroes modes with any |k_j| >= fraction * N/2 (2/3 rule: fraction = 2/3).
void dealias(SpectralField& f, double fraction);
bool is_dealiased(const SpectralField& f, double fraction);

/// Same coefficients on an N' grid of the same box: zero padding when N' > N,
/// truncation otherwise. Nyquist content of the source is rejected.
SpectralField resample(const SpectralField& f, int n);

void hermitian_symmetrize(SpectralField& f);
/// max |c(-k) - conj c(k)| / max |c|.
double hermitian_defect(const SpectralField& f);

// ---- norms ---------------------------------------------------------------

/// ((L/N)^d sum |f|^p)^{1/p}; p = inf gives the max.
double lp_norm(const PhysicalField& f, double p);
double lp_norm(const SpectralField& f, double p);
/// Pointwise Euclidean magnitude of a vector field inside the L^p norm.
double lp_norm(const std::vector<PhysicalField>& v, double p);
/// sqrt(L^d sum |c|^2).
double l2_parseval(const SpectralField& f);
double l2_parseval(const VectorField& v);
/// Mode-wise ell^2 of the coefficients (no volume factor).
double coeff_l2(const SpectralField& f);

double divergence_defect(const VectorField& v);

}  // namespace bmhd
