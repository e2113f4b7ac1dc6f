#pragma once

namespace depkern {

double std_normal_pdf(double z);

// Phi(z), absolute error well below 1e-12 across the real line.
double std_normal_cdf(double z);

// Upper tail 1 - Phi(z) without cancellation for large z.
double std_normal_sf(double z);

// Inverse of std_normal_cdf on (0, 1): rational initial guess polished by
// Halley steps, |Phi(q) - p| < 1e-14 relative to the density scale.
double std_normal_quantile(double p);

}  // namespace depkern
