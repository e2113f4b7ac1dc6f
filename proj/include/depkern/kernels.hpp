#pragma once

#include <string>
#include <string_view>

#include "depkern/piecewise_poly.hpp"

namespace depkern {

enum class KernelId { epanechnikov, triangular };

// Symmetric density on [-1, 1] together with its exact antiderivative.
// cdf is 0 left of -1 and 1 right of +1.
struct Kernel {
  KernelId id;
  std::string name;
  PiecewisePoly density;
  PiecewisePoly cdf;
};

const Kernel& kernel_catalog(KernelId id);
KernelId kernel_from_name(std::string_view name);
const char* kernel_name(KernelId id);

}  // namespace depkern
