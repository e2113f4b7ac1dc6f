#include "depkern/kernels.hpp"

#include "depkern/error.hpp"

namespace depkern {

namespace {

Kernel make_epanechnikov() {
  // 3/4 (1 - u^2) on [-1, 1]
  PiecewisePoly density =
      PiecewisePoly::from_power_basis({-1.0, 1.0}, {{0.75, 0.0, -0.75}}, 0.0, 0.0);
  return Kernel{KernelId::epanechnikov, "epanechnikov", density, density.antiderivative()};
}

Kernel make_triangular() {
  // 1 - |u| on [-1, 1]
  PiecewisePoly density =
      PiecewisePoly::from_power_basis({-1.0, 0.0, 1.0}, {{1.0, 1.0}, {1.0, -1.0}}, 0.0, 0.0);
  return Kernel{KernelId::triangular, "triangular", density, density.antiderivative()};
}

}  // namespace

const Kernel& kernel_catalog(KernelId id) {
  static const Kernel epan = make_epanechnikov();
  static const Kernel tri = make_triangular();
  switch (id) {
    case KernelId::epanechnikov:
      return epan;
    case KernelId::triangular:
      return tri;
  }
  fail(ErrorKind::unknown_kernel, "unknown kernel id");
}

KernelId kernel_from_name(std::string_view name) {
  if (name == "epanechnikov") return KernelId::epanechnikov;
  if (name == "triangular") return KernelId::triangular;
  fail(ErrorKind::unknown_kernel, "unknown kernel: " + std::string(name));
}

const char* kernel_name(KernelId id) {
  switch (id) {
    case KernelId::epanechnikov:
      return "epanechnikov";
    case KernelId::triangular:
      return "triangular";
  }
  return "?";
}

}  // namespace depkern
