#pragma once

namespace depkern {

// Compensated accumulator; order of add() calls fixes the result bit for bit.
struct Kahan {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace depkern
