#pragma once

#include <array>
#include <functional>

namespace dwalk {

struct Minimum1D {
  double x;
  double value;
};

/// Derivative-free bracketed minimization on [lo, hi] (Brent); xtol is absolute.
Minimum1D minimize_1d(const std::function<double(double)>& f, double lo, double hi,
                      double xtol);

struct Minimum3D {
  std::array<double, 3> x;
  double value;
  int iterations;
};

/// Nelder-Mead simplex from x0 with initial edge `step`; stops when the
/// simplex size drops below xtol or after max_iter iterations.
Minimum3D minimize_3d(const std::function<double(const std::array<double, 3>&)>& f,
                      const std::array<double, 3>& x0, double step, double xtol,
                      int max_iter = 5000);

}  // namespace dwalk
