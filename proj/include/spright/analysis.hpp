#pragma once

#include <vector>

namespace spright {

struct DeTrace {
  int groups = 0;
  double eta = 0.0;
  std::vector<double> p;  // p[0] = 1
  bool converged = false;
};

/// Iterates p_i = (1 - exp(-p_{i-1}/eta))^(C-1) from p_0 = 1 until p < tol,
/// max_iters steps, or an exact floating-point fixed point.
DeTrace density_evolution(int groups, double eta, int max_iters = 10000, double tol = 1e-12);

/// Smallest eta for which density evolution converges, by bisection.
/// For C = 2 the approach to zero is geometric with ratio 1/eta, so the
/// iteration budget has to be large to resolve the threshold at 1.
double min_eta(int groups, double bisection_tol = 1e-7, int max_iters = 1000000, double tol = 1e-12);

}  // namespace spright
