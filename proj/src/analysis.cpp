#include "spright/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace spright {

namespace {

// Same recursion without the trace; used inside the bisection.
bool converges(int groups, double eta, int max_iters, double tol) {
  double p = 1.0;
  for (int i = 0; i < max_iters; ++i) {
    const double next = std::pow(-std::expm1(-p / eta), groups - 1);
    if (next < tol) return true;
    if (next == p) return false;
    p = next;
  }
  return false;
}

}  // namespace

DeTrace density_evolution(int groups, double eta, int max_iters, double tol) {
  if (groups < 2) throw std::invalid_argument("density evolution needs C >= 2");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  DeTrace trace;
  trace.groups = groups;
  trace.eta = eta;
  trace.p.push_back(1.0);
  for (int i = 0; i < max_iters; ++i) {
    const double prev = trace.p.back();
    const double next = std::pow(-std::expm1(-prev / eta), groups - 1);
    trace.p.push_back(next);
    if (next < tol) {
      trace.converged = true;
      break;
    }
    if (next == prev) break;
  }
  return trace;
}

double min_eta(int groups, double bisection_tol, int max_iters, double tol) {
  if (groups < 2) throw std::invalid_argument("min_eta needs C >= 2");
  double lo = 1e-3;
  double hi = 4.0;
  while (!converges(groups, hi, max_iters, tol)) hi *= 2.0;
  while (hi - lo > bisection_tol) {
    const double mid = 0.5 * (lo + hi);
    (converges(groups, mid, max_iters, tol) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace spright
