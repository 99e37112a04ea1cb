#include "logdens/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace logdens {

GaussLegendreRule::GaussLegendreRule(std::size_t order)
  : nodes_(order)
  , weights_(order)
{
  if (order == 0)
    throw std::invalid_argument("Gauss-Legendre order must be positive");
  if (order == 1) {
    nodes_[0] = 0.0;
    weights_[0] = 2.0;
    return;
  }

  // Newton iteration on P_n from the Chebyshev-type initial guess; nodes are
  // symmetric so only the upper half is solved.
  const std::size_t half = (order + 1) / 2;
  const double n = static_cast<double>(order);
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= order; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= order; ++k) {
      const double kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes_[i] = -x;
    nodes_[order - 1 - i] = x;
    weights_[i] = w;
    weights_[order - 1 - i] = w;
  }
  if (order % 2 == 1)
    nodes_[order / 2] = 0.0;
}

const GaussLegendreRule& GaussLegendreRule::get(std::size_t order)
{
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot)
    slot = std::make_unique<GaussLegendreRule>(order);
  return *slot;
}

namespace {

struct Panel
{
  double a;
  double b;
  double left;  // rule on [a, mid]
  double right; // rule on [mid, b]
  double err;   // halves against the single-panel rule
  int depth;

  double value() const { return left + right; }
  bool operator<(const Panel& o) const { return err < o.err; }
};

// bound on the number of bisections; a steep but finite integrand would
// otherwise keep splitting to the depth limit in every branch
constexpr int max_splits = 2000;

} // namespace

QuadratureResult adaptive_integrate(const std::function<double(double)>& f,
                                    double a,
                                    double b,
                                    double tol,
                                    int max_depth)
{
  const auto& rule = GaussLegendreRule::get(20);
  if (a == b)
    return { 0.0, 0.0, true };

  auto make = [&](double lo, double hi, double coarse, int depth) {
    const double mid = 0.5 * (lo + hi);
    Panel p{ lo, hi, rule.integrate(f, lo, mid), rule.integrate(f, mid, hi), 0.0, depth };
    p.err = std::abs(p.value() - coarse);
    return p;
  };

  // always split the panel with the largest error
  std::vector<Panel> heap{ make(a, b, rule.integrate(f, a, b), 0) };
  bool converged = false;
  double total = 0.0;
  double err_total = 0.0;
  for (int split = 0;; ++split) {
    total = 0.0;
    err_total = 0.0;
    for (const Panel& p : heap) {
      total += p.value();
      err_total += p.err;
    }
    if (!std::isfinite(total) || !std::isfinite(err_total))
      break;
    if (err_total <= tol * std::max(1.0, std::abs(total))) {
      converged = true;
      break;
    }
    if (heap.front().depth >= max_depth || split == max_splits)
      break;
    std::pop_heap(heap.begin(), heap.end());
    const Panel p = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (p.a + p.b);
    heap.push_back(make(p.a, mid, p.left, p.depth + 1));
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(make(mid, p.b, p.right, p.depth + 1));
    std::push_heap(heap.begin(), heap.end());
  }
  return { total, err_total, converged };
}

} // namespace logdens
