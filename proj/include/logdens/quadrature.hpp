#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace logdens {

//! Gauss-Legendre nodes and weights on [-1, 1].
class GaussLegendreRule
{
public:
  explicit GaussLegendreRule(std::size_t order);

  //! Shared rule instance; construction is thread-safe.
  static const GaussLegendreRule& get(std::size_t order);

  std::size_t order() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  template<class F>
  double integrate(F&& f, double a, double b) const
  {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      acc += weights_[i] * f(mid + half * nodes_[i]);
    return acc * half;
  }

private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

struct QuadratureResult
{
  double value;
  double error_estimate;
  bool converged;
};

//! Globally adaptive bisection on a 20-point Gauss-Legendre rule: the panel
//! with the largest error is split until the summed error is below
//! `tol * max(1, |total|)`. Gives up, unconverged, at `max_depth`, after 2000
//! splits, or on a non-finite integral.
QuadratureResult adaptive_integrate(const std::function<double(double)>& f,
                                    double a,
                                    double b,
                                    double tol = 1e-12,
                                    int max_depth = 40);

//! Convenience wrapper returning only the value.
inline double integrate(const std::function<double(double)>& f,
                        double a,
                        double b,
                        double tol = 1e-12)
{
  return adaptive_integrate(f, a, b, tol).value;
}

} // namespace logdens
