#pragma once

#include "logdens/asymptotics.hpp"
#include "logdens/error.hpp"
#include "logdens/kernel_algebra.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace logdens {

//! Observations on [0, inf), stored sorted ascending.
class Sample
{
public:
  explicit Sample(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }

  //! Observations in the closed interval [lo, hi].
  std::span<const double> window(double lo, double hi) const;
  //! Number of observations <= x.
  std::size_t count_at_most(double x) const;
  //! #{x_i > x} / n
  double survivor(double x) const;

private:
  std::vector<double> values_;
};

enum class DenominatorMethod
{
  automatic, // exact for S = 1 with the truncated Epanechnikov, else quadrature
  exact,
  quadrature,
  bell,
};

DenominatorMethod denominator_method_from_name(const std::string& name);

struct EvalRequest
{
  double x = 0.0;
  double h = 1.0;
  int order = 1;
  GFamily family = GFamily::ps1();
  MKernel kernel = MKernel::epanechnikov();
  DenominatorMethod denominator = DenominatorMethod::automatic;

  double z() const { return boundary_ratio(x, h); }
};

struct BetaEstimate
{
  //! beta_s estimates L^(s)(x), s = 1..S.
  Eigen::VectorXd beta;
  std::size_t n_window = 0;
  //! 2-norm condition number of the column-scaled system.
  double condition = 0.0;
};

struct DensityEstimate
{
  double x = 0.0;
  double h = 0.0;
  double z = 0.0;
  double f_hat = 0.0;
  //! Absent when f_hat = 0.
  std::optional<double> log_f_hat;
  double f_prime_hat = 0.0;
  //! Absent when the window is empty.
  std::optional<BetaEstimate> beta;
  std::size_t n_window = 0;
  double denominator = 1.0;

  bool empty_window() const { return n_window == 0; }
};

//! Solves the local moment system for (L'(x), ..., L^(S)(x)).
BetaEstimate estimate_beta(const Sample& sample, const EvalRequest& req);

//! int_{-z}^{1} m_z(t) exp(sum_s beta_s t^s h^s / s!) dt
double denominator(const Eigen::VectorXd& beta, const EvalRequest& req);

//! Closed form of the denominator for S = 1 with the truncated Epanechnikov,
//! as a function of a = beta_1 h. Small |a| uses the moment series.
double chi1(double a, double z);

//! Complete exponential Bell polynomials B_0..B_k of (x_1, x_2, ...); missing
//! arguments are zero.
std::vector<double> complete_bell(std::span<const double> x, int k);

DensityEstimate estimate_density(const Sample& sample, const EvalRequest& req);

//! log f_hat(x); throws zero_density on an empty window.
double estimate_logdensity(const Sample& sample, const EvalRequest& req);

//! f_hat(x) divided by the empirical survivor function.
double estimate_hazard(const Sample& sample, const EvalRequest& req);

struct CurvePoint
{
  double x = 0.0;
  double h = 0.0;
  std::optional<DensityEstimate> estimate;
  std::optional<ErrorKind> error;
  std::string message;

  bool ok() const { return estimate.has_value(); }
};

//! Point-by-point estimates with h taken from `rule` at each grid point.
//! `base` supplies S, g, m and the denominator method; its x and h are
//! ignored. Errors are recorded per point. With threads > 1 the grid is
//! split across workers; results are identical to a sequential run.
std::vector<CurvePoint> estimate_curve(const Sample& sample,
                                       std::span<const double> grid,
                                       const BandwidthRule& rule,
                                       const EvalRequest& base,
                                       unsigned threads = 1);

} // namespace logdens
