#pragma once

#include "logdens/error.hpp"
#include "logdens/estimator.hpp"

namespace logdens {

//! 3(1 - u^2)/4 on [-1, 1]
double epanechnikov(double u);
double epanechnikov_derivative(double u);

//! Rosenblatt-Parzen estimate with the Epanechnikov kernel.
double rp_density(const Sample& sample, double x, double h);
//! Derivative in x of rp_density.
double rp_density_derivative(const Sample& sample, double x, double h);

//! RP estimate with the equivalent kernel of (ps2, truncated Epanechnikov)
//! at z = min(x/h, 1). At z = 0 the kernel is 6(1 - 2t)(1 - t); at z = 1 it
//! is the Epanechnikov kernel. The estimate may be negative.
double boundary_rp_density(const Sample& sample, double x, double h);

struct LsCjmEstimate
{
  double cdf;
  double density;
  double density_deriv;
};

//! Kernel-weighted local quadratic fit of the right-continuous empirical CDF
//! at the sample points in [x - h, x + h].
LsCjmEstimate ls_cjm_density(const Sample& sample, double x, double h);

struct KzOptions
{
  //! Cubic coefficient of the transformation y + d y^2 / 2 + lambda d^2 y^3.
  double lambda = 1.0 / 3.0;
};

struct KzEstimate
{
  double density = 0.0;
  double density_deriv = 0.0;
  //! Finite-difference pilot estimate of L'(0), or 0 when the pilot failed.
  double log_deriv_pilot = 0.0;
  bool pilot_failed = false;
};

//! Pilot L'(0) = (log f_rp(2 h_p) - log f_bk(0)) / (2 h_p) where f_bk is
//! boundary_rp_density at 0. Throws pilot_failure on a nonpositive pilot.
double kz_pilot_log_derivative(const Sample& sample, double h_pilot);

//! Generalized reflection estimate. For x >= h this is rp_density.
KzEstimate kz_density(const Sample& sample,
                      double x,
                      double h,
                      double h_pilot,
                      const KzOptions& options = {});
//! Same, with a precomputed pilot (shared across grid points).
KzEstimate kz_density_with_pilot(const Sample& sample,
                                 double x,
                                 double h,
                                 double log_deriv_pilot,
                                 const KzOptions& options = {});

struct LoaderOptions
{
  double gradient_tol = 1e-10;
  int max_iterations = 100;
  std::size_t quadrature_order = 32;
};

struct LoaderEstimate
{
  double density = 0.0;
  double log_deriv = 0.0;
  int iterations = 0;
};

//! Newton iteration did not converge; carries the last iterate.
class NoConvergenceError : public Error
{
public:
  NoConvergenceError(const std::string& what, LoaderEstimate last)
    : Error(ErrorKind::no_convergence, what)
    , last_(last)
  {}
  const LoaderEstimate& last_iterate() const { return last_; }

private:
  LoaderEstimate last_;
};

//! Local log-linear likelihood with the (support-truncated) Epanechnikov
//! kernel, started from the ps2 estimate.
LoaderEstimate loader_density(const Sample& sample,
                              double x,
                              double h,
                              const LoaderOptions& options = {});

} // namespace logdens
