#pragma once

#include "logdens/kernel_algebra.hpp"

#include <Eigen/Dense>

#include <vector>

namespace logdens {

//! Bandwidth scaling chi with chi^5 = h^5 n f(x) L''(x)^2; 15^{1/5} is the
//! Epanechnikov-optimal interior value.
double interior_chi();
//! Twice the interior value, used at z = 0.
double boundary_chi();

//! Local setting for the first-order constants.
struct AsymptoticInput
{
  int order = 1;
  double z = 1.0;
  GFamily family = GFamily::ps1();
  MKernel kernel = MKernel::epanechnikov();
  double f_x = 1.0;
  //! L^(1)(x), ..., L^(S+1)(x); only the last entry enters the bias.
  std::vector<double> log_derivs;
  double n = 1.0;
  double h = 1.0;

  //! sqrt(n h^(2S+3))
  double limit_scaling() const;
  double next_log_derivative() const;
};

struct BetaAsymptotics
{
  //! E(beta_tilde_s - beta_s) = h^(S+1-s) L^(S+1) b_s
  Eigen::VectorXd bias;
  //! Cov(beta_s, beta_j) = [(Omega^T V^-1 Omega)^-1]_sj / (f n h^(s+j+1))
  Eigen::MatrixXd covariance;
  //! (Omega^T V^-1 Omega)^-1 / f, the covariance of sqrt(n h^3) Lambda beta.
  Eigen::MatrixXd scaled_covariance;
};

BetaAsymptotics beta_asymptotics(const AsymptoticInput& input);

struct DensityAsymptotics
{
  //! Mean of the sqrt(nh)-normalized limit.
  double bias;
  //! Variance of the sqrt(nh)-normalized limit, f int omega_z^2.
  double variance;
  //! c_{m,S+1,z} - c_mz^T b
  double bias_constant;
  //! int omega_z^2
  double roughness;
  //! bias / sqrt(nh) and variance / (nh) at the given n, h.
  double finite_bias;
  double finite_variance;
};

DensityAsymptotics density_asymptotics(const AsymptoticInput& input);

struct AsymptoticResult
{
  BetaAsymptotics beta;
  DensityAsymptotics density;
};

AsymptoticResult asymptotic_result(const AsymptoticInput& input);

//! chi^4 mu^2 + R / chi with mu = int omega t^2 / 2 and R = int omega^2.
double amse_bracket(double chi, double bias_moment, double roughness);
double amse_bracket(double chi, const EquivalentKernel& omega);
//! Bracket times f^(6/5) |L''|^(2/5) n^(-4/5).
double amse(double chi,
            const EquivalentKernel& omega,
            double f_x,
            double log_second_deriv,
            double n);
//! Stationary point (R / (4 mu^2))^{1/5} of the bracket; throws zero_curvature
//! when the kernel has no second-order bias (the bracket is then monotone).
double stationary_chi(const EquivalentKernel& omega);

//! h = chi (n f L''^2)^(-1/5)
double optimal_bandwidth(double chi, double f_x, double log_second_deriv, double n);

//! Ratio h0(ps3) / h0(ps2) matching the boundary variances of the two
//! families with the truncated Epanechnikov m (equals 1.875).
double ps3_boundary_bandwidth_ratio();

//! h0 (1 - min(x/h1, 1)) + h1 min(x/h1, 1)
double bandwidth_interpolate(double x, double h0, double h1);

//! Bandwidth as a function of the evaluation point.
struct BandwidthRule
{
  double h0;
  double h1;

  static BandwidthRule fixed(double h) { return { h, h }; }
  double at(double x) const { return bandwidth_interpolate(x, h0, h1); }
};

} // namespace logdens
