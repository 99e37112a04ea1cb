#include "logdens/asymptotics.hpp"

#include "logdens/error.hpp"

#include <algorithm>
#include <cmath>

namespace logdens {

double interior_chi()
{
  return std::pow(15.0, 0.2);
}

double boundary_chi()
{
  return 2.0 * interior_chi();
}

double AsymptoticInput::limit_scaling() const
{
  return std::sqrt(n * std::pow(h, 2 * order + 3));
}

double AsymptoticInput::next_log_derivative() const
{
  if (log_derivs.size() < static_cast<std::size_t>(order) + 1)
    throw Error(ErrorKind::config,
                "need S + 1 log-density derivatives for the bias");
  return log_derivs[static_cast<std::size_t>(order)];
}

namespace {

void validate(const AsymptoticInput& input)
{
  if (!(input.f_x > 0.0))
    throw Error(ErrorKind::config, "f(x) must be positive");
  if (!(input.h > 0.0) || !(input.n > 0.0))
    throw Error(ErrorKind::config, "n and h must be positive");
}

} // namespace

BetaAsymptotics beta_asymptotics(const AsymptoticInput& input)
{
  validate(input);
  const OmegaSystem system(input.family, input.order, input.z);
  const int S = input.order;
  const double next = input.next_log_derivative();

  BetaAsymptotics out;
  out.bias.resize(S);
  for (int s = 1; s <= S; ++s)
    out.bias(s - 1) =
      std::pow(input.h, S + 1 - s) * next * system.bias_direction()(s - 1);

  out.scaled_covariance = system.beta_covariance() / input.f_x;
  out.covariance.resize(S, S);
  for (int s = 1; s <= S; ++s)
    for (int j = 1; j <= S; ++j)
      out.covariance(s - 1, j - 1) = out.scaled_covariance(s - 1, j - 1) /
                                     (input.n * std::pow(input.h, s + j + 1));
  return out;
}

DensityAsymptotics density_asymptotics(const AsymptoticInput& input)
{
  validate(input);
  const EquivalentKernel omega(input.kernel, input.family, input.order, input.z);
  const double next = input.next_log_derivative();

  DensityAsymptotics out;
  out.bias_constant = omega.bias_constant();
  out.roughness = omega.roughness();
  out.bias = input.f_x * next * input.limit_scaling() * out.bias_constant;
  out.variance = input.f_x * out.roughness;
  const double nh = input.n * input.h;
  out.finite_bias = out.bias / std::sqrt(nh);
  out.finite_variance = out.variance / nh;
  return out;
}

AsymptoticResult asymptotic_result(const AsymptoticInput& input)
{
  return { beta_asymptotics(input), density_asymptotics(input) };
}

double amse_bracket(double chi, double bias_moment, double roughness)
{
  if (!(chi > 0.0))
    throw Error(ErrorKind::config, "chi must be positive");
  return std::pow(chi, 4) * bias_moment * bias_moment + roughness / chi;
}

double amse_bracket(double chi, const EquivalentKernel& omega)
{
  return amse_bracket(chi, omega.moment(2) / 2.0, omega.roughness());
}

double amse(double chi,
            const EquivalentKernel& omega,
            double f_x,
            double log_second_deriv,
            double n)
{
  if (!(f_x > 0.0) || !(n > 0.0))
    throw Error(ErrorKind::config, "f(x) and n must be positive");
  return amse_bracket(chi, omega) * std::pow(f_x, 1.2) *
         std::pow(std::abs(log_second_deriv), 0.4) * std::pow(n, -0.8);
}

double stationary_chi(const EquivalentKernel& omega)
{
  const double mu = omega.moment(2) / 2.0;
  if (std::abs(mu) < 1e-14)
    throw Error(ErrorKind::zero_curvature,
                "kernel has no second-order bias; the bracket has no minimum");
  return std::pow(omega.roughness() / (4.0 * mu * mu), 0.2);
}

double optimal_bandwidth(double chi,
                         double f_x,
                         double log_second_deriv,
                         double n)
{
  if (!(chi > 0.0) || !(f_x > 0.0) || !(n > 0.0))
    throw Error(ErrorKind::config, "chi, f(x) and n must be positive");
  if (log_second_deriv == 0.0)
    throw Error(ErrorKind::zero_curvature,
                "L''(x) = 0: the optimal bandwidth is unbounded");
  return chi *
         std::pow(n * f_x * log_second_deriv * log_second_deriv, -0.2);
}

double ps3_boundary_bandwidth_ratio()
{
  const auto m = MKernel::epanechnikov();
  return EquivalentKernel(m, GFamily::ps3(), 1, 0.0).roughness() /
         EquivalentKernel(m, GFamily::ps2(), 1, 0.0).roughness();
}

double bandwidth_interpolate(double x, double h0, double h1)
{
  if (!(h0 > 0.0) || !(h1 > 0.0))
    throw Error(ErrorKind::config, "bandwidths must be positive");
  const double w = std::clamp(x / h1, 0.0, 1.0);
  return h0 * (1.0 - w) + h1 * w;
}

} // namespace logdens
