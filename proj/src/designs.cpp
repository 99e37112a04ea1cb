#include "logdens/designs.hpp"

#include "logdens/error.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace logdens {

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed)
  : engine_(seed)
{}

Rng Rng::stream(std::uint64_t master, std::uint64_t a, std::uint64_t b)
{
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ b);
  return Rng(s);
}

double Rng::uniform()
{
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open()
{
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::exponential()
{
  return -std::log(uniform_open());
}

std::string_view to_string(DesignId id)
{
  switch (id) {
    case DesignId::f1: return "f1";
    case DesignId::f2: return "f2";
    case DesignId::f3: return "f3";
    case DesignId::f4: return "f4";
  }
  return "?";
}

DesignId design_from_name(std::string_view name)
{
  if (name == "f1") return DesignId::f1;
  if (name == "f2") return DesignId::f2;
  if (name == "f3") return DesignId::f3;
  if (name == "f4") return DesignId::f4;
  throw Error(ErrorKind::config, "unknown design '" + std::string(name) + "'");
}

double normal_cdf(double x)
{
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p)
{
  if (!(p > 0.0 && p < 1.0))
    throw Error(ErrorKind::config, "normal quantile needs p in (0, 1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

namespace {

void check(const Design& d, double x)
{
  if (!(d.theta > 0.0) || !std::isfinite(d.theta))
    throw Error(ErrorKind::config, "design parameter theta must be positive");
  if (d.id == DesignId::f1 && d.theta < 1.0)
    throw Error(ErrorKind::config, "f1 needs theta >= 1");
  if (!(x >= 0.0) || !std::isfinite(x))
    throw Error(ErrorKind::out_of_support, "design densities live on [0, inf)");
  if (d.id == DesignId::f1 && x > 5.0)
    throw Error(ErrorKind::out_of_support, "f1 lives on [0, 5]");
}

} // namespace

double true_density(const Design& d, double x)
{
  check(d, x);
  const double th = d.theta;
  switch (d.id) {
    case DesignId::f1:
      return th * std::pow(1.0 - x / 5.0, th - 1.0) / 5.0;
    case DesignId::f2: {
      const double u = x - th / 2.0;
      return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi) /
             normal_cdf(th / 2.0);
    }
    case DesignId::f3:
      return (1.0 + th * x) * std::exp(-x) / (1.0 + th);
    case DesignId::f4:
      return (1.0 + th * x * x) * std::exp(-x) / (1.0 + 2.0 * th);
  }
  return 0.0;
}

double true_logderiv(const Design& d, double x)
{
  check(d, x);
  const double th = d.theta;
  switch (d.id) {
    case DesignId::f1: return -(th - 1.0) / (5.0 - x);
    case DesignId::f2: return -(x - th / 2.0);
    case DesignId::f3: return -1.0 + th / (1.0 + th * x);
    case DesignId::f4: return -1.0 + 2.0 * th * x / (1.0 + th * x * x);
  }
  return 0.0;
}

double true_log_second_deriv(const Design& d, double x)
{
  check(d, x);
  const double th = d.theta;
  switch (d.id) {
    case DesignId::f1: return -(th - 1.0) / ((5.0 - x) * (5.0 - x));
    case DesignId::f2: return -1.0;
    case DesignId::f3: {
      const double q = 1.0 + th * x;
      return -th * th / (q * q);
    }
    case DesignId::f4: {
      const double q = 1.0 + th * x * x;
      return 2.0 * th * (1.0 - th * x * x) / (q * q);
    }
  }
  return 0.0;
}

double true_density_deriv(const Design& d, double x)
{
  if (d.id == DesignId::f1) {
    check(d, x);
    // direct form stays finite at x = 5 when theta >= 2
    return -d.theta * (d.theta - 1.0) * std::pow(1.0 - x / 5.0, d.theta - 2.0) /
           25.0;
  }
  return true_density(d, x) * true_logderiv(d, x);
}

double true_cdf(const Design& d, double x)
{
  check(d, x);
  const double th = d.theta;
  switch (d.id) {
    case DesignId::f1:
      return 1.0 - std::pow(1.0 - x / 5.0, th);
    case DesignId::f2:
      return (normal_cdf(x - th / 2.0) - normal_cdf(-th / 2.0)) /
             normal_cdf(th / 2.0);
    case DesignId::f3:
      return 1.0 - std::exp(-x) * (1.0 + th * (1.0 + x)) / (1.0 + th);
    case DesignId::f4:
      return 1.0 -
             std::exp(-x) * (1.0 + th * (x * x + 2.0 * x + 2.0)) / (1.0 + 2.0 * th);
  }
  return 0.0;
}

double sample_one(const Design& d, Rng& rng)
{
  const double th = d.theta;
  switch (d.id) {
    case DesignId::f1:
      return 5.0 * (1.0 - std::pow(rng.uniform_open(), 1.0 / th));
    case DesignId::f2: {
      // x = mu - Phi^{-1}((1 - u) Phi(mu)), written through erfc_inv
      const double mu = th / 2.0;
      const double p = rng.uniform_open() * normal_cdf(mu);
      const double x = mu + std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
      return std::max(x, 0.0);
    }
    case DesignId::f3: {
      const double u = rng.uniform();
      const int shape = u < 1.0 / (1.0 + th) ? 1 : 2;
      double x = 0.0;
      for (int k = 0; k < shape; ++k)
        x += rng.exponential();
      return x;
    }
    case DesignId::f4: {
      const double u = rng.uniform();
      const int shape = u < 1.0 / (1.0 + 2.0 * th) ? 1 : 3;
      double x = 0.0;
      for (int k = 0; k < shape; ++k)
        x += rng.exponential();
      return x;
    }
  }
  return 0.0;
}

Sample sample_design(const Design& d, std::size_t n, Rng& rng)
{
  check(d, 0.0);
  if (n == 0)
    throw Error(ErrorKind::config, "sample size must be positive");
  std::vector<double> xs(n);
  for (auto& x : xs)
    x = sample_one(d, rng);
  return Sample(std::move(xs));
}

} // namespace logdens
