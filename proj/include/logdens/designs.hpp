#pragma once

#include "logdens/estimator.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace logdens {

//! Deterministic uniform stream backed by mt19937_64.
class Rng
{
public:
  explicit Rng(std::uint64_t seed);

  //! Independent stream keyed by (master, a, b) through SplitMix64 mixing.
  static Rng stream(std::uint64_t master, std::uint64_t a, std::uint64_t b);

  //! 53-bit uniform on [0, 1).
  double uniform();
  //! 53-bit uniform on (0, 1), safe for logarithms.
  double uniform_open();
  //! Exp(1) by inversion.
  double exponential();

private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

enum class DesignId
{
  f1, // rescaled beta on [0, 5]: theta (1 - x/5)^(theta-1) / 5
  f2, // normal(theta/2, 1) truncated to [0, inf)
  f3, // (e^-x + theta x e^-x) / (1 + theta)
  f4, // (e^-x + theta x^2 e^-x) / (1 + 2 theta)
};

std::string_view to_string(DesignId id);
DesignId design_from_name(std::string_view name);

struct Design
{
  DesignId id = DesignId::f1;
  double theta = 4.0;
};

//! Throws config for an invalid theta and out_of_support for x outside the
//! support.
double true_density(const Design& d, double x);
double true_logderiv(const Design& d, double x);
double true_log_second_deriv(const Design& d, double x);
double true_density_deriv(const Design& d, double x);
double true_cdf(const Design& d, double x);

//! Standard normal CDF and quantile.
double normal_cdf(double x);
double normal_quantile(double p);

double sample_one(const Design& d, Rng& rng);
Sample sample_design(const Design& d, std::size_t n, Rng& rng);

} // namespace logdens
