#include "logdens/kernel_algebra.hpp"

#include "logdens/error.hpp"
#include "logdens/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace logdens {

double factorial(int n)
{
  double out = 1.0;
  for (int k = 2; k <= n; ++k)
    out *= k;
  return out;
}

double boundary_ratio(double x, double h)
{
  if (!(h > 0.0))
    throw Error(ErrorKind::config, "bandwidth must be positive");
  if (x < 0.0)
    throw Error(ErrorKind::out_of_support, "evaluation point below 0");
  return std::min(x / h, 1.0);
}

namespace {

void check_z(double z)
{
  if (!(z >= 0.0 && z <= 1.0))
    throw Error(ErrorKind::config, "boundary ratio z must lie in [0, 1]");
}

void check_index(int j)
{
  if (j < 1)
    throw Error(ErrorKind::config, "g-family index must be >= 1");
}

Polynomial shifted_power(double z, int j)
{
  return Polynomial({ z, 1.0 }).pow(static_cast<unsigned>(j));
}

Polynomial monomial(int s)
{
  std::vector<double> c(static_cast<std::size_t>(s) + 1, 0.0);
  c.back() = 1.0;
  return Polynomial(std::move(c));
}

IntegrationMethod resolve(IntegrationMethod method, bool preset)
{
  if (method != IntegrationMethod::automatic)
    return method;
  return preset ? IntegrationMethod::exact : IntegrationMethod::quadrature;
}

double integrate_poly(const Polynomial& p,
                      double a,
                      double b,
                      IntegrationMethod method)
{
  if (method == IntegrationMethod::quadrature)
    return integrate([&p](double t) { return p(t); }, a, b, 1e-13);
  return p.integrate(a, b);
}

} // namespace

// ---------------------------------------------------------------- GFamily

GFamily::GFamily(GFamilyKind kind, std::string name, Multiplier multiplier)
  : kind_(kind)
  , name_(std::move(name))
  , multiplier_(std::move(multiplier))
{}

GFamily GFamily::ps1()
{
  return GFamily(GFamilyKind::ps1, "ps1", [](int j, double z) {
    return shifted_power(z, j - 1);
  });
}

GFamily GFamily::ps2()
{
  return GFamily(GFamilyKind::ps2, "ps2", [](int j, double z) {
    return shifted_power(z, j - 1) * Polynomial({ 1.0, -1.0 });
  });
}

GFamily GFamily::ps3()
{
  return GFamily(GFamilyKind::ps3, "ps3", [](int j, double z) {
    // (t + z)(t - 1)(t - 5/7) = (t + z)(1 - t)(5/7 - t)
    return shifted_power(z, j - 1) * Polynomial({ 5.0 / 7.0, -1.0 });
  });
}

GFamily GFamily::custom(Multiplier multiplier, std::string name)
{
  if (!multiplier)
    throw Error(ErrorKind::config, "custom g-family needs a multiplier");
  return GFamily(GFamilyKind::custom, std::move(name), std::move(multiplier));
}

GFamily GFamily::from_name(const std::string& name)
{
  if (name == "ps1")
    return ps1();
  if (name == "ps2")
    return ps2();
  if (name == "ps3")
    return ps3();
  throw Error(ErrorKind::config, "unknown g-family '" + name + "'");
}

Polynomial GFamily::component(int j, double z) const
{
  check_index(j);
  check_z(z);
  return Polynomial({ z, 1.0 }) * Polynomial({ 1.0, -1.0 }) * multiplier_(j, z);
}

double g_eval(const GFamily& family, int j, double z, double t)
{
  if (t < -z || t > 1.0)
    return 0.0;
  return family.component(j, z)(t);
}

double g_prime_eval(const GFamily& family, int j, double z, double t)
{
  if (t < -z || t > 1.0)
    return 0.0;
  return family.component(j, z).derivative()(t);
}

// ---------------------------------------------------------------- MKernel

MKernel::MKernel(MKernelKind kind, std::string name, Shape shape)
  : kind_(kind)
  , name_(std::move(name))
  , shape_(std::move(shape))
{}

MKernel MKernel::epanechnikov()
{
  return MKernel(MKernelKind::trunc_epanechnikov, "epan", [](double) {
    return Polynomial({ 1.0, 0.0, -1.0 });
  });
}

MKernel MKernel::uniform()
{
  return MKernel(MKernelKind::uniform, "uniform", [](double) {
    return Polynomial::constant(1.0);
  });
}

MKernel MKernel::custom(Shape shape, std::string name)
{
  if (!shape)
    throw Error(ErrorKind::config, "custom m-kernel needs a shape");
  return MKernel(MKernelKind::custom, std::move(name), std::move(shape));
}

MKernel MKernel::from_name(const std::string& name)
{
  if (name == "epan" || name == "epanechnikov")
    return epanechnikov();
  if (name == "uniform")
    return uniform();
  throw Error(ErrorKind::config, "unknown m-kernel '" + name + "'");
}

double MKernel::normalization(double z) const
{
  check_z(z);
  switch (kind_) {
    case MKernelKind::trunc_epanechnikov:
      return 3.0 / ((1.0 + z) * (1.0 + z) * (2.0 - z));
    case MKernelKind::uniform:
      return 1.0 / (1.0 + z);
    case MKernelKind::custom:
      break;
  }
  const double mass = shape_(z).integrate(-z, 1.0);
  if (!(mass > 0.0))
    throw Error(ErrorKind::config, "custom m-kernel has nonpositive mass");
  return 1.0 / mass;
}

Polynomial MKernel::density(double z) const
{
  const double scale = normalization(z);
  Polynomial p = shape_(z) * scale;
  if (kind_ == MKernelKind::custom) {
    double peak = 0.0;
    double low = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double t = -z + (1.0 + z) * i / 2000.0;
      const double v = p(t);
      peak = std::max(peak, v);
      low = std::min(low, v);
    }
    if (low < -1e-12 * std::max(peak, 1.0))
      throw Error(ErrorKind::config, "custom m-kernel is negative on [-z, 1]");
  }
  return p;
}

double MKernel::eval(double z, double t) const
{
  if (t < -z || t > 1.0)
    return 0.0;
  return density(z)(t);
}

// ---------------------------------------------------------------- Omega

double omega_entry(int j, int s, double z)
{
  check_index(j);
  check_index(s);
  double acc = 0.0;
  const double jf = factorial(j);
  for (int t = 0; t <= s - 1; ++t) {
    const double sign = ((s - t + 1) % 2 == 0) ? 1.0 : -1.0;
    acc += sign * (s - t) * jf / (factorial(j + s + 1 - t) * factorial(t)) *
           std::pow(1.0 + z, j + s + 1 - t);
  }
  return acc;
}

double v_entry(int j, int s, double z)
{
  check_index(j);
  check_index(s);
  const double k = j + s;
  return 2.0 * j * s * std::pow(1.0 + z, k + 1) / ((k + 1) * k * (k - 1));
}

OmegaSystem::OmegaSystem(const GFamily& family,
                         int order,
                         double z,
                         IntegrationMethod method)
  : family_(family)
  , order_(order)
  , z_(z)
{
  if (order < 1)
    throw Error(ErrorKind::config, "polynomial order S must be >= 1");
  check_z(z);
  method = resolve(method, family.is_preset());

  omega_.resize(order, order);
  omega_next_.resize(order);
  gram_.resize(order, order);

  const bool closed_ps1 =
    method == IntegrationMethod::exact && family.kind() == GFamilyKind::ps1;

  std::vector<Polynomial> g(order);
  std::vector<Polynomial> dg(order);
  for (int j = 0; j < order; ++j) {
    g[j] = family.component(j + 1, z);
    dg[j] = g[j].derivative();
  }

  for (int j = 0; j < order; ++j) {
    for (int s = 0; s <= order; ++s) {
      double value;
      if (closed_ps1) {
        // the closed form integrates (z + t)^j (1 - t) = g_j for ps1
        value = -omega_entry(j + 1, s + 1, z);
      } else {
        value = -integrate_poly(g[j] * monomial(s), -z, 1.0, method) /
                factorial(s);
      }
      if (s < order)
        omega_(j, s) = value;
      else
        omega_next_(j) = value;
    }
    for (int s = 0; s < order; ++s) {
      gram_(j, s) = closed_ps1
                      ? v_entry(j + 1, s + 1, z)
                      : integrate_poly(dg[j] * dg[s], -z, 1.0, method);
    }
  }

  lu_.compute(omega_);
  if (!lu_.isInvertible())
    throw Error(ErrorKind::singular_system,
                "moment matrix Omega is singular for family '" +
                  family.name() + "'");
  bias_ = lu_.solve(omega_next_);
  const Eigen::MatrixXd omega_inv = lu_.inverse();
  beta_cov_ = omega_inv * gram_ * omega_inv.transpose();
  beta_cov_ = 0.5 * (beta_cov_ + beta_cov_.transpose()).eval();
}

Eigen::VectorXd OmegaSystem::solve_transpose(const Eigen::VectorXd& c) const
{
  return lu_.transpose().solve(c);
}

Eigen::VectorXd bias_vector(int order, double z, const GFamily& family)
{
  return OmegaSystem(family, order, z).bias_direction();
}

// ---------------------------------------------------------------- c-moments

double c_moment(const MKernel& m, int s, double z, IntegrationMethod method)
{
  if (s < 0)
    throw Error(ErrorKind::config, "moment index must be >= 0");
  method = resolve(method, m.is_preset());
  const Polynomial integrand = m.density(z) * monomial(s);
  return integrate_poly(integrand, -z, 1.0, method) / factorial(s);
}

Eigen::VectorXd c_moments(const MKernel& m, int order, double z)
{
  Eigen::VectorXd c(order);
  for (int s = 1; s <= order; ++s)
    c(s - 1) = c_moment(m, s, z);
  return c;
}

// ---------------------------------------------------------------- omega_z

EquivalentKernel::EquivalentKernel(const MKernel& m,
                                   const GFamily& family,
                                   int order,
                                   double z)
  : order_(order)
  , z_(z)
{
  const OmegaSystem system(family, order, z);
  const Eigen::VectorXd weights = system.solve_transpose(c_moments(m, order, z));
  poly_ = m.density(z);
  for (int j = 0; j < order; ++j)
    poly_ -= family.component(j + 1, z).derivative() * weights(j);
}

double EquivalentKernel::operator()(double t) const
{
  if (t < -z_ || t > 1.0)
    return 0.0;
  return poly_(t);
}

double EquivalentKernel::moment(int s) const
{
  return (poly_ * monomial(s)).integrate(-z_, 1.0);
}

double EquivalentKernel::roughness() const
{
  return (poly_ * poly_).integrate(-z_, 1.0);
}

double EquivalentKernel::bias_constant() const
{
  return moment(order_ + 1) / factorial(order_ + 1);
}

double equivalent_kernel(const MKernel& m,
                         const GFamily& family,
                         int order,
                         double z,
                         double t)
{
  return EquivalentKernel(m, family, order, z)(t);
}

} // namespace logdens
