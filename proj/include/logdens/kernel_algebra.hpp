#pragma once

#include "logdens/polynomial.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace logdens {

//! Distance to the lower support boundary in bandwidth units, min(x/h, 1).
double boundary_ratio(double x, double h);

enum class GFamilyKind
{
  ps1,
  ps2,
  ps3,
  custom,
};

//! Vector-valued weight function g = (g_1, ..., g_S) supported on [-z, 1]
//! with g_j(-z) = g_j(1) = 0.
//!
//! Presets:
//!   ps1: g_j(t) = (t + z)^j (1 - t)
//!   ps2: g_j(t) = (t + z)^j (1 - t)^2
//!   ps3: g_j(t) = (t + z)^j (t - 1)(t - 5/7)
//! A custom family supplies a multiplier q_j(t; z); the roots are enforced by
//! using g_j(t) = (t + z)(1 - t) q_j(t; z).
class GFamily
{
public:
  using Multiplier = std::function<Polynomial(int j, double z)>;

  static GFamily ps1();
  static GFamily ps2();
  static GFamily ps3();
  static GFamily custom(Multiplier multiplier, std::string name = "custom");
  //! Parse "ps1" / "ps2" / "ps3".
  static GFamily from_name(const std::string& name);

  GFamilyKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  bool is_preset() const { return kind_ != GFamilyKind::custom; }

  //! g_j restricted to [-z, 1], as a polynomial in t.
  Polynomial component(int j, double z) const;

private:
  GFamily(GFamilyKind kind, std::string name, Multiplier multiplier);

  GFamilyKind kind_;
  std::string name_;
  Multiplier multiplier_;
};

//! g_j(t) including the support indicator.
double g_eval(const GFamily& family, int j, double z, double t);
//! g_j'(t) by polynomial differentiation, zero outside [-z, 1].
double g_prime_eval(const GFamily& family, int j, double z, double t);

enum class MKernelKind
{
  trunc_epanechnikov,
  uniform,
  custom,
};

//! Nonnegative kernel m_z on [-z, 1] integrating to one.
class MKernel
{
public:
  using Shape = std::function<Polynomial(double z)>;

  static MKernel epanechnikov();
  static MKernel uniform();
  //! Shape is normalized to unit mass on [-z, 1]; it must be nonnegative there.
  static MKernel custom(Shape shape, std::string name = "custom");
  //! Parse "epan" / "uniform".
  static MKernel from_name(const std::string& name);

  MKernelKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  bool is_preset() const { return kind_ != MKernelKind::custom; }

  //! Normalized m_z on [-z, 1].
  Polynomial density(double z) const;
  //! For the truncated Epanechnikov this is 3 / ((1 + z)^2 (2 - z)).
  double normalization(double z) const;
  double eval(double z, double t) const;

private:
  MKernel(MKernelKind kind, std::string name, Shape shape);

  MKernelKind kind_;
  std::string name_;
  Shape shape_;
};

enum class IntegrationMethod
{
  automatic,
  exact,
  quadrature,
};

//! Closed-form moment Omega_js for the ps1 integrand
//! (z + t)^j (1 - t) t^(s-1) / (s-1)!.
double omega_entry(int j, int s, double z);
//! Closed-form Gram entry int g_j' g_s' for the ps1 family.
double v_entry(int j, int s, double z);

//! Moment system of a g-family at order S and boundary ratio z.
//!
//! Omega_js = -int_{-z}^{1} g_j(t) t^(s-1) / (s-1)! dt for s = 1..S+1,
//! V_js = int g_j' g_s', b = Omega^{-1} Omega_{., S+1}. Immutable once built.
class OmegaSystem
{
public:
  OmegaSystem(const GFamily& family,
              int order,
              double z,
              IntegrationMethod method = IntegrationMethod::automatic);

  int order() const { return order_; }
  double z() const { return z_; }
  const GFamily& family() const { return family_; }

  const Eigen::MatrixXd& omega() const { return omega_; }
  const Eigen::VectorXd& omega_next() const { return omega_next_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  const Eigen::VectorXd& bias_direction() const { return bias_; }
  //! (Omega^T V^{-1} Omega)^{-1}
  const Eigen::MatrixXd& beta_covariance() const { return beta_cov_; }

  //! Omega^{-T} c, the weights of g' in the equivalent kernel.
  Eigen::VectorXd solve_transpose(const Eigen::VectorXd& c) const;

private:
  GFamily family_;
  int order_;
  double z_;
  Eigen::MatrixXd omega_;
  Eigen::VectorXd omega_next_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd bias_;
  Eigen::MatrixXd beta_cov_;
  Eigen::FullPivLU<Eigen::MatrixXd> lu_;
};

Eigen::VectorXd bias_vector(int order, double z, const GFamily& family);

//! c_msz = int_{-z}^{1} m_z(t) t^s dt / s!  (c_m0z = 1).
double c_moment(const MKernel& m,
                int s,
                double z,
                IntegrationMethod method = IntegrationMethod::automatic);
//! (c_m1z, ..., c_mSz)
Eigen::VectorXd c_moments(const MKernel& m, int order, double z);

//! omega_z(t) = m_z(t) - c_mz^T Omega^{-1} g'(t), the kernel governing the
//! first-order behavior of the density estimate.
class EquivalentKernel
{
public:
  EquivalentKernel(const MKernel& m, const GFamily& family, int order, double z);

  int order() const { return order_; }
  double z() const { return z_; }

  double operator()(double t) const;
  //! omega_z on [-z, 1] as a polynomial in t.
  const Polynomial& polynomial() const { return poly_; }

  //! int omega_z(t) t^s dt
  double moment(int s) const;
  //! int omega_z^2
  double roughness() const;
  //! int omega_z(t) t^(S+1) dt / (S+1)!, equal to c_{m,S+1,z} - c_mz^T b.
  double bias_constant() const;

private:
  int order_;
  double z_;
  Polynomial poly_;
};

double equivalent_kernel(const MKernel& m,
                         const GFamily& family,
                         int order,
                         double z,
                         double t);

//! n! as a double.
double factorial(int n);

} // namespace logdens
