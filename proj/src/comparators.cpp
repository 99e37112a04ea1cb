#include "logdens/comparators.hpp"

#include "logdens/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <limits>
#include <sstream>

namespace logdens {

double epanechnikov(double u)
{
  return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
}

double epanechnikov_derivative(double u)
{
  return std::abs(u) <= 1.0 ? -1.5 * u : 0.0;
}

namespace {

void check_bandwidth(double h)
{
  if (!(h > 0.0) || !std::isfinite(h))
    throw Error(ErrorKind::config, "bandwidth must be positive");
}

double inv_nh(const Sample& sample, double h)
{
  return 1.0 / (static_cast<double>(sample.size()) * h);
}

} // namespace

double rp_density(const Sample& sample, double x, double h)
{
  check_bandwidth(h);
  double acc = 0.0;
  for (double xi : sample.window(x - h, x + h))
    acc += epanechnikov((xi - x) / h);
  return acc * inv_nh(sample, h);
}

double rp_density_derivative(const Sample& sample, double x, double h)
{
  check_bandwidth(h);
  double acc = 0.0;
  for (double xi : sample.window(x - h, x + h))
    acc += epanechnikov_derivative((x - xi) / h);
  return acc * inv_nh(sample, h) / h;
}

double boundary_rp_density(const Sample& sample, double x, double h)
{
  check_bandwidth(h);
  const double z = boundary_ratio(x, h);
  const EquivalentKernel omega(MKernel::epanechnikov(), GFamily::ps2(), 1, z);
  const double lo = z < 1.0 ? 0.0 : x - h;
  double acc = 0.0;
  for (double xi : sample.window(lo, x + h))
    acc += omega(std::clamp((xi - x) / h, -z, 1.0));
  return acc * inv_nh(sample, h);
}

// ---------------------------------------------------------------- LS-CJM

LsCjmEstimate ls_cjm_density(const Sample& sample, double x, double h)
{
  check_bandwidth(h);
  const auto points = sample.window(x - h, x + h);
  const double n = static_cast<double>(sample.size());

  std::vector<double> ts;
  std::vector<double> ws;
  std::vector<double> ys;
  ts.reserve(points.size());
  std::set<double> distinct;
  for (double xi : points) {
    const double t = (xi - x) / h;
    const double w = epanechnikov(t);
    if (w <= 0.0)
      continue;
    ts.push_back(t);
    ws.push_back(w);
    ys.push_back(static_cast<double>(sample.count_at_most(xi)) / n);
    distinct.insert(xi);
  }
  if (distinct.size() < 3)
    throw Error(ErrorKind::rank_deficient,
                "local quadratic fit needs at least 3 distinct points");

  const Eigen::Index m = static_cast<Eigen::Index>(ts.size());
  Eigen::MatrixXd design(m, 3);
  Eigen::VectorXd target(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sw = std::sqrt(ws[i]);
    design(i, 0) = sw;
    design(i, 1) = sw * ts[i];
    design(i, 2) = sw * ts[i] * ts[i] / 2.0;
    target(i) = sw * ys[i];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 3)
    throw Error(ErrorKind::rank_deficient, "local quadratic fit is rank deficient");
  const Eigen::Vector3d coef = qr.solve(target);
  return { coef(0), coef(1) / h, coef(2) / (h * h) };
}

// ---------------------------------------------------------------- KZ

double kz_pilot_log_derivative(const Sample& sample, double h_pilot)
{
  check_bandwidth(h_pilot);
  const double f_bound = boundary_rp_density(sample, 0.0, h_pilot);
  const double f_inner = rp_density(sample, 2.0 * h_pilot, h_pilot);
  if (!(f_bound > 0.0) || !(f_inner > 0.0))
    throw Error(ErrorKind::pilot_failure, "nonpositive pilot density");
  return (std::log(f_inner) - std::log(f_bound)) / (2.0 * h_pilot);
}

KzEstimate kz_density_with_pilot(const Sample& sample,
                                 double x,
                                 double h,
                                 double log_deriv_pilot,
                                 const KzOptions& options)
{
  check_bandwidth(h);
  if (!(options.lambda > 1.0 / 12.0))
    throw Error(ErrorKind::config,
                "KZ cubic coefficient must exceed 1/12 for a monotone map");
  KzEstimate out;
  out.log_deriv_pilot = log_deriv_pilot;
  if (x >= h) {
    out.density = rp_density(sample, x, h);
    out.density_deriv = rp_density_derivative(sample, x, h);
    return out;
  }

  const double d = log_deriv_pilot;
  const double c3 = options.lambda * d * d;
  auto transform = [&](double y) { return y + 0.5 * d * y * y + c3 * y * y * y; };

  double dens = 0.0;
  double deriv = 0.0;
  // the transform is increasing, so stop once it passes x + h
  for (double xi : sample.values()) {
    const double gy = transform(xi);
    if (gy > x + h)
      break;
    const double u1 = (x - gy) / h;
    const double u2 = (x + gy) / h;
    dens += epanechnikov(u1) + epanechnikov(u2);
    deriv += epanechnikov_derivative(u1) + epanechnikov_derivative(u2);
  }
  const double scale = inv_nh(sample, h);
  out.density = dens * scale;
  out.density_deriv = deriv * scale / h;
  return out;
}

KzEstimate kz_density(const Sample& sample,
                      double x,
                      double h,
                      double h_pilot,
                      const KzOptions& options)
{
  double pilot = 0.0;
  bool failed = false;
  try {
    pilot = kz_pilot_log_derivative(sample, h_pilot);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::pilot_failure)
      throw;
    failed = true;
  }
  KzEstimate out = kz_density_with_pilot(sample, x, h, pilot, options);
  out.pilot_failed = failed;
  return out;
}

// ---------------------------------------------------------------- Loader

namespace {

struct KernelExpMoments
{
  double i0;
  double i1;
  double i2;
};

//! int_{-z}^{1} k(t) t^j exp(b t) dt for j = 0, 1, 2
KernelExpMoments kernel_exp_moments(double b,
                                    double z,
                                    const GaussLegendreRule& rule)
{
  KernelExpMoments out{ 0.0, 0.0, 0.0 };
  const double half = 0.5 * (1.0 + z);
  const double mid = 0.5 * (1.0 - z);
  const auto& nodes = rule.nodes();
  const auto& weights = rule.weights();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double t = mid + half * nodes[i];
    const double v = weights[i] * epanechnikov(t) * std::exp(b * t);
    out.i0 += v;
    out.i1 += v * t;
    out.i2 += v * t * t;
  }
  out.i0 *= half;
  out.i1 *= half;
  out.i2 *= half;
  return out;
}

} // namespace

LoaderEstimate loader_density(const Sample& sample,
                              double x,
                              double h,
                              const LoaderOptions& options)
{
  check_bandwidth(h);
  if (x < 0.0)
    throw Error(ErrorKind::out_of_support, "evaluation point below 0");
  const double z = std::min(x / h, 1.0);
  const auto& rule = GaussLegendreRule::get(options.quadrature_order);

  // Objective per unit nh, in (a0, b = a1 h):
  //   Q = k0 a0 + k1 b - exp(a0) I0(b)
  double k0 = 0.0;
  double k1 = 0.0;
  const auto points = sample.window(x - h, x + h);
  for (double xi : points) {
    const double t = (xi - x) / h;
    const double w = epanechnikov(t);
    k0 += w;
    k1 += w * t;
  }
  const double scale = inv_nh(sample, h);
  k0 *= scale;
  k1 *= scale;
  if (!(k0 > 0.0))
    throw Error(ErrorKind::empty_window, "no observations with positive weight");

  double a0;
  double b;
  try {
    EvalRequest req;
    req.x = x;
    req.h = h;
    req.family = GFamily::ps2();
    const auto start = estimate_density(sample, req);
    if (!start.log_f_hat)
      throw Error(ErrorKind::zero_density, "zero start");
    a0 = *start.log_f_hat;
    b = start.beta->beta(0) * h;
  } catch (const Error&) {
    b = 0.0;
    a0 = std::log(k0 / kernel_exp_moments(0.0, z, rule).i0);
  }

  auto objective = [&](double a, double bb) {
    return k0 * a + k1 * bb - std::exp(a) * kernel_exp_moments(bb, z, rule).i0;
  };

  LoaderEstimate out;
  double value = objective(a0, b);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const auto mom = kernel_exp_moments(b, z, rule);
    const double ea = std::exp(a0);
    const double g0 = k0 - ea * mom.i0;
    const double g1 = k1 - ea * mom.i1;
    out = { ea, b / h, iter };
    if (std::max(std::abs(g0), std::abs(g1)) <= options.gradient_tol)
      return out;

    // Newton direction for the concave objective: solve (-H) d = g
    const double h00 = ea * mom.i0;
    const double h01 = ea * mom.i1;
    const double h11 = ea * mom.i2;
    const double det = h00 * h11 - h01 * h01;
    if (!(det > 0.0) || !std::isfinite(det))
      break;
    double d0 = (h11 * g0 - h01 * g1) / det;
    double d1 = (h00 * g1 - h01 * g0) / det;

    // near the optimum the objective is flat to rounding, so a Newton step
    // may not register as an increase
    const double slack =
      64.0 * std::numeric_limits<double>::epsilon() * (std::abs(value) + 1.0);
    double step = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 60; ++halving) {
      const double na = a0 + step * d0;
      const double nb = b + step * d1;
      const double nv = objective(na, nb);
      if (std::isfinite(nv) && nv >= value - slack) {
        a0 = na;
        b = nb;
        value = std::max(value, nv);
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved)
      break;
  }

  const auto mom = kernel_exp_moments(b, z, rule);
  const double ea = std::exp(a0);
  out = { ea, b / h, options.max_iterations };
  if (std::max(std::abs(k0 - ea * mom.i0), std::abs(k1 - ea * mom.i1)) <=
      options.gradient_tol)
    return out;
  std::ostringstream msg;
  msg << "local likelihood Newton iteration did not converge (last f = "
      << out.density << ", L' = " << out.log_deriv << ")";
  throw NoConvergenceError(msg.str(), out);
}

} // namespace logdens
