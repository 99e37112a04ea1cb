#include "logdens/estimator.hpp"

#include "logdens/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace logdens {

// ---------------------------------------------------------------- Sample

Sample::Sample(std::vector<double> values)
  : values_(std::move(values))
{
  if (values_.empty())
    throw Error(ErrorKind::config, "sample must contain at least one value");
  for (double v : values_) {
    if (!std::isfinite(v))
      throw Error(ErrorKind::config, "sample contains a non-finite value");
    if (v < 0.0)
      throw Error(ErrorKind::out_of_support,
                  "sample values must be nonnegative");
  }
  std::sort(values_.begin(), values_.end());
}

std::span<const double> Sample::window(double lo, double hi) const
{
  const auto first = std::lower_bound(values_.begin(), values_.end(), lo);
  const auto last = std::upper_bound(first, values_.end(), hi);
  return { first, last };
}

std::size_t Sample::count_at_most(double x) const
{
  return static_cast<std::size_t>(
    std::upper_bound(values_.begin(), values_.end(), x) - values_.begin());
}

double Sample::survivor(double x) const
{
  return static_cast<double>(values_.size() - count_at_most(x)) /
         static_cast<double>(values_.size());
}

DenominatorMethod denominator_method_from_name(const std::string& name)
{
  if (name == "auto")
    return DenominatorMethod::automatic;
  if (name == "exact")
    return DenominatorMethod::exact;
  if (name == "quad" || name == "quadrature")
    return DenominatorMethod::quadrature;
  if (name == "bell")
    return DenominatorMethod::bell;
  throw Error(ErrorKind::config, "unknown denominator method '" + name + "'");
}

// ---------------------------------------------------------------- beta

namespace {

void validate(const EvalRequest& req)
{
  if (!(req.h > 0.0) || !std::isfinite(req.h))
    throw Error(ErrorKind::config, "bandwidth must be positive");
  if (!(req.x >= 0.0) || !std::isfinite(req.x))
    throw Error(ErrorKind::out_of_support,
                "evaluation point must be nonnegative");
  if (req.order < 1)
    throw Error(ErrorKind::config, "polynomial order S must be >= 1");
}

struct LocalWindow
{
  double z;
  std::span<const double> points;
};

LocalWindow local_window(const Sample& sample, const EvalRequest& req)
{
  const double z = req.z();
  // x - zh is exactly 0 whenever z < 1
  const double lo = z < 1.0 ? 0.0 : req.x - req.h;
  return { z, sample.window(lo, req.x + req.h) };
}

double scaled_offset(double xi, const EvalRequest& req, double z)
{
  return std::clamp((xi - req.x) / req.h, -z, 1.0);
}

} // namespace

BetaEstimate estimate_beta(const Sample& sample, const EvalRequest& req)
{
  validate(req);
  const auto [z, points] = local_window(sample, req);
  if (points.empty())
    throw Error(ErrorKind::empty_window, "no observations in the window");

  const int S = req.order;
  std::vector<Polynomial> g(S);
  std::vector<Polynomial> dg(S);
  for (int j = 0; j < S; ++j) {
    g[j] = req.family.component(j + 1, z);
    dg[j] = g[j].derivative();
  }

  // Columns carry t^(s-1) instead of (x_i - x)^(s-1); the h^(s-1) factors
  // are restored after the solve.
  Eigen::VectorXd lhs = Eigen::VectorXd::Zero(S);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(S, S);
  std::vector<double> powers(S);
  for (double xi : points) {
    const double t = scaled_offset(xi, req, z);
    powers[0] = 1.0;
    for (int s = 1; s < S; ++s)
      powers[s] = powers[s - 1] * t / s;
    for (int j = 0; j < S; ++j) {
      lhs(j) += dg[j](t);
      const double gj = g[j](t);
      for (int s = 0; s < S; ++s)
        rhs(j, s) += gj * powers[s];
    }
  }
  const double n = static_cast<double>(sample.size());
  lhs /= n * req.h * req.h;
  rhs *= -1.0 / (n * req.h);

  BetaEstimate out;
  out.n_window = points.size();

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(rhs,
                                              Eigen::ComputeFullU |
                                                Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(S - 1);
  if (!(smax > 0.0) || !std::isfinite(smax) || smin <= 1e-13 * smax)
    throw Error(ErrorKind::singular_system,
                "local moment system is numerically singular");
  out.condition = smax / smin;

  Eigen::VectorXd scaled = svd.solve(lhs);
  out.beta.resize(S);
  double hp = 1.0;
  for (int s = 0; s < S; ++s) {
    out.beta(s) = scaled(s) / hp;
    hp *= req.h;
  }
  return out;
}

// ---------------------------------------------------------------- denominator

namespace {

//! c_mkz for the truncated Epanechnikov, k >= 0.
double epan_moment(int k, double z)
{
  const double nu = 3.0 / ((1.0 + z) * (1.0 + z) * (2.0 - z));
  const double a = (1.0 - std::pow(-z, k + 1)) / (k + 1);
  const double b = (1.0 - std::pow(-z, k + 3)) / (k + 3);
  return nu * (a - b) / factorial(k);
}

} // namespace

double chi1(double a, double z)
{
  if (std::abs(a) < 1.0) {
    // the closed form cancels catastrophically near a = 0
    double sum = 0.0;
    double ak = 1.0;
    // no early exit: odd terms vanish at z = 1
    for (int k = 0; k < 30; ++k) {
      sum += ak * epan_moment(k, z);
      ak *= a;
    }
    return sum;
  }
  const double nu = 3.0 / ((1.0 + z) * (1.0 + z) * (2.0 - z));
  const double bracket =
    (2.0 * a - 2.0) * std::exp(a) -
    (-2.0 - 2.0 * a * z + a * a * (1.0 - z * z)) * std::exp(-z * a);
  return nu * bracket / (a * a * a);
}

std::vector<double> complete_bell(std::span<const double> x, int k)
{
  auto arg = [&x](int i) {
    return i >= 1 && static_cast<std::size_t>(i) <= x.size() ? x[i - 1] : 0.0;
  };
  std::vector<double> bell(static_cast<std::size_t>(k) + 1, 0.0);
  bell[0] = 1.0;
  // B_{m+1} = sum_i C(m, i) B_{m-i} x_{i+1}
  for (int m = 0; m < k; ++m) {
    double acc = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= m; ++i) {
      acc += binom * bell[m - i] * arg(i + 1);
      binom = binom * (m - i) / (i + 1);
    }
    bell[m + 1] = acc;
  }
  return bell;
}

double denominator(const Eigen::VectorXd& beta, const EvalRequest& req)
{
  validate(req);
  const int S = static_cast<int>(beta.size());
  if (S < 1)
    throw Error(ErrorKind::config, "empty beta vector");
  for (int s = 0; s < S; ++s)
    if (!std::isfinite(beta(s)))
      throw Error(ErrorKind::config, "beta estimate is not finite");
  const double z = req.z();

  // scaled coefficients a_s = beta_s h^s
  std::vector<double> scaled(S);
  double hp = req.h;
  for (int s = 0; s < S; ++s) {
    scaled[s] = beta(s) * hp;
    hp *= req.h;
  }

  DenominatorMethod method = req.denominator;
  const bool exact_ok =
    S == 1 && req.kernel.kind() == MKernelKind::trunc_epanechnikov;
  if (method == DenominatorMethod::automatic)
    method = exact_ok ? DenominatorMethod::exact : DenominatorMethod::quadrature;

  switch (method) {
    case DenominatorMethod::exact:
      if (!exact_ok)
        throw Error(ErrorKind::method_unsupported,
                    "exact denominator requires S = 1 and the truncated "
                    "Epanechnikov m-kernel");
      return chi1(scaled[0], z);
    case DenominatorMethod::bell: {
      const auto bell = complete_bell(scaled, S + 1);
      double acc = 0.0;
      for (int k = 0; k <= S + 1; ++k)
        acc += bell[k] * c_moment(req.kernel, k, z);
      return acc;
    }
    case DenominatorMethod::quadrature:
    case DenominatorMethod::automatic:
      break;
  }

  const Polynomial m = req.kernel.density(z);
  std::vector<double> expo(S + 1, 0.0);
  for (int s = 1; s <= S; ++s)
    expo[s] = scaled[s - 1] / factorial(s);
  const Polynomial exponent(std::move(expo));
  return integrate(
    [&](double t) { return m(t) * std::exp(exponent(t)); }, -z, 1.0, 1e-13);
}

// ---------------------------------------------------------------- density

DensityEstimate estimate_density(const Sample& sample, const EvalRequest& req)
{
  validate(req);
  const auto [z, points] = local_window(sample, req);

  DensityEstimate out;
  out.x = req.x;
  out.h = req.h;
  out.z = z;
  out.n_window = points.size();
  if (points.empty())
    return out;

  BetaEstimate beta = estimate_beta(sample, req);
  const double denom = denominator(beta.beta, req);
  if (!(denom > 0.0) || !std::isfinite(denom))
    throw Error(ErrorKind::nonpositive_denominator,
                "denominator is not a positive finite number");

  const Polynomial m = req.kernel.density(z);
  double numer = 0.0;
  for (double xi : points)
    numer += m(scaled_offset(xi, req, z));
  numer /= static_cast<double>(sample.size()) * req.h;

  out.denominator = denom;
  out.f_hat = numer / denom;
  if (out.f_hat > 0.0)
    out.log_f_hat = std::log(out.f_hat);
  out.f_prime_hat = beta.beta(0) * out.f_hat;
  out.beta = std::move(beta);
  return out;
}

double estimate_logdensity(const Sample& sample, const EvalRequest& req)
{
  const auto est = estimate_density(sample, req);
  if (!est.log_f_hat)
    throw Error(ErrorKind::zero_density, "density estimate is zero");
  return *est.log_f_hat;
}

double estimate_hazard(const Sample& sample, const EvalRequest& req)
{
  validate(req);
  const double survivor = sample.survivor(req.x);
  if (!(survivor > 0.0))
    throw Error(ErrorKind::zero_survivor,
                "no observations beyond the evaluation point");
  return estimate_density(sample, req).f_hat / survivor;
}

// ---------------------------------------------------------------- curve

std::vector<CurvePoint> estimate_curve(const Sample& sample,
                                       std::span<const double> grid,
                                       const BandwidthRule& rule,
                                       const EvalRequest& base,
                                       unsigned threads)
{
  std::vector<CurvePoint> out(grid.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      CurvePoint& point = out[i];
      point.x = grid[i];
      try {
        point.h = rule.at(grid[i]);
        EvalRequest req = base;
        req.x = grid[i];
        req.h = point.h;
        point.estimate = estimate_density(sample, req);
        if (point.estimate->empty_window()) {
          point.error = ErrorKind::empty_window;
          point.message = "no observations in the window";
        }
      } catch (const Error& e) {
        point.estimate.reset();
        point.error = e.kind();
        point.message = e.what();
      }
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, grid.size()));
  if (threads == 1) {
    work(0, grid.size());
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (grid.size() + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(grid.size(), begin + chunk);
    if (begin < end)
      pool.emplace_back(work, begin, end);
  }
  for (auto& t : pool)
    t.join();
  return out;
}

} // namespace logdens
