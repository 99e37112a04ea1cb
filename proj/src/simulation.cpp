#include "logdens/simulation.hpp"

#include "logdens/asymptotics.hpp"
#include "logdens/comparators.hpp"
#include "logdens/csv.hpp"
#include "logdens/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

namespace logdens {

std::string_view to_string(EstimatorId id)
{
  switch (id) {
    case EstimatorId::ps1: return "ps1";
    case EstimatorId::ps2: return "ps2";
    case EstimatorId::ps3: return "ps3";
    case EstimatorId::loader: return "loader";
    case EstimatorId::lscjm: return "lscjm";
    case EstimatorId::kz: return "kz";
  }
  return "?";
}

EstimatorId estimator_from_name(std::string_view name)
{
  for (auto id : { EstimatorId::ps1, EstimatorId::ps2, EstimatorId::ps3,
                   EstimatorId::loader, EstimatorId::lscjm, EstimatorId::kz })
    if (name == to_string(id))
      return id;
  throw Error(ErrorKind::config, "unknown estimator '" + std::string(name) + "'");
}

std::string_view to_string(Target t)
{
  return t == Target::density ? "f" : "f_prime";
}

void McConfig::validate() const
{
  if (!seed)
    throw Error(ErrorKind::config, "a seed is required");
  if (reps < 1)
    throw Error(ErrorKind::config, "reps must be >= 1");
  if (n < 2)
    throw Error(ErrorKind::config, "n must be >= 2");
  if (designs.empty() || estimators.empty())
    throw Error(ErrorKind::config, "need at least one design and one estimator");
  if (grid_points < 1)
    throw Error(ErrorKind::config, "grid_points must be >= 1");
  if (!(grid_span >= 0.0) || !std::isfinite(grid_span))
    throw Error(ErrorKind::config, "grid_span must be nonnegative");
  if (!(theta > 0.0))
    throw Error(ErrorKind::config, "theta must be positive");
  if (!(kz_pilot_ratio > 0.0))
    throw Error(ErrorKind::config, "kz_pilot_ratio must be positive");
  if (!(kz_lambda > 1.0 / 12.0))
    throw Error(ErrorKind::config, "kz_lambda must exceed 1/12");
  if (!(bandwidth_anchor >= 0.0))
    throw Error(ErrorKind::config, "bandwidth_anchor must be nonnegative");
  for (auto d : designs)
    true_density({ d, theta }, bandwidth_anchor);
}

double BandwidthPlan::at(EstimatorId est, double x) const
{
  switch (est) {
    case EstimatorId::kz: return h1;
    case EstimatorId::ps3: return bandwidth_interpolate(x, h0_ps3, h1);
    case EstimatorId::ps1: return bandwidth_interpolate(x, h0_ps1, h1);
    default: return bandwidth_interpolate(x, h0, h1);
  }
}

BandwidthPlan bandwidth_plan(const Design& d, const McConfig& config)
{
  const double f = true_density(d, config.bandwidth_anchor);
  const double lpp = true_log_second_deriv(d, config.bandwidth_anchor);
  const double n = static_cast<double>(config.n);
  BandwidthPlan plan;
  plan.h1 = optimal_bandwidth(interior_chi(), f, lpp, n);
  plan.h0 = optimal_bandwidth(boundary_chi(), f, lpp, n);
  const auto m = MKernel::epanechnikov();
  const double chi_ps1 =
    stationary_chi(EquivalentKernel(m, GFamily::ps1(), 1, 0.0));
  plan.h0_ps1 = optimal_bandwidth(chi_ps1, f, lpp, n);
  plan.h0_ps3 = plan.h0 * ps3_boundary_bandwidth_ratio();
  plan.h_pilot = plan.h0_ps1 * config.kz_pilot_ratio;
  return plan;
}

const McCell* McResult::find(DesignId d,
                             EstimatorId e,
                             Target t,
                             std::size_t grid_index) const
{
  for (const auto& c : cells) {
    if (c.design != d || c.estimator != e || c.target != t)
      continue;
    if (grid_index == 0)
      return &c;
    --grid_index;
  }
  return nullptr;
}

double pairwise_sum(const double* values, std::size_t count)
{
  if (count <= 8) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i)
      acc += values[i];
    return acc;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

namespace {

constexpr double missing = std::numeric_limits<double>::quiet_NaN();

struct PointEstimate
{
  double f;
  double fp;
};

PointEstimate evaluate(EstimatorId est,
                       const Sample& sample,
                       double x,
                       double h,
                       double kz_pilot,
                       const McConfig& config)
{
  switch (est) {
    case EstimatorId::ps1:
    case EstimatorId::ps2:
    case EstimatorId::ps3: {
      EvalRequest req;
      req.x = x;
      req.h = h;
      req.family = est == EstimatorId::ps1   ? GFamily::ps1()
                   : est == EstimatorId::ps2 ? GFamily::ps2()
                                             : GFamily::ps3();
      const auto e = estimate_density(sample, req);
      if (e.empty_window())
        throw Error(ErrorKind::empty_window, "no observations in the window");
      return { e.f_hat, e.f_prime_hat };
    }
    case EstimatorId::loader: {
      const auto e = loader_density(sample, x, h);
      return { e.density, e.density * e.log_deriv };
    }
    case EstimatorId::lscjm: {
      const auto e = ls_cjm_density(sample, x, h);
      return { e.density, e.density_deriv };
    }
    case EstimatorId::kz: {
      const auto e =
        kz_density_with_pilot(sample, x, h, kz_pilot, { config.kz_lambda });
      return { e.density, e.density_deriv };
    }
  }
  return { missing, missing };
}

} // namespace

McResult run_monte_carlo(const McConfig& config, ProgressFn progress)
{
  config.validate();

  const std::size_t D = config.designs.size();
  const std::size_t E = config.estimators.size();
  const std::size_t G = config.grid_points;
  const std::size_t R = config.reps;
  const std::size_t per_rep = E * G * 2;

  std::vector<BandwidthPlan> plans(D);
  std::vector<std::vector<double>> grids(D, std::vector<double>(G));
  std::vector<std::vector<double>> truth(D, std::vector<double>(G * 2));
  for (std::size_t d = 0; d < D; ++d) {
    const Design design{ config.designs[d], config.theta };
    plans[d] = bandwidth_plan(design, config);
    for (std::size_t k = 0; k < G; ++k) {
      const double x =
        G == 1 ? 0.0
               : config.grid_span * plans[d].h1 * static_cast<double>(k) /
                   static_cast<double>(G - 1);
      grids[d][k] = x;
      truth[d][2 * k] = true_density(design, x);
      truth[d][2 * k + 1] = true_density_deriv(design, x);
    }
  }

  // errors[d][r * per_rep + (e * G + k) * 2 + target], NaN when the
  // estimator failed
  std::vector<std::vector<double>> errors(D, std::vector<double>(R * per_rep));

  auto run_task = [&](std::size_t task) {
    const std::size_t d = task / R;
    const std::size_t r = task % R;
    const Design design{ config.designs[d], config.theta };
    Rng rng = Rng::stream(*config.seed,
                          static_cast<std::uint64_t>(config.designs[d]),
                          static_cast<std::uint64_t>(r));
    const Sample sample = sample_design(design, config.n, rng);

    double pilot = 0.0;
    if (std::find(config.estimators.begin(), config.estimators.end(),
                  EstimatorId::kz) != config.estimators.end()) {
      try {
        pilot = kz_pilot_log_derivative(sample, plans[d].h_pilot);
      } catch (const Error&) {
        pilot = 0.0; // simple reflection
      }
    }

    double* out = errors[d].data() + r * per_rep;
    for (std::size_t e = 0; e < E; ++e) {
      const EstimatorId est = config.estimators[e];
      for (std::size_t k = 0; k < G; ++k) {
        const double x = grids[d][k];
        double* cell = out + (e * G + k) * 2;
        try {
          const auto p = evaluate(est, sample, x, plans[d].at(est, x), pilot, config);
          cell[0] = p.f - truth[d][2 * k];
          cell[1] = p.fp - truth[d][2 * k + 1];
          if (!std::isfinite(cell[0]) || !std::isfinite(cell[1]))
            cell[0] = cell[1] = missing;
        } catch (const Error&) {
          cell[0] = cell[1] = missing;
        }
      }
    }
  };

  const std::size_t total = D * R;
  unsigned threads = config.threads;
  if (threads == 0)
    threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));

  std::atomic<std::size_t> next{ 0 };
  std::atomic<std::size_t> done{ 0 };
  std::mutex progress_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total)
        return;
      run_task(task);
      const std::size_t finished = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, total);
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i)
      pool.emplace_back(worker);
    for (auto& t : pool)
      t.join();
  }

  McResult result;
  result.config = config;
  result.seed = *config.seed;
  result.cells.reserve(D * E * G * 2);
  std::vector<double> err;
  std::vector<double> sq;
  err.reserve(R);
  sq.reserve(R);
  for (std::size_t d = 0; d < D; ++d) {
    for (std::size_t e = 0; e < E; ++e) {
      const EstimatorId est = config.estimators[e];
      for (Target target : { Target::density, Target::density_deriv }) {
        const std::size_t t = target == Target::density ? 0 : 1;
        for (std::size_t k = 0; k < G; ++k) {
          err.clear();
          sq.clear();
          for (std::size_t r = 0; r < R; ++r) {
            const double v = errors[d][r * per_rep + (e * G + k) * 2 + t];
            if (std::isnan(v))
              continue;
            err.push_back(v);
            sq.push_back(v * v);
          }
          McCell cell{ config.designs[d], est, target };
          cell.x = grids[d][k];
          cell.h = plans[d].at(est, cell.x);
          cell.z = boundary_ratio(cell.x, cell.h);
          cell.reps = err.size();
          cell.n_errors = R - err.size();
          if (!err.empty()) {
            const double m = static_cast<double>(err.size());
            cell.bias = pairwise_sum(err.data(), err.size()) / m;
            cell.rmse = std::sqrt(pairwise_sum(sq.data(), sq.size()) / m);
          } else {
            cell.bias = cell.rmse = missing;
          }
          result.cells.push_back(cell);
        }
      }
    }
  }
  return result;
}

void summarize(const McResult& result, std::ostream& out)
{
  CsvWriter csv(out);
  csv.row({ "design", "estimator", "target", "x", "z", "h", "bias", "rmse",
            "reps", "n_errors", "seed" });
  const std::string seed = std::to_string(result.seed);
  for (const auto& c : result.cells)
    csv.row({ std::string(to_string(c.design)), std::string(to_string(c.estimator)),
              std::string(to_string(c.target)), format_number(c.x),
              format_number(c.z), format_number(c.h), format_number(c.bias),
              format_number(c.rmse), std::to_string(c.reps),
              std::to_string(c.n_errors), seed });
}

} // namespace logdens
