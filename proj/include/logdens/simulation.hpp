#pragma once

#include "logdens/designs.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace logdens {

enum class EstimatorId
{
  ps1,
  ps2,
  ps3,
  loader,
  lscjm,
  kz,
};

std::string_view to_string(EstimatorId id);
EstimatorId estimator_from_name(std::string_view name);

enum class Target
{
  density,
  density_deriv,
};

std::string_view to_string(Target t);

struct McConfig
{
  std::vector<DesignId> designs{ DesignId::f1, DesignId::f2, DesignId::f3,
                                 DesignId::f4 };
  double theta = 4.0;
  std::size_t reps = 2000;
  std::size_t n = 500;
  std::vector<EstimatorId> estimators{ EstimatorId::lscjm, EstimatorId::ps1,
                                       EstimatorId::ps2,   EstimatorId::ps3,
                                       EstimatorId::kz,    EstimatorId::loader };
  //! Equally spaced evaluation points on [0, grid_span * h1].
  std::size_t grid_points = 41;
  double grid_span = 2.0;
  //! Point at which the true f and L'' enter the oracle bandwidths.
  double bandwidth_anchor = 0.0;
  //! KZ pilot bandwidth as a multiple of the ps1 boundary bandwidth.
  double kz_pilot_ratio = 0.48270571907951229; // (1.35 / 12)^(1/3)
  double kz_lambda = 1.0 / 3.0;
  std::optional<std::uint64_t> seed;
  //! 0 = hardware concurrency.
  unsigned threads = 0;

  //! Throws config on invalid settings, including a missing seed.
  void validate() const;
};

//! Oracle bandwidths for one design.
struct BandwidthPlan
{
  double h0 = 0.0;     // boundary chi = 2 * 15^(1/5): ps2, loader, lscjm
  double h1 = 0.0;     // interior; also the KZ main bandwidth
  double h0_ps1 = 0.0; // minimizer of the ps1 boundary AMSE
  double h0_ps3 = 0.0; // ps3 variance matched to ps2 at z = 0
  double h_pilot = 0.0; // KZ pilot, kz_pilot_ratio * h0_ps1

  double at(EstimatorId est, double x) const;
};

BandwidthPlan bandwidth_plan(const Design& d, const McConfig& config);

struct McCell
{
  DesignId design;
  EstimatorId estimator;
  Target target;
  double x = 0.0;
  double z = 0.0;
  double h = 0.0;
  double bias = 0.0;
  double rmse = 0.0;
  //! Replications with a usable estimate.
  std::size_t reps = 0;
  std::size_t n_errors = 0;
};

struct McResult
{
  McConfig config;
  std::uint64_t seed = 0;
  std::vector<McCell> cells;

  const McCell* find(DesignId d, EstimatorId e, Target t, std::size_t grid_index) const;
};

//! Progress callback: (completed replications, total replications).
using ProgressFn = void (*)(std::size_t, std::size_t);

McResult run_monte_carlo(const McConfig& config, ProgressFn progress = nullptr);

//! Header plus one row per cell.
void summarize(const McResult& result, std::ostream& out);

//! Recursive pairwise sum in index order.
double pairwise_sum(const double* values, std::size_t count);

} // namespace logdens
