#include "cli.hpp"

#include "logdens/asymptotics.hpp"
#include "logdens/csv.hpp"
#include "logdens/estimator.hpp"
#include "logdens/simulation.hpp"

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace logdens::cli {

namespace {

std::string trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(std::string_view text, const std::string& what)
{
  const std::string s = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorKind::config, "cannot parse " + what + " '" + s + "'");
  return v;
}

std::uint64_t parse_unsigned(std::string_view text, const std::string& what)
{
  const std::string s = trim(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorKind::config, "cannot parse " + what + " '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep)
{
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    parts.push_back(trim(item));
  return parts;
}

//! LOGDENS_THREADS caps the worker count; 0 requested means all cores.
unsigned thread_budget(unsigned requested)
{
  unsigned threads =
    requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LOGDENS_THREADS")) {
    const auto cap = parse_unsigned(env, "LOGDENS_THREADS");
    if (cap == 0)
      throw Error(ErrorKind::config, "LOGDENS_THREADS must be positive");
    threads = std::min<unsigned>(threads, static_cast<unsigned>(cap));
  }
  return threads;
}

std::vector<double> parse_grid(const std::string& input)
{
  const auto parts = split(input, ':');
  if (parts.size() != 3)
    throw Error(ErrorKind::config, "grid must be START:STOP:COUNT");
  const double start = parse_double(parts[0], "grid start");
  const double stop = parse_double(parts[1], "grid stop");
  const auto count = parse_unsigned(parts[2], "grid count");
  if (count == 0 || !(stop >= start))
    throw Error(ErrorKind::config, "grid needs COUNT >= 1 and STOP >= START");
  std::vector<double> grid(count);
  for (std::uint64_t i = 0; i < count; ++i)
    grid[i] = count == 1 ? start
                         : start + (stop - start) * static_cast<double>(i) /
                                     static_cast<double>(count - 1);
  return grid;
}

//! Output sink: a file when a path is given, else the caller's stream.
class Sink
{
public:
  Sink(const std::string& path, std::ostream& fallback)
  {
    if (path.empty()) {
      stream_ = &fallback;
      return;
    }
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_)
      throw Error(ErrorKind::config, "cannot open output file '" + path + "'");
    stream_ = &file_;
  }
  std::ostream& get() { return *stream_; }

private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

// ---------------------------------------------------------------- estimate

struct EstimateArgs
{
  std::string data;
  std::vector<double> xs;
  std::string grid;
  std::optional<double> h;
  bool auto_h = false;
  std::optional<double> ref_f;
  std::optional<double> ref_lpp;
  std::optional<double> chi0;
  std::optional<double> chi1;
  int order = 1;
  std::string g = "ps1";
  std::string m = "epan";
  std::string denom = "auto";
  std::string output;
  unsigned threads = 1;
};

int cmd_estimate(const EstimateArgs& a, std::ostream& out, std::ostream& err)
{
  if (a.xs.empty() == a.grid.empty())
    throw Error(ErrorKind::config, "give exactly one of --x and --grid");
  if (a.h.has_value() == a.auto_h)
    throw Error(ErrorKind::config, "give exactly one of --h and --auto-h");

  std::ifstream in(a.data);
  if (!in)
    throw Error(ErrorKind::config, "cannot read data file '" + a.data + "'");
  const Sample sample(parse_observations(in));
  const std::vector<double> grid = a.grid.empty() ? a.xs : parse_grid(a.grid);

  EvalRequest base;
  base.order = a.order;
  base.family = GFamily::from_name(a.g);
  base.kernel = MKernel::from_name(a.m);
  base.denominator = denominator_method_from_name(a.denom);
  if (base.order < 1)
    throw Error(ErrorKind::config, "--S must be >= 1");

  BandwidthRule rule{ 0.0, 0.0 };
  if (a.h) {
    if (!(*a.h > 0.0))
      throw Error(ErrorKind::config, "--h must be positive");
    rule = BandwidthRule::fixed(*a.h);
  } else {
    if (!a.ref_f || !a.ref_lpp)
      throw Error(ErrorKind::config,
                  "--auto-h needs reference values --ref-f and --ref-lpp");
    const double n = static_cast<double>(sample.size());
    rule.h0 = optimal_bandwidth(a.chi0.value_or(boundary_chi()), *a.ref_f,
                                *a.ref_lpp, n);
    rule.h1 = optimal_bandwidth(a.chi1.value_or(interior_chi()), *a.ref_f,
                                *a.ref_lpp, n);
  }

  Sink sink(a.output, out);
  const auto points = estimate_curve(sample, grid, rule, base, thread_budget(a.threads));

  CsvWriter csv(sink.get());
  std::vector<std::string> header{ "x", "z", "h", "f_hat", "L_hat" };
  for (int s = 1; s <= a.order; ++s)
    header.push_back("beta_" + std::to_string(s));
  header.push_back("f_prime_hat");
  header.push_back("status");
  csv.row(header);

  std::size_t good = 0;
  for (const auto& p : points) {
    std::vector<std::string> row{ format_number(p.x) };
    const bool have_h = p.h > 0.0;
    row.push_back(have_h ? format_number(boundary_ratio(p.x, p.h)) : "");
    row.push_back(have_h ? format_number(p.h) : "");
    if (p.estimate) {
      const auto& e = *p.estimate;
      row.push_back(format_number(e.f_hat));
      row.push_back(e.log_f_hat ? format_number(*e.log_f_hat) : "");
      for (int s = 0; s < a.order; ++s)
        row.push_back(e.beta ? format_number(e.beta->beta(s)) : "");
      row.push_back(format_number(e.f_prime_hat));
    } else {
      for (int s = 0; s < a.order + 3; ++s)
        row.emplace_back();
    }
    if (p.error) {
      row.emplace_back(to_string(*p.error));
      err << "logdens estimate: x = " << format_number(p.x) << ": " << p.message
          << '\n';
    } else {
      row.emplace_back("ok");
      ++good;
    }
    csv.row(row);
  }
  if (good == 0) {
    err << "logdens estimate: no grid point could be estimated\n";
    return exit_estimation;
  }
  return exit_ok;
}

// ---------------------------------------------------------------- asymptotics

struct AsymptoticsArgs
{
  int order = 1;
  double z = 1.0;
  std::string g = "ps1";
  std::string m = "epan";
  double f = 1.0;
  std::optional<double> lpp;
  std::optional<double> lnext;
  std::optional<double> n;
  int points = 11;
  std::string output;
};

int cmd_asymptotics(const AsymptoticsArgs& a, std::ostream& out, std::ostream&)
{
  if (a.order < 1)
    throw Error(ErrorKind::config, "--S must be >= 1");
  if (!(a.z >= 0.0 && a.z <= 1.0))
    throw Error(ErrorKind::config, "--z must lie in [0, 1]");
  if (a.points < 2)
    throw Error(ErrorKind::config, "--points must be >= 2");
  if (!(a.f > 0.0))
    throw Error(ErrorKind::config, "--f must be positive");
  const GFamily family = GFamily::from_name(a.g);
  const MKernel kernel = MKernel::from_name(a.m);
  const int S = a.order;

  // computed in full before anything is written
  const OmegaSystem system(family, S, a.z);
  const EquivalentKernel omega(kernel, family, S, a.z);
  const Eigen::VectorXd c = c_moments(kernel, S + 1, a.z);

  std::optional<double> lnext = a.lnext;
  if (!lnext && S == 1)
    lnext = a.lpp;

  Sink sink(a.output, out);
  CsvWriter csv(sink.get());
  csv.row({ "quantity", "i", "j", "t", "value" });
  auto emit = [&](const std::string& q, int i, int j, const std::string& t, double v) {
    csv.row({ q, i > 0 ? std::to_string(i) : "", j > 0 ? std::to_string(j) : "", t,
              format_number(v) });
  };

  for (int i = 0; i < S; ++i)
    for (int j = 0; j < S; ++j)
      emit("Omega", i + 1, j + 1, "", system.omega()(i, j));
  for (int i = 0; i < S; ++i)
    emit("Omega_next", i + 1, 0, "", system.omega_next()(i));
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < S; ++j)
      emit("V", i + 1, j + 1, "", system.gram()(i, j));
  for (int i = 0; i < S; ++i)
    emit("b", i + 1, 0, "", system.bias_direction()(i));
  for (int s = 1; s <= S + 1; ++s)
    emit("c", s, 0, "", c(s - 1));
  const Eigen::MatrixXd cov = system.beta_covariance() / a.f;
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < S; ++j)
      emit("beta_cov", i + 1, j + 1, "", cov(i, j));

  const auto& coef = omega.polynomial().coefficients();
  for (std::size_t k = 0; k < coef.size(); ++k)
    csv.row({ "omega_coef", std::to_string(k), "", "", format_number(coef[k]) });
  for (int i = 0; i < a.points; ++i) {
    const double t = -a.z + (1.0 + a.z) * i / (a.points - 1);
    emit("omega", i + 1, 0, format_number(t), omega(t));
  }

  emit("bias_constant", 0, 0, "", omega.bias_constant());
  emit("roughness", 0, 0, "", omega.roughness());
  emit("density_variance", 0, 0, "", a.f * omega.roughness());
  if (lnext)
    emit("density_bias", 0, 0, "", a.f * *lnext * omega.bias_constant());

  if (S == 1) {
    const double mu = omega.moment(2) / 2.0;
    if (std::abs(mu) > 1e-14) {
      const double chi = stationary_chi(omega);
      emit("chi_opt", 0, 0, "", chi);
      if (a.lpp && a.n && *a.lpp != 0.0)
        emit("h_opt", 0, 0, "", optimal_bandwidth(chi, a.f, *a.lpp, *a.n));
    }
  }
  return exit_ok;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs
{
  std::string config;
  bool paper = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> n;
  std::optional<double> theta;
  std::optional<std::string> designs;
  std::optional<std::string> estimators;
  std::optional<std::size_t> grid_points;
  std::optional<double> grid_span;
  std::optional<double> anchor;
  std::optional<double> kz_pilot_ratio;
  std::optional<double> kz_lambda;
  unsigned threads = 0;
  bool quiet = false;
  std::string output;
};

std::vector<DesignId> parse_designs(const std::string& s)
{
  std::vector<DesignId> out;
  for (const auto& p : split(s, ','))
    out.push_back(design_from_name(p));
  return out;
}

std::vector<EstimatorId> parse_estimators(const std::string& s)
{
  std::vector<EstimatorId> out;
  for (const auto& p : split(s, ','))
    out.push_back(estimator_from_name(p));
  return out;
}

void apply_config_file(const std::string& path, McConfig& config)
{
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorKind::config, e.what());
  }
  auto apply = [&config](const std::string& key, const std::string& value) {
    if (key == "designs") config.designs = parse_designs(value);
    else if (key == "estimators") config.estimators = parse_estimators(value);
    else if (key == "theta") config.theta = parse_double(value, key);
    else if (key == "reps") config.reps = parse_unsigned(value, key);
    else if (key == "n") config.n = parse_unsigned(value, key);
    else if (key == "grid_points") config.grid_points = parse_unsigned(value, key);
    else if (key == "grid_span") config.grid_span = parse_double(value, key);
    else if (key == "bandwidth_anchor") config.bandwidth_anchor = parse_double(value, key);
    else if (key == "kz_pilot_ratio") config.kz_pilot_ratio = parse_double(value, key);
    else if (key == "kz_lambda") config.kz_lambda = parse_double(value, key);
    else if (key == "seed") config.seed = parse_unsigned(value, key);
    else if (key == "threads") config.threads = static_cast<unsigned>(parse_unsigned(value, key));
    else throw Error(ErrorKind::config, "unknown config key '" + key + "'");
  };
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      apply(key, node.data());
      continue;
    }
    if (key != "simulation")
      throw Error(ErrorKind::config, "unknown config section [" + key + "]");
    for (const auto& [k, v] : node)
      apply(k, v.data());
  }
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err)
{
  if (a.paper && !a.config.empty())
    throw Error(ErrorKind::config, "--paper and --config are exclusive");
  McConfig config; // defaults are the published study
  if (!a.config.empty())
    apply_config_file(a.config, config);
  if (a.seed) config.seed = a.seed;
  if (a.reps) config.reps = *a.reps;
  if (a.n) config.n = *a.n;
  if (a.theta) config.theta = *a.theta;
  if (a.designs) config.designs = parse_designs(*a.designs);
  if (a.estimators) config.estimators = parse_estimators(*a.estimators);
  if (a.grid_points) config.grid_points = *a.grid_points;
  if (a.grid_span) config.grid_span = *a.grid_span;
  if (a.anchor) config.bandwidth_anchor = *a.anchor;
  if (a.kz_pilot_ratio) config.kz_pilot_ratio = *a.kz_pilot_ratio;
  if (a.kz_lambda) config.kz_lambda = *a.kz_lambda;
  config.threads = thread_budget(a.threads > 0 ? a.threads : config.threads);
  config.validate();

  Sink sink(a.output, out);
  static std::ostream* progress_stream = nullptr;
  progress_stream = a.quiet ? nullptr : &err;
  auto progress = [](std::size_t done, std::size_t total) {
    if (!progress_stream)
      return;
    const std::size_t step = std::max<std::size_t>(1, total / 20);
    if (done % step == 0 || done == total)
      *progress_stream << "logdens simulate: " << done << "/" << total
                       << " replications\n";
  };
  const McResult result = run_monte_carlo(config, progress);
  summarize(result, sink.get());
  return exit_ok;
}

bool is_input_error(ErrorKind k)
{
  return k == ErrorKind::config || k == ErrorKind::out_of_support;
}

} // namespace

std::vector<double> parse_observations(std::istream& in)
{
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const std::string s = trim(line);
    if (s.empty())
      continue;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
      throw Error(ErrorKind::config,
                  "line " + std::to_string(lineno) + ": not a number: '" + s + "'");
    values.push_back(v);
  }
  if (values.empty())
    throw Error(ErrorKind::config, "no observations in input");
  return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{ "Local log-polynomial density estimation", "logdens" };
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "estimate f, log f and L' on data");
  estimate->add_option("--data", est.data, "observations, one per line")
    ->required()
    ->check(CLI::ExistingFile);
  estimate->add_option("--x", est.xs, "evaluation point(s)");
  estimate->add_option("--grid", est.grid, "START:STOP:COUNT evaluation grid");
  estimate->add_option("--h", est.h, "fixed bandwidth");
  estimate->add_flag("--auto-h", est.auto_h,
                     "plug-in bandwidths from --ref-f and --ref-lpp");
  estimate->add_option("--ref-f", est.ref_f, "reference f(0) for --auto-h");
  estimate->add_option("--ref-lpp", est.ref_lpp, "reference L''(0) for --auto-h");
  estimate->add_option("--chi0", est.chi0, "boundary constant (default 2*15^(1/5))");
  estimate->add_option("--chi1", est.chi1, "interior constant (default 15^(1/5))");
  estimate->add_option("--S", est.order, "polynomial order");
  estimate->add_option("--g", est.g, "ps1, ps2 or ps3");
  estimate->add_option("--m", est.m, "epan or uniform");
  estimate->add_option("--denom", est.denom, "auto, exact, quad or bell");
  estimate->add_option("--threads", est.threads, "worker threads");
  estimate->add_option("-o,--output", est.output, "output CSV (default stdout)");

  AsymptoticsArgs asy;
  auto* asymptotics =
    app.add_subcommand("asymptotics", "asymptotic constants for a configuration");
  asymptotics->add_option("--S", asy.order, "polynomial order");
  asymptotics->add_option("--z", asy.z, "boundary ratio in [0, 1]");
  asymptotics->add_option("--g", asy.g, "ps1, ps2 or ps3");
  asymptotics->add_option("--m", asy.m, "epan or uniform");
  asymptotics->add_option("--f", asy.f, "density at x");
  asymptotics->add_option("--Lpp", asy.lpp, "L''(x)");
  asymptotics->add_option("--Lnext", asy.lnext, "L^(S+1)(x); defaults to --Lpp when S = 1");
  asymptotics->add_option("--n", asy.n, "sample size for h_opt");
  asymptotics->add_option("--points", asy.points, "omega sample points");
  asymptotics->add_option("-o,--output", asy.output, "output CSV (default stdout)");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo study");
  simulate->add_option("--config", sim.config, "key = value config file")
    ->check(CLI::ExistingFile);
  simulate->add_flag("--paper", sim.paper, "published study settings");
  simulate->add_option("--seed", sim.seed, "master seed (required)");
  simulate->add_option("--reps", sim.reps, "replications");
  simulate->add_option("--n", sim.n, "sample size");
  simulate->add_option("--theta", sim.theta, "design parameter");
  simulate->add_option("--designs", sim.designs, "comma list of f1..f4");
  simulate->add_option("--estimators", sim.estimators,
                       "comma list of ps1,ps2,ps3,loader,lscjm,kz");
  simulate->add_option("--grid-points", sim.grid_points, "points on [0, span*h1]");
  simulate->add_option("--grid-span", sim.grid_span, "grid extent in units of h1");
  simulate->add_option("--bandwidth-anchor", sim.anchor, "x at which oracle h uses f, L''");
  simulate->add_option("--kz-pilot-ratio", sim.kz_pilot_ratio, "KZ pilot h / ps1 h0");
  simulate->add_option("--kz-lambda", sim.kz_lambda, "KZ cubic coefficient");
  simulate->add_option("--threads", sim.threads, "worker threads (0 = all)");
  simulate->add_flag("--quiet", sim.quiet, "no progress output");
  simulate->add_option("-o,--output", sim.output, "output CSV (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_bad_input;
  }

  try {
    if (estimate->parsed())
      return cmd_estimate(est, out, err);
    if (asymptotics->parsed())
      return cmd_asymptotics(asy, out, err);
    if (!sim.seed && sim.config.empty())
      throw Error(ErrorKind::config, "--seed is required");
    return cmd_simulate(sim, out, err);
  } catch (const Error& e) {
    err << "logdens: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return is_input_error(e.kind()) ? exit_bad_input : exit_estimation;
  } catch (const std::exception& e) {
    err << "logdens: " << e.what() << '\n';
    return exit_bad_input;
  }
}

} // namespace logdens::cli
