#include <doctest.h>

#include "cli.hpp"
#include "logdens/designs.hpp"
#include "logdens/estimator.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace logdens;
namespace fs = std::filesystem;

namespace {

class TempDir
{
public:
  TempDir()
  {
    path_ = fs::temp_directory_path() /
            ("logdens_it_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "_" +
             std::to_string(std::rand()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

private:
  fs::path path_;
};

int run(std::vector<std::string> args, std::string* out = nullptr)
{
  std::ostringstream o;
  std::ostringstream e;
  const int code = cli::run(args, o, e);
  if (out)
    *out = o.str();
  return code;
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("sample, write, estimate through the command line")
{
  TempDir dir;
  const Design d{ DesignId::f3, 4.0 };
  Rng rng(42);
  const Sample s = sample_design(d, 20000, rng);
  {
    std::ofstream data(dir / "obs.txt");
    data << "# f3 draws\n";
    data.precision(17);
    for (double v : s.values())
      data << v << '\n';
  }
  const auto csv = dir / "est.csv";
  REQUIRE(run({ "estimate", "--data", (dir / "obs.txt").string(), "--grid", "0:2:5", "--h",
                "0.4", "--g", "ps2", "-o", csv.string() }) == 0);
  std::istringstream in(slurp(csv));
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    const double x = std::stod(line.substr(0, line.find(',')));
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> f;
    while (std::getline(ls, field, ','))
      f.push_back(field);
    const double fhat = std::stod(f[3]);
    // the library call on the same data matches bit for bit
    EvalRequest req;
    req.x = x;
    req.h = 0.4;
    req.family = GFamily::ps2();
    CHECK(fhat == estimate_density(s, req).f_hat);
    CHECK(std::abs(fhat - true_density(d, x)) < 0.05);
    ++rows;
  }
  CHECK(rows == 5);
}

TEST_CASE("config file drives the simulation")
{
  TempDir dir;
  {
    std::ofstream cfg(dir / "mc.ini");
    cfg << "[simulation]\nseed = 9\nreps = 5\nn = 100\ndesigns = f2\n"
           "estimators = ps2,loader,lscjm\ngrid_points = 3\n";
  }
  std::string from_file;
  REQUIRE(run({ "simulate", "--config", (dir / "mc.ini").string(), "--quiet" }, &from_file) == 0);
  std::string from_flags;
  REQUIRE(run({ "simulate", "--seed", "9", "--reps", "5", "--n", "100", "--designs", "f2",
                "--estimators", "ps2,loader,lscjm", "--grid-points", "3", "--quiet" },
              &from_flags) == 0);
  CHECK(from_file == from_flags);

  // flags override the file
  std::string over;
  REQUIRE(run({ "simulate", "--config", (dir / "mc.ini").string(), "--seed", "10", "--quiet" },
              &over) == 0);
  CHECK(over != from_file);

  {
    std::ofstream bad(dir / "bad.ini");
    bad << "[simulation]\nseed = 9\nwidth = 3\n";
  }
  CHECK(run({ "simulate", "--config", (dir / "bad.ini").string() }) == cli::exit_bad_input);
  CHECK(run({ "simulate", "--config", (dir / "mc.ini").string(), "--paper" }) ==
        cli::exit_bad_input);
}

TEST_CASE("published settings with a reduced replication count")
{
  TempDir dir;
  const auto out = dir / "study.csv";
  REQUIRE(run({ "simulate", "--paper", "--seed", "1", "--reps", "3", "--quiet", "-o",
                out.string() }) == 0);
  const std::string csv = slurp(out);
  std::istringstream in(csv);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line))
    ++rows;
  CHECK(rows == 1 + 4 * 6 * 2 * 41);
  CHECK(csv.find("f4,loader,f_prime,") != std::string::npos);
}
