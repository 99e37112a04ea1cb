#include <doctest.h>

#include "logdens/error.hpp"
#include "logdens/kernel_algebra.hpp"

#include <cmath>
#include <functional>

using namespace logdens;

namespace {

// composite Simpson on a fine mesh, independent of the library quadrature
double simpson(const std::function<double(double)>& f, double a, double b, int n = 4000)
{
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i)
    acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

double fact(int n)
{
  return n <= 1 ? 1.0 : n * fact(n - 1);
}

const double zgrid[] = { 0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0 };

} // namespace

TEST_CASE("g families vanish at both ends of the window")
{
  for (const auto& g : { GFamily::ps1(), GFamily::ps2(), GFamily::ps3() })
    for (double z : zgrid)
      for (int j = 1; j <= 5; ++j) {
        const Polynomial p = g.component(j, z);
        CHECK(std::abs(p(-z)) <= 1e-12);
        CHECK(std::abs(p(1.0)) <= 1e-12);
      }
}

TEST_CASE("g evaluation examples")
{
  CHECK(g_eval(GFamily::ps1(), 1, 0.5, 0.2) == doctest::Approx(0.7 * 0.8));
  CHECK(g_eval(GFamily::ps2(), 2, 1.0, 0.0) == doctest::Approx(1.0));
  CHECK(g_eval(GFamily::ps3(), 1, 0.0, 0.5) ==
        doctest::Approx(0.5 * (0.5 - 1.0) * (0.5 - 5.0 / 7.0)));
  CHECK(g_eval(GFamily::ps1(), 1, 0.5, -0.6) == 0.0);
  CHECK(g_eval(GFamily::ps1(), 1, 0.5, 1.2) == 0.0);
  // g'(t) for (t + z)(1 - t) is 1 - z - 2t
  CHECK(g_prime_eval(GFamily::ps1(), 1, 0.25, 0.1) == doctest::Approx(0.55));
  CHECK_THROWS_AS(GFamily::from_name("ps9"), Error);
}

TEST_CASE("closed-form entries match quadrature")
{
  for (double z : zgrid)
    for (int j = 1; j <= 6; ++j)
      for (int s = 1; s <= 6; ++s) {
        const double om = simpson(
          [&](double t) {
            return std::pow(z + t, j) * (1.0 - t) * std::pow(t, s - 1) / fact(s - 1);
          },
          -z, 1.0);
        CHECK(omega_entry(j, s, z) == doctest::Approx(om).epsilon(1e-10).scale(1.0));
        const double v = simpson(
          [&](double t) {
            auto dg = [&](int k) {
              return k * std::pow(z + t, k - 1) * (1.0 - t) - std::pow(z + t, k);
            };
            return dg(j) * dg(s);
          },
          -z, 1.0);
        CHECK(v_entry(j, s, z) == doctest::Approx(v).epsilon(1e-10).scale(1.0));
      }
}

TEST_CASE("golden moment values")
{
  CHECK(omega_entry(1, 1, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(omega_entry(1, 1, 0.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(omega_entry(1, 2, 0.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  CHECK(std::abs(omega_entry(1, 2, 1.0)) < 1e-12);
  CHECK(v_entry(1, 1, 1.0) == doctest::Approx(8.0 / 3.0));
  CHECK(v_entry(1, 1, 0.0) == doctest::Approx(1.0 / 3.0));
  CHECK(v_entry(1, 2, 1.0) == doctest::Approx(8.0 / 3.0));
}

TEST_CASE("omega system for ps1")
{
  SUBCASE("S = 1 interior and boundary")
  {
    const OmegaSystem interior(GFamily::ps1(), 1, 1.0);
    CHECK(std::abs(interior.omega()(0, 0)) == doctest::Approx(4.0 / 3.0));
    CHECK(std::abs(interior.bias_direction()(0)) < 1e-12);
    CHECK(interior.beta_covariance()(0, 0) == doctest::Approx(1.5));

    const OmegaSystem boundary(GFamily::ps1(), 1, 0.0);
    CHECK(boundary.bias_direction()(0) == doctest::Approx(0.5));
    CHECK(boundary.beta_covariance()(0, 0) == doctest::Approx(12.0));
  }
  SUBCASE("S = 2")
  {
    CHECK(bias_vector(2, 0.0, GFamily::ps1())(0) == doctest::Approx(-0.1));
    CHECK(bias_vector(2, 1.0, GFamily::ps1())(0) == doctest::Approx(0.1));
  }
  SUBCASE("12 / (1 + z)^3 across z")
  {
    for (double z : zgrid) {
      const OmegaSystem sys(GFamily::ps1(), 1, z);
      CHECK(sys.beta_covariance()(0, 0) ==
            doctest::Approx(12.0 / std::pow(1.0 + z, 3)).epsilon(1e-10));
    }
  }
  SUBCASE("exact and quadrature assembly agree")
  {
    for (double z : { 0.0, 0.35, 1.0 }) {
      const OmegaSystem a(GFamily::ps1(), 3, z, IntegrationMethod::exact);
      const OmegaSystem b(GFamily::ps1(), 3, z, IntegrationMethod::quadrature);
      CHECK((a.omega() - b.omega()).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((a.gram() - b.gram()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("c moments of the truncated Epanechnikov")
{
  const auto m = MKernel::epanechnikov();
  CHECK(c_moment(m, 0, 0.3) == doctest::Approx(1.0));
  CHECK(c_moment(m, 1, 0.0) == doctest::Approx(3.0 / 8.0));
  CHECK(c_moment(m, 2, 1.0) == doctest::Approx(0.1));
  CHECK(c_moment(m, 2, 0.0) == doctest::Approx(0.1));
  CHECK(std::abs(c_moment(m, 1, 1.0)) < 1e-14);
  CHECK(m.normalization(0.4) == doctest::Approx(3.0 / (1.96 * 1.6)));
  for (double z : zgrid)
    CHECK(m.density(z).integrate(-z, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("equivalent kernels")
{
  const auto epan = MKernel::epanechnikov();
  auto coefs = [](const EquivalentKernel& w) {
    std::vector<double> c;
    for (int k = 0; k <= 2; ++k)
      c.push_back(w.polynomial().coefficient(k));
    return c;
  };

  SUBCASE("boundary kernels at z = 0")
  {
    const EquivalentKernel w2(epan, GFamily::ps2(), 1, 0.0);
    const auto c2 = coefs(w2);
    CHECK(c2[0] == doctest::Approx(6.0));
    CHECK(c2[1] == doctest::Approx(-18.0));
    CHECK(c2[2] == doctest::Approx(12.0));
    CHECK(w2.roughness() == doctest::Approx(4.8));

    const EquivalentKernel w3(epan, GFamily::ps3(), 1, 0.0);
    const auto c3 = coefs(w3);
    CHECK(c3[0] == doctest::Approx(9.0));
    CHECK(c3[1] == doctest::Approx(-36.0));
    CHECK(c3[2] == doctest::Approx(30.0));
    CHECK(w3.roughness() == doctest::Approx(9.0));
    CHECK(std::abs(w3.bias_constant()) < 1e-12);

    const OmegaSystem s3(GFamily::ps3(), 1, 0.0);
    CHECK(s3.omega()(0, 0) == doctest::Approx(-1.0 / 28.0));
    CHECK(s3.omega_next()(0) == doctest::Approx(-1.0 / 105.0));
    CHECK(s3.bias_direction()(0) == doctest::Approx(4.0 / 15.0));

    const EquivalentKernel wu(MKernel::uniform(), GFamily::ps1(), 1, 0.0);
    CHECK(wu(0.0) == doctest::Approx(4.0));
    CHECK(wu(1.0) == doctest::Approx(-2.0));
  }

  SUBCASE("ps1 roughness and bias constants")
  {
    const EquivalentKernel w0(epan, GFamily::ps1(), 1, 0.0);
    CHECK(w0.roughness() == doctest::Approx(4.0125));
    CHECK(w0.bias_constant() == doctest::Approx(-7.0 / 80.0));
    const EquivalentKernel w1(epan, GFamily::ps1(), 1, 1.0);
    CHECK(w1.roughness() == doctest::Approx(0.6));
    CHECK(w1.bias_constant() == doctest::Approx(0.1));
    // at z = 1 the kernel is the Epanechnikov kernel itself
    for (double t : { -0.9, -0.2, 0.0, 0.5 })
      CHECK(w1(t) == doctest::Approx(0.75 * (1.0 - t * t)));
    CHECK(w1(1.5) == 0.0);
  }

  SUBCASE("interior kernel with no second-order bias")
  {
    const auto m = MKernel::custom(
      [](double) { return Polynomial{ 1.0, -1.0, -1.0, 1.0 }; }, "skewed");
    const auto g = GFamily::custom(
      [](int, double) { return Polynomial{ -1.0, 2.0, 1.0 }; }, "q");
    const EquivalentKernel w(m, g, 1, 1.0);
    for (double t : { -1.0, -0.3, 0.0, 0.6, 1.0 })
      CHECK(w(t) == doctest::Approx(0.375 * (3.0 - 5.0 * t * t)));
    CHECK(w.roughness() == doctest::Approx(9.0 / 8.0));
    CHECK(std::abs(w.moment(2)) < 1e-12);
  }

  SUBCASE("flipping the sign of g leaves the kernel unchanged")
  {
    const auto neg = GFamily::custom(
      [](int j, double z) { return -1.0 * Polynomial{ z, 1.0 }.pow(j - 1) * Polynomial{ 1.0, -1.0 }; },
      "neg-ps2");
    for (double z : { 0.0, 0.4, 1.0 }) {
      const EquivalentKernel a(epan, GFamily::ps2(), 2, z);
      const EquivalentKernel b(epan, neg, 2, z);
      for (double t = -z; t <= 1.0; t += 0.1)
        CHECK(a(t) == doctest::Approx(b(t)).epsilon(1e-10));
    }
  }
}

TEST_CASE("kernel order conditions")
{
  for (const auto& m : { MKernel::epanechnikov(), MKernel::uniform() })
    for (const auto& g : { GFamily::ps1(), GFamily::ps2(), GFamily::ps3() })
      for (int S = 1; S <= 3; ++S)
        for (double z : zgrid) {
          const EquivalentKernel w(m, g, S, z);
          CHECK(w.moment(0) == doctest::Approx(1.0).epsilon(1e-9));
          for (int s = 1; s <= S; ++s)
            CHECK(std::abs(w.moment(s)) <= 1e-9);
        }
}

TEST_CASE("errors")
{
  const auto zero = GFamily::custom([](int, double) { return Polynomial{ 0.0 }; });
  try {
    OmegaSystem sys(zero, 1, 0.5);
    FAIL("expected a singular system");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::singular_system);
  }
  const auto bad = MKernel::custom([](double) { return Polynomial{ 0.0, 1.0 }; });
  CHECK_THROWS_AS(bad.density(0.5), Error);
  CHECK_THROWS_AS(boundary_ratio(-0.1, 1.0), Error);
  CHECK_THROWS_AS(boundary_ratio(0.1, 0.0), Error);
  CHECK(boundary_ratio(0.3, 0.6) == doctest::Approx(0.5));
  CHECK(boundary_ratio(3.0, 0.6) == 1.0);
}
