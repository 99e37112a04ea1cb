#include <doctest.h>

#include "logdens/polynomial.hpp"
#include "logdens/quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace logdens;

TEST_CASE("polynomial arithmetic")
{
  const Polynomial p{ 1.0, -2.0, 3.0 }; // 1 - 2t + 3t^2
  CHECK(p(2.0) == doctest::Approx(9.0));
  CHECK(p.degree() == 2);
  CHECK(p.derivative()(1.0) == doctest::Approx(4.0));
  CHECK(p.integrate(0.0, 1.0) == doctest::Approx(1.0));

  const Polynomial q = p * Polynomial::linear_root(1.0);
  CHECK(q(1.0) == doctest::Approx(0.0));
  CHECK(q.degree() == 3);

  const Polynomial cube = Polynomial{ 1.0, 1.0 }.pow(3);
  CHECK(cube.coefficient(0) == 1.0);
  CHECK(cube.coefficient(1) == 3.0);
  CHECK(cube.coefficient(2) == 3.0);
  CHECK(cube.coefficient(3) == 1.0);
  CHECK(Polynomial{ 1.0, 1.0 }.pow(0)(5.0) == 1.0);
}

TEST_CASE("trailing zeros are trimmed")
{
  const Polynomial p{ 1.0, 2.0 };
  const Polynomial d = p - Polynomial{ 0.0, 2.0 };
  CHECK(d.degree() == 0);
  CHECK((p - p).degree() <= 0);
  CHECK((p - p)(3.0) == 0.0);
}

TEST_CASE("antiderivative inverts derivative")
{
  const Polynomial p{ 0.5, -1.0, 0.25, 4.0 };
  const Polynomial back = p.antiderivative().derivative();
  for (double t : { -1.0, 0.0, 0.3, 2.0 })
    CHECK(back(t) == doctest::Approx(p(t)));
}

TEST_CASE("Gauss-Legendre rule is exact to degree 2n-1")
{
  for (std::size_t order : { 1u, 2u, 5u, 20u, 32u }) {
    const auto& rule = GaussLegendreRule::get(order);
    CHECK(rule.order() == order);
    double wsum = 0.0;
    for (double w : rule.weights())
      wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    const int deg = static_cast<int>(2 * order - 1);
    const double got =
      rule.integrate([deg](double t) { return std::pow(t, deg - 1); }, 0.0, 1.0);
    CHECK(got == doctest::Approx(1.0 / deg).epsilon(1e-13));
  }
}

TEST_CASE("adaptive quadrature")
{
  const auto r = adaptive_integrate([](double t) { return std::exp(t); }, -1.0, 2.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(std::exp(2.0) - std::exp(-1.0)).epsilon(1e-14));

  // kink inside the interval
  const auto k = adaptive_integrate([](double t) { return std::abs(t - 0.3); }, 0.0, 1.0);
  CHECK(k.value == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-11));

  const double pi4 = integrate([](double t) { return 1.0 / (1.0 + t * t); }, 0.0, 1.0);
  CHECK(pi4 == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-14));
}
