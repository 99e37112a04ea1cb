#pragma once

#include <initializer_list>
#include <vector>

namespace logdens {

//! Dense univariate polynomial, coefficients in increasing powers of t.
class Polynomial
{
public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefs);
  Polynomial(std::initializer_list<double> coefs);

  static Polynomial constant(double c) { return Polynomial({ c }); }
  //! (t - root)
  static Polynomial linear_root(double root) { return Polynomial({ -root, 1.0 }); }

  double operator()(double t) const;

  Polynomial derivative() const;
  Polynomial antiderivative() const;
  //! Exact definite integral over [a, b].
  double integrate(double a, double b) const;

  Polynomial pow(unsigned k) const;

  int degree() const { return static_cast<int>(coefs_.size()) - 1; }
  const std::vector<double>& coefficients() const { return coefs_; }
  double coefficient(std::size_t k) const
  {
    return k < coefs_.size() ? coefs_[k] : 0.0;
  }

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(const Polynomial& rhs);
  Polynomial& operator*=(double c);

  friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs)
  {
    return lhs += rhs;
  }
  friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs)
  {
    return lhs -= rhs;
  }
  friend Polynomial operator*(Polynomial lhs, const Polynomial& rhs)
  {
    return lhs *= rhs;
  }
  friend Polynomial operator*(Polynomial lhs, double c) { return lhs *= c; }
  friend Polynomial operator*(double c, Polynomial rhs) { return rhs *= c; }
  friend Polynomial operator-(Polynomial p) { return p *= -1.0; }

private:
  void trim();

  std::vector<double> coefs_;
};

} // namespace logdens
