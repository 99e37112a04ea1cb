#include "logdens/polynomial.hpp"

#include <algorithm>

namespace logdens {

Polynomial::Polynomial(std::vector<double> coefs)
  : coefs_(std::move(coefs))
{
  trim();
}

Polynomial::Polynomial(std::initializer_list<double> coefs)
  : coefs_(coefs)
{
  trim();
}

void Polynomial::trim()
{
  while (!coefs_.empty() && coefs_.back() == 0.0)
    coefs_.pop_back();
}

double Polynomial::operator()(double t) const
{
  double acc = 0.0;
  for (auto it = coefs_.rbegin(); it != coefs_.rend(); ++it)
    acc = acc * t + *it;
  return acc;
}

Polynomial Polynomial::derivative() const
{
  if (coefs_.size() <= 1)
    return {};
  std::vector<double> d(coefs_.size() - 1);
  for (std::size_t k = 1; k < coefs_.size(); ++k)
    d[k - 1] = static_cast<double>(k) * coefs_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const
{
  std::vector<double> a(coefs_.size() + 1, 0.0);
  for (std::size_t k = 0; k < coefs_.size(); ++k)
    a[k + 1] = coefs_[k] / static_cast<double>(k + 1);
  return Polynomial(std::move(a));
}

double Polynomial::integrate(double a, double b) const
{
  const auto anti = antiderivative();
  return anti(b) - anti(a);
}

Polynomial Polynomial::pow(unsigned k) const
{
  Polynomial out = constant(1.0);
  for (unsigned i = 0; i < k; ++i)
    out *= *this;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs)
{
  if (rhs.coefs_.size() > coefs_.size())
    coefs_.resize(rhs.coefs_.size(), 0.0);
  for (std::size_t k = 0; k < rhs.coefs_.size(); ++k)
    coefs_[k] += rhs.coefs_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs)
{
  if (rhs.coefs_.size() > coefs_.size())
    coefs_.resize(rhs.coefs_.size(), 0.0);
  for (std::size_t k = 0; k < rhs.coefs_.size(); ++k)
    coefs_[k] -= rhs.coefs_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& rhs)
{
  if (coefs_.empty() || rhs.coefs_.empty()) {
    coefs_.clear();
    return *this;
  }
  std::vector<double> out(coefs_.size() + rhs.coefs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < coefs_.size(); ++i)
    for (std::size_t j = 0; j < rhs.coefs_.size(); ++j)
      out[i + j] += coefs_[i] * rhs.coefs_[j];
  coefs_ = std::move(out);
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(double c)
{
  for (auto& v : coefs_)
    v *= c;
  trim();
  return *this;
}

} // namespace logdens
