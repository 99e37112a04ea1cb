#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace logdens {

//! Failure categories reported by estimators and constant evaluation.
enum class ErrorKind
{
  config,
  empty_window,
  singular_system,
  method_unsupported,
  zero_density,
  zero_survivor,
  nonpositive_denominator,
  rank_deficient,
  pilot_failure,
  no_convergence,
  zero_curvature,
  out_of_support,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(what)
    , kind_(kind)
  {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace logdens
