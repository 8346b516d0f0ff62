#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace liftlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands do not fit together (different base categories, wrong domain, ...).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A name or object identifier does not resolve.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// A supplied square/diagram fails a required property (commutation, pullback, retract, ...).
class PropertyError : public Error {
 public:
  using Error::Error;
};

/// An enumeration exceeded its candidate budget. Never a silent truncation.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& where, std::uint64_t limit)
      : Error("enumeration budget of " + std::to_string(limit) + " candidates exceeded in " + where),
        limit_(limit) {}
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
};

/// Enumeration budget in candidate assignments per call. The limit is per thread so
/// that independent computations never observe each other's overrides.
std::uint64_t current_budget();

class ScopedBudget {
 public:
  explicit ScopedBudget(std::uint64_t limit);
  ~ScopedBudget();
  ScopedBudget(const ScopedBudget&) = delete;
  ScopedBudget& operator=(const ScopedBudget&) = delete;

 private:
  std::uint64_t previous_;
};

inline constexpr std::uint64_t kDefaultBudget = 1'000'000;

}  // namespace liftlab
