#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace liesym {

/// A numeric constant inside an expression tree: an exact 64-bit rational
/// when one is available, otherwise a double. Arithmetic stays exact until
/// an operation overflows or cannot be represented (e.g. irrational powers).
class Number {
 public:
  Number() = default;
  Number(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Number(std::int64_t n, std::int64_t d);
  static Number real(double v);

  [[nodiscard]] bool exact() const { return exact_; }
  [[nodiscard]] std::int64_t num() const { return num_; }
  [[nodiscard]] std::int64_t den() const { return den_; }
  [[nodiscard]] double to_double() const;

  [[nodiscard]] bool is_zero() const { return exact_ ? num_ == 0 : real_ == 0.0; }
  [[nodiscard]] bool is_one() const { return exact_ ? (num_ == 1 && den_ == 1) : real_ == 1.0; }
  [[nodiscard]] bool is_integer() const { return exact_ && den_ == 1; }
  [[nodiscard]] bool negative() const { return exact_ ? num_ < 0 : real_ < 0.0; }

  friend Number operator+(const Number& a, const Number& b);
  friend Number operator-(const Number& a, const Number& b);
  friend Number operator*(const Number& a, const Number& b);
  friend Number operator/(const Number& a, const Number& b);
  friend Number operator-(const Number& a);
  /// Exact when the exponent is an integer of modest size; nullopt when the
  /// result is not real (negative base, fractional exponent).
  friend std::optional<Number> power(const Number& base, const Number& exponent);

  friend bool operator==(const Number& a, const Number& b);

  /// "3", "-2", "1/3", "-5/2", or a shortest round-trip decimal.
  [[nodiscard]] std::string to_string() const;

  /// Parses "3", "-1/2", "0.25", "1e-3". Decimal literals with at most 15
  /// significant digits become exact rationals.
  static std::optional<Number> from_string(const std::string& s);

 private:
  bool exact_ = true;
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  double real_ = 0.0;
};

}  // namespace liesym
