#include "liesym/number.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace liesym {

namespace {

__extension__ typedef __int128 i128;

std::optional<Number> make_exact(i128 n, i128 d) {
  if (d == 0) return std::nullopt;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 a = n < 0 ? -n : n;
  i128 b = d;
  while (b != 0) {
    const i128 r = a % b;
    a = b;
    b = r;
  }
  if (a > 1) {
    n /= a;
    d /= a;
  }
  constexpr i128 lim = static_cast<i128>(INT64_MAX);
  if (n > lim || n < -lim || d > lim) return std::nullopt;
  return Number(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
}

}  // namespace

Number::Number(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("Number: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  num_ = g > 1 ? n / g : n;
  den_ = g > 1 ? d / g : d;
}

Number Number::real(double v) {
  Number r;
  r.exact_ = false;
  r.real_ = v;
  return r;
}

double Number::to_double() const {
  if (!exact_) return real_;
  return static_cast<double>(num_) / static_cast<double>(den_);
}

Number operator+(const Number& a, const Number& b) {
  if (a.exact_ && b.exact_) {
    if (auto r = make_exact(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                            static_cast<i128>(a.den_) * b.den_))
      return *r;
  }
  return Number::real(a.to_double() + b.to_double());
}

Number operator-(const Number& a) {
  if (a.exact_) return Number(-a.num_, a.den_);
  return Number::real(-a.real_);
}

Number operator-(const Number& a, const Number& b) { return a + (-b); }

Number operator*(const Number& a, const Number& b) {
  if (a.exact_ && b.exact_) {
    if (auto r = make_exact(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_)) return *r;
  }
  return Number::real(a.to_double() * b.to_double());
}

Number operator/(const Number& a, const Number& b) {
  if (b.is_zero()) throw std::domain_error("Number: division by zero");
  if (a.exact_ && b.exact_) {
    if (auto r = make_exact(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_)) return *r;
  }
  return Number::real(a.to_double() / b.to_double());
}

std::optional<Number> power(const Number& base, const Number& exponent) {
  if (base.exact_ && exponent.is_integer()) {
    std::int64_t e = exponent.num_;
    if (e < 0 && base.is_zero()) return std::nullopt;
    if (e >= -64 && e <= 64) {
      Number acc(1);
      const Number factor = e < 0 ? Number(1) / base : base;
      for (std::int64_t i = 0; i < (e < 0 ? -e : e); ++i) acc = acc * factor;
      return acc;
    }
  }
  const double bd = base.to_double();
  const double ed = exponent.to_double();
  if (bd < 0.0 && !exponent.is_integer()) return std::nullopt;
  const double r = std::pow(bd, ed);
  if (!std::isfinite(r)) return std::nullopt;
  return Number::real(r);
}

bool operator==(const Number& a, const Number& b) {
  if (a.exact_ != b.exact_) return false;
  if (a.exact_) return a.num_ == b.num_ && a.den_ == b.den_;
  return a.real_ == b.real_;
}

std::string Number::to_string() const {
  if (exact_) {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }
  char buf[64];
  // Scientific form keeps the literal recognisable as a real on reparse.
  auto res = std::to_chars(buf, buf + sizeof buf, real_, std::chars_format::scientific);
  return {buf, res.ptr};
}

std::optional<Number> Number::from_string(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    auto n = from_string(s.substr(0, slash));
    auto d = from_string(s.substr(slash + 1));
    if (!n || !d || d->is_zero()) return std::nullopt;
    return *n / *d;
  }
  const bool has_exp = s.find_first_of("eE") != std::string::npos;
  const auto dot = s.find('.');
  if (!has_exp) {
    std::string digits;
    std::int64_t den = 1;
    bool neg = false;
    std::size_t i = 0;
    if (s[0] == '-' || s[0] == '+') {
      neg = s[0] == '-';
      i = 1;
    }
    std::size_t frac = 0;
    for (; i < s.size(); ++i) {
      if (s[i] == '.') continue;
      if (s[i] < '0' || s[i] > '9') return std::nullopt;
      digits += s[i];
      if (dot != std::string::npos && i > dot) ++frac;
    }
    if (digits.empty()) return std::nullopt;
    const auto first = digits.find_first_not_of('0');
    const std::size_t significant = first == std::string::npos ? 1 : digits.size() - first;
    if (significant <= 15 && frac <= 15) {
      std::int64_t n = 0;
      std::from_chars(digits.data(), digits.data() + digits.size(), n);
      for (std::size_t k = 0; k < frac; ++k) den *= 10;
      return Number(neg ? -n : n, den);
    }
  }
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return Number::real(v);
}

}  // namespace liesym
