#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "liesym/expr.hpp"

namespace liesym {

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

class DomainExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Box over (t, x, u, ux) restricted by guard expressions that must evaluate
/// non-singular and strictly positive. Drawing is rejection sampling from a
/// seeded 64-bit Mersenne Twister, so a seed fixes the point sequence.
struct SampleDomain {
  std::array<Interval, 4> box{};
  std::vector<Expr> guards;
  std::uint64_t seed = 42;
  std::size_t count = 200;

  void set(Var v, double lo, double hi) { box.at(static_cast<std::size_t>(v)) = {lo, hi}; }
  [[nodiscard]] bool admits(const Point& p) const;
  /// Throws DomainExhausted when the guards reject nearly everything.
  [[nodiscard]] std::vector<Point> draw() const;
};

/// Uniform double in [0,1) built from the top 53 bits, identical on every
/// platform (std::uniform_real_distribution is not).
[[nodiscard]] double unit_uniform(std::mt19937_64& rng);

struct ZeroTest {
  bool zero = true;
  double max_residual = 0.0;          // max of |e| / (1 + scale) over used points
  std::optional<Point> witness;       // first violating point
  double witness_residual = 0.0;
  std::size_t used_points = 0;        // points where e was non-singular
};

/// Probabilistic zero test: |e(p)| <= tol * (1 + scale(p)) at every sampled
/// non-singular point. Throws DomainExhausted if every point is singular.
[[nodiscard]] ZeroTest is_zero(const Expr& e, const std::vector<Point>& points, double tol);
[[nodiscard]] ZeroTest is_zero(const Expr& e, const SampleDomain& dom, double tol);

}  // namespace liesym
