#include "liesym/sample.hpp"

#include <cmath>
#include <string>

namespace liesym {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool SampleDomain::admits(const Point& p) const {
  for (const Expr& g : guards) {
    const Evaluation r = evaluate(g, p);
    if (r.singular || !(r.value > 0.0)) return false;
  }
  return true;
}

std::vector<Point> SampleDomain::draw() const {
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  out.reserve(count);
  const std::size_t budget = 200 * count + 1000;
  for (std::size_t attempt = 0; attempt < budget && out.size() < count; ++attempt) {
    Point p{};
    for (std::size_t i = 0; i < box.size(); ++i) p[i] = box[i].lo + (box[i].hi - box[i].lo) * unit_uniform(rng);
    if (admits(p)) out.push_back(p);
  }
  if (out.size() < count)
    throw DomainExhausted("sample domain yielded " + std::to_string(out.size()) + " of " + std::to_string(count) +
                          " admissible points");
  return out;
}

ZeroTest is_zero(const Expr& e, const std::vector<Point>& points, double tol) {
  ZeroTest result;
  for (const Point& p : points) {
    const Evaluation r = evaluate(e, p);
    if (r.singular) continue;
    ++result.used_points;
    const double residual = std::fabs(r.value) / (1.0 + r.scale);
    result.max_residual = std::max(result.max_residual, residual);
    if (residual > tol && result.zero) {
      result.zero = false;
      result.witness = p;
      result.witness_residual = residual;
    }
  }
  if (result.used_points == 0) throw DomainExhausted("every sampled point is singular for the expression");
  return result;
}

ZeroTest is_zero(const Expr& e, const SampleDomain& dom, double tol) { return is_zero(e, dom.draw(), tol); }

}  // namespace liesym
