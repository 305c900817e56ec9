#include <algorithm>
#include <cmath>

#include "qsurr/error.hpp"
#include "qsurr/experiments.hpp"

namespace qsurr::experiments {

LineFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ShapeError("linear_fit: xs and ys differ in length");
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (xs.size() < 2 || !(sxx > 0.0))
    throw PreconditionError("linear_fit needs at least two distinct x values");

  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (f.slope * xs[i] + f.intercept);
    f.residual += r * r;
  }
  if (syy > 0.0)
    f.r2 = std::clamp(1.0 - f.residual / syy, 0.0, 1.0);
  else
    f.r2 = f.residual == 0.0 ? 1.0 : 0.0;
  return f;
}

double median(std::vector<double> v) {
  if (v.empty()) throw PreconditionError("median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace qsurr::experiments
