#include "rectiscan/regression.hpp"

#include <cmath>

#include "rectiscan/errors.hpp"

namespace rectiscan {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw_invalid("linear_fit: x and y differ in length");
  if (x.size() < 2) throw_invalid("linear_fit: need at least two points");
  const double count = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw_invalid("linear_fit: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.correlation = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
  return fit;
}

}  // namespace rectiscan
