#include "distval/extrapolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace distval {

double aitken(std::span<const double> v) {
  if (v.size() < 3) return v.empty() ? 0.0 : v.back();
  const double a = v[v.size() - 3], b = v[v.size() - 2], c = v[v.size() - 1];
  const double den = (c - b) - (b - a);
  if (den == 0.0 || !std::isfinite(den)) return c;
  return c - (c - b) * (c - b) / den;
}

double neville_at_zero(std::span<const double> t, std::span<const double> v) {
  std::vector<double> p(v.begin(), v.end());
  const std::size_t n = p.size();
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      const double den = t[i] - t[i + m];
      if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
      p[i] = (t[i] * p[i + 1] - t[i + m] * p[i]) / den;
    }
  }
  return n ? p[0] : 0.0;
}

namespace {

TailCheck plain(std::span<const double> tail, double tol) {
  TailCheck out;
  if (tail.empty()) return out;
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  const double mean = std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(tail.size());
  out.error = *hi - *lo;
  out.aitken = aitken(tail);
  // the mean is what the criterion certifies; Aitken only confirms it
  out.value = mean;
  bool finite = std::all_of(tail.begin(), tail.end(), [](double x) { return std::isfinite(x); });
  out.converged = finite && out.error < tol && std::fabs(out.aitken - mean) <= 2 * tol;
  return out;
}

}  // namespace

TailCheck tail_criterion(std::span<const double> param, std::span<const double> values, const TailOptions& opt) {
  const std::size_t m = std::max<std::size_t>(3, opt.window);
  if (values.size() < m) return TailCheck{false, values.empty() ? 0.0 : values.back(), 0.0, 0.0, false};
  TailCheck out = plain(values.subspan(values.size() - m), opt.tol);
  if (!opt.accelerate || values.size() < m + 2 || param.size() != values.size()) return out;

  // Quadratic extrapolation to param = 0 through each consecutive triple.
  std::vector<double> acc;
  acc.reserve(m);
  for (std::size_t i = values.size() - m; i < values.size(); ++i) {
    acc.push_back(neville_at_zero(param.subspan(i - 2, 3), values.subspan(i - 2, 3)));
  }
  TailCheck fast = plain(acc, opt.tol);
  if (!fast.converged) return out;
  fast.accelerated = true;
  fast.value = acc.back();
  if (!out.converged) return fast;
  // both pass: the extrapolated value removes the O(param) bias of the mean
  out.value = fast.value;
  out.accelerated = true;
  return out;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  LinearFit fit;
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return fit;
  const double mx = std::accumulate(x.begin(), x.begin() + n, 0.0) / n;
  const double my = std::accumulate(y.begin(), y.begin() + n, 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

GrowthFit growth_fit(std::span<const double> scale, std::span<const double> values) {
  GrowthFit g;
  const std::size_t n = std::min(scale.size(), values.size());
  if (n < 4) return g;
  const double top = *std::max_element(scale.begin(), scale.begin() + n);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < n; ++i) {
    if (scale[i] >= top / 10.0 && scale[i] > 0 && std::isfinite(values[i]) && values[i] != 0.0) {
      lx.push_back(std::log(scale[i]));
      ly.push_back(std::log(std::fabs(values[i])));
    }
  }
  if (lx.size() < 4) {
    // top decade too sparse: fall back to the last four points
    lx.clear();
    ly.clear();
    for (std::size_t i = n - 4; i < n; ++i) {
      if (scale[i] > 0 && std::isfinite(values[i]) && values[i] != 0.0) {
        lx.push_back(std::log(scale[i]));
        ly.push_back(std::log(std::fabs(values[i])));
      }
    }
  }
  if (lx.size() < 3) return g;
  const LinearFit fit = linear_fit(lx, ly);
  g.exponent = fit.slope;
  g.r2 = fit.r2;
  g.diverged = g.exponent > 0.5 && g.r2 > 0.9;
  return g;
}

KendallResult kendall_tau(std::span<const double> x, std::span<const double> y) {
  KendallResult k;
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 3) return k;
  double concordant = 0, discordant = 0, tx = 0, ty = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[j] - x[i], dy = y[j] - y[i];
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) {
        tx += 1;
      } else if (dy == 0) {
        ty += 1;
      } else if ((dx > 0) == (dy > 0)) {
        concordant += 1;
      } else {
        discordant += 1;
      }
    }
  }
  const double denom = std::sqrt((concordant + discordant + tx) * (concordant + discordant + ty));
  k.tau = denom > 0 ? (concordant - discordant) / denom : 0.0;
  const double nn = static_cast<double>(n);
  const double var = 2.0 * (2.0 * nn + 5.0) / (9.0 * nn * (nn - 1.0));
  k.z = k.tau / std::sqrt(var);
  k.p_lower = 0.5 * std::erfc(-k.z / std::sqrt(2.0));
  k.p_two = std::erfc(std::fabs(k.z) / std::sqrt(2.0));
  return k;
}

}  // namespace distval
