#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <vector>

#include "distval/expr.hpp"

namespace distval {

enum class QuadStatus : std::uint8_t { ok, inaccurate, divergent };
std::string_view quad_status_name(QuadStatus s);

struct QuadratureOptions {
  double abs_tol = 1e-9;
  double rel_tol = 0.0;
  int max_depth = 40;
  std::size_t max_segments = 20000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t subdivisions = 0;
  std::vector<SingularPoint> flagged;
  QuadStatus status = QuadStatus::ok;

  bool ok() const { return status == QuadStatus::ok; }
  QuadratureResult& operator+=(const QuadratureResult& other);
  QuadratureResult& scale(double factor);
};

namespace gk15 {
// Abscissae and weights of the 7-point Gauss / 15-point Kronrod pair on
// [-1, 1]; index 7 is the centre.
extern const double xgk[8];
extern const double wgk[8];
extern const double wg[4];
}  // namespace gk15

struct Segment {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  int depth = 0;
};

template <class F>
Segment gk15_segment(F& f, double a, double b, int depth) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * gk15::wgk[7];
  double gauss = fc * gk15::wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * gk15::xgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    kronrod += gk15::wgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += gk15::wg[j / 2] * (f1 + f2);
  }
  Segment s{a, b, kronrod * h, std::fabs((kronrod - gauss) * h), depth};
  if (!std::isfinite(s.value) || !std::isfinite(s.error)) {
    s.error = std::numeric_limits<double>::infinity();
  }
  return s;
}

// Globally adaptive 15-point Gauss-Kronrod on [a, b]. Segments are bisected
// in order of decreasing error estimate; the order is deterministic. A
// segment with an undefined sample is bisected so its midpoint becomes an
// endpoint (never sampled); segments still undefined at max depth are
// dropped and the result is flagged inaccurate.
template <class F>
QuadratureResult adaptive_gk(F&& f, double a, double b, const QuadratureOptions& opt) {
  QuadratureResult out;
  if (!(b > a)) return out;
  auto cmp = [](const Segment& l, const Segment& r) {
    if (l.error != r.error) return l.error < r.error;
    return l.a > r.a;
  };
  std::priority_queue<Segment, std::vector<Segment>, decltype(cmp)> heap(cmp);
  std::vector<Segment> frozen;
  double total = 0.0;
  double total_err = 0.0;
  std::size_t bad = 0;
  auto add = [&](const Segment& s, double sign) {
    if (std::isfinite(s.error)) {
      total += sign * s.value;
      total_err += sign * s.error;
    } else {
      bad = sign > 0 ? bad + 1 : bad - 1;
    }
  };
  Segment first = gk15_segment(f, a, b, 0);
  heap.push(first);
  add(first, 1.0);
  std::size_t count = 1;
  bool dropped = false;

  while (!heap.empty()) {
    if (bad == 0 && total_err <= std::max(opt.abs_tol, opt.rel_tol * std::fabs(total))) break;
    if (count >= opt.max_segments) break;
    Segment s = heap.top();
    heap.pop();
    if (s.depth >= opt.max_depth) {
      if (!std::isfinite(s.error)) {
        dropped = true;
        add(s, -1.0);
      }
      frozen.push_back(s);
      continue;
    }
    add(s, -1.0);
    const double m = 0.5 * (s.a + s.b);
    Segment l = gk15_segment(f, s.a, m, s.depth + 1);
    Segment r = gk15_segment(f, m, s.b, s.depth + 1);
    ++count;
    heap.push(l);
    heap.push(r);
    add(l, 1.0);
    add(r, 1.0);
  }
  double value = 0.0, err = 0.0;
  auto accumulate = [&](const Segment& s) {
    if (!std::isfinite(s.value) || !std::isfinite(s.error)) {
      dropped = true;
      return;
    }
    value += s.value;
    err += s.error;
  };
  while (!heap.empty()) {
    accumulate(heap.top());
    heap.pop();
  }
  for (const auto& s : frozen) accumulate(s);
  out.value = value;
  out.error = err;
  out.subdivisions = count;
  if (dropped || err > std::max(opt.abs_tol, opt.rel_tol * std::fabs(value))) out.status = QuadStatus::inaccurate;
  return out;
}

// Splits [a, b] at the interior breakpoints and sums the pieces; each piece
// receives an equal share of the absolute tolerance.
template <class F>
QuadratureResult adaptive_gk(F&& f, double a, double b, std::span<const double> breakpoints,
                             const QuadratureOptions& opt) {
  std::vector<double> cuts{a};
  for (double p : breakpoints)
    if (p > a && p < b) cuts.push_back(p);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  QuadratureOptions piece = opt;
  piece.abs_tol = opt.abs_tol / static_cast<double>(cuts.size() - 1);
  QuadratureResult out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) out += adaptive_gk(f, cuts[i], cuts[i + 1], piece);
  return out;
}

// Limit of a sequence of partial sums by Wynn's epsilon algorithm applied to
// the last `window` entries. Returns the estimate and the difference between
// the two most recent even-column estimates.
struct WynnEstimate {
  double value = 0.0;
  double change = std::numeric_limits<double>::infinity();
};
WynnEstimate wynn_epsilon(std::span<const double> partial_sums, std::size_t window = 40);

// Integral of f over the side of an essential point s that extends to b
// (either b > s or b < s), using u = 1/|x - s| and half-period chunks of
// length pi/omega in u. The partial sums over chunks are extrapolated by the
// epsilon algorithm until two consecutive estimates agree to abs_tol.
template <class F>
QuadratureResult essential_side(F&& f, double s, double b, double omega, const QuadratureOptions& opt,
                                std::size_t max_chunks = 20000) {
  QuadratureResult out;
  const double dir = b > s ? 1.0 : -1.0;
  const double width = std::fabs(b - s);
  if (width == 0.0) return out;
  auto g = [&](double u) {
    const double x = s + dir / u;
    return f(x) / (u * u);
  };
  const double u0 = 1.0 / width;
  const double h = std::numbers::pi / std::max(omega, 1e-12);
  QuadratureOptions chunk = opt;
  chunk.abs_tol = opt.abs_tol * 1e-2;
  std::vector<double> sums;
  sums.reserve(256);
  double acc = 0.0;
  double chunk_err = 0.0;
  WynnEstimate prev, cur;
  int stable = 0;
  int zero_run = 0;
  for (std::size_t k = 0; k < max_chunks; ++k) {
    const double a = u0 + h * static_cast<double>(k);
    QuadratureResult piece = adaptive_gk(g, a, a + h, chunk);
    out.subdivisions += piece.subdivisions;
    if (!piece.ok()) out.status = QuadStatus::inaccurate;
    acc += piece.value;
    chunk_err += piece.error;
    sums.push_back(acc);
    zero_run = piece.value == 0.0 ? zero_run + 1 : 0;
    if (zero_run >= 6) {
      out.value = acc;
      out.error = chunk_err;
      return out;
    }
    if (sums.size() < 6) continue;
    prev = cur;
    cur = wynn_epsilon(sums);
    if (std::fabs(cur.value - prev.value) <= opt.abs_tol && cur.change <= opt.abs_tol) {
      if (++stable >= 2) {
        out.value = cur.value;
        out.error = std::max(std::fabs(cur.value - prev.value), cur.change) + chunk_err;
        return out;
      }
    } else {
      stable = 0;
    }
  }
  out.value = cur.value;
  out.error = std::fabs(cur.value - prev.value) + chunk_err;
  out.status = QuadStatus::inaccurate;
  return out;
}

// Integral of f over [a, b] when an essential point s lies outside but near
// the interval: same substitution over the finite u-range, summed in
// half-period chunks.
template <class F>
QuadratureResult essential_near(F&& f, double a, double b, double s, double omega, const QuadratureOptions& opt) {
  QuadratureResult out;
  const double dir = a >= s ? 1.0 : -1.0;
  auto g = [&](double u) {
    const double x = s + dir / u;
    return f(x) / (u * u);
  };
  double ua = 1.0 / std::fabs(a - s), ub = 1.0 / std::fabs(b - s);
  if (ua > ub) std::swap(ua, ub);
  const double h = std::numbers::pi / std::max(omega, 1e-12);
  const double span_u = ub - ua;
  const std::size_t chunks = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span_u / h)));
  QuadratureOptions chunk = opt;
  chunk.abs_tol = opt.abs_tol / static_cast<double>(chunks);
  for (std::size_t k = 0; k < chunks; ++k) {
    const double lo = ua + span_u * static_cast<double>(k) / static_cast<double>(chunks);
    const double hi = k + 1 == chunks ? ub : ua + span_u * static_cast<double>(k + 1) / static_cast<double>(chunks);
    out += adaptive_gk(g, lo, hi, chunk);
  }
  return out;
}

// Integral of f(x, y) over the disc of radius R about c in polar coordinates
// about c. `theta_breaks` are extra angular breakpoints in (-pi, pi].
template <class F>
QuadratureResult integrate_disc(F&& f, double cx, double cy, double R, const QuadratureOptions& opt,
                                std::span<const double> theta_breaks = {}) {
  QuadratureOptions inner = opt;
  inner.abs_tol = opt.abs_tol / (2.0 * std::numbers::pi);
  QuadStatus worst = QuadStatus::ok;
  std::size_t subdivisions = 0;
  auto ring = [&](double theta) {
    const double ct = std::cos(theta), st = std::sin(theta);
    auto g = [&](double r) { return f(cx + r * ct, cy + r * st) * r; };
    QuadratureResult q = adaptive_gk(g, 0.0, R, inner);
    subdivisions += q.subdivisions;
    if (static_cast<int>(q.status) > static_cast<int>(worst)) worst = q.status;
    return q.value;
  };
  QuadratureResult out = adaptive_gk(ring, -std::numbers::pi, std::numbers::pi, theta_breaks, opt);
  out.subdivisions += subdivisions;
  if (static_cast<int>(worst) > static_cast<int>(out.status)) out.status = worst;
  return out;
}

}  // namespace distval
