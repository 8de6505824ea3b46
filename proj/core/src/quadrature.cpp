#include "distval/quadrature.hpp"

namespace distval {

namespace gk15 {
const double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
const double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
const double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};
}  // namespace gk15

std::string_view quad_status_name(QuadStatus s) {
  switch (s) {
    case QuadStatus::ok:
      return "ok";
    case QuadStatus::inaccurate:
      return "inaccurate";
    case QuadStatus::divergent:
      return "divergent";
  }
  return "?";
}

QuadratureResult& QuadratureResult::operator+=(const QuadratureResult& other) {
  value += other.value;
  error += other.error;
  subdivisions += other.subdivisions;
  flagged.insert(flagged.end(), other.flagged.begin(), other.flagged.end());
  if (static_cast<int>(other.status) > static_cast<int>(status)) status = other.status;
  return *this;
}

QuadratureResult& QuadratureResult::scale(double factor) {
  value *= factor;
  error *= std::fabs(factor);
  return *this;
}

WynnEstimate wynn_epsilon(std::span<const double> partial_sums, std::size_t window) {
  WynnEstimate est;
  if (partial_sums.empty()) return est;
  const std::size_t n = std::min(window, partial_sums.size());
  std::span<const double> s = partial_sums.subspan(partial_sums.size() - n);
  est.value = s.back();
  if (n >= 2) est.change = std::fabs(s[n - 1] - s[n - 2]);
  if (n < 3) return est;

  std::vector<double> older(n + 1, 0.0);  // column j-1
  std::vector<double> col(s.begin(), s.end());  // column j (even when j is even)
  std::size_t j = 0;
  while (col.size() >= 2) {
    std::vector<double> next(col.size() - 1);
    for (std::size_t k = 0; k + 1 < col.size(); ++k) {
      const double diff = col[k + 1] - col[k];
      if (diff == 0.0) {
        // exact convergence in this column
        if (j % 2 == 0) {
          est.value = col[k + 1];
          est.change = 0.0;
        }
        return est;
      }
      next[k] = older[k + 1] + 1.0 / diff;
    }
    older = std::move(col);
    col = std::move(next);
    ++j;
    if (j % 2 == 0 && col.size() >= 2 && std::isfinite(col.back()) && std::isfinite(col[col.size() - 2])) {
      est.value = col.back();
      est.change = std::fabs(col.back() - col[col.size() - 2]);
    }
  }
  return est;
}

}  // namespace distval
