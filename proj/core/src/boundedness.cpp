#include "distval/boundedness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "distval/parallel.hpp"

namespace distval {

std::string_view bound_tag_name(BoundTag t) {
  switch (t) {
    case BoundTag::bounded_witness:
      return "BoundedWitness";
    case BoundTag::unbounded_witness:
      return "UnboundedWitness";
    case BoundTag::inconclusive:
      return "Inconclusive";
  }
  return "?";
}

namespace {

// Bump radius over cell half-width. Large enough that the bumps of a level
// cover their cells (so no point mass falls between supports) and that
// children stay inside the margin kept free at the boundary of U.
double overlap(int dim) { return dim == 1 ? 4.0 / 3.0 : 1.5; }

struct Cell {
  Point c;
  double h;  // half-width
  int level;
};

std::vector<Cell> initial_cells(const Region& U, int dim, std::size_t G0) {
  const double k = overlap(dim);
  const double w[2] = {U.hi[0] - U.lo[0], dim == 2 ? U.hi[1] - U.lo[1] : 0.0};
  if (!(w[0] > 0.0) || (dim == 2 && !(w[1] > 0.0))) throw std::invalid_argument("probe region must be non-empty");
  const double wmax = dim == 2 ? std::max(w[0], w[1]) : w[0];
  std::size_t G[2] = {1, 1};
  double h = std::numeric_limits<double>::infinity();
  for (int a = 0; a < dim; ++a) {
    G[a] = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(G0) * w[a] / wmax)));
    h = std::min(h, w[a] / (2.0 * static_cast<double>(G[a]) + 2.0 * (k - 1.0)));
  }
  std::vector<Cell> cells;
  auto start = [&](int a) { return U.lo[a] + 0.5 * (w[a] - 2.0 * h * static_cast<double>(G[a])); };
  for (std::size_t j = 0; j < G[1]; ++j) {
    for (std::size_t i = 0; i < G[0]; ++i) {
      Point c{start(0) + h * (2.0 * i + 1.0), 0.0};
      if (dim == 2) c[1] = start(1) + h * (2.0 * j + 1.0);
      cells.push_back({c, h, 0});
    }
  }
  return cells;
}

std::vector<Cell> children(const Cell& p, int dim) {
  std::vector<Cell> out;
  const double h = 0.5 * p.h;
  if (dim == 1) {
    for (double o : {-1.5, -0.5, 0.5, 1.5}) out.push_back({{p.c[0] + o * h, 0.0}, h, p.level + 1});
  } else {
    for (double oy : {-1.0, 1.0})
      for (double ox : {-1.0, 1.0}) out.push_back({{p.c[0] + ox * h, p.c[1] + oy * h}, h, p.level + 1});
  }
  return out;
}

double objective(int which, double v) {
  if (!std::isfinite(v)) return -std::numeric_limits<double>::infinity();
  switch (which) {
    case 0:
      return std::fabs(v);
    case 1:
      return v;
    default:
      return -v;
  }
}

}  // namespace

LadderRun probe_ladder(const Distribution& f, const Region& U, const LadderOptions& opt) {
  const int dim = f.dim();
  const double k = overlap(dim);
  LadderRun run;
  for (auto& b : run.best) b.pairing = std::numeric_limits<double>::quiet_NaN();
  std::map<std::tuple<double, double, double>, double> cache;
  double best_score[3] = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                          -std::numeric_limits<double>::infinity()};

  // Evaluates the batch (in order, deduplicated, truncated by budget) and
  // returns the pairing per cell; NaN for unevaluated or failed cells.
  auto evaluate = [&](const std::vector<Cell>& batch) {
    std::vector<double> vals(batch.size(), std::numeric_limits<double>::quiet_NaN());
    std::vector<std::size_t> todo;
    std::vector<std::tuple<double, double, double>> keys;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const auto key = std::make_tuple(batch[i].c[0], batch[i].c[1], batch[i].h);
      if (auto it = cache.find(key); it != cache.end()) {
        vals[i] = it->second;
        continue;
      }
      if (std::find(keys.begin(), keys.end(), key) != keys.end()) continue;
      if (run.used + todo.size() >= opt.budget) break;
      todo.push_back(i);
      keys.push_back(key);
    }
    std::vector<QuadratureResult> res(todo.size());
    parallel_for(todo.size(), opt.threads, [&](std::size_t t) {
      const Cell& c = batch[todo[t]];
      res[t] = pair(f, affine_bump(c.c, k * c.h, dim), opt.pairing);
    });
    for (std::size_t t = 0; t < todo.size(); ++t) {
      const Cell& c = batch[todo[t]];
      double v = res[t].value;
      if (res[t].status == QuadStatus::divergent || !std::isfinite(v)) {
        ++run.failures;
        v = std::numeric_limits<double>::quiet_NaN();
      }
      ++run.used;
      cache[keys[t]] = v;
      run.probes.push_back({c.c, k * c.h, c.level, v});
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (std::isnan(vals[i])) {
        const auto key = std::make_tuple(batch[i].c[0], batch[i].c[1], batch[i].h);
        if (auto it = cache.find(key); it != cache.end()) vals[i] = it->second;
      }
    }
    return vals;
  };

  // Below this half-width the pairing of a smooth f is dominated by rounding
  // in the bump normalization, so refining further adds noise, not detail.
  const double wU = std::max(U.hi[0] - U.lo[0], dim == 2 ? U.hi[1] - U.lo[1] : 0.0);
  const double cU = std::max({std::fabs(U.lo[0]), std::fabs(U.hi[0]), dim == 2 ? std::fabs(U.lo[1]) : 0.0,
                              dim == 2 ? std::fabs(U.hi[1]) : 0.0});
  const double h_min = 1e-6 * std::max(cU, wU);

  std::vector<Cell> level = initial_cells(U, dim, opt.initial);
  std::vector<double> vals = evaluate(level);
  std::vector<Cell> beams[3];
  for (int depth = 0;; ++depth) {
    run.levels = depth;
    for (int o = 0; o < 3; ++o) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < level.size(); ++i)
        if (!std::isnan(vals[i])) idx.push_back(i);
      std::stable_sort(idx.begin(), idx.end(),
                       [&](std::size_t a, std::size_t b) { return objective(o, vals[a]) > objective(o, vals[b]); });
      if (!idx.empty()) {
        const std::size_t i = idx.front();
        run.level_best[o].push_back(objective(o, vals[i]));
        if (objective(o, vals[i]) > best_score[o]) {
          best_score[o] = objective(o, vals[i]);
          run.best[o] = {level[i].c, k * level[i].h, level[i].level, vals[i]};
        }
      }
      beams[o].clear();
      for (std::size_t r = 0; r < std::min(opt.beam, idx.size()); ++r) beams[o].push_back(level[idx[r]]);
    }
    if (depth >= opt.max_depth || run.used >= opt.budget) break;
    std::vector<Cell> next;
    for (int o = 0; o < 3; ++o)
      for (const auto& b : beams[o])
        for (const auto& c : children(b, dim))
          if (c.h >= h_min) next.push_back(c);
    if (next.empty()) break;
    level = std::move(next);
    vals = evaluate(level);
    bool any = std::any_of(vals.begin(), vals.end(), [](double v) { return !std::isnan(v); });
    if (!any) break;
  }
  return run;
}

bool escapes(const std::vector<double>& level_best) {
  if (level_best.size() < 7) return false;
  std::vector<double> R(level_best.size());
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < R.size(); ++i) R[i] = m = std::max(m, level_best[i]);
  const std::size_t J = R.size() - 1;
  int rises = 0;
  for (std::size_t i = J - 5; i <= J; ++i) rises += R[i] > R[i - 1] ? 1 : 0;
  const double theta = std::max(1e-3, 0.01 * std::fabs(R[J]));
  // A bounded f approaches its sup with geometrically shrinking gains; an
  // escape keeps gaining, so the recent half must not have stalled.
  const double recent = R[J] - R[J - 3], earlier = R[J - 3] - R[J - 6];
  return rises >= 5 && R[J] - R[J - 6] >= 6.0 * theta && recent >= 0.5 * earlier;
}

BoundednessReport boundedness_probe(const Distribution& f, const Region& U, const LadderOptions& opt) {
  const LadderRun run = probe_ladder(f, U, opt);
  BoundednessReport rep;
  rep.used = run.used;
  // best |pairing| per level
  std::map<int, Probe> per_level;
  for (const auto& p : run.probes) {
    if (std::isnan(p.pairing)) continue;
    auto it = per_level.find(p.level);
    if (it == per_level.end() || std::fabs(p.pairing) > std::fabs(it->second.pairing)) per_level[p.level] = p;
  }
  for (const auto& [lvl, p] : per_level) rep.table.push_back(p);
  if (run.probes.empty() || run.failures * 2 > run.used) {
    rep.note = "too many failed pairings";
    return rep;
  }
  if (escapes(run.level_best[0])) {
    rep.verdict = BoundTag::unbounded_witness;
    rep.witness = run.best[0];
    rep.bound = std::fabs(run.best[0].pairing);
    rep.note = "pairings keep growing along shrinking scales";
    return rep;
  }
  if (run.levels < 6) {
    rep.note = "budget exhausted before six refinement levels";
    rep.witness = run.best[0];
    rep.bound = std::fabs(run.best[0].pairing);
    return rep;
  }
  rep.verdict = BoundTag::bounded_witness;
  rep.witness = run.best[0];
  rep.bound = std::fabs(run.best[0].pairing);
  rep.note = "no escape up to probe resolution";
  return rep;
}

LinfEstimate linf_norm_estimate(const Distribution& f, const Region& U, const LadderOptions& opt) {
  const LadderRun run = probe_ladder(f, U, opt);
  LinfEstimate est;
  est.used = run.used;
  if (escapes(run.level_best[0])) {
    est.unbounded = true;
    est.value = std::numeric_limits<double>::infinity();
    est.certificate = run.best[0];
    return est;
  }
  est.value = std::isnan(run.best[0].pairing) ? 0.0 : std::fabs(run.best[0].pairing);
  est.certificate = run.best[0];
  const auto& lb = run.level_best[0];
  if (lb.size() >= 3) {
    double lo = lb[lb.size() - 3], hi = lo;
    for (std::size_t i = lb.size() - 3; i < lb.size(); ++i) {
      lo = std::min(lo, lb[i]);
      hi = std::max(hi, lb[i]);
    }
    est.stable = hi - lo <= 1e-3 * std::max(1.0, std::fabs(hi));
  }
  return est;
}

EssBounds esssup_essinf(const Distribution& f, const Region& U, const LadderOptions& opt) {
  const LadderRun run = probe_ladder(f, U, opt);
  EssBounds b;
  b.used = run.used;
  b.sup_probe = run.best[1];
  b.inf_probe = run.best[2];
  b.sup = escapes(run.level_best[1]) ? std::numeric_limits<double>::infinity() : run.best[1].pairing;
  b.inf = escapes(run.level_best[2]) ? -std::numeric_limits<double>::infinity() : run.best[2].pairing;
  return b;
}

}  // namespace distval
