#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "distval/distribution.hpp"
#include "distval/mollifier.hpp"
#include "distval/pairing.hpp"

namespace distval {

// Open interval (d = 1, y ignored) or box (d = 2).
struct Region {
  Point lo{0.0, 0.0};
  Point hi{0.0, 0.0};
};

enum class BoundTag : std::uint8_t { bounded_witness, unbounded_witness, inconclusive };
std::string_view bound_tag_name(BoundTag t);

struct Probe {
  Point center{0.0, 0.0};
  double radius = 0.0;
  int level = 0;
  double pairing = 0.0;  // <f, phi> for the normalized bump phi
};

struct LadderOptions {
  std::size_t budget = 2000;  // pairings, failures included
  int max_depth = 24;         // refinement levels below the initial grid
  std::size_t initial = 16;   // cells along the longest side
  std::size_t beam = 4;
  unsigned threads = 0;
  PairingOptions pairing;
};

// Results of the three greedy searches (|<f,phi>|, <f,phi>, -<f,phi>).
struct LadderRun {
  std::vector<Probe> probes;           // every evaluated probe, in evaluation order
  std::vector<double> level_best[3];   // per-level best of each objective
  Probe best[3];
  std::size_t used = 0;
  std::size_t failures = 0;
  int levels = 0;  // deepest level reached
};

// Deterministic evaluation order, so a larger budget evaluates a superset
// of the probes of a smaller one and every estimate is monotone in budget.
LadderRun probe_ladder(const Distribution& f, const Region& U, const LadderOptions& opt = {});

// Running maximum of the per-level bests escapes: over the last six levels
// it rose in at least five, gained at least 6 * max(1e-3, 0.01 |R|), and the
// last three levels gained at least half as much as the three before.
bool escapes(const std::vector<double>& level_best);

struct BoundednessReport {
  BoundTag verdict = BoundTag::inconclusive;
  double bound = 0.0;  // M for BoundedWitness
  Probe witness;       // UnboundedWitness probe, or the probe attaining M
  std::size_t used = 0;
  std::vector<Probe> table;  // best |pairing| per level
  std::string note;
};

BoundednessReport boundedness_probe(const Distribution& f, const Region& U, const LadderOptions& opt = {});

struct LinfEstimate {
  double value = 0.0;  // certified lower bound on the L-infinity norm
  Probe certificate;
  bool stable = false;     // last three level bests within 1e-3 relative
  bool unbounded = false;  // value is +inf
  std::size_t used = 0;
};

LinfEstimate linf_norm_estimate(const Distribution& f, const Region& U, const LadderOptions& opt = {});

struct EssBounds {
  double sup = 0.0;
  double inf = 0.0;
  Probe sup_probe;
  Probe inf_probe;
  std::size_t used = 0;
};

// +inf / -inf when the corresponding search escapes.
EssBounds esssup_essinf(const Distribution& f, const Region& U, const LadderOptions& opt = {});

}  // namespace distval
