#include "distval/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numbers>
#include <sstream>

#include "distval/boundedness.hpp"
#include "distval/extrapolation.hpp"
#include "distval/limitlab.hpp"
#include "distval/pairing.hpp"
#include "distval/pointvalue.hpp"
#include "distval_schemas.hpp"

#ifndef DISTVAL_VERSION
#define DISTVAL_VERSION "0.0.0"
#endif

namespace distval {

std::string_view tool_version() { return DISTVAL_VERSION; }

// ---- schema subset -----------------------------------------------------------

namespace {

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string type_of(const Json& j) {
  if (j.is_null()) return "null";
  if (j.is_boolean()) return "boolean";
  if (j.is_number_integer()) return "integer";
  if (j.is_number()) return "number";
  if (j.is_string()) return "string";
  if (j.is_array()) return "array";
  return "object";
}

bool has_type(const Json& j, const std::string& t) {
  if (t == "number") return j.is_number();
  if (t == "integer") {
    if (j.is_number_integer()) return true;
    return j.is_number_float() && std::isfinite(j.get<double>()) && std::floor(j.get<double>()) == j.get<double>();
  }
  return type_of(j) == t;
}

class Validator {
 public:
  explicit Validator(const Json& root) : root_(root) {}

  std::optional<SchemaViolation> run(const Json& v, const Json& s, const std::string& ptr) const {
    if (s.is_boolean()) {
      if (s.get<bool>()) return std::nullopt;
      return SchemaViolation{ptr, "not allowed"};
    }
    if (auto it = s.find("$ref"); it != s.end()) {
      if (auto r = run(v, resolve(it->get<std::string>()), ptr)) return r;
    }
    if (auto it = s.find("type"); it != s.end()) {
      bool ok = false;
      std::string want;
      if (it->is_string()) {
        ok = has_type(v, it->get<std::string>());
        want = it->get<std::string>();
      } else {
        for (const auto& t : *it) {
          ok = ok || has_type(v, t.get<std::string>());
          want += (want.empty() ? "" : " or ") + t.get<std::string>();
        }
      }
      if (!ok) return SchemaViolation{ptr, "expected " + want + ", found " + type_of(v)};
    }
    if (auto it = s.find("const"); it != s.end() && !same(v, *it))
      return SchemaViolation{ptr, "must be " + it->dump()};
    if (auto it = s.find("enum"); it != s.end()) {
      bool ok = false;
      for (const auto& e : *it) ok = ok || same(v, e);
      if (!ok) return SchemaViolation{ptr, "must be one of " + it->dump()};
    }
    if (v.is_number()) {
      const double x = v.get<double>();
      if (auto it = s.find("minimum"); it != s.end() && x < it->get<double>())
        return SchemaViolation{ptr, "must be >= " + it->dump()};
      if (auto it = s.find("maximum"); it != s.end() && x > it->get<double>())
        return SchemaViolation{ptr, "must be <= " + it->dump()};
      if (auto it = s.find("exclusiveMinimum"); it != s.end() && !(x > it->get<double>()))
        return SchemaViolation{ptr, "must be > " + it->dump()};
    }
    if (v.is_string()) {
      if (auto it = s.find("minLength"); it != s.end() && v.get<std::string>().size() < it->get<std::size_t>())
        return SchemaViolation{ptr, "string too short"};
    }
    if (v.is_array()) {
      if (auto it = s.find("minItems"); it != s.end() && v.size() < it->get<std::size_t>())
        return SchemaViolation{ptr, "needs at least " + it->dump() + " item(s)"};
      if (auto it = s.find("maxItems"); it != s.end() && v.size() > it->get<std::size_t>())
        return SchemaViolation{ptr, "allows at most " + it->dump() + " item(s)"};
      if (auto it = s.find("items"); it != s.end()) {
        for (std::size_t i = 0; i < v.size(); ++i)
          if (auto r = run(v[i], *it, ptr + "/" + std::to_string(i))) return r;
      }
    }
    if (v.is_object()) {
      if (auto it = s.find("required"); it != s.end()) {
        for (const auto& k : *it)
          if (!v.contains(k.get<std::string>()))
            return SchemaViolation{ptr + "/" + escape_token(k.get<std::string>()), "required field is missing"};
      }
      const auto props = s.find("properties");
      if (props != s.end()) {
        // schema order, so the discriminating fields are checked first
        for (const auto& [k, sub] : props->items()) {
          if (auto f = v.find(k); f != v.end())
            if (auto r = run(*f, sub, ptr + "/" + escape_token(k))) return r;
        }
      }
      if (auto it = s.find("additionalProperties"); it != s.end() && it->is_boolean() && !it->get<bool>()) {
        for (const auto& [k, sub] : v.items()) {
          if (props == s.end() || !props->contains(k))
            return SchemaViolation{ptr + "/" + escape_token(k), "unknown field"};
        }
      }
    }
    if (auto it = s.find("anyOf"); it != s.end()) {
      std::optional<SchemaViolation> first;
      bool ok = false;
      for (const auto& b : *it) {
        auto r = run(v, b, ptr);
        if (!r) {
          ok = true;
          break;
        }
        if (!first) first = r;
      }
      if (!ok) return first;
    }
    if (auto it = s.find("oneOf"); it != s.end()) {
      std::size_t pass = 0;
      std::optional<SchemaViolation> best;
      for (const auto& b : *it) {
        auto r = run(v, b, ptr);
        if (!r) {
          ++pass;
        } else if (!best || r->pointer.size() > best->pointer.size()) {
          // the deepest failure belongs to the alternative the instance meant
          best = r;
        }
      }
      if (pass == 0) return best;
      if (pass > 1) return SchemaViolation{ptr, "matches more than one alternative"};
    }
    return std::nullopt;
  }

 private:
  static bool same(const Json& a, const Json& b) {
    if (a.is_number() && b.is_number()) return a.get<double>() == b.get<double>();
    return a == b;
  }

  const Json& resolve(const std::string& ref) const {
    if (ref.rfind("#/", 0) != 0) throw std::logic_error("only local $ref is supported: " + ref);
    return root_.at(Json::json_pointer(ref.substr(1)));
  }

  const Json& root_;
};

}  // namespace

std::optional<SchemaViolation> validate_schema(const Json& instance, const Json& schema) {
  return Validator(schema).run(instance, schema, "");
}

const Json& scenario_schema() {
  static const Json s = Json::parse(schemas::scenario);
  return s;
}

const Json& report_schema() {
  static const Json s = Json::parse(schemas::report);
  return s;
}

ScenarioError::ScenarioError(const std::string& message, std::string p, std::optional<std::size_t> offset)
    : std::runtime_error(message), pointer(std::move(p)), byte_offset(offset) {}

Json parse_scenario(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    // nlohmann counts the offending byte 1-based
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw ScenarioError("malformed JSON at byte " + std::to_string(at) + ": " + e.what(), "", at);
  }
  if (auto v = validate_schema(j, scenario_schema()))
    throw ScenarioError((v->pointer.empty() ? std::string("/") : v->pointer) + ": " + v->message, v->pointer);
  return j;
}

// ---- options -----------------------------------------------------------------

LimitOptions EffectiveOptions::limit() const {
  LimitOptions o;
  o.tol = tol;
  o.pairing = pairing;
  o.threads = threads;
  return o;
}

Json EffectiveOptions::json() const {
  Json j;
  j["tol"] = tol;
  j["oracle"] = oracle;
  j["abs_tol"] = pairing.quad.abs_tol;
  j["max_depth"] = pairing.quad.max_depth;
  if (n_max) j["n_max"] = *n_max;
  if (budget) j["budget"] = *budget;
  if (grid_depth) j["grid_depth"] = *grid_depth;
  return j;
}

EffectiveOptions effective_options(const RunOptions& opt, std::optional<double> scenario_tol,
                                   std::optional<std::uint64_t> scenario_seed) {
  EffectiveOptions e;
  e.tol = opt.tol.value_or(scenario_tol.value_or(1e-4));
  e.seed = opt.seed.value_or(scenario_seed.value_or(42));
  e.seed_forced = opt.seed.has_value();
  e.oracle = opt.oracle;
  if (opt.oracle) e.pairing = PairingOptions::oracle();
  if (opt.max_depth) e.pairing.quad.max_depth = *opt.max_depth;
  e.n_max = opt.n_max;
  e.budget = opt.budget;
  e.grid_depth = opt.grid_depth;
  e.threads = opt.threads;
  return e;
}

// ---- reports -----------------------------------------------------------------

Report make_report(std::string name, std::string task, std::uint64_t seed, Json scenario, Json options,
                   std::string verdict, Json result, std::vector<CsvRow> rows, int exit_code,
                   std::optional<Json> checks) {
  Report r;
  r.name = std::move(name);
  r.rows = std::move(rows);
  r.exit_code = exit_code;
  Json& b = r.body;
  b["tool"] = "distval";
  b["version"] = std::string(tool_version());
  b["name"] = r.name;
  b["task"] = std::move(task);
  b["seed"] = seed;
  b["scenario"] = std::move(scenario);
  b["options"] = std::move(options);
  b["verdict"] = std::move(verdict);
  b["result"] = std::move(result);
  if (checks) b["checks"] = std::move(*checks);
  b["exit_code"] = exit_code;
  b["csv"] = r.name + ".csv";
  if (auto v = validate_schema(b, report_schema()))
    throw std::logic_error("report does not match its schema at " + v->pointer + ": " + v->message);
  return r;
}

std::string report_json_text(const Report& r) { return r.body.dump(2) + "\n"; }

std::string report_csv_text(const Report& r) {
  std::ostringstream os;
  os << "series,param,value,error\n";
  char buf[128];
  auto num = [&](double v) -> std::string {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  };
  for (const auto& row : r.rows) {
    std::string s = row.series;
    if (s.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      s = q + "\"";
    }
    os << s << ',' << num(row.param) << ',' << num(row.value) << ',' << num(row.error) << '\n';
  }
  return os.str();
}

void write_report(const Report& r, const std::filesystem::path& dir, double wall_seconds, unsigned threads) {
  std::filesystem::create_directories(dir);
  auto put = [&](const std::string& file, const std::string& text) {
    std::ofstream os(dir / file, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + (dir / file).string());
    os << text;
  };
  put(r.name + ".json", report_json_text(r));
  put(r.name + ".csv", report_csv_text(r));
  Json t;
  t["name"] = r.name;
  t["wall_seconds"] = wall_seconds;
  t["threads"] = threads;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  t["finished_utc"] = stamp;
  put(r.name + ".timing.json", t.dump(2) + "\n");
}

// ---- tasks -------------------------------------------------------------------

namespace {

struct Outcome {
  std::string verdict;
  Json result;
  std::vector<CsvRow> rows;
  int exit_code = kExitOk;
};

int exit_for(VerdictTag t) {
  switch (t) {
    case VerdictTag::converged:
      return kExitOk;
    case VerdictTag::diverged:
      return kExitDiverged;
    default:
      return kExitInconclusive;
  }
}

void add_rows(std::vector<CsvRow>& rows, const std::string& series, const std::vector<RawSample>& raw) {
  for (const auto& s : raw) rows.push_back({series, s.param, s.value, s.error});
}

const Json& params_of(const Json& sc) {
  static const Json empty = Json::object();
  auto it = sc.find("params");
  return it == sc.end() ? empty : *it;
}

std::vector<double> eps_grid(const Json& p) {
  const int jmax = p.value("eps_j_max", 20);
  std::vector<double> g;
  for (int j = 0; j <= jmax; ++j) g.push_back(std::ldexp(1.0, -j));
  return g;
}

Json loj_json(const LojasiewiczResult& r) {
  Json j;
  j["value"] = to_json(r.verdict);
  Json per = Json::array();
  for (std::size_t i = 0; i < r.per_phi.size(); ++i) {
    Json e;
    e["phi"] = r.labels[i];
    e["limit"] = to_json(r.per_phi[i]);
    per.push_back(std::move(e));
  }
  j["per_phi"] = std::move(per);
  return j;
}

std::vector<CsvRow> loj_rows(const LojasiewiczResult& r) {
  std::vector<CsvRow> rows;
  for (std::size_t i = 0; i < r.per_phi.size(); ++i) add_rows(rows, "phi" + std::to_string(i), r.per_phi[i].raw);
  return rows;
}

Outcome limit_outcome(const LojasiewiczResult& r) {
  return {std::string(verdict_name(r.verdict.tag)), loj_json(r), loj_rows(r), exit_for(r.verdict.tag)};
}

struct Context {
  const Json& sc;
  const Json& p;
  const EffectiveOptions& eo;
  std::optional<Distribution> f;
  Point x0{0.0, 0.0};
  int dim = 1;
};

Outcome point_value(const Context& c) {
  const std::string method = c.p.value("method", "lojasiewicz");
  if (method == "sequence") {
    const DeltaSequenceSpec seq = c.p.contains("sequence")
                                      ? sequence_from_json(c.p["sequence"], c.dim, 100, "/params/sequence")
                                      : standard_sequence(canonical_bump(c.dim), Expr::variable(Var::n), 100);
    const std::size_t N = c.eo.cap(seq.length);
    const LimitVerdict v = sequence_limit(*c.f, c.x0, seq, N, c.eo.limit());
    Outcome o;
    o.verdict = verdict_name(v.tag);
    o.result["value"] = to_json(v);
    o.result["sequence"] = to_json(seq);
    add_rows(o.rows, "sequence", v.raw);
    o.exit_code = exit_for(v.tag);
    return o;
  }
  const std::string basis = c.p.value("basis", "default");
  const std::vector<TestFunction>& b = basis == "even" ? even_basis() : basis == "radial" ? radial_basis()
                                                                                         : default_basis(c.dim);
  if (b.front().dim() != c.dim) throw ScenarioError("basis does not match the dimension", "/params/basis");
  return limit_outcome(lojasiewicz_value(*c.f, c.x0, b, eps_grid(c.p), c.eo.limit()));
}

Outcome family_probe(const Context& c) {
  FamilySampler s;
  const std::string fam = c.p.value("family", "F");
  s.family = *family_from_name(fam);
  s.seed = c.eo.seed;
  if (c.p.contains("seed") && !c.eo.seed_forced) s.seed = c.p["seed"].get<std::uint64_t>();
  s.dim = c.dim;
  s.max_mixture = c.p.value("max_mixture", std::size_t{5});
  s.length = c.eo.cap(c.p.value("N", std::size_t{100}));
  FamilyOptions fo;
  fo.limit = c.eo.limit();
  fo.adversarial = c.p.value("adversarial", true);
  const FamilyResult r = family_value(*c.f, c.x0, s, c.p.value("count", std::size_t{8}), s.length, fo);
  Outcome o;
  o.verdict = verdict_name(r.aggregate.tag);
  o.result["family"] = fam;
  o.result["sampler_seed"] = s.seed;
  o.result["aggregate"] = to_json(r.aggregate);
  o.result["candidate"] = number(r.candidate);
  o.result["witness"] = r.witness;
  if (r.jump) o.result["jump"] = to_json(*r.jump);
  Json members = Json::array();
  for (std::size_t i = 0; i < r.members.size(); ++i) {
    Json m;
    m["label"] = r.labels[i];
    m["limit"] = to_json(r.members[i]);
    members.push_back(std::move(m));
    add_rows(o.rows, "member" + std::to_string(i), r.members[i].raw);
  }
  o.result["members"] = std::move(members);
  o.exit_code = exit_for(r.aggregate.tag);
  return o;
}

Outcome jump(const Context& c) {
  const JumpFitReport r = jump_fit(*c.f, c.x0, {}, eps_grid(c.p), c.eo.limit());
  Outcome o;
  o.result["fit"] = to_json(r.fit);
  Json masses = Json::array();
  for (const auto& [m, p] : r.masses) masses.push_back(Json::array({number(m), number(p)}));
  o.result["masses"] = std::move(masses);
  o.result["limits"] = loj_json(r.limits);
  o.rows = loj_rows(r.limits);
  const bool ok = std::isfinite(r.fit.residual);
  o.verdict = ok ? "Completed" : "Inconclusive";
  o.exit_code = ok ? kExitOk : kExitInconclusive;
  return o;
}

Outcome angular(const Context& c) {
  std::vector<double> angles;
  if (c.p.contains("angles")) {
    angles = c.p["angles"].get<std::vector<double>>();
  } else {
    for (int k = 0; k < 8; ++k) angles.push_back(std::numbers::pi * k / 4.0);
  }
  const TestFunction rho =
      c.p.contains("rho") ? test_function_from_json(c.p["rho"], 1, "/params/rho") : affine_bump(1.5, 0.5);
  const AngularProfile prof = angular_profile(*c.f, c.x0, angles, rho, eps_grid(c.p), c.eo.limit());
  Outcome o;
  Json arr = Json::array();
  bool all = true;
  for (const auto& s : prof.samples) {
    Json e;
    e["theta"] = number(s.theta);
    e["alpha"] = number(s.alpha);
    e["error"] = number(s.error);
    e["converged"] = s.converged;
    arr.push_back(std::move(e));
    o.rows.push_back({"alpha", s.theta, s.alpha, s.error});
    all = all && s.converged;
  }
  o.result["rho"] = to_json(rho);
  o.result["samples"] = std::move(arr);
  o.verdict = all ? "Completed" : "Inconclusive";
  o.exit_code = all ? kExitOk : kExitInconclusive;
  return o;
}

SetFamily family_of(const Json& sf) {
  const Expr eta = sf.contains("eta") ? expr_from_json(sf["eta"], "/set_family/eta") : parse("2^(-n)");
  try {
    return build_example1(sf.at("K").get<int>(), eta);
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("/set_family: ") + e.what(), "/set_family");
  }
}

// The 1-d expression a limit task works on.
Expr subject(const Context& c, const std::optional<SetFamily>& sf) {
  if (sf) return c.sc["set_family"].value("example", 2) == 1 ? sf->indicator_expr() : build_example2(*sf);
  const Distribution& f = *c.f;
  if (f.dim() != 1 || !f.regular() || !f.deltas().empty() || f.geometry() != Geometry::cartesian)
    throw ScenarioError("/distribution: this task needs a 1-d regular distribution without delta terms",
                        "/distribution");
  return *f.resolved().regular();
}

Json scaling_json(const ScalingProbeReport& r, std::vector<CsvRow>& rows) {
  Json j;
  j["constancy"] = std::string(constancy_name(r.constancy));
  j["limit"] = number(r.limit);
  Json per = Json::array();
  for (std::size_t i = 0; i < r.a_grid.size(); ++i) {
    Json e;
    e["a"] = number(r.a_grid[i]);
    e["limit"] = to_json(r.per_a[i]);
    per.push_back(std::move(e));
    std::ostringstream name;
    name << "a=" << r.a_grid[i];
    add_rows(rows, name.str(), r.per_a[i].raw);
  }
  j["per_a"] = std::move(per);
  return j;
}

Outcome limit_probe(const Context& c) {
  std::optional<SetFamily> sf;
  if (c.sc.contains("set_family")) sf = family_of(c.sc["set_family"]);
  const std::string probe = c.p.value("probe", sf ? "set-family" : "scaling");
  Outcome o;
  o.result["probe"] = probe;
  if (probe == "set-family" && !sf)
    throw ScenarioError("/set_family: the set-family probe needs a set family", "/set_family");
  const Expr f = subject(c, sf);
  if (sf) o.result["set_family"] = to_json(*sf);
  o.result["f"] = f.str();
  LimitOptions lo = c.eo.limit();

  if (probe == "scaling") {
    const Expr xi = c.p.contains("xi") ? expr_from_json(c.p["xi"], "/params/xi") : Expr::variable(Var::n);
    const auto a = c.p.contains("a") ? c.p["a"].get<std::vector<double>>() : std::vector<double>{0.5, 1.0, 2.0, 4.0};
    const std::size_t N = c.eo.cap(c.p.value("N", std::size_t{100}));
    const ScalingProbeReport r = scaling_probe(f, xi, a, N, lo);
    o.result["xi"] = xi.str();
    o.result["scaling"] = scaling_json(r, o.rows);
    o.verdict = constancy_name(r.constancy);
    o.exit_code = r.constancy == Constancy::mixed ? kExitInconclusive : kExitOk;
  } else if (probe == "tail") {
    const double x_max = c.p.value("x_max", sf ? static_cast<double>(sf->N[sf->K - 1]) : 1e6);
    const LimitVerdict v = continuous_tail_limit(f, x_max, c.p.value("points", std::size_t{200}), lo);
    o.result["x_max"] = number(x_max);
    o.result["tail"] = to_json(v);
    add_rows(o.rows, "tail", v.raw);
    o.verdict = verdict_name(v.tag);
    o.exit_code = exit_for(v.tag);
  } else if (probe == "smoothed") {
    const TestFunction phi =
        c.p.contains("phi") ? test_function_from_json(c.p["phi"], 1, "/params/phi") : affine_bump(1.5, 0.5);
    std::vector<double> lambda;
    if (c.p.contains("lambda")) {
      lambda = c.p["lambda"].get<std::vector<double>>();
    } else {
      for (int k = 0; k <= 10; ++k) lambda.push_back(std::ldexp(1.0, k));
    }
    const auto rows = smoothed_scaling_probe(f, phi, lambda, lo.pairing);
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json e;
      e["lambda"] = number(r.lambda);
      e["value"] = number(r.value);
      e["error"] = number(r.error);
      e["status"] = std::string(quad_status_name(r.status));
      arr.push_back(std::move(e));
      o.rows.push_back({"G", r.lambda, r.value, r.error});
    }
    o.result["phi"] = to_json(phi);
    o.result["smoothed"] = std::move(arr);
    o.verdict = "Completed";
  } else {
    const SetFamilyCheck chk = sf->check();
    if (!chk.ok()) throw ScenarioError("/set_family: the constructed sets violate their invariants", "/set_family");
    const auto nc = nonconvergence_fraction(*sf, c.p.value("samples", std::size_t{10000}), c.eo.seed);
    Json n;
    n["samples"] = nc.samples;
    n["hits"] = nc.hits;
    n["fraction"] = number(nc.fraction);
    n["sigma"] = number(nc.sigma);
    n["bound"] = number(nc.bound);
    n["within_bound"] = nc.fraction <= nc.bound + 2.0 * nc.sigma;
    o.result["nonconvergence"] = std::move(n);
    const double x_max = static_cast<double>(sf->N[sf->K - 1]);
    const LimitVerdict tail = continuous_tail_limit(f, x_max, 200, lo);
    o.result["tail"] = to_json(tail);
    add_rows(o.rows, "tail", tail.raw);
    const auto a = c.p.contains("a") ? c.p["a"].get<std::vector<double>>()
                                     : std::vector<double>{1.0, std::numbers::sqrt2, 2.0, 3.0};
    const ScalingProbeReport sp = scaling_probe(f, Expr::variable(Var::n), a, c.eo.cap(c.p.value("N", std::size_t{200})), lo);
    o.result["scaling"] = scaling_json(sp, o.rows);
    o.verdict = "Completed";
  }
  return o;
}

Outcome measure_stat(const Context& c) {
  std::optional<SetFamily> sf;
  if (c.sc.contains("set_family")) sf = family_of(c.sc["set_family"]);
  const Expr f = subject(c, sf);
  const double L = c.p.value("L", 0.0), eps = c.p.value("eps", 0.5), C = c.p.value("C", 2.0);
  std::vector<double> xg;
  if (c.p.contains("x_grid")) {
    xg = c.p["x_grid"].get<std::vector<double>>();
    for (std::size_t i = 1; i < xg.size(); ++i)
      if (!(xg[i] > xg[i - 1])) throw ScenarioError("/params/x_grid: must be increasing", "/params/x_grid");
  } else if (sf) {
    const double top = static_cast<double>(sf->N[sf->K - 1]);
    for (int i = 0; i < 40; ++i) xg.push_back(std::pow(top, i / 39.0));
  } else {
    throw ScenarioError("/params/x_grid: required without a set family", "/params/x_grid");
  }
  const bool tents = sf && c.sc["set_family"].value("example", 2) == 2;
  const bool exact = c.p.value("exact", tents);
  if (exact && !tents)
    throw ScenarioError("/params/exact: the exact path needs an example-2 set family", "/params/exact");
  const MeasureStat ms = exact ? convergence_in_measure_tents(*sf, L, eps, C, xg)
                               : convergence_in_measure(f, L, eps, C, xg, c.p.value("samples", std::size_t{4096}),
                                                        c.eo.seed);
  Outcome o;
  o.result["exact"] = ms.exact;
  o.result["samples"] = ms.samples;
  Json rows = Json::array();
  for (std::size_t i = 0; i < xg.size(); ++i) {
    rows.push_back(Json::array({number(xg[i]), number(ms.ratio[i]), number(ms.error[i])}));
    o.rows.push_back({"ratio", xg[i], ms.ratio[i], ms.error[i]});
  }
  o.result["x_ratio_error"] = std::move(rows);
  const KendallResult kt = kendall_tau(xg, ms.ratio);
  o.result["last_ratio"] = number(ms.ratio.back());
  o.result["kendall_tau"] = number(kt.tau);
  o.result["kendall_p_decreasing"] = number(kt.p_lower);
  o.verdict = "Completed";
  return o;
}

Outcome linf(const Context& c) {
  const Json& reg = c.p.at("region");
  Region U{point_from_json(reg.at("lo"), c.dim, "/params/region/lo"),
           point_from_json(reg.at("hi"), c.dim, "/params/region/hi")};
  for (int a = 0; a < c.dim; ++a)
    if (!(U.hi[a] > U.lo[a])) throw ScenarioError("/params/region: hi must exceed lo", "/params/region");
  LadderOptions lo;
  lo.budget = c.eo.budget.value_or(c.p.value("budget", lo.budget));
  lo.max_depth = c.eo.grid_depth.value_or(c.p.value("grid_depth", lo.max_depth));
  lo.initial = c.p.value("initial", lo.initial);
  lo.beam = c.p.value("beam", lo.beam);
  lo.threads = c.eo.threads;
  lo.pairing = c.eo.pairing;
  const BoundednessReport b = boundedness_probe(*c.f, U, lo);
  const LinfEstimate l = linf_norm_estimate(*c.f, U, lo);
  const EssBounds e = esssup_essinf(*c.f, U, lo);
  Outcome o;
  Json bj;
  bj["verdict"] = std::string(bound_tag_name(b.verdict));
  bj["bound"] = number(b.bound);
  bj["witness"] = to_json(b.witness, c.dim);
  bj["used"] = b.used;
  bj["note"] = b.note;
  o.result["boundedness"] = std::move(bj);
  Json lj;
  lj["value"] = number(l.value);
  lj["certificate"] = to_json(l.certificate, c.dim);
  lj["stable"] = l.stable;
  lj["unbounded"] = l.unbounded;
  o.result["linf"] = std::move(lj);
  Json ej;
  ej["esssup"] = number(e.sup);
  ej["essinf"] = number(e.inf);
  ej["sup_probe"] = to_json(e.sup_probe, c.dim);
  ej["inf_probe"] = to_json(e.inf_probe, c.dim);
  o.result["ess"] = std::move(ej);
  for (const auto& p : b.table) o.rows.push_back({"level_best", static_cast<double>(p.level), p.pairing, 0.0});
  o.verdict = bound_tag_name(b.verdict);
  o.exit_code = b.verdict == BoundTag::bounded_witness     ? kExitOk
                : b.verdict == BoundTag::unbounded_witness ? kExitDiverged
                                                           : kExitInconclusive;
  return o;
}

Outcome moment_task(const Context& c) {
  const int K = c.p.value("K", 4);
  const TestFunction phi =
      c.p.contains("phi") ? test_function_from_json(c.p["phi"], 1, "/params/phi") : canonical_bump(1);
  const auto Q = c.p.contains("Q") ? c.p["Q"].get<std::vector<int>>() : std::vector<int>{0, 2};
  const auto lambda =
      c.p.contains("lambda") ? c.p["lambda"].get<std::vector<double>>() : std::vector<double>{50, 100, 200, 400};
  for (int q : Q)
    if (q > K) throw ScenarioError("/params/Q: needs moments up to K", "/params/Q");
  const MomentTable mt = moments(*c.f, K);
  Outcome o;
  Json mj = Json::array();
  for (int k = 0; k <= K; ++k) {
    Json e;
    e["k"] = k;
    e["mu"] = number(mt.mu[k]);
    e["error"] = number(mt.error[k]);
    mj.push_back(std::move(e));
  }
  o.result["moments"] = std::move(mj);
  o.result["phi"] = to_json(phi);
  Json rem = Json::array();
  for (int q : Q) {
    std::vector<double> lx, ly;
    Json vals = Json::array();
    for (double lam : lambda) {
      const double r = moment_expansion_remainder(*c.f, phi, lam, q);
      vals.push_back(Json::array({number(lam), number(r)}));
      o.rows.push_back({"remainder Q=" + std::to_string(q), lam, r, 0.0});
      lx.push_back(std::log(lam));
      ly.push_back(std::log(std::fabs(r)));
    }
    Json e;
    e["Q"] = q;
    e["remainder"] = std::move(vals);
    e["slope"] = number(linear_fit(lx, ly).slope);
    rem.push_back(std::move(e));
  }
  o.result["expansion"] = std::move(rem);
  o.verdict = "Completed";
  return o;
}

}  // namespace

Report run_scenario(const Json& sc, std::string name, const RunOptions& opt) {
  const std::optional<double> tol = sc.contains("tol") ? std::optional<double>(sc["tol"].get<double>()) : std::nullopt;
  const std::optional<std::uint64_t> seed =
      sc.contains("seed") ? std::optional<std::uint64_t>(sc["seed"].get<std::uint64_t>()) : std::nullopt;
  EffectiveOptions eo = effective_options(opt, tol, seed);
  const std::string task = sc.at("task").get<std::string>();
  Context c{sc, params_of(sc), eo, std::nullopt, {0.0, 0.0}, 1};
  if (sc.contains("distribution")) {
    try {
      c.f = distribution_from_json(sc["distribution"], "/distribution");
    } catch (const JsonFieldError& e) {
      throw ScenarioError(e.what(), e.pointer);
    }
    c.dim = c.f->dim();
  }
  if (sc.contains("point")) {
    try {
      c.x0 = point_from_json(sc["point"], c.dim, "/point");
    } catch (const JsonFieldError& e) {
      throw ScenarioError(e.what(), e.pointer);
    }
  }
  Outcome o;
  try {
    if (task == "point-value") {
      o = point_value(c);
    } else if (task == "family-probe") {
      o = family_probe(c);
    } else if (task == "sym-value") {
      o = limit_outcome(symmetric_value(*c.f, c.x0, {}, eps_grid(c.p), eo.limit()));
    } else if (task == "radial-value") {
      o = limit_outcome(radial_value(*c.f, c.x0, {}, eps_grid(c.p), eo.limit()));
    } else if (task == "jump-fit") {
      o = jump(c);
    } else if (task == "angular-profile") {
      o = angular(c);
    } else if (task == "limit-probe") {
      o = limit_probe(c);
    } else if (task == "measure-stat") {
      o = measure_stat(c);
    } else if (task == "linf") {
      o = linf(c);
    } else {
      o = moment_task(c);
    }
  } catch (const JsonFieldError& e) {
    throw ScenarioError(e.what(), e.pointer);
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(task + ": " + e.what(), "/task");
  }
  return make_report(std::move(name), task, eo.seed, sc, eo.json(), o.verdict, std::move(o.result), std::move(o.rows),
                     o.exit_code);
}

}  // namespace distval
