#include "distval/serialize.hpp"

#include <cmath>
#include <variant>

namespace distval {

JsonFieldError::JsonFieldError(std::string p, const std::string& message)
    : std::runtime_error((p.empty() ? std::string("/") : p) + ": " + message), pointer(std::move(p)) {}

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json to_json(const Point& p, int dim) {
  if (dim == 1) return number(p[0]);
  return Json::array({number(p[0]), number(p[1])});
}

Json to_json(const Distribution& f0) {
  const Distribution f = f0.resolved();
  Json j;
  j["dim"] = f.dim();
  if (f.regular()) j["regular"] = f.regular()->str();
  if (f.geometry() == Geometry::radial) j["radial_dim"] = f.radial_dim();
  if (!f.deltas().empty()) {
    Json arr = Json::array();
    for (const auto& t : f.deltas()) {
      Json d;
      d["loc"] = to_json(t.location, f.dim());
      if (f.dim() == 1) {
        d["order"] = t.order[0];
      } else {
        d["order"] = Json::array({t.order[0], t.order[1]});
      }
      d["coef"] = number(t.coefficient);
      arr.push_back(std::move(d));
    }
    j["deltas"] = std::move(arr);
  }
  if (f.principal_value()) j["pv"] = true;
  return j;
}

Json to_json(const TestFunction& phi) {
  Json j;
  if (phi.generic()) {
    j["expr"] = phi.body().str();
    j["center"] = to_json(phi.support_center(), phi.dim());
    j["radius"] = number(phi.support_radius());
    if (phi.is_radial()) j["radial"] = true;
    return j;
  }
  Json arr = Json::array();
  for (const auto& c : phi.components()) {
    Json cj;
    cj["weight"] = number(c.weight);
    cj["center"] = to_json(c.center, phi.dim());
    cj["radius"] = number(c.radius);
    arr.push_back(std::move(cj));
  }
  j["components"] = std::move(arr);
  return j;
}

Json to_json(const DeltaSequenceSpec& seq) {
  Json j;
  switch (seq.kind) {
    case SequenceKind::standard:
      j["kind"] = "standard";
      if (seq.base) j["base"] = to_json(*seq.base);
      j["xi"] = seq.xi.str();
      break;
    case SequenceKind::shifted:
      j["kind"] = "shifted";
      j["centers"] = seq.centers.str();
      j["radii"] = seq.radii.str();
      if (seq.dim == 2) j["direction"] = number(seq.direction);
      break;
    case SequenceKind::explicit_list:
      j["kind"] = "explicit";
      break;
  }
  j["N"] = seq.length;
  if (!seq.label.empty()) j["label"] = seq.label;
  if (!seq.warnings.empty()) j["warnings"] = seq.warnings;
  return j;
}

Json to_json(const RawSample& s) {
  Json j;
  j["param"] = number(s.param);
  j["value"] = number(s.value);
  j["error"] = number(s.error);
  j["status"] = std::string(quad_status_name(s.status));
  return j;
}

Json to_json(const LimitVerdict& v, bool raw) {
  Json j;
  j["verdict"] = std::string(verdict_name(v.tag));
  j["gamma"] = number(v.gamma);
  j["error"] = number(v.error);
  if (v.tag == VerdictTag::diverged) {
    j["growth_exponent"] = number(v.growth_exponent);
    j["growth_r2"] = number(v.growth_r2);
  }
  if (!v.profile.empty()) {
    Json arr = Json::array();
    for (const auto& [k, g] : v.profile) arr.push_back(Json::array({number(k), number(g)}));
    j["profile"] = std::move(arr);
  }
  j["accelerated"] = v.accelerated;
  if (!v.note.empty()) j["note"] = v.note;
  if (raw) {
    Json arr = Json::array();
    for (const auto& s : v.raw) arr.push_back(to_json(s));
    j["raw"] = std::move(arr);
  }
  return j;
}

Json to_json(const JumpFit& fit) {
  Json j;
  j["gamma_minus"] = number(fit.gamma_minus);
  j["gamma_plus"] = number(fit.gamma_plus);
  j["residual"] = number(fit.residual);
  j["used"] = fit.used;
  return j;
}

Json to_json(const Probe& p, int dim) {
  Json j;
  j["center"] = to_json(p.center, dim);
  j["radius"] = number(p.radius);
  j["level"] = p.level;
  j["pairing"] = number(p.pairing);
  return j;
}

Json fraction_json(double v) {
  auto [num, den] = exact_fraction(v);
  Json j;
  j["num"] = num;
  j["den"] = den;
  return j;
}

Json to_json(const SetFamilyCheck& c) {
  Json j;
  j["growth"] = c.growth;
  j["containment"] = c.containment;
  j["measure"] = c.measure;
  j["summable"] = c.summable;
  j["ok"] = c.ok();
  if (!c.details.empty()) j["details"] = c.details;
  return j;
}

Json to_json(const SetFamily& s) {
  Json j;
  j["K"] = s.K;
  j["N"] = s.N;
  Json sets = Json::array();
  for (int k = 0; k < s.K; ++k) {
    Json b;
    b["k"] = k + 1;
    b["lo"] = fraction_json(s.B[k].lo);
    b["hi"] = fraction_json(s.B[k].hi);
    b["eta"] = fraction_json(s.eta[k]);
    b["measure_A"] = s.measure_A_exact[k];
    sets.push_back(std::move(b));
  }
  j["B"] = std::move(sets);
  j["check"] = to_json(s.check());
  if (!s.warnings.empty()) j["warnings"] = s.warnings;
  return j;
}

// ---- parsing ---------------------------------------------------------------

Expr expr_from_json(const Json& j, const std::string& pointer) {
  if (!j.is_string()) throw JsonFieldError(pointer, "expected an expression string");
  auto r = try_parse(j.get<std::string>());
  if (auto* e = std::get_if<ParseError>(&r)) {
    throw JsonFieldError(pointer, "expression error at character " + std::to_string(e->offset) + ": expected " +
                                      e->expected + ", found " + e->found);
  }
  return std::get<Expr>(r);
}

Point point_from_json(const Json& j, int dim, const std::string& pointer) {
  Point p{0.0, 0.0};
  if (j.is_number()) {
    if (dim != 1) throw JsonFieldError(pointer, "a point in d = 2 needs two coordinates");
    p[0] = j.get<double>();
    return p;
  }
  if (!j.is_array() || j.size() != static_cast<std::size_t>(dim))
    throw JsonFieldError(pointer, "expected " + std::to_string(dim) + " coordinate(s)");
  for (int a = 0; a < dim; ++a) p[a] = j[a].get<double>();
  return p;
}

Distribution distribution_from_json(const Json& j, const std::string& pointer) {
  const int dim = j.at("dim").get<int>();
  Distribution f;
  bool have = false;
  if (j.contains("regular")) {
    const Expr e = expr_from_json(j["regular"], pointer + "/regular");
    try {
      if (j.contains("radial_dim")) {
        const int d = j["radial_dim"].get<int>();
        if ((d == 1) != (dim == 1)) throw JsonFieldError(pointer + "/radial_dim", "does not match dim");
        f = Distribution::radial(e, d);
      } else {
        if (e.uses(Var::r) || e.uses(Var::n)) throw JsonFieldError(pointer + "/regular", "may only use x and y");
        if (dim == 1 && e.uses(Var::y)) throw JsonFieldError(pointer + "/regular", "uses y in d = 1");
        f = dim == 1 ? Distribution::regular1(e) : Distribution::regular2(e);
      }
    } catch (const std::invalid_argument& ex) {
      throw JsonFieldError(pointer + "/regular", ex.what());
    }
    have = true;
  } else if (j.contains("radial_dim")) {
    throw JsonFieldError(pointer + "/radial_dim", "needs a regular profile");
  }
  if (j.contains("deltas")) {
    const Json& arr = j["deltas"];
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = pointer + "/deltas/" + std::to_string(i);
      DeltaTerm t;
      if (arr[i].contains("loc")) t.location = point_from_json(arr[i]["loc"], dim, p + "/loc");
      if (arr[i].contains("order")) {
        const Json& o = arr[i]["order"];
        if (o.is_number()) {
          if (dim != 1) throw JsonFieldError(p + "/order", "a multi-index in d = 2 needs two entries");
          t.order = {o.get<int>(), 0};
        } else {
          if (dim != 2) throw JsonFieldError(p + "/order", "expected a single order in d = 1");
          t.order = {o[0].get<int>(), o[1].get<int>()};
        }
      }
      if (t.order[0] + t.order[1] > kMaxDeltaOrder) throw JsonFieldError(p + "/order", "total order exceeds 6");
      if (arr[i].contains("coef")) t.coefficient = arr[i]["coef"].get<double>();
      if (!have) {
        f = Distribution::delta(t.location, t.order, t.coefficient, dim);
        have = true;
      } else {
        f.add_delta(t);
      }
    }
  }
  if (!have) throw JsonFieldError(pointer, "needs a regular part or at least one delta term");
  if (j.value("pv", false)) f.set_principal_value(true);
  if (auto problem = f.integrability_problem()) throw JsonFieldError(pointer + "/regular", *problem);
  return f;
}

TestFunction test_function_from_json(const Json& j, int dim, const std::string& pointer) {
  try {
    if (j.contains("components")) {
      std::vector<BumpComponent> comps;
      const Json& arr = j["components"];
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = pointer + "/components/" + std::to_string(i);
        BumpComponent c;
        c.weight = arr[i].value("weight", 1.0);
        c.center = point_from_json(arr[i].at("center"), dim, p + "/center");
        c.radius = arr[i].at("radius").get<double>();
        comps.push_back(c);
      }
      return TestFunction::from_components(dim, std::move(comps));
    }
    const Expr body = expr_from_json(j.at("expr"), pointer + "/expr");
    if (body.uses(Var::r) || body.uses(Var::n) || (dim == 1 && body.uses(Var::y)))
      throw JsonFieldError(pointer + "/expr", "a test function body may only use x" + std::string(dim == 2 ? " and y" : ""));
    const Point c = j.contains("center") ? point_from_json(j["center"], dim, pointer + "/center") : Point{0.0, 0.0};
    return TestFunction::from_expr(dim, body, c, j.at("radius").get<double>(), j.value("radial", false));
  } catch (const std::invalid_argument& ex) {
    throw JsonFieldError(pointer, ex.what());
  }
}

DeltaSequenceSpec sequence_from_json(const Json& j, int dim, std::size_t default_length, const std::string& pointer) {
  const std::size_t N = j.value("N", default_length);
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "standard") {
      TestFunction base = j.contains("base") ? test_function_from_json(j["base"], dim, pointer + "/base")
                                             : canonical_bump(dim);
      const auto chk = base.verify();
      if (!chk.ok())
        throw JsonFieldError(pointer + "/base", "base must be a normalized positive test function (integral " +
                                                    std::to_string(chk.integral) + ")");
      const Expr xi = j.contains("xi") ? expr_from_json(j["xi"], pointer + "/xi") : Expr::variable(Var::n);
      return standard_sequence(base, xi, N);
    }
    return shifted_sequence(expr_from_json(j.at("centers"), pointer + "/centers"),
                            expr_from_json(j.at("radii"), pointer + "/radii"), N, dim, j.value("direction", 0.0));
  } catch (const std::invalid_argument& ex) {
    throw JsonFieldError(pointer, ex.what());
  }
}

}  // namespace distval
