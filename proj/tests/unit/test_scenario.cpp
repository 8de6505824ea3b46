#include <doctest.h>

#include <string>

#include "distval/reproduce.hpp"
#include "distval/scenario.hpp"

using namespace distval;

namespace {

std::string error_of(std::string_view text) {
  try {
    run_scenario(parse_scenario(text), "t");
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("schema subset validator") {
  const Json schema = Json::parse(R"j({
    "type": "object",
    "required": ["a"],
    "additionalProperties": false,
    "properties": {
      "a": {"type": "integer", "minimum": 1, "maximum": 3},
      "b": {"type": "array", "items": {"enum": ["x", "y"]}, "minItems": 1},
      "c": {"oneOf": [{"type": "string", "minLength": 2}, {"type": "number", "exclusiveMinimum": 0}]},
      "d": {"$ref": "#/$defs/pos"}
    },
    "$defs": {"pos": {"type": "number", "exclusiveMinimum": 0}}
  })j");
  CHECK_FALSE(validate_schema(Json::parse(R"j({"a": 2, "b": ["x"], "c": "ok", "d": 1})j"), schema));
  auto v = validate_schema(Json::parse(R"j({"b": ["x"]})j"), schema);
  REQUIRE(v);
  CHECK(v->pointer == "/a");
  v = validate_schema(Json::parse(R"j({"a": 5})j"), schema);
  REQUIRE(v);
  CHECK(v->pointer == "/a");
  v = validate_schema(Json::parse(R"j({"a": 1, "b": ["z"]})j"), schema);
  REQUIRE(v);
  CHECK(v->pointer == "/b/0");
  v = validate_schema(Json::parse(R"j({"a": 1, "e": 0})j"), schema);
  REQUIRE(v);
  CHECK(v->pointer == "/e");
  CHECK(v->message.find("unknown field") != std::string::npos);
  CHECK(validate_schema(Json::parse(R"j({"a": 1, "c": -1})j"), schema));
  CHECK(validate_schema(Json::parse(R"j({"a": 1, "d": 0})j"), schema));
  CHECK(validate_schema(Json::parse(R"j({"a": 1.5})j"), schema));
}

TEST_CASE("scenario diagnostics") {
  CHECK(error_of(R"j({"task": "point-value",)j").find("malformed JSON at byte") != std::string::npos);
  CHECK(error_of(R"j({"task": "nope"})j").find("/task") != std::string::npos);
  CHECK(error_of(R"j({"task": "point-value", "distribution": {"dim": 3, "regular": "x"}})j")
            .find("/distribution/dim") != std::string::npos);
  CHECK(error_of(R"j({"task": "point-value", "distribution": {"dim": 1, "regular": "sin(x"}})j")
            .find("/distribution/regular: expression error at character") != std::string::npos);
  CHECK(error_of(R"j({"task": "point-value", "distribution": {"dim": 1, "regular": "1/x^2"}})j")
            .find("/distribution") != std::string::npos);
  CHECK(error_of(R"j({"task": "point-value", "distribution": {"dim": 1, "regular": "x"}, "extra": 1})j")
            .find("unknown field") != std::string::npos);
}

TEST_CASE("serialization round trip") {
  const Distribution f = Distribution::regular1(parse("chi(0,inf)+x^2"))
                             .add_delta({{0.5, 0.0}, {1, 0}, -2.0})
                             .add_delta({{0.0, 0.0}, {0, 0}, 1.0});
  const Json j = to_json(f);
  const Distribution g = distribution_from_json(j);
  CHECK(to_json(g) == j);
  const TestFunction phi = affine_bump(0.2, 0.5);
  for (double x : {-0.4, 0.0, 0.3}) CHECK(pair(f, affine_bump(x, 0.5)).value == pair(g, affine_bump(x, 0.5)).value);
  const TestFunction back = test_function_from_json(to_json(phi), 1, "");
  CHECK(back(0.31) == phi(0.31));
  CHECK(number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(number(std::nan("")) == "nan");
  CHECK(fraction_json(0.75)["den"] == "4");
}

TEST_CASE("scenario runs produce schema-valid, deterministic reports") {
  const Json sc = parse_scenario(R"j({
    "task": "point-value",
    "distribution": {"dim": 1, "regular": "cos(x)"},
    "point": 0.5,
    "params": {"method": "lojasiewicz", "eps_j_max": 16}
  })j");
  RunOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const Report a = run_scenario(sc, "cos", one);
  const Report b = run_scenario(sc, "cos", four);
  CHECK(a.exit_code == kExitOk);
  CHECK(a.body["verdict"] == "Converged");
  CHECK_FALSE(validate_schema(a.body, report_schema()));
  CHECK(report_json_text(a) == report_json_text(b));
  CHECK(report_csv_text(a) == report_csv_text(b));
  CHECK(report_csv_text(a).rfind("series,param,value,error\n", 0) == 0);

  const Json delta = parse_scenario(R"j({
    "task": "point-value",
    "distribution": {"dim": 1, "deltas": [{"loc": 0}]},
    "point": 0,
    "params": {"method": "sequence", "sequence": {"kind": "standard", "xi": "n", "N": 200}}
  })j");
  const Report d = run_scenario(delta, "delta");
  CHECK(d.body["verdict"] == "Diverged");
  CHECK(d.exit_code == kExitDiverged);
}

TEST_CASE("command-line overrides win") {
  const EffectiveOptions e = effective_options(RunOptions{.tol = 1e-6, .seed = 5}, 1e-3, 9);
  CHECK(e.tol == 1e-6);
  CHECK(e.seed == 5);
  CHECK(e.seed_forced);
  const EffectiveOptions s = effective_options(RunOptions{}, 1e-3, 9);
  CHECK(s.tol == 1e-3);
  CHECK(s.seed == 9);
}

TEST_CASE("reproduce targets are known") {
  CHECK(reproduce_targets().size() == 8);
  CHECK_THROWS_AS(reproduce("nope"), std::invalid_argument);
  const Report r = reproduce("moment-expansion");
  CHECK(r.body["verdict"] == "Pass");
  CHECK_FALSE(validate_schema(r.body, report_schema()));
}
