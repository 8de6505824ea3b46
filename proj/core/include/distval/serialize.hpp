#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "distval/boundedness.hpp"
#include "distval/distribution.hpp"
#include "distval/limitlab.hpp"
#include "distval/mollifier.hpp"
#include "distval/pointvalue.hpp"

namespace distval {

// Insertion-ordered, so dumps are deterministic.
using Json = nlohmann::ordered_json;

// Bad content in an otherwise well-formed document. `pointer` is the JSON
// pointer of the offending value.
struct JsonFieldError : std::runtime_error {
  JsonFieldError(std::string pointer, const std::string& message);
  std::string pointer;
};

// Finite doubles as numbers, the rest as "inf", "-inf", "nan".
Json number(double v);

Json to_json(const Point& p, int dim);
Json to_json(const Distribution& f);
Json to_json(const TestFunction& phi);
Json to_json(const DeltaSequenceSpec& seq);
Json to_json(const RawSample& s);
// Raw series are left out unless `raw` is set; reports put them in the CSV.
Json to_json(const LimitVerdict& v, bool raw = false);
Json to_json(const JumpFit& fit);
Json to_json(const Probe& p, int dim);
Json to_json(const SetFamily& s);
Json to_json(const SetFamilyCheck& c);

// {"num": "...", "den": "..."} of a double, exactly.
Json fraction_json(double v);

Expr expr_from_json(const Json& j, const std::string& pointer);
Point point_from_json(const Json& j, int dim, const std::string& pointer);
Distribution distribution_from_json(const Json& j, const std::string& pointer = "");
TestFunction test_function_from_json(const Json& j, int dim, const std::string& pointer);
DeltaSequenceSpec sequence_from_json(const Json& j, int dim, std::size_t default_length, const std::string& pointer);

}  // namespace distval
