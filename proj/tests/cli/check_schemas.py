"""Validates scenarios and produced reports with the jsonschema package."""
import glob
import json
import os
import sys

import jsonschema

docs, scenarios, *report_dirs = sys.argv[1:]
with open(os.path.join(docs, "scenario.schema.json")) as fh:
    scenario_schema = json.load(fh)
with open(os.path.join(docs, "report.schema.json")) as fh:
    report_schema = json.load(fh)
jsonschema.Draft202012Validator.check_schema(scenario_schema)
jsonschema.Draft202012Validator.check_schema(report_schema)

checked = 0
for path in sorted(glob.glob(os.path.join(scenarios, "*.json"))):
    with open(path) as fh:
        jsonschema.validate(json.load(fh), scenario_schema)
    checked += 1
for d in report_dirs:
    for path in sorted(glob.glob(os.path.join(d, "*.json"))):
        if path.endswith(".timing.json"):
            continue
        with open(path) as fh:
            jsonschema.validate(json.load(fh), report_schema)
        checked += 1

with open(os.path.join(os.path.dirname(__file__), "unknown_field.json")) as fh:
    bad = json.load(fh)
try:
    jsonschema.validate(bad, scenario_schema)
except jsonschema.ValidationError:
    pass
else:
    sys.exit("unknown field was accepted")
print(f"{checked} documents valid")
