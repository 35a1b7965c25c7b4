# Copyright 2026 The lbft Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Lisk-BFT consensus simulator, safety/liveness checkers and evidence tools."""

import json

from ._lbft import (
    InvalidScenario,
    Mode,
    Scenario,
    Trace,
    check_contradicting,
    evaluate,
    load_scenario,
    load_trace,
    parse_scenario,
    run,
    trace_from_jsonl,
)
from ._lbft import evidence as _evidence

__all__ = [
    "InvalidScenario",
    "Mode",
    "Scenario",
    "Trace",
    "check_contradicting",
    "evaluate",
    "evidence",
    "load_scenario",
    "load_trace",
    "parse_scenario",
    "run",
    "trace_from_jsonl",
]


def evidence(trace):
    """Evidence records of a trace as dicts."""
    return [json.loads(line) for line in _evidence(trace)]
