# Copyright 2026 The qsd Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Quantum state discrimination toolkit."""

import json

from ._qsd import (
    __version__,
    coherent_state,
    depolarize,
    dilate,
    helstrom,
    load_problem,
    measure,
    solve,
    uqsd_two_pure,
)
from ._qsd import bench_json as _bench_json


def bench(min_qubits=2, max_qubits=3, budget=60.0, schemes=None, tol=1e-8, max_iters=200_000):
    """Runs the benchmark harness and returns the report as a dict."""
    return json.loads(_bench_json(min_qubits, max_qubits, budget, list(schemes or []), tol, max_iters))


__all__ = [
    "__version__",
    "bench",
    "coherent_state",
    "depolarize",
    "dilate",
    "helstrom",
    "load_problem",
    "measure",
    "solve",
    "uqsd_two_pure",
]
