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

import json
import math
import pathlib

import jsonschema
import numpy as np
import pytest

import qsd

SCHEMA = pathlib.Path(__file__).resolve().parents[2] / "schemas" / "bench.schema.json"


def projector(v):
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


ZERO_PLUS = [projector([1, 0]), projector([1 / math.sqrt(2), 1 / math.sqrt(2)])]


def test_med_zero_plus_matches_helstrom():
    r = qsd.solve(ZERO_PLUS, [0.5, 0.5], "med")
    assert r["status"] == "optimal"
    assert r["p_succ"] == pytest.approx(0.5 + math.sqrt(0.125), abs=1e-6)
    assert r["p_succ"] == pytest.approx(qsd.helstrom(*ZERO_PLUS, 0.5), abs=1e-6)
    total = sum(r["elements"])
    assert np.allclose(total, np.eye(2), atol=1e-7)


def test_uqsd_zero_plus_has_no_errors():
    r = qsd.solve(ZERO_PLUS, [0.5, 0.5], "uqsd")
    assert r["p_succ"] == pytest.approx(1 - math.sqrt(0.5), abs=1e-6)
    assert r["p_err"] <= 1e-7
    assert "?" in r["labels"]
    assert qsd.uqsd_two_pure(np.array([1, 0]), np.array([1, 1]) / math.sqrt(2), 0.5) == pytest.approx(
        1 - math.sqrt(0.5), abs=1e-9
    )


def test_crossqsd_and_hybrid_run():
    states = [projector(qsd.coherent_state(np.exp(-1j * math.pi * t / 3), 2)) for t in range(3)]
    cross = qsd.solve(states, [1 / 3] * 3, "crossqsd", alpha=[0.01], beta=[0.01], lambda_eval=0.01)
    assert cross["status"] == "optimal"
    med = qsd.solve(states, [1 / 3] * 3, "med")
    hybrid = qsd.solve(states, [1 / 3] * 3, "hybrid", w=0.0)
    assert hybrid["p_succ"] == pytest.approx(med["p_succ"], abs=1e-5)


def test_dilation_reproduces_born_rule():
    r = qsd.solve(ZERO_PLUS, [0.5, 0.5], "uqsd")
    dil = qsd.dilate(r["elements"], r["labels"])
    v = dil["isometry"]
    assert np.allclose(v.conj().T @ v, np.eye(2), atol=1e-10)
    assert dil["ancilla_qubits"] == dil["target_qubits"] - dil["domain_qubits"]
    rho = qsd.depolarize(ZERO_PLUS[0], 0.1)
    out = qsd.measure(r["elements"], r["labels"], rho)
    for label, element in zip(r["labels"], r["elements"]):
        born = np.trace(rho @ element).real
        assert out["probabilities"][out["labels"].index(label)] == pytest.approx(born, abs=1e-10)


def test_sampling_is_seeded():
    pvm = [projector([1, 0]), projector([0, 1])]
    rho = qsd.depolarize(pvm[0], 0.5)
    a = qsd.measure(pvm, ["0", "1"], rho, shots=1000, seed=3)
    b = qsd.measure(pvm, ["0", "1"], rho, shots=1000, seed=3)
    assert a["counts"] == b["counts"]
    assert sum(a["counts"]) == 1000


def test_bench_output_is_schema_valid():
    report = qsd.bench(min_qubits=2, max_qubits=2)
    jsonschema.validate(report, json.loads(SCHEMA.read_text()))
    assert len(report["rows"]) == 27
    assert all(row["status"] == "ok" for row in report["rows"])


def test_invalid_input_raises():
    with pytest.raises(ValueError):
        qsd.solve(ZERO_PLUS, [0.5, 0.5], "nope")
    with pytest.raises(ValueError):
        qsd.solve([np.eye(2) * 2], [1.0], "med")
