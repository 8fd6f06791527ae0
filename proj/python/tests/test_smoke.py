# Copyright 2026 The qergo Authors
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
import pathlib

import numpy as np
import pytest

import qergo

CONFIGS = pathlib.Path(__file__).resolve().parents[2] / "configs"


def zero_plus():
    return qergo.AlphabetSpec(2, [np.array([1, 0], complex), np.array([1, 1], complex) / np.sqrt(2)])


def test_tensor_product_of_paulis():
    zz = qergo.tensor_product(qergo.pauli_z(), qergo.pauli_z())
    assert zz.sites == 2
    np.testing.assert_allclose(zz.matrix, np.kron(np.diag([1, -1]), np.diag([1, -1])))


def test_density_validation_rejects_negative_state():
    with pytest.raises(qergo.ValidationError):
        qergo.DensityOperator(np.diag([1.5, -0.5]).astype(complex))


def test_depolarizing_is_trace_preserving():
    ch = qergo.depolarizing_channel(2, 0.3)
    assert qergo.validate_kraus(ch).passed
    rho = qergo.random_density(2, 2, seed=7)
    out = qergo.apply_channel(ch, rho, 2)
    assert abs(np.trace(out.matrix) - 1) < 1e-12


def test_markov_source_backends_agree():
    proc = qergo.ClassicalProcess.markov(np.array([[0.9, 0.1], [0.2, 0.8]]))
    src = qergo.QuantumSource.classically_correlated(proc, zero_plus())
    a = qergo.random_observable(2, 1, seed=1)
    b = qergo.random_observable(2, 1, seed=2)
    for gap in range(4):
        dense = qergo.source_correlation(src, a, b, gap, "dense")
        transfer = qergo.source_correlation(src, a, b, gap, "transfer")
        assert abs(dense - transfer) < 1e-9


def test_period_two_chain_is_not_weakly_mixing():
    proc = qergo.ClassicalProcess.markov(np.array([[0.0, 1.0], [1.0, 0.0]]))
    src = qergo.QuantumSource.classically_correlated(proc, qergo.AlphabetSpec.computational(2))
    report = qergo.sweep(src, m=1, observable_count=4, seed=3, n_max=400)
    assert report["ergodic"] == "pass"
    assert report["weak"] == "fail"
    assert report["implications_consistent"]


def test_conditional_expectation_keeps_diagonal():
    a = qergo.random_observable(2, 2, seed=5)
    e = qergo.conditional_expectation(a, qergo.PinchingBasis.computational(2))
    np.testing.assert_allclose(np.diag(e.matrix), np.diag(a.matrix), atol=1e-14)
    assert np.count_nonzero(np.abs(e.matrix - np.diag(np.diag(e.matrix))) > 1e-14) == 0


def test_run_config_round_trip():
    passed, report = qergo.run_config((CONFIGS / "iid_qubit.json").read_text())
    doc = json.loads(report)
    assert passed and doc["passed"]
    again, report2 = qergo.run_config(report)
    assert again and report2 == report


def test_bad_config_raises_config_error():
    with pytest.raises(qergo.ConfigError):
        qergo.run_config('{"site_dimension": 2}')
