# Copyright 2026 The racert Authors
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

"""Reach-avoid certificate workbench: verification, CEGIS synthesis and
Monte Carlo estimation over stochastic discrete-time systems."""

import json as _json
from pathlib import Path as _Path

from . import _core
from ._core import (
    SCHEMA_VERSION,
    ContractViolation,
    Error,
    MissingInvariantError,
    NoTrainableParameters,
    ParameterDomainError,
    ParseError,
    ResourceLimitError,
    UnsupportedDimension,
    aras_lambda_min,
    aras_to_mras,
    bench_csv_header,
    bench_suite,
    benchmark_names,
    clopper_pearson,
    mras_lambda_min,
    mras_to_aras,
    step,
)

__all__ = [
    "SCHEMA_VERSION",
    "ContractViolation",
    "Error",
    "MissingInvariantError",
    "NoTrainableParameters",
    "ParameterDomainError",
    "ParseError",
    "ResourceLimitError",
    "UnsupportedDimension",
    "aras_lambda_min",
    "aras_to_mras",
    "bench_csv_header",
    "bench_suite",
    "benchmark_names",
    "certificate_eval",
    "clopper_pearson",
    "estimate",
    "mras_lambda_min",
    "mras_to_aras",
    "problem",
    "step",
    "synthesize",
    "verify",
]


def problem(path_or_name):
    """Problem definition as a dict (built-in name or JSON file)."""
    return _json.loads(_core.problem_json(str(path_or_name)))


def certificate_eval(certificate, x):
    return _core.certificate_eval(_json.dumps(certificate), list(x))


def verify(condition, problem=None, resolution=0.05, min_resolution=None, quad_order=5, seed=0, threads=1):
    """Grid verification. condition is a dict or a path to a condition file."""
    base = "."
    if not isinstance(condition, dict):
        path = _Path(condition)
        base = str(path.parent)
        condition = _json.loads(path.read_text())
    return _json.loads(
        _core.verify_json(
            _json.dumps(condition),
            base,
            "" if problem is None else str(problem),
            resolution,
            -1.0 if min_resolution is None else min_resolution,
            quad_order,
            seed,
            threads,
        )
    )


def synthesize(problem, condition_id, p=None, template="net8x8", seed=0, config=None):
    """CEGIS run; returns {feasible, condition, verdict, telemetry}."""
    return _json.loads(
        _core.synthesize_json(
            str(problem), condition_id, -1.0 if p is None else p, template, seed,
            "" if config is None else _json.dumps(config),
        )
    )


def estimate(problem, x0, N=100000, K=1000, alpha=1e-3, seed=0, threads=1):
    """Monte Carlo reach-avoid estimate with a Clopper-Pearson interval."""
    return _json.loads(_core.estimate_json(str(problem), list(x0), N, K, alpha, seed, threads))
