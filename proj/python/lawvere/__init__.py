"""Finite Lawvere theories, approximation orders, tensors and a monadic metalanguage."""

import json as _json

from . import _core
from ._core import (
    CapacityExceeded,
    InvalidSpec,
    MonadNotAdditive,
    NotBounded,
    ReportOptions,
    SyntaxError,
    Theory,
    TypeError,
    builtin_specs,
    hom_size,
    make_theory,
    order_pairs,
    run_source,
)


def _options(jobs=1, seed=1):
    opt = ReportOptions()
    opt.jobs = jobs
    opt.seed = seed
    return opt


def theories():
    return _json.loads(_core.report_theories(_options()))


def hom(spec, n, m):
    return _json.loads(_core.report_hom(spec, n, m, _options()))


def order(spec, max_size, two_sided=False):
    return _json.loads(_core.report_order(spec, max_size, two_sided, _options()))


def conservativity(spec, max_size, jobs=1):
    return _json.loads(_core.report_conservativity(spec, max_size, _options(jobs=jobs)))


def tensor(spec, max_size, mode="full", verify=False, seed=1):
    return _json.loads(_core.report_tensor(spec, max_size, mode, verify, _options(seed=seed)))


def uniformity(spec, n, m):
    return _json.loads(_core.report_uniformity(spec, n, m, _options()))


def additivity(spec, max_size):
    return _json.loads(_core.report_additivity(spec, max_size, _options()))


def run(path, monad):
    return _json.loads(_core.report_run(str(path), monad, _options()))


def laws(monad, suite, max_type_size, seed=1):
    return _json.loads(_core.report_laws(monad, suite, max_type_size, _options(seed=seed)))
