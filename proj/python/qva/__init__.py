"""Exact checks for vertex algebras and their braided deformations.

Instances come from :func:`build` or :func:`parse`; :func:`check` returns
report records as dictionaries in the same order the CLI prints them.
"""

import json

from ._qva import (
    Instance,
    ParseError,
    QvaError,
    ValidationError,
    build,
    check_names,
    parse,
)
from . import _qva

__all__ = [
    "Instance",
    "ParseError",
    "QvaError",
    "ValidationError",
    "build",
    "check",
    "check_names",
    "exit_code",
    "parse",
    "read",
]


def read(path, h_order=None):
    with open(path, encoding="utf-8") as f:
        return parse(f.read(), h_order)


def check(instance, suite="classical", n_range=None, max_witness=None, sample=None, workers=0):
    lines = _qva.check_lines(instance, suite, n_range, max_witness, sample, workers)
    return [json.loads(line) for line in lines]


def exit_code(records):
    """0 iff no non-control record failed."""
    return int(any(r["status"] == "fail" and not r["control"] for r in records))
