"""Arithmetic Okounkov bodies of O(m) on the projective line over Z.

Thin wrapper over the C++ core. Rationals come back as fractions.Fraction,
reports as plain dicts.
"""

import json
from fractions import Fraction

from ._core import BudgetExceeded, ConfigError, Error, __version__, field_info
from . import _core

__all__ = [
    "BudgetExceeded",
    "ConfigError",
    "Error",
    "__version__",
    "bc_compare",
    "body",
    "convex_hull",
    "field_info",
    "h0_power",
    "lambda_points",
    "run",
    "valuation_image",
    "verify_filtration",
]


def h0_power(bundle, k, budget=100_000_000, workers=0):
    """log #H0(kL) for a bundle spec like "box:1,1" or "fs:1:-1".

    Returns (exact text, float).
    """
    return _core.h0_power(bundle, k, budget, workers)


def valuation_image(bundle, p, point, k, budget=100_000_000, workers=0):
    return [tuple(v) for v in _core.valuation_image(bundle, p, str(point), k, budget, workers)]


def lambda_points(bundle, p, point, k_max, budget=100_000_000, workers=0):
    return [(Fraction(x), Fraction(y)) for x, y in _core.lambda_points(bundle, p, str(point), k_max, budget, workers)]


def convex_hull(points):
    """Exact hull of (x, y) pairs; coordinates may be ints, Fractions or strings."""
    hull = json.loads(_core.convex_hull([(str(x), str(y)) for x, y in points]))
    hull["vertices"] = [(Fraction(x), Fraction(y)) for x, y in hull["vertices"]]
    hull["area"] = Fraction(hull["area"])
    return hull


def run(config):
    """Run one command from a config dict (same keys as the CLI config file).

    Returns (exit_code, report, csv, svg).
    """
    code, report, csv, svg = _core.run(json.dumps(config))
    return code, json.loads(report), csv, svg


def verify_filtration(field="Q", instances=200, seed=42, **extra):
    fields = [field] if isinstance(field, str) else list(field)
    return run({"command": "verify-filtration", "field": fields, "instances": instances, "seed": seed, **extra})


def body(bundle="box:1,1", p=2, point="0", kmax=10, **extra):
    return run({"command": "body", "bundle": bundle, "p": p, "point": str(point), "kmax": kmax, **extra})


def bc_compare(bundle="box:1,1", p=2, point="0", z0="0", k=8, grid=32, **extra):
    return run({"command": "bc-compare", "bundle": bundle, "p": p, "point": str(point), "z0": str(z0), "k": k,
                "grid": grid, **extra})
