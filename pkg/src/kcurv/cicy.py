"""Intersection forms of complete intersections in products of projective spaces.

A configuration is a list of ambient factor dimensions (n_1, ..., n_m) and K
nonnegative integer multidegree columns.  The intersection form of the
resulting dim = sum(n_i) - K fold is the coefficient of prod J_i^{n_i} in

    (x_1 J_1 + ... + x_m J_m)^dim * prod_a (q_{1a} J_1 + ... + q_{ma} J_m),

an integer-coefficient homogeneous polynomial of degree dim in m variables.
The column product is expanded with exponent caps (n_1, ..., n_m) -- any
J_i power beyond n_i can never reach the target monomial -- and the
(sum x_i J_i)^dim factor contributes multinomial coefficients directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .errors import DimensionMismatch, NonpositiveDimension
from .symform import Form

__all__ = ["CicyConfig", "validate", "intersection_form"]


@dataclass(frozen=True)
class CicyConfig:
    ambient: tuple  # (n_1, ..., n_m), positive integers
    columns: tuple  # K columns, each a tuple of m nonnegative integers

    def __post_init__(self):
        ambient = tuple(int(n) for n in self.ambient)
        columns = tuple(tuple(int(q) for q in col) for col in self.columns)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "columns", columns)
        if not ambient or any(n < 1 for n in ambient):
            raise ValueError("ambient dimensions must be positive integers")
        m = len(ambient)
        for col in columns:
            if len(col) != m:
                raise DimensionMismatch(f"column {col} has length {len(col)}, expected {m}")
            if any(q < 0 for q in col):
                raise ValueError(f"column {col} has a negative entry")
            if not any(col):
                raise ValueError("zero column in configuration")


def validate(cfg: CicyConfig) -> dict:
    """Dimension, Calabi-Yau flag (row sums = n_i + 1), and the row sums."""
    dim = sum(cfg.ambient) - len(cfg.columns)
    if dim < 1:
        raise NonpositiveDimension(f"complete intersection has dimension {dim}")
    row_sums = [sum(col[i] for col in cfg.columns) for i in range(len(cfg.ambient))]
    cy = all(s == n + 1 for s, n in zip(row_sums, cfg.ambient))
    return {"dim": dim, "cy": cy, "row_sums": row_sums}


def _multinomial(n, parts):
    out = factorial(n)
    for p in parts:
        out //= factorial(p)
    return out


def intersection_form(cfg: CicyConfig) -> Form:
    """The intersection form of the configuration, as an exact Form."""
    info = validate(cfg)
    dim = info["dim"]
    m = len(cfg.ambient)
    caps = cfg.ambient
    # Expand prod_a (sum_i q_{ia} J_i), truncated at the exponent caps.
    prod = {(0,) * m: 1}
    for col in cfg.columns:
        nxt = {}
        for exps, c in prod.items():
            for i, q in enumerate(col):
                if q and exps[i] < caps[i]:
                    ne = exps[:i] + (exps[i] + 1,) + exps[i + 1:]
                    nxt[ne] = nxt.get(ne, 0) + c * q
        prod = nxt
    terms = {}
    for beta, c in prod.items():
        alpha = tuple(n - b for n, b in zip(caps, beta))
        if any(a < 0 for a in alpha):
            continue
        terms[alpha] = terms.get(alpha, 0) + c * _multinomial(dim, alpha)
    return Form(dim, m, terms)
