"""Exact invariant theory of ternary cubics.

Everything here runs in rational arithmetic: the reduction of a cubic at a
base point into the normal shape

    A x0^3 - 3 x0 (p x1^2 + 2 q x1 x2 + r x2^2)
        + a30 x1^3 + 3 a21 x1^2 x2 + 3 a12 x1 x2^2 + a03 x2^3,

the Aronhold invariant S (computed from the reduced tuple and corrected by
the weight-4 law S(F o M) = det(M)^4 S(F)), the closed-form sectional
curvature of the unit level set

    R = -9/4 + 6^6 S F^2 / (4 H^2),

its reduced-coordinates twin, and the degree-6 bound polynomials whose
signs certify 0 >= R >= -3 pointwise.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .cone import INDEX_CONE, classify, classify_exact
from .errors import (
    DegenerateMetric,
    DegenerateReduction,
    DimensionMismatch,
    HessianZero,
    NoSmoothPointFound,
    NotInIndexCone,
    SingularPoint,
)
from .symform import Form, is_exact_vector

__all__ = [
    "ReducedCubic", "reduce_at_point", "aronhold_S",
    "sectional_curvature_closed", "curvature_reduced",
    "bound_polynomials", "hessian_identity_check",
]

SIX_TO_6 = 6 ** 6  # 46656


def _require_ternary_cubic(F: Form):
    if F.degree != 3 or F.dim != 3:
        raise DimensionMismatch(
            f"needs a ternary cubic, got degree {F.degree} in {F.dim} variables")


@dataclass(frozen=True)
class ReducedCubic:
    """Exact reduced tuple of a ternary cubic at a base point.

    M has columns (L0, L1, L2) with L1, L2 spanning ker(v -> grad F(L0).v),
    so F(Mx) has no x0^2 x1 or x0^2 x2 terms; detM != 0 always holds.
    """
    A: Fraction
    p: Fraction
    q: Fraction
    r: Fraction
    a30: Fraction
    a21: Fraction
    a12: Fraction
    a03: Fraction
    M: tuple  # 3x3, rows of Fractions; columns are L0, L1, L2
    detM: Fraction

    def tuple(self):
        return (self.A, self.p, self.q, self.r, self.a30, self.a21, self.a12, self.a03)

    def form(self) -> Form:
        """Reconstruct the reduced cubic as a Form in (x0, x1, x2)."""
        t = {
            (3, 0, 0): self.A,
            (1, 2, 0): -3 * self.p,
            (1, 1, 1): -6 * self.q,
            (1, 0, 2): -3 * self.r,
            (0, 3, 0): self.a30,
            (0, 2, 1): 3 * self.a21,
            (0, 1, 2): 3 * self.a12,
            (0, 0, 3): self.a03,
        }
        return Form(3, 3, t)


def _det3(M):
    return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
            - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
            + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))


def _kernel_basis(g):
    """Deterministic integer basis of {v : g . v = 0} for rational g != 0.

    Pivot on the largest |g_i| (first on ties); for each other index j take
    g_pivot e_j - g_j e_pivot, divided by the gcd of its entries, with the
    first nonzero entry made positive.
    """
    piv = max(range(3), key=lambda i: (abs(g[i]), -i))
    basis = []
    for j in range(3):
        if j == piv:
            continue
        v = [Fraction(0)] * 3
        v[j] = g[piv]
        v[piv] = -g[j]
        den = 1
        for c in v:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in v]
        div = 0
        for c in ints:
            div = gcd(div, abs(c))
        ints = [c // div for c in ints]
        lead = next(c for c in ints if c)
        if lead < 0:
            ints = [-c for c in ints]
        basis.append([Fraction(c) for c in ints])
    return basis


def reduce_at_point(F: Form, L0, basis=None) -> ReducedCubic:
    """Reduce a ternary cubic at the rational base point L0.

    The kernel basis is deterministic (see :func:`_kernel_basis`) unless an
    explicit pair ``basis=(L1, L2)`` is supplied, in which case each vector
    is checked to annihilate the gradient.  Requires grad F(L0) != 0 and
    F(L0) != 0: the latter is forced by the invariant detM != 0, since
    F(L0) = 0 puts L0 inside its own gradient kernel.
    """
    _require_ternary_cubic(F)
    if not is_exact_vector(L0):
        raise TypeError("reduce_at_point needs a rational base point")
    L0 = [Fraction(c) for c in L0]
    g = F.gradient(L0)
    if all(c == 0 for c in g):
        raise SingularPoint(f"gradient vanishes at {L0}")
    A = F.eval_exact(L0)
    if A == 0:
        raise DegenerateReduction(
            "base point lies on the cubic (F(L0) = 0), so it belongs to the "
            "kernel of its own gradient and the basis matrix would be singular")
    if basis is None:
        L1, L2 = _kernel_basis(g)
    else:
        L1, L2 = ([Fraction(c) for c in v] for v in basis)
        for v in (L1, L2):
            if sum(gi * vi for gi, vi in zip(g, v)) != 0:
                raise ValueError(f"supplied basis vector {v} is not in the gradient kernel")
    M = tuple(tuple(col[i] for col in (L0, L1, L2)) for i in range(3))
    detM = _det3(M)
    if detM == 0:
        raise DegenerateReduction("basis matrix is singular")
    pol = F.polarize
    return ReducedCubic(
        A=A,
        p=-pol(L0, L1, L1),
        q=-pol(L0, L1, L2),
        r=-pol(L0, L2, L2),
        a30=F.eval_exact(L1),
        a21=pol(L1, L1, L2),
        a12=pol(L1, L2, L2),
        a03=F.eval_exact(L2),
        M=M,
        detM=detM,
    )


def _s_reduced(t: ReducedCubic) -> Fraction:
    pr = t.p * t.r - t.q * t.q
    inner = (t.p * (t.a12 ** 2 - t.a21 * t.a03)
             + t.q * (t.a30 * t.a03 - t.a21 * t.a12)
             + t.r * (t.a21 ** 2 - t.a30 * t.a12))
    return pr ** 2 + t.A * inner


_BASE_CANDIDATES = [
    (1, 0, 0), (0, 1, 0), (0, 0, 1),
    (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1),
]


def _base_point_candidates(budget=200):
    for c in _BASE_CANDIDATES:
        yield [Fraction(v) for v in c]
    rng = random.Random(101)
    pool = [Fraction(n, d) for d in (1, 2, 3) for n in range(-4, 5)]
    for _ in range(budget):
        yield [rng.choice(pool) for _ in range(3)]


def aronhold_S(F: Form) -> Fraction:
    """The Aronhold invariant S of a ternary cubic, exactly.

    Computed from the reduced tuple at a deterministic base point with
    F(L0) != 0, corrected by the weight law S = S_reduced / detM^4.  The
    choice of base point and kernel basis does not matter (tested), which
    is what makes this route self-checking.
    """
    _require_ternary_cubic(F)
    for cand in _base_point_candidates():
        if F.eval_exact(cand) != 0:
            t = reduce_at_point(F, cand)
            return _s_reduced(t) / t.detM ** 4
    raise NoSmoothPointFound("no base point with F(L0) != 0 found within budget")


def _hess_scale(H: Form, x) -> float:
    size = float(sum(abs(c) for c in H.terms.values())) or 1.0
    mag = float(np.max(np.abs(np.asarray(x, dtype=float)))) or 1.0
    return size * max(1.0, mag) ** H.degree


def sectional_curvature_closed(F: Form, x, override_cone_check: bool = False):
    """Closed-form sectional curvature of W1 for a ternary cubic at x.

        R = -9/4 + 6^6 S F(x)^2 / (4 H(x)^2)

    Scale-invariant in x.  Exact (Fraction) for rational x, float otherwise.
    Requires |H(x)| above a relative floor and x in the index cone; the cone
    check can be overridden (with a warning) for region studies.
    """
    _require_ternary_cubic(F)
    S = aronhold_S(F)
    H = F.hessian_det_poly()
    exact = is_exact_vector(x)
    if exact:
        h = H.eval_exact(x)
        f = F.eval_exact(x)
        if h == 0:
            raise HessianZero("Hessian determinant vanishes at this point")
        in_cone = classify_exact(F, x).classification == INDEX_CONE
    else:
        h = H.eval(x)
        f = F.eval(x)
        if abs(h) <= 1e-12 * _hess_scale(H, x):
            raise HessianZero(f"Hessian determinant {h:g} below the relative floor")
        in_cone = classify(F, x).classification == INDEX_CONE
    if not in_cone:
        if not override_cone_check:
            raise NotInIndexCone("closed-form curvature requested outside the index cone")
        warnings.warn("evaluating closed-form curvature outside the index cone",
                      stacklevel=2)
    if exact:
        return Fraction(-9, 4) + Fraction(SIX_TO_6) * S * f ** 2 / (4 * h ** 2)
    return float(-2.25 + SIX_TO_6 * float(S) * f ** 2 / (4.0 * h ** 2))


def curvature_reduced(t: ReducedCubic) -> Fraction:
    """Exact curvature at the base point, from the reduced tuple alone.

        R = -2 + A (p(a12^2 - a21 a03) + q(a30 a03 - a21 a12)
                    + r(a21^2 - a30 a12)) / (4 (pr - q^2)^2)

    Must agree exactly with :func:`sectional_curvature_closed` at L0.
    """
    pr = t.p * t.r - t.q * t.q
    if pr == 0:
        raise DegenerateMetric("pr - q^2 = 0: base point is not an index-cone "
                               "direction for this reduction")
    inner = (t.p * (t.a12 ** 2 - t.a21 * t.a03)
             + t.q * (t.a30 * t.a03 - t.a21 * t.a12)
             + t.r * (t.a21 ** 2 - t.a30 * t.a12))
    return Fraction(-2) + t.A * inner / (4 * pr ** 2)


def bound_polynomials(F: Form) -> dict:
    """The degree-6 certificates: P_upper = 6^6 S F^2 - 9 H^2 and
    P_lower = 6^6 S F^2 + 3 H^2.

    On {H != 0}: R <= 0 iff P_upper <= 0, and R >= -3 iff P_lower >= 0.
    """
    _require_ternary_cubic(F)
    S = aronhold_S(F)
    H = F.hessian_det_poly()
    SF2 = (SIX_TO_6 * S) * (F * F)
    H2 = H * H
    return {"P_upper": SF2 - 9 * H2, "P_lower": SF2 + 3 * H2}


def hessian_identity_check(t: ReducedCubic) -> Fraction:
    """hessian_det_poly(F_red)(1,0,0) - 216 A (pr - q^2); contract: exactly 0."""
    h = t.form().hessian_det_poly().eval_exact((1, 0, 0))
    return h - 216 * t.A * (t.p * t.r - t.q * t.q)
