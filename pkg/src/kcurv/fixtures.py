"""Named forms used across the test suite, experiments, and docs.

Most are small ternary cubics with known exact invariants; the hermitian
determinant forms realize the symmetric-space geometry (their unit level
set through the identity matrix carries curvatures in [-3, 0], both ends
attained for the 3x3 case), and the CICY configurations produce the two
intersection-form regression fixtures.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .cicy import CicyConfig, intersection_form
from .symform import Form

__all__ = [
    "lorentzian", "random_lorentzian", "diagonal", "nodal_cubic",
    "elliptic_cubic", "concurrent_lines", "triple_product", "quadric_power",
    "hermitian_det", "cicy1_config", "cicy2_config", "cicy1_form", "cicy2_form",
]


def _e(i, r):
    return tuple(int(j == i) for j in range(r))


def lorentzian(r: int) -> Form:
    """x0^2 - x1^2 - ... - x_{r-1}^2."""
    terms = {tuple(2 * v for v in _e(i, r)): (1 if i == 0 else -1) for i in range(r)}
    return Form(2, r, terms)


def random_lorentzian(r: int, seed: int) -> Form:
    """A random exact change of variables applied to the standard Lorentzian form.

    The mixing matrix has small integer entries and is nudged until
    invertible, so the result is again signature (1, r-1) but no longer
    diagonal.
    """
    rng = np.random.default_rng(seed)
    while True:
        M = rng.integers(-3, 4, size=(r, r))
        if abs(np.linalg.det(M.astype(float))) > 0.5:
            break
    return lorentzian(r).change_of_variables([[int(v) for v in row] for row in M])


def diagonal(n: int, r: int) -> Form:
    """x0^n - x1^n - ... - x_{r-1}^n."""
    terms = {tuple(n * v for v in _e(i, r)): (1 if i == 0 else -1) for i in range(r)}
    return Form(n, r, terms)


def nodal_cubic() -> Form:
    """X1^3 + X0 X1^2 - X0 X2^2 (a nodal plane cubic; S = 1/81)."""
    return Form(3, 3, {(0, 3, 0): 1, (1, 2, 0): 1, (1, 0, 2): -1})


def elliptic_cubic() -> Form:
    """X1^3 - X1 X0^2 + X0^3 - X2^2 X0 (smooth plane cubic; S = 1/27)."""
    return Form(3, 3, {(0, 3, 0): 1, (2, 1, 0): -1, (3, 0, 0): 1, (1, 0, 2): -1})


def concurrent_lines() -> Form:
    """x^2 y + x y^2 = xy(x + y): three concurrent lines, identically zero Hessian."""
    return Form(3, 3, {(2, 1, 0): 1, (1, 2, 0): 1})


def triple_product() -> Form:
    """6xyz, the intersection form of the triple product of lines; S = 1."""
    return Form(3, 3, {(1, 1, 1): 6})


def quadric_power(d: int) -> Form:
    """(x0^2 - x1^2 - x2^2 - x3^2)^(d/2) for even d."""
    if d % 2:
        raise ValueError("degree must be even")
    return lorentzian(4) ** (d // 2)


def hermitian_det(n: int) -> Form:
    """det of an n x n hermitian matrix as a form in its n^2 real coordinates.

    Coordinates: the n diagonal entries first, then for each off-diagonal
    position (i < j) in row-major order the real and imaginary parts of the
    (i, j) entry.  n = 2 gives the Lorentzian quadratic t1 t2 - a^2 - b^2
    (r = 4); n = 3 gives the r = 9 cubic fixture whose unit level set is the
    symmetric-space model with curvatures in [-3, 0].
    """
    if n == 2:
        return Form(2, 4, {(1, 1, 0, 0): 1, (0, 0, 2, 0): -1, (0, 0, 0, 2): -1})
    if n == 3:
        # vars: t1 t2 t3 a b c d e f  with M12 = a+bi, M13 = c+di, M23 = e+fi
        t = {
            (1, 1, 1, 0, 0, 0, 0, 0, 0): 1,   # t1 t2 t3
            (1, 0, 0, 0, 0, 0, 0, 2, 0): -1,  # -t1 e^2
            (1, 0, 0, 0, 0, 0, 0, 0, 2): -1,  # -t1 f^2
            (0, 1, 0, 0, 0, 2, 0, 0, 0): -1,  # -t2 c^2
            (0, 1, 0, 0, 0, 0, 2, 0, 0): -1,  # -t2 d^2
            (0, 0, 1, 2, 0, 0, 0, 0, 0): -1,  # -t3 a^2
            (0, 0, 1, 0, 2, 0, 0, 0, 0): -1,  # -t3 b^2
            (0, 0, 0, 1, 0, 1, 0, 1, 0): 2,   # +2 a c e
            (0, 0, 0, 1, 0, 0, 1, 0, 1): 2,   # +2 a d f
            (0, 0, 0, 0, 1, 1, 0, 0, 1): -2,  # -2 b c f
            (0, 0, 0, 0, 1, 0, 1, 1, 0): 2,   # +2 b d e
        }
        return Form(3, 9, t)
    raise ValueError("only n = 2 and n = 3 are provided")


def hermitian_from_coords(x, n: int) -> np.ndarray:
    """Rebuild the complex hermitian matrix from the real coordinate vector."""
    x = np.asarray(x, dtype=float)
    M = np.zeros((n, n), dtype=complex)
    for i in range(n):
        M[i, i] = x[i]
    k = n
    for i in range(n):
        for j in range(i + 1, n):
            M[i, j] = x[k] + 1j * x[k + 1]
            M[j, i] = x[k] - 1j * x[k + 1]
            k += 2
    return M


def coords_from_hermitian(M) -> np.ndarray:
    """Inverse of :func:`hermitian_from_coords`."""
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    out = [M[i, i].real for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            out.append(M[i, j].real)
            out.append(M[i, j].imag)
    return np.array(out)


def cicy1_config() -> CicyConfig:
    """Ambient P^3 x P^2 x P^2 cut by four hypersurfaces (the S = 4624 fixture)."""
    return CicyConfig(ambient=(3, 2, 2),
                      columns=((1, 1, 0), (1, 1, 0), (2, 1, 1), (0, 0, 2)))


def cicy2_config() -> CicyConfig:
    """Ambient P^2 x P^2 x P^1 cut by two hypersurfaces."""
    return CicyConfig(ambient=(2, 2, 1), columns=((1, 2, 0), (2, 1, 2)))


def cicy1_form() -> Form:
    return intersection_form(cicy1_config())


def cicy2_form() -> Form:
    return intersection_form(cicy2_config())
