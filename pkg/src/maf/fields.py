"""Scalar fields on C with Wirtinger derivatives, 1-/2-forms, and quadrature.

Conventions: d/dz = (d/dx - i d/dy)/2, d/dzbar = (d/dx + i d/dy)/2, and the
area pairing dz ^ dzbar = -2i dx ^ dy.  Finite differences use 5-point
central stencils with a default step of 1e-4.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

DEFAULT_FD_STEP = 1e-4

ComplexFn = Callable[[complex], complex]


@dataclass
class ScalarField:
    """A complex-valued function of z with optional analytic derivatives.

    ``d_z``/``d_zbar`` are the Wirtinger derivatives; ``lap`` is the flat
    Laplacian 4 d2/(dz dzbar).  Missing derivatives fall back to finite
    differences with step ``fd_step``.
    """

    func: ComplexFn
    d_z: Optional[ComplexFn] = None
    d_zbar: Optional[ComplexFn] = None
    lap: Optional[ComplexFn] = None
    fd_step: float = DEFAULT_FD_STEP

    def __call__(self, z: complex) -> complex:
        return self.func(z)


def _fd_xy(f: ComplexFn, z: complex, h: float):
    """5-point central first derivatives along x and y."""
    fx = (-f(z + 2 * h) + 8 * f(z + h) - 8 * f(z - h) + f(z - 2 * h)) / (12 * h)
    ih = 1j * h
    fy = (-f(z + 2 * ih) + 8 * f(z + ih) - 8 * f(z - ih) + f(z - 2 * ih)) / (12 * h)
    return fx, fy


def wirtinger(f: ScalarField, z: complex) -> tuple[complex, complex]:
    """(df/dz, df/dzbar) at z, analytic when available."""
    if f.d_z is not None and f.d_zbar is not None:
        return f.d_z(z), f.d_zbar(z)
    fx, fy = _fd_xy(f.func, z, f.fd_step)
    if not (np.isfinite(fx) and np.isfinite(fy)):
        raise ArithmeticError(f"non-finite derivative at z={z}")
    return 0.5 * (fx - 1j * fy), 0.5 * (fx + 1j * fy)


def flat_laplacian(f: ScalarField, z: complex) -> complex:
    """4 d2f/(dz dzbar) = f_xx + f_yy, analytic when available."""
    if f.lap is not None:
        return f.lap(z)
    h = f.fd_step
    fn = f.func
    fz = fn(z)
    fxx = (
        -fn(z + 2 * h) + 16 * fn(z + h) - 30 * fz + 16 * fn(z - h) - fn(z - 2 * h)
    ) / (12 * h * h)
    ih = 1j * h
    fyy = (
        -fn(z + 2 * ih) + 16 * fn(z + ih) - 30 * fz + 16 * fn(z - ih) - fn(z - 2 * ih)
    ) / (12 * h * h)
    return fxx + fyy


@dataclass
class OneForm:
    """w = coeff_dz dz + coeff_dzbar dzbar."""

    coeff_dz: ScalarField
    coeff_dzbar: ScalarField


@dataclass
class TwoForm:
    """coeff * dz ^ dzbar."""

    coeff: ScalarField


def exterior_derivative(omega: OneForm) -> TwoForm:
    """d(omega), coefficient of dz ^ dzbar."""

    def coeff(z: complex) -> complex:
        dzb_z, _ = wirtinger(omega.coeff_dzbar, z)
        _, dz_zb = wirtinger(omega.coeff_dz, z)
        return dzb_z - dz_zb

    return TwoForm(ScalarField(coeff, fd_step=omega.coeff_dz.fd_step))


_GL_ORDER = 16
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)


def line_integral(omega: OneForm, path: list[complex], n_sub: int = 1) -> complex:
    """Integral of omega along the polyline, composite Gauss-Legendre per segment."""
    if n_sub < 1:
        raise ValueError("n_sub must be >= 1")
    total = 0.0 + 0.0j
    for z0, z1 in zip(path[:-1], path[1:]):
        dz_seg = (z1 - z0) / n_sub
        for k in range(n_sub):
            a = z0 + k * dz_seg
            for t, w in zip(_GL_NODES, _GL_WEIGHTS):
                z = a + (t + 1) / 2 * dz_seg
                val = omega.coeff_dz(z) * dz_seg + omega.coeff_dzbar(z) * dz_seg.conjugate()
                total += w / 2 * val
    return total


def quad2d(f, rect: tuple[float, float, float, float], n: int) -> complex:
    """Tensor Gauss-Legendre integral of f over [xmin,xmax]x[ymin,ymax] (dx dy)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    xmin, xmax, ymin, ymax = rect
    x, wx = np.polynomial.legendre.leggauss(n)
    xs = 0.5 * (xmax - xmin) * (x + 1) + xmin
    ys = 0.5 * (ymax - ymin) * (x + 1) + ymin
    wxs = 0.5 * (xmax - xmin) * wx
    wys = 0.5 * (ymax - ymin) * wx
    fn = f.func if isinstance(f, ScalarField) else f
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    Z = X + 1j * Y
    vals = np.vectorize(fn)(Z)
    return complex(np.einsum("i,j,ij->", wxs, wys, vals))


def quad2d_nodes(rect: tuple[float, float, float, float], n: int):
    """Quadrature nodes Z (n x n complex) and weights W for vectorized integrands."""
    xmin, xmax, ymin, ymax = rect
    x, wx = np.polynomial.legendre.leggauss(n)
    xs = 0.5 * (xmax - xmin) * (x + 1) + xmin
    ys = 0.5 * (ymax - ymin) * (x + 1) + ymin
    wxs = 0.5 * (xmax - xmin) * wx
    wys = 0.5 * (ymax - ymin) * wx
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    return X + 1j * Y, np.outer(wxs, wys)


# ---------------------------------------------------------------------------
# Polynomial-times-Gaussian fields with exact derivatives.

Poly2 = dict[tuple[int, int], complex]  # (i, j) -> coefficient of z^i zbar^j


def _poly_eval(p: Poly2, z: complex) -> complex:
    zb = z.conjugate()
    return sum(c * z**i * zb**j for (i, j), c in p.items())


def _poly_dz(p: Poly2) -> Poly2:
    out: Poly2 = {}
    for (i, j), c in p.items():
        if i > 0:
            out[(i - 1, j)] = out.get((i - 1, j), 0) + i * c
    return out


def _poly_dzbar(p: Poly2) -> Poly2:
    out: Poly2 = {}
    for (i, j), c in p.items():
        if j > 0:
            out[(i, j - 1)] = out.get((i, j - 1), 0) + j * c
    return out


def polyexp_field(coeffs: Poly2, alpha: float = 0.0, fd_step: float = DEFAULT_FD_STEP) -> ScalarField:
    """P(z, zbar) * exp(-alpha |z|^2) with exact Wirtinger derivatives."""
    p = dict(coeffs)

    def gauss(z):
        return np.exp(-alpha * (z * z.conjugate()).real)

    # d/dz (P e^{-a z zbar}) = (P_z - a zbar P) e^{-a z zbar}, and symmetrically.
    p_z = _poly_dz(p)
    p_zb = _poly_dzbar(p)

    def dz_poly(q: Poly2) -> Poly2:
        out = dict(_poly_dz(q))
        for (i, j), c in q.items():
            key = (i, j + 1)
            out[key] = out.get(key, 0) - alpha * c
        return out

    def dzbar_poly(q: Poly2) -> Poly2:
        out = dict(_poly_dzbar(q))
        for (i, j), c in q.items():
            key = (i + 1, j)
            out[key] = out.get(key, 0) - alpha * c
        return out

    q_z = dz_poly(p)
    q_zb = dzbar_poly(p)
    q_lap = dz_poly(dzbar_poly(p))

    return ScalarField(
        func=lambda z: _poly_eval(p, z) * gauss(z),
        d_z=lambda z: _poly_eval(q_z, z) * gauss(z),
        d_zbar=lambda z: _poly_eval(q_zb, z) * gauss(z),
        lap=lambda z: 4 * _poly_eval(q_lap, z) * gauss(z),
        fd_step=fd_step,
    )


@dataclass
class Grid:
    """Rectangular sampling grid used by residual sweeps."""

    xmin: float = -2.0
    xmax: float = 2.0
    nx: int = 41
    ymin: float = -2.0
    ymax: float = 2.0
    ny: int = 41

    def points(self) -> np.ndarray:
        xs = np.linspace(self.xmin, self.xmax, self.nx)
        ys = np.linspace(self.ymin, self.ymax, self.ny)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        return (X + 1j * Y).ravel()

    @classmethod
    def from_dict(cls, d: dict) -> "Grid":
        return cls(**{k: d[k] for k in ("xmin", "xmax", "nx", "ymin", "ymax", "ny") if k in d})

    def to_dict(self) -> dict:
        return {
            "xmin": self.xmin, "xmax": self.xmax, "nx": self.nx,
            "ymin": self.ymin, "ymax": self.ymax, "ny": self.ny,
        }
