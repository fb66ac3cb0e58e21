"""Constant-field criteria on C^n under U(n) |x C^n.

Mirrors the one-variable machinery in several variables: component
equivariance, the potential one-form in 2n coordinates, the 2x2 determinant
quantities entering the per-component constant-field criterion, and an
independent oracle that differentiates the full potential and tests the
resulting 2-form for constancy.  The two verdicts can disagree (aggregate
cancellation across components); the report carries an agreement flag rather
than hiding the discrepancy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .reports import CheckReport, from_residuals

UNITARY_TOL = 1e-10
FD_STEP_N = 1e-4


@dataclass
class GroupElementN:
    """A rigid motion z -> A z + b of C^n with unitary A."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        self.A = np.asarray(self.A, dtype=complex)
        self.b = np.asarray(self.b, dtype=complex).ravel()
        n = self.b.size
        if self.A.shape != (n, n):
            raise ValueError("rotation block and translation sizes disagree")
        if np.abs(self.A.conj().T @ self.A - np.eye(n)).max() > UNITARY_TOL:
            raise ValueError("rotation block is not unitary")


def act_n(g: GroupElementN, z: np.ndarray) -> np.ndarray:
    return g.A @ np.asarray(z, dtype=complex) + g.b


def random_element_n(n: int, rng: np.random.Generator) -> GroupElementN:
    M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(M)
    Q = Q @ np.diag(np.diag(R) / np.abs(np.diag(R)))
    return GroupElementN(Q, rng.normal(size=n) + 1j * rng.normal(size=n))


# ---------------------------------------------------------------------------
# Equivariant maps tau : C^n -> C^n.

def _poly_component(terms: list[dict]) -> Callable[[np.ndarray], complex]:
    parsed = [
        (np.array(t["z"], dtype=int), np.array(t["zbar"], dtype=int), complex(*t["c"]))
        for t in terms
    ]

    def f(z: np.ndarray) -> complex:
        zb = np.conj(z)
        return sum(c * np.prod(z**ei) * np.prod(zb**ej) for ei, ej, c in parsed)

    return f


@dataclass
class EquivariantMapN:
    """tau given by a descriptor; exact Jacobian blocks for the linear kinds."""

    kind: str  # identity | conjugate | linear | polynomial
    n: int
    U: Optional[np.ndarray] = None
    components: Optional[list] = None  # polynomial term tables
    fd_step: float = FD_STEP_N

    def __post_init__(self):
        if self.kind == "linear":
            self.U = np.asarray(self.U, dtype=complex)
            if self.U.shape != (self.n, self.n):
                raise ValueError("linear map needs an n x n matrix")
        if self.kind == "polynomial":
            if self.components is None or len(self.components) != self.n:
                raise ValueError("polynomial map needs one term table per component")
            self._fns = [_poly_component(t) for t in self.components]

    @classmethod
    def from_dict(cls, d: dict, n: int) -> "EquivariantMapN":
        kind = d["kind"]
        if kind == "linear":
            U = np.array([[complex(*e) for e in row] for row in d["U"]])
            return cls("linear", n, U=U)
        if kind == "polynomial":
            return cls("polynomial", n, components=d["components"])
        return cls(kind, n)

    def __call__(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.kind == "identity":
            return z.copy()
        if self.kind == "conjugate":
            return np.conj(z)
        if self.kind == "linear":
            return self.U @ z
        return np.array([f(z) for f in self._fns])


def jacobian_blocks(tau: EquivariantMapN, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Matrices P[l,k] = d tau_l / d z_k and Q[l,k] = d tau_l / d zbar_k."""
    n = tau.n
    if tau.kind == "identity":
        return np.eye(n, dtype=complex), np.zeros((n, n), dtype=complex)
    if tau.kind == "conjugate":
        return np.zeros((n, n), dtype=complex), np.eye(n, dtype=complex)
    if tau.kind == "linear":
        return tau.U.copy(), np.zeros((n, n), dtype=complex)
    z = np.asarray(z, dtype=complex)
    h = tau.fd_step
    P = np.zeros((n, n), dtype=complex)
    Q = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for step, w in ((2, -1.0), (1, 8.0), (-1, -8.0), (-2, 1.0)):
            zx = z.copy()
            zx[k] += step * h
            fx = tau(zx) * (w / (12 * h))
            zy = z.copy()
            zy[k] += 1j * step * h
            fy = tau(zy) * (w / (12 * h))
            P[:, k] += 0.5 * (fx - 1j * fy)
            Q[:, k] += 0.5 * (fx + 1j * fy)
    return P, Q


def determinant_coeffs(
    tau: EquivariantMapN, z: np.ndarray, ell: int, i: int, j: int, k: int
) -> dict:
    """The five 2x2 determinants of the constant-field criterion at z.

    Indices are 0-based; i < j required for the antisymmetric quantities.
    """
    if not i < j:
        raise ValueError("need i < j")
    P, Q = jacobian_blocks(tau, z)
    p = P[ell]
    q = Q[ell]
    # derivatives of the conjugate component: d(tau bar)/dz_i = conj(Q[l,i]) etc.
    A = q[i].conjugate() * p[j] - q[j].conjugate() * p[i]
    B = q[i].conjugate() * q[j] - p[j].conjugate() * p[i]
    C = p[i].conjugate() * p[j] - q[j].conjugate() * q[i]
    D = p[i].conjugate() * q[j] - p[j].conjugate() * q[i]
    F = abs(q[k]) ** 2 - abs(p[k]) ** 2
    return {"A": A, "B": B, "C": C, "D": D, "F": float(F)}


def potential_n_coeffs(
    tau: EquivariantMapN, nu: float, mu: float, z: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients (c_dz, c_dzbar) of theta at z, each an n-vector.

    theta = -1/2 sum_l { nu (zbar_l dz_l - z_l dzbar_l)
                         + mu (tau bar_l d tau_l - tau_l d tau bar_l) }.
    """
    z = np.asarray(z, dtype=complex)
    c_dz = -0.5 * nu * np.conj(z)
    c_dzb = 0.5 * nu * z
    if mu != 0.0:
        t = tau(z)
        P, Q = jacobian_blocks(tau, z)
        # d tau_l / dz_k = P[l,k]; d (tau bar_l) / dz_k = conj(Q[l,k])
        for k in range(tau.n):
            c_dz[k] += -0.5 * mu * np.sum(np.conj(t) * P[:, k] - t * np.conj(Q[:, k]))
            c_dzb[k] += -0.5 * mu * np.sum(np.conj(t) * Q[:, k] - t * np.conj(P[:, k]))
    return c_dz, c_dzb


def _two_form_matrix(tau: EquivariantMapN, nu: float, mu: float, z: np.ndarray, h: float) -> np.ndarray:
    """Antisymmetric (2n x 2n) coefficient matrix of d theta at z.

    Basis order (dz_1..dz_n, dzbar_1..dzbar_n); entry [a, b] (a < b) is the
    coefficient of basis_a ^ basis_b.  Derivatives by 5-point stencils in the
    2n Wirtinger directions.
    """
    n = tau.n

    def coeffs(zz: np.ndarray) -> np.ndarray:
        c_dz, c_dzb = potential_n_coeffs(tau, nu, mu, zz)
        return np.concatenate([c_dz, c_dzb])

    # d(coeff_b)/d(direction a): directions 0..n-1 are d/dz_k, n..2n-1 d/dzbar_k
    grad = np.zeros((2 * n, 2 * n), dtype=complex)  # grad[a, b] = d c_b / d dir_a
    for k in range(n):
        gx = np.zeros(2 * n, dtype=complex)
        gy = np.zeros(2 * n, dtype=complex)
        for step, w in ((2, -1.0), (1, 8.0), (-1, -8.0), (-2, 1.0)):
            zx = z.astype(complex).copy()
            zx[k] += step * h
            gx += coeffs(zx) * (w / (12 * h))
            zy = z.astype(complex).copy()
            zy[k] += 1j * step * h
            gy += coeffs(zy) * (w / (12 * h))
        grad[k] = 0.5 * (gx - 1j * gy)
        grad[n + k] = 0.5 * (gx + 1j * gy)
    return grad - grad.T  # M[a,b] = d_a c_b - d_b c_a


def equivariance_check_n(
    tau: EquivariantMapN,
    rho_kind: str,
    n_samples: int = 50,
    seed: int = 0,
    tol: float = 1e-8,
    U: Optional[np.ndarray] = None,
) -> CheckReport:
    """Residual of tau(g.z) = alpha(g) tau(z) + beta(g) for the declared rho.

    ``rho_kind``: "identity" (alpha=A, beta=b), "conjugate" (entrywise
    conjugation of [A, b]), or "unitary_conj" (alpha = U A U*, beta = U b).
    """
    rng = np.random.default_rng(seed)
    n = tau.n
    res = []
    for _ in range(n_samples):
        g = random_element_n(n, rng)
        z = rng.normal(size=n) + 1j * rng.normal(size=n)
        if rho_kind == "identity":
            alpha, beta = g.A, g.b
        elif rho_kind == "conjugate":
            alpha, beta = np.conj(g.A), np.conj(g.b)
        elif rho_kind == "unitary_conj":
            alpha, beta = U @ g.A @ U.conj().T, U @ g.b
        else:
            raise ValueError(f"unknown rho kind {rho_kind!r}")
        res.append(float(np.abs(tau(act_n(g, z)) - (alpha @ tau(z) + beta)).max()))
    return from_residuals(
        "equivariance_n", res, tol, rho=rho_kind, n=n, n_samples=n_samples, seed=seed
    )


def constant_field_test(
    tau: EquivariantMapN,
    nu: float,
    mu: float,
    n_points: int = 12,
    seed: int = 0,
    tol: float = 1e-6,
) -> dict:
    """Per-component criterion vs. direct 2-form constancy, with agreement flag.

    Per-component: max |A|, max |B| over sample points and index choices, and
    the spread of each F across points, all required below ``tol``.  Direct:
    the full 2-form d theta is assembled numerically; every coefficient must
    be constant across points within ``tol``.
    """
    rng = np.random.default_rng(seed)
    n = tau.n
    pts = [rng.normal(size=n) + 1j * rng.normal(size=n) for _ in range(n_points)]

    max_A = max_B = 0.0
    f_vals: dict[tuple[int, int], list[float]] = {}
    for z in pts:
        P, Q = jacobian_blocks(tau, z)
        for ell in range(n):
            for k in range(n):
                f_vals.setdefault((ell, k), []).append(
                    float(abs(Q[ell, k]) ** 2 - abs(P[ell, k]) ** 2)
                )
            for i in range(n):
                for j in range(i + 1, n):
                    d = determinant_coeffs(tau, z, ell, i, j, 0)
                    max_A = max(max_A, float(abs(d["A"])))
                    max_B = max(max_B, float(abs(d["B"])))
    f_spread = float(max(max(v) - min(v) for v in f_vals.values()))
    per_l_pass = bool(max_A <= tol and max_B <= tol and f_spread <= tol)

    mats = np.array([_two_form_matrix(tau, nu, mu, z, tau.fd_step) for z in pts])
    direct_spread = float(np.abs(mats - mats[0]).max())
    direct_pass = bool(direct_spread <= tol)

    return {
        "per_l": {
            "max_A": max_A,
            "max_B": max_B,
            "F_spread": f_spread,
            "F_values": {f"{l},{k}": float(np.mean(v)) for (l, k), v in f_vals.items()},
            "pass": per_l_pass,
        },
        "direct": {
            "spread": direct_spread,
            "coefficients": _matrix_to_json(mats[0]),
            "pass": direct_pass,
        },
        "agree": bool(per_l_pass == direct_pass),
        "nu": nu,
        "mu": mu,
        "n": n,
    }


def _matrix_to_json(M: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in M]
