"""Automorphic factors, pseudo-characters, and the cocycle machinery.

The elementary factor is j^alpha(g, z) = exp(-i alpha Im<z, g^{-1}.0>) with
the hermitian pairing <z, w> = z wbar.  The mixed factor multiplies two such
factors with a pseudo-character chi on a discrete subgroup.  chi extends from
generator values by the twisted multiplicativity

    chi(g g') = chi(g) chi(g') exp(+i phase(g, g')),

equivalently chi(g g') / (chi(g) chi(g')) is the conjugate of the cocycle
defect of the chi-free factor; well-definedness of the extension is exactly
the quantization condition checked by ``rdq_check``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .equivariant import Endomorphism, EquivariantMap, apply_endo
from .fields import Grid, ScalarField
from .groups import (
    IDENTITY,
    DiscreteSubgroup,
    GroupElement,
    act,
    compose,
    distance,
    inverse,
)
from .reports import CheckReport, from_residuals

MATCH_TOL = 1e-9


class UnknownGroupElementError(ValueError):
    """Raised when an element is not reachable in the subgroup's word closure."""


def j_factor(alpha: float, g: GroupElement, z: complex) -> complex:
    """exp(-i alpha Im(z * conj(g^{-1}.0)))."""
    w = act(inverse(g), 0.0)
    return np.exp(-1j * alpha * (z * w.conjugate()).imag)


def phase(nu: float, mu: float, rho: Endomorphism, g: GroupElement, gp: GroupElement) -> float:
    """Im(nu <g^{-1}.0, g'.0> + mu <rho(g^{-1}).0, rho(g').0>)."""
    u = act(inverse(g), 0.0)
    v = act(gp, 0.0)
    val = nu * (u * v.conjugate()).imag
    if mu != 0.0:
        ru = act(apply_endo(rho, inverse(g)), 0.0)
        rv = act(apply_endo(rho, gp), 0.0)
        val += mu * (ru * rv.conjugate()).imag
    return float(val)


@dataclass
class PseudoCharacter:
    """Unit-circle values on the generators of a discrete subgroup."""

    values_on_generators: list[complex]

    def __post_init__(self):
        vals = [complex(v) for v in self.values_on_generators]
        for v in vals:
            if abs(abs(v) - 1.0) > 1e-12:
                raise ValueError(f"pseudo-character value {v} is not unimodular")
        self.values_on_generators = vals

    @classmethod
    def from_dict(cls, d: dict) -> "PseudoCharacter":
        return cls([complex(*v) for v in d["values_on_generators"]])

    def to_dict(self) -> dict:
        return {"values_on_generators": [[v.real, v.imag] for v in self.values_on_generators]}


class CharacterTable:
    """chi extended over the word closure of a subgroup, with consistency audit.

    Breadth-first extension; whenever two words reach the same element the
    mismatch of their chi values is recorded in ``inconsistency``.
    """

    def __init__(
        self,
        chi: PseudoCharacter,
        gamma: DiscreteSubgroup,
        nu: float,
        mu: float,
        rho: Endomorphism,
        max_len: int = 8,
    ):
        if len(chi.values_on_generators) != len(gamma.generators):
            raise ValueError("chi must supply one value per generator")
        steps: list[tuple[GroupElement, complex]] = []
        for i, g in enumerate(gamma.generators):
            v = chi.values_on_generators[i]
            steps.append((g, v))
            ginv = inverse(g)
            # chi(e) = 1 forces chi(g^{-1}) = conj(chi(g)) e^{-i phase(g, g^{-1})}
            steps.append((ginv, v.conjugate() * np.exp(-1j * phase(nu, mu, rho, g, ginv))))
        self.entries: list[tuple[GroupElement, complex, list[int]]] = [(IDENTITY, 1.0 + 0j, [])]
        self.inconsistency = 0.0
        self._cache: dict = {}
        frontier = [(IDENTITY, 1.0 + 0j, [])]
        for _ in range(max_len):
            new_frontier = []
            for w, val, word in frontier:
                for k, (g, gval) in enumerate(steps):
                    idx = (k // 2 + 1) * (1 if k % 2 == 0 else -1)
                    cand = compose(w, g)
                    cval = val * gval * np.exp(1j * phase(nu, mu, rho, w, g))
                    hit = self._find(cand)
                    if hit is None:
                        entry = (cand, cval, word + [idx])
                        self.entries.append(entry)
                        new_frontier.append(entry)
                    else:
                        self.inconsistency = max(self.inconsistency, abs(cval - hit[1]))
            frontier = new_frontier

    def _find(self, g: GroupElement):
        for e in self.entries:
            if distance(e[0], g) <= MATCH_TOL:
                return e
        return None

    def value(self, g: GroupElement) -> complex:
        key = (g.a, g.b)
        if key in self._cache:
            return self._cache[key]
        hit = self._find(g)
        if hit is None:
            raise UnknownGroupElementError(f"element {g} not in word closure of the subgroup")
        self._cache[key] = hit[1]
        return hit[1]

    def word(self, g: GroupElement) -> list[int]:
        hit = self._find(g)
        if hit is None:
            raise UnknownGroupElementError(f"element {g} not in word closure of the subgroup")
        return hit[2]


def mixed_factor_nochi(
    nu: float,
    mu: float,
    rho: Endomorphism,
    tau: EquivariantMap,
    g: GroupElement,
    z: complex,
) -> complex:
    """j^nu(g, z) j^mu(rho(g), tau(z)) — the character-free part, defined for all g."""
    return j_factor(nu, g, z) * j_factor(mu, apply_endo(rho, g), tau(z))


def mixed_factor(
    nu: float,
    mu: float,
    rho: Endomorphism,
    tau: EquivariantMap,
    table: CharacterTable,
    gamma_elem: GroupElement,
    z: complex,
) -> complex:
    """chi(gamma) j^nu(gamma, z) j^mu(rho(gamma), tau(z))."""
    return table.value(gamma_elem) * mixed_factor_nochi(nu, mu, rho, tau, gamma_elem, z)


def cocycle_defect(
    nu: float,
    mu: float,
    rho: Endomorphism,
    tau: EquivariantMap,
    g: GroupElement,
    gp: GroupElement,
    z: complex,
) -> complex:
    """J0(g g', z) / (J0(g, g'.z) J0(g', z)) for the character-free factor J0.

    A z-independent unit complex; equals exp(-i phase(g, g')).
    """
    num = mixed_factor_nochi(nu, mu, rho, tau, compose(g, gp), z)
    den = mixed_factor_nochi(nu, mu, rho, tau, g, act(gp, z)) * mixed_factor_nochi(
        nu, mu, rho, tau, gp, z
    )
    return num / den


def defect_phase_residuals(
    nu: float,
    mu: float,
    rho: Endomorphism,
    tau: EquivariantMap,
    g: GroupElement,
    gp: GroupElement,
    grid: Grid,
) -> tuple[float, float]:
    """(z-spread of the defect, deviation of the defect from exp(-i phase))."""
    vals = np.array([cocycle_defect(nu, mu, rho, tau, g, gp, z) for z in grid.points()])
    spread = float(np.abs(vals - vals[0]).max())
    target = np.exp(-1j * phase(nu, mu, rho, g, gp))
    return spread, float(np.abs(vals - target).max())


def rdq_check(
    nu: float,
    mu: float,
    rho: Endomorphism,
    gamma: DiscreteSubgroup,
    chi: PseudoCharacter,
    max_word_len: int = 4,
    tol: float = 1e-10,
) -> CheckReport:
    """Quantization condition: chi(g g') = chi(g) chi(g') exp(+i phase(g, g')).

    Checked over all pairs of words up to ``max_word_len``; the report names
    the worst-offending pair by signed generator indices.
    """
    table = CharacterTable(chi, gamma, nu, mu, rho, max_len=2 * max_word_len)
    short = [e for e in table.entries if len(e[2]) <= max_word_len]
    residuals = []
    worst = (0.0, [], [])
    for g, vg, wg in short:
        for gp, vgp, wgp in short:
            prod = compose(g, gp)
            r = abs(table.value(prod) - vg * vgp * np.exp(1j * phase(nu, mu, rho, g, gp)))
            residuals.append(r)
            if r > worst[0]:
                worst = (r, wg, wgp)
    return from_residuals(
        "rdq",
        residuals,
        tol,
        max_word_len=max_word_len,
        convention="chi(gg') = chi(g) chi(g') exp(+i*phase(g,g'))",
        extension_inconsistency=table.inconsistency,
        worst_pair={"left": worst[1], "right": worst[2]},
    )


def functional_equation_residual(
    F: ScalarField,
    nu: float,
    mu: float,
    rho: Endomorphism,
    tau: EquivariantMap,
    table: CharacterTable,
    gamma_elem: GroupElement,
    grid: Grid,
    tol: float = 1e-8,
) -> CheckReport:
    """Residual of F(gamma.z) = J(gamma, z) F(z) over the grid."""
    res = []
    for z in grid.points():
        J = mixed_factor(nu, mu, rho, tau, table, gamma_elem, z)
        res.append(abs(F(act(gamma_elem, z)) - J * F(z)))
    return from_residuals(
        "functional_equation", res, tol, gamma=gamma_elem.to_dict(), grid=grid.to_dict()
    )
