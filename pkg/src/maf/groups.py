"""The rigid-motion group U(1) x| C: elements, words, discrete subgroups.

An element [a, b] with |a| = 1 acts on the plane by z -> a z + b and
multiplies like the 2x2 matrices [[a, b], [0, 1]].
"""

from __future__ import annotations

from dataclasses import dataclass, field

UNIT_TOL = 1e-12
DEDUP_TOL = 1e-10


@dataclass(frozen=True)
class GroupElement:
    """A rigid motion [a, b] of the plane, a on the unit circle."""

    a: complex
    b: complex

    def __post_init__(self):
        if abs(abs(self.a) - 1.0) > UNIT_TOL:
            raise ValueError(f"rotation part must be unimodular, got |a|={abs(self.a)!r}")
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))

    def to_dict(self) -> dict:
        return {"a": [self.a.real, self.a.imag], "b": [self.b.real, self.b.imag]}

    @classmethod
    def from_dict(cls, d: dict) -> "GroupElement":
        return cls(complex(*d["a"]), complex(*d["b"]))


IDENTITY = GroupElement(1.0, 0.0)


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    """Group product g*h.  The rotation part is renormalized to kill drift."""
    a = g.a * h.a
    a /= abs(a)
    return GroupElement(a, g.a * h.b + g.b)


def inverse(g: GroupElement) -> GroupElement:
    abar = g.a.conjugate()
    return GroupElement(abar / abs(abar), -abar * g.b)


def act(g: GroupElement, z: complex) -> complex:
    return g.a * z + g.b


def distance(g: GroupElement, h: GroupElement) -> float:
    return abs(g.a - h.a) + abs(g.b - h.b)


def is_identity(g: GroupElement, tol: float = DEDUP_TOL) -> bool:
    return abs(g.a - 1.0) + abs(g.b) <= tol


def stabilizer_residual(g: GroupElement, x: complex) -> float:
    """|g.x - x|: zero exactly when g stabilizes x."""
    return abs(act(g, x) - x)


@dataclass
class DiscreteSubgroup:
    """Finitely generated subgroup given by its generators."""

    generators: list[GroupElement]
    labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.labels:
            self.labels = [f"g{i}" for i in range(len(self.generators))]
        if len(self.labels) != len(self.generators):
            raise ValueError("labels and generators must have equal length")
        self._discreteness_smoke_test()

    def _discreteness_smoke_test(self, max_len: int = 3):
        for w in enumerate_words(self, max_len):
            d = abs(w.a - 1.0) + abs(w.b)
            if 1e-12 < d < 1e-9:
                raise ValueError(
                    f"generator set fails discreteness smoke test: word at distance {d:.2e} from identity"
                )

    def symmetric_generators(self) -> list[tuple[int, GroupElement]]:
        """Generators and their inverses, tagged with signed indices (1-based)."""
        out = []
        for i, g in enumerate(self.generators):
            out.append((i + 1, g))
            out.append((-(i + 1), inverse(g)))
        return out


def enumerate_words(
    gamma: DiscreteSubgroup, max_len: int, dedup_tol: float = DEDUP_TOL
) -> list[GroupElement]:
    """All products of at most max_len generators/inverses, deduplicated.

    Breadth-first, so the identity comes first and short words precede long ones.
    """
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    elements: list[GroupElement] = [IDENTITY]
    frontier = [IDENTITY]
    gens = [g for _, g in gamma.symmetric_generators()]
    for _ in range(max_len):
        new_frontier = []
        for w in frontier:
            for g in gens:
                cand = compose(w, g)
                if all(distance(cand, e) > dedup_tol for e in elements):
                    elements.append(cand)
                    new_frontier.append(cand)
        frontier = new_frontier
        if not frontier:
            break
    return elements


def find_word(
    gamma: DiscreteSubgroup, target: GroupElement, max_len: int = 6, tol: float = 1e-9
) -> list[int] | None:
    """Signed generator indices whose product matches target, or None.

    Breadth-first over words; used to express lattice elements for
    pseudo-character evaluation.
    """
    if is_identity(target, tol):
        return []
    frontier: list[tuple[GroupElement, list[int]]] = [(IDENTITY, [])]
    seen = [IDENTITY]
    for _ in range(max_len):
        new_frontier = []
        for w, word in frontier:
            for idx, g in gamma.symmetric_generators():
                cand = compose(w, g)
                if distance(cand, target) <= tol:
                    return word + [idx]
                if all(distance(cand, e) > DEDUP_TOL for e in seen):
                    seen.append(cand)
                    new_frontier.append((cand, word + [idx]))
        frontier = new_frontier
    return None
