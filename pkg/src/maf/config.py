"""System configuration: JSON ingestion, validation, bundled examples."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from .automorphy import PseudoCharacter
from .equivariant import Endomorphism, EquivariantMap, tau_from_beta
from .fields import Grid
from .groups import DiscreteSubgroup, GroupElement
from .magnetics import MagneticSystem


class ConfigError(ValueError):
    """Invalid or inconsistent system configuration."""


@dataclass
class SystemConfig:
    nu: float
    mu: float
    rho: dict
    tau: dict
    gamma: dict
    chi: dict
    grid: dict = field(default_factory=dict)
    fd_step: float = 1e-4
    tol: float = 1e-8
    seed: int = 0
    rdq: Optional[dict] = None
    highdim: Optional[dict] = None
    name: str = ""

    @classmethod
    def from_dict(cls, d: dict) -> "SystemConfig":
        try:
            return cls(
                nu=float(d["nu"]),
                mu=float(d["mu"]),
                rho=d["rho"],
                tau=d["tau"],
                gamma=d["gamma"],
                chi=d["chi"],
                grid=d.get("grid", {}),
                fd_step=float(d.get("fd_step", 1e-4)),
                tol=float(d.get("tol", 1e-8)),
                seed=int(d.get("seed", 0)),
                rdq=d.get("rdq"),
                highdim=d.get("highdim"),
                name=d.get("name", ""),
            )
        except KeyError as e:
            raise ConfigError(f"missing required config key: {e.args[0]}") from e
        except (TypeError, ValueError) as e:
            raise ConfigError(f"malformed config value: {e}") from e

    def make_grid(self) -> Grid:
        return Grid.from_dict(self.grid)


def load_config(path: str) -> SystemConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}") from e
    return SystemConfig.from_dict(data)


def load_bundled(name: str) -> SystemConfig:
    """Load one of the packaged example systems by stem name."""
    ref = resources.files("maf") / "configs" / f"{name}.json"
    try:
        data = json.loads(ref.read_text())
    except FileNotFoundError as e:
        raise ConfigError(f"no bundled config named {name!r}") from e
    return SystemConfig.from_dict(data)


def bundled_names() -> list[str]:
    base = resources.files("maf") / "configs"
    return sorted(p.name.removesuffix(".json") for p in base.iterdir() if p.name.endswith(".json"))


def _make_tau(rho: Endomorphism, desc: dict) -> EquivariantMap:
    kind = desc.get("kind")
    if kind == "from_beta":
        return tau_from_beta(rho, complex(*desc["beta"]))
    if kind == "affine":
        return EquivariantMap.from_affine(
            complex(*desc["p"]), complex(*desc["q"]), complex(*desc["r"])
        )
    raise ConfigError(f"unknown tau descriptor kind {kind!r}")


def build_system(cfg: SystemConfig) -> MagneticSystem:
    """Materialize the configured MagneticSystem, or fail with a diagnostic."""
    try:
        rho = Endomorphism.from_dict(cfg.rho)
        tau = _make_tau(rho, cfg.tau)
        gens = [GroupElement.from_dict(g) for g in cfg.gamma["generators"]]
        gamma = DiscreteSubgroup(gens, cfg.gamma.get("labels", []))
        chi = PseudoCharacter.from_dict(cfg.chi)
        return MagneticSystem(
            nu=cfg.nu,
            mu=cfg.mu,
            rho=rho,
            tau=tau,
            gamma=gamma,
            chi=chi,
            fd_step=cfg.fd_step,
        )
    except ConfigError:
        raise
    except (KeyError, TypeError) as e:
        raise ConfigError(f"malformed system description: {e}") from e
    except ValueError as e:
        raise ConfigError(f"system invariant violated: {e}") from e
