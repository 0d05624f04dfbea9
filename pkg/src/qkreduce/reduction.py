"""Group actions and moment maps for the two reduction families.

The 3x4 family acts on H^8 through four 2x2 rotation blocks driven by a
3-torus; the 2x3 family acts on H^7 with the first quaternionic
coordinate held fixed by the torus (its 1x1 identity block) and three
rotation blocks driven by a 2-torus.  In both cases Sp(1) multiplies on
the left and, for the twistor group, a U(1) factor multiplies on the
right.

Moment maps are computed definitionally through quaternion sums; the
numerics module carries an independent quadratic-form implementation
that the tests cross-check against this one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .quat import HPoint, Quaternion, left_mul_split, quat_mul
from .weights import OmegaMatrix, ThetaMatrix


@dataclass(frozen=True)
class ReductionConfig:
    family: str                      # "theta" | "omega"
    weights: object                  # ThetaMatrix | OmegaMatrix
    ambient_n: int                   # 8 | 7
    torus_rank: int                  # 3 | 2
    fixed_first_coordinate: bool     # False | True

    @classmethod
    def for_theta(cls, m: ThetaMatrix) -> "ReductionConfig":
        return cls("theta", m, 8, 3, False)

    @classmethod
    def for_omega(cls, m: OmegaMatrix) -> "ReductionConfig":
        return cls("omega", m, 7, 2, True)

    @classmethod
    def for_matrix(cls, m) -> "ReductionConfig":
        if isinstance(m, ThetaMatrix):
            return cls.for_theta(m)
        if isinstance(m, OmegaMatrix):
            return cls.for_omega(m)
        raise TypeError(f"unsupported weight matrix {type(m)!r}")

    @property
    def n_pairs(self) -> int:
        return 4 if self.family == "theta" else 3

    def pairs(self) -> list[tuple[int, int]]:
        """0-based coordinate index pairs rotated together by one block."""
        if self.fixed_first_coordinate:
            return [(2 * a + 1, 2 * a + 2) for a in range(self.n_pairs)]
        return [(2 * a, 2 * a + 1) for a in range(self.n_pairs)]

    def pair_weights(self, a: int) -> tuple[int, ...]:
        """Weight vector of pair a (0-based): rotation speed per torus angle."""
        return self.weights.column(a + 1)

    def block_angles(self, torus) -> np.ndarray:
        """theta_a = sum of weights times torus angles, per pair."""
        torus = np.asarray(torus, dtype=float)
        if torus.shape != (self.torus_rank,):
            raise ValueError(f"torus must have {self.torus_rank} angles")
        w = np.array([self.pair_weights(a) for a in range(self.n_pairs)],
                     dtype=float)
        return w @ torus


@dataclass(frozen=True)
class GroupElement:
    """Element of G = torus x Sp(1) (rho None) or of the twistor group
    G~ = G x U(1) (rho a unit complex number)."""

    torus: tuple
    lam: Quaternion
    rho: Optional[complex] = None

    def __post_init__(self):
        if abs(self.lam.norm() - 1.0) > 1e-9:
            raise ValueError("lam must be a unit quaternion")
        if self.rho is not None and abs(abs(self.rho) - 1.0) > 1e-9:
            raise ValueError("rho must be a unit complex number")

    @classmethod
    def identity(cls, cfg: ReductionConfig, twistor: bool = False) -> "GroupElement":
        rho = 1.0 + 0.0j if twistor else None
        return cls(tuple(0.0 for _ in range(cfg.torus_rank)), Quaternion(1.0), rho)


@dataclass
class MomentValue:
    mu: list          # three imaginary quaternions (Sp(1) factor)
    nu: list          # torus_rank imaginary quaternions


def mu(cfg: ReductionConfig, p: HPoint) -> list[Quaternion]:
    """Sp(1) moment map: (sum conj(u) i u, sum conj(u) j u, sum conj(u) k u)."""
    if p.n != cfg.ambient_n:
        raise ValueError(f"point has {p.n} coordinates, expected {cfg.ambient_n}")
    qs = p.to_quaternions()
    out = []
    for unit in (Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0),
                 Quaternion(0, 0, 0, 1)):
        acc = Quaternion()
        for q in qs:
            acc = acc + quat_mul(quat_mul(q.conj(), unit), q)
        out.append(acc)
    return out


def nu(cfg: ReductionConfig, p: HPoint) -> list[Quaternion]:
    """Torus moment map: weighted sums of the antisymmetrized pair products
    conj(u_a) u_b - conj(u_b) u_a over the quaternionic pairs."""
    if p.n != cfg.ambient_n:
        raise ValueError(f"point has {p.n} coordinates, expected {cfg.ambient_n}")
    qs = p.to_quaternions()
    pair_terms = []
    for (ia, ib) in cfg.pairs():
        t = quat_mul(qs[ia].conj(), qs[ib]) - quat_mul(qs[ib].conj(), qs[ia])
        pair_terms.append(t)
    rows = cfg.weights.rows()
    out = []
    for row in rows:
        acc = Quaternion()
        for wgt, term in zip(row, pair_terms):
            acc = acc + wgt * term
        out.append(acc)
    return out


def moment_value(cfg: ReductionConfig, p: HPoint) -> MomentValue:
    return MomentValue(mu(cfg, p), nu(cfg, p))


def act(cfg: ReductionConfig, g: GroupElement, p: HPoint) -> HPoint:
    """Apply A(weights, torus) * lam * u * rho to the point."""
    if p.n != cfg.ambient_n:
        raise ValueError(f"point has {p.n} coordinates, expected {cfg.ambient_n}")
    z, w = left_mul_split(p.z.copy(), p.w.copy(), g.lam)
    if g.rho is not None:
        z = z * g.rho
        w = w * g.rho
    angles = cfg.block_angles(g.torus)
    zo = z.copy()
    wo = w.copy()
    for a, (ia, ib) in enumerate(cfg.pairs()):
        c = math.cos(angles[a])
        s = math.sin(angles[a])
        zo[ia] = c * z[ia] + s * z[ib]
        zo[ib] = -s * z[ia] + c * z[ib]
        wo[ia] = c * w[ia] + s * w[ib]
        wo[ib] = -s * w[ia] + c * w[ib]
    return HPoint(zo, wo)


def fixed_point_residual(cfg: ReductionConfig, g: GroupElement, p: HPoint) -> float:
    """Euclidean norm of g.p - p in the ambient real coordinates."""
    moved = act(cfg, g, p)
    return float(np.linalg.norm(moved.to_real() - p.to_real()))
