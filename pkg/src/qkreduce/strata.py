"""Singular-stratum catalogs for both reduction families.

Each stratum is a symbolic descriptor (which quaternionic pairs carry
z-blocks vs w-blocks, sign choices, twistor vs 3-Sasakian level)
together with the integer data that controls its isotropy: a named
minor/box determinant, the exact congruence system of its fixed-point
equations, and the solution group of that system.  Numerical
verification (feasibility, dimensions, pointwise fixing, slice action)
is layered on top through the numerics module.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .quat import HPoint, Quaternion, Sp1Element
from .reduction import (GroupElement, ReductionConfig, act,
                        fixed_point_residual)
from .numerics import (EigenvalueFamilyPattern, LinearPattern, PatternBuilder,
                       ProjectionResult, Tolerances, constrained_project,
                       constraint_system, infeasibility_probe, orbit_fields,
                       stratum_dimensions)
from .weights import (OmegaMatrix, ThetaMatrix, boxes_omega, boxes_theta,
                      congruence_group, det3, det_int, format_box_signs,
                      minors_omega, minors_theta, _solve_exact)

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# Descriptors and reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StratumDescriptor:
    family: str                     # v3_sphere | triple_single | pair_pair |
                                   # sub_point | omega_point | sasakian
    index_sets: tuple               # 1-based pair indices, partitioning
    signs: tuple
    level: str                      # twistor | sasakian

    def sort_key(self):
        return (self.level, self.family, self.index_sets, self.signs)

    def label(self) -> str:
        parts = ["".join(map(str, s)) for s in self.index_sets]
        sgn = "".join("+" if s > 0 else "-" for s in self.signs)
        return f"{self.family}[{'|'.join(parts)}]{sgn}"


@dataclass
class StratumReport:
    descriptor: StratumDescriptor
    named_determinant: dict          # {"label": ..., "value": int}
    congruence_order: int            # raw stabilizer order (group of the
                                    # stratum's fixed-point congruences)
    noneffective_order: int
    stabilizer_effective: int        # congruence order / non-effective order
    predicted_quotient_dim: int      # 0 point, 2 sphere (source statement)
    pruned: bool
    prune_reason: Optional[str] = None
    dedup_class: Optional[str] = None
    numeric: Optional[dict] = None

    def to_json(self) -> dict:
        d = self.descriptor
        return {
            "family": d.family,
            "indices": [list(s) for s in d.index_sets],
            "signs": list(d.signs),
            "level": d.level,
            "isotropy_named": dict(self.named_determinant),
            "isotropy_raw": self.congruence_order,
            "isotropy_effective": self.stabilizer_effective,
            "quotient_dim": self.predicted_quotient_dim,
            "pruned": self.pruned,
            "prune_reason": self.prune_reason,
            "dedup_class": self.dedup_class,
            "numeric": self.numeric,
        }


class PositivityError(ValueError):
    """The unique-positive-sign-pattern search found zero or several
    positive systems, contradicting the uniqueness statement."""


@dataclass
class SignPatternSolution:
    moment_signs: tuple              # canonical, first sign +1
    pattern_signs: tuple             # eigenvector signs of the stratum
    box_signs: tuple                 # subscript signs of the governing box
    box_value: int
    solution: tuple                  # exact |u|^2 values (Fractions)
    n_positive: int


# ---------------------------------------------------------------------------
# Positive sign patterns (V3 families)
# ---------------------------------------------------------------------------

def _sign_classes(k: int):
    """Sign tuples of length k with first component +1 (global flips give
    the same linear system)."""
    return [(1,) + rest for rest in itertools.product((1, -1), repeat=k - 1)]


def _positive_sign_pattern(weight_rows, k: int) -> SignPatternSolution:
    positives = []
    for m_signs in _sign_classes(k):
        rows = [[s * wv for s, wv in zip(m_signs, row)] for row in weight_rows]
        rows.append([1] * k)
        rhs = [0] * len(weight_rows) + [Fraction(1, 2)]
        try:
            sol = _solve_exact(rows, rhs)
        except ValueError:
            continue  # singular sign system: cannot carry the stratum
        if all(v > 0 for v in sol):
            positives.append((m_signs, tuple(sol)))
    if len(positives) != 1:
        raise PositivityError(
            f"expected exactly one positive sign system, found {len(positives)}")
    m_signs, sol = positives[0]
    # box subscript signs: s_a = -m_1 * m_a for a >= 2
    box_signs = tuple(-m_signs[0] * m for m in m_signs[1:])
    return m_signs, sol, box_signs


def v3_positive_sign_pattern(m: ThetaMatrix) -> SignPatternSolution:
    """Brute-force the eight moment sign systems of the V3 family; exactly
    one admits an all-positive solution for the pair norms |u|^2."""
    m_signs, sol, box_signs = _positive_sign_pattern(m.rows(), 4)
    box_value = boxes_theta(m)[box_signs]
    # canonical eigenvector pattern: first pair carries -i
    pattern = tuple(-s for s in m_signs)
    return SignPatternSolution(m_signs, pattern, box_signs, box_value,
                               sol, 1)


def omega_positive_sign_pattern(m: OmegaMatrix) -> SignPatternSolution:
    m_signs, sol, box_signs = _positive_sign_pattern(m.rows(), 3)
    box_value = boxes_omega(m)[box_signs]
    return SignPatternSolution(m_signs, m_signs, box_signs, box_value,
                               sol, 1)


# ---------------------------------------------------------------------------
# Patterns (ambient realizations)
# ---------------------------------------------------------------------------

def descriptor_pattern(cfg: ReductionConfig, d: StratumDescriptor):
    """Ambient pattern subspace realizing the descriptor."""
    pairs = cfg.pairs()

    if d.family == "sasakian":
        w_prime = set(d.index_sets[0])
        types = {a: (1 if (a + 1) in w_prime else -1)
                 for a in range(len(pairs))}
        return EigenvalueFamilyPattern(cfg, types, label=d.label())

    pb = PatternBuilder(cfg)
    if d.family == "v3_sphere":
        for a, (ia, ib) in enumerate(pairs):
            c = d.signs[a]
            pb.free("z", ia, ties=[("z", ib, c * 1j)])
            pb.free("w", ia, ties=[("w", ib, c * 1j)])
    elif d.family == "triple_single":
        zset, (delta,) = d.index_sets
        s = d.signs[0]
        for a in zset:
            ia, ib = pairs[a - 1]
            pb.free("z", ia)
            pb.free("z", ib)
        ia, ib = pairs[delta - 1]
        pb.free("w", ia, ties=[("w", ib, s * 1j)])
    elif d.family == "pair_pair":
        zset, wset = d.index_sets
        for a in zset:
            ia, ib = pairs[a - 1]
            pb.free("z", ia)
            pb.free("z", ib)
        for a in wset:
            ia, ib = pairs[a - 1]
            pb.free("w", ia)
            pb.free("w", ib)
    elif d.family == "sub_point":
        zset, wset = d.index_sets
        for a in zset:
            ia, ib = pairs[a - 1]
            pb.free("z", ia)
            pb.free("z", ib)
        for a, s in zip(wset, d.signs):
            ia, ib = pairs[a - 1]
            pb.free("w", ia, ties=[("w", ib, s * 1j)])
    elif d.family == "omega_point":
        zset, (gamma,) = d.index_sets
        s = d.signs[0]
        for a in zset:
            ia, ib = pairs[a - 1]
            pb.free("z", ia)
            pb.free("z", ib)
        ia, ib = pairs[gamma - 1]
        pb.free("w", ia, ties=[("w", ib, s * 1j)])
    elif d.family == "single_triple":
        (alpha,), wset = d.index_sets
        ia, ib = pairs[alpha - 1]
        pb.free("z", ia)
        pb.free("z", ib)
        for a, s in zip(wset, d.signs):
            ia, ib = pairs[a - 1]
            pb.free("w", ia, ties=[("w", ib, s * 1j)])
    else:
        raise ValueError(f"unknown stratum family {d.family!r}")
    return pb.build(label=d.label())


def stratum_point_parametrize(cfg: ReductionConfig, d: StratumDescriptor,
                              free_params) -> HPoint:
    """Ambient point realizing the pattern exactly (not yet on N)."""
    pattern = descriptor_pattern(cfg, d)
    params = np.asarray(free_params, dtype=float)
    if params.shape != (pattern.n_params,):
        raise ValueError(f"pattern wants {pattern.n_params} parameters")
    if isinstance(pattern, EigenvalueFamilyPattern) and abs(params[-2]) >= 1.0:
        raise ValueError("sasakian pattern needs |cos phi| < 1 (sin phi != 0)")
    x = pattern.embed(params)
    if not np.any(x):
        raise ValueError("pattern point is identically zero")
    return HPoint.from_real(x)


# ---------------------------------------------------------------------------
# Fixed-point congruence systems
# ---------------------------------------------------------------------------

def _cols(cfg, a):
    return list(cfg.weights.column(a))


def _zero(cfg):
    return [0] * cfg.torus_rank


def congruence_rows(cfg: ReductionConfig, d: StratumDescriptor):
    """Integer congruence system (in full-turn torus variables plus the
    Sp(1)/U(1) phases) whose solution group is the stratum stabilizer.

    Twistor-level variables: (torus..., E, P) with lam = e^{2 pi i E} and
    rho = e^{2 pi i P}.  Sasakian-level variables: (torus..., E) with the
    Sp(1) angle theta = 2 pi E (phi, delta taken from the point).
    """
    z2 = [0, 0]
    if d.level == "twistor":
        if d.family == "v3_sphere":
            c = d.signs
            base = [x * c[0] for x in _cols(cfg, 1)]
            rows = []
            for a in range(2, len(c) + 1):
                rows.append([x - y for x, y in
                             zip(base, [c[a - 1] * v for v in _cols(cfg, a)])] + z2)
            rows.append(base + [1, 1])
            rows.append(base + [-1, 1])
            return rows
        if d.family == "triple_single":
            (za, zb, zc), (delta,) = d.index_sets
            s = d.signs[0]
            rows = [
                [x - y for x, y in zip(_cols(cfg, za), _cols(cfg, zb))] + z2,
                [x - y for x, y in zip(_cols(cfg, za), _cols(cfg, zc))] + z2,
                [2 * x for x in _cols(cfg, za)] + z2,
                [-x for x in _cols(cfg, za)] + [1, 1],
                [s * x for x in _cols(cfg, delta)] + [-1, 1],
            ]
            return rows
        if d.family == "pair_pair":
            (za, zb), (wa, wb) = d.index_sets
            return [
                [x - y for x, y in zip(_cols(cfg, za), _cols(cfg, zb))] + z2,
                [x - y for x, y in zip(_cols(cfg, wa), _cols(cfg, wb))] + z2,
                [2 * x for x in _cols(cfg, za)] + z2,
                [2 * x for x in _cols(cfg, wa)] + z2,
                [-x for x in _cols(cfg, za)] + [1, 1],
                [-x for x in _cols(cfg, wa)] + [-1, 1],
            ]
        if d.family == "sub_point":
            (za, zb), (wa, wb) = d.index_sets
            sa, sb = d.signs
            return [
                [x - y for x, y in zip(_cols(cfg, za), _cols(cfg, zb))] + z2,
                [sa * x - sb * y for x, y in
                 zip(_cols(cfg, wa), _cols(cfg, wb))] + z2,
                [2 * x for x in _cols(cfg, za)] + z2,
                [-x for x in _cols(cfg, za)] + [1, 1],
                [sa * x for x in _cols(cfg, wa)] + [-1, 1],
            ]
        if d.family == "omega_point":
            (za, zb), (gamma,) = d.index_sets
            s = d.signs[0]
            return [
                [x - y for x, y in zip(_cols(cfg, za), _cols(cfg, zb))] + z2,
                [2 * x for x in _cols(cfg, za)] + z2,
                [-x for x in _cols(cfg, za)] + [1, 1],
                [s * x for x in _cols(cfg, gamma)] + [-1, 1],
            ]
        if d.family == "single_triple":
            (alpha,), wset = d.index_sets
            rows = [[2 * x for x in _cols(cfg, alpha)] + z2,
                    [-x for x in _cols(cfg, alpha)] + [1, 1]]
            first = wset[0]
            s0 = d.signs[0]
            for a, s in zip(wset[1:], d.signs[1:]):
                rows.insert(0, [s0 * x - s * y for x, y in
                                zip(_cols(cfg, first), _cols(cfg, a))] + z2)
            rows.append([s0 * x for x in _cols(cfg, first)] + [-1, 1])
            return rows
        raise ValueError(f"unknown twistor family {d.family!r}")

    # sasakian level
    w_prime = set(d.index_sets[0])
    rel = lambda a: -1 if ((a in w_prime) == (1 in w_prime)) else 1
    rows = []
    for a in range(2, len(cfg.pairs()) + 1):
        rows.append([x + rel(a) * y for x, y in
                     zip(_cols(cfg, 1), _cols(cfg, a))] + [0])
    rows.append([-x for x in _cols(cfg, 1)] + [1])
    return rows


def noneffective_rows(cfg: ReductionConfig, level: str):
    """Congruence system of the kernel of the action (the elements fixing
    every ambient point)."""
    z2 = [0, 0]
    if level == "twistor":
        if cfg.fixed_first_coordinate:
            rows = [_cols(cfg, a) + z2 for a in range(1, cfg.n_pairs + 1)]
            rows.append(_zero(cfg) + [1, 1])
            rows.append(_zero(cfg) + [-1, 1])
            return rows
        rows = [[x - y for x, y in zip(_cols(cfg, a), _cols(cfg, 1))] + z2
                for a in range(2, cfg.n_pairs + 1)]
        rows.append([2 * x for x in _cols(cfg, 1)] + z2)
        rows.append([-x for x in _cols(cfg, 1)] + [1, 1])
        rows.append([-x for x in _cols(cfg, 1)] + [-1, 1])
        return rows
    if cfg.fixed_first_coordinate:
        rows = [_cols(cfg, a) + [0] for a in range(1, cfg.n_pairs + 1)]
        rows.append(_zero(cfg) + [1])
        return rows
    rows = [[x - y for x, y in zip(_cols(cfg, a), _cols(cfg, 1))] + [0]
            for a in range(2, cfg.n_pairs + 1)]
    rows.append([2 * x for x in _cols(cfg, 1)] + [0])
    rows.append([-x for x in _cols(cfg, 1)] + [1])
    return rows


def lift_solution(cfg: ReductionConfig, d: StratumDescriptor, sol,
                  phi: float = None, delta: float = None):
    """Group element(s) corresponding to one congruence solution.

    Twistor solutions lift uniquely; sasakian solutions lift with the
    (phi, delta) parameters of the verified point and both theta branches
    are offered (the pointwise residual selects the valid ones).
    """
    sol = [float(v) for v in sol]
    torus = tuple(TWO_PI * v for v in sol[:cfg.torus_rank])
    if d.level == "twistor":
        e_ang = TWO_PI * sol[cfg.torus_rank]
        p_ang = TWO_PI * sol[cfg.torus_rank + 1]
        lam = Quaternion(math.cos(e_ang), math.sin(e_ang), 0.0, 0.0)
        rho = complex(math.cos(p_ang), math.sin(p_ang))
        return [GroupElement(torus, lam, rho)]
    theta = TWO_PI * sol[cfg.torus_rank]
    out = []
    for th in (theta, -theta):
        lam = Sp1Element(th, phi, delta).to_quaternion()
        out.append(GroupElement(torus, lam, None))
    return out


# ---------------------------------------------------------------------------
# Catalog enumeration
# ---------------------------------------------------------------------------

def _minor_label(triple) -> str:
    return "Delta_" + "".join(map(str, triple))


def _box_label(signs) -> str:
    return "box" + format_box_signs(signs)


def _congruence_report(cfg, d):
    rows = congruence_rows(cfg, d)
    group = congruence_group(rows)
    noneff = congruence_group(noneffective_rows(cfg, d.level))
    return group, noneff


def _report(cfg, d, named_label, named_value, quotient_dim, prune_rule,
            dedup_class=None) -> StratumReport:
    noneff = congruence_group(noneffective_rows(cfg, d.level))
    try:
        group = congruence_group(congruence_rows(cfg, d))
        order = group.order
        eff = order // noneff.order
        pruned, reason = prune_rule(named_value)
    except ValueError:
        # degenerate fixed-point system: the would-be stabilizer is
        # continuous, so the pattern cannot meet the locally-free zero set
        order, eff = 0, 0
        pruned, reason = True, "continuous stabilizer (degenerate congruences)"
    return StratumReport(
        descriptor=d,
        named_determinant={"label": named_label, "value": named_value},
        congruence_order=order,
        noneffective_order=noneff.order,
        stabilizer_effective=eff,
        predicted_quotient_dim=quotient_dim,
        pruned=pruned, prune_reason=reason, dedup_class=dedup_class)


def _prune_unit(value):
    if abs(value) == 1:
        return True, "named determinant is +-1 (trivial isotropy)"
    return False, None


def _prune_unit_or_zero(value):
    if value == 0:
        return True, "isotropy combination vanishes"
    if abs(value) == 1:
        return True, "named determinant is +-1 (trivial isotropy)"
    return False, None


THETA_TRIPLE_SINGLE = (((1, 2, 3), 4), ((1, 2, 4), 3), ((1, 3, 4), 2),
                       ((2, 3, 4), 1))
THETA_PAIR_PAIR = (((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3)))


def enumerate_twistor_strata_theta(m: ThetaMatrix) -> list[StratumReport]:
    """All twistor-level strata of the 3x4 family: the selected V3 sphere,
    eight triple|single spheres, three pair|pair spheres, and up to
    3 x 4 sub-points, with unit-determinant entries pruned."""
    from .weights import admissible_theta
    ok, witness = admissible_theta(m)
    if not ok:
        raise ValueError(f"inadmissible weight matrix: {witness}")
    cfg = ReductionConfig.for_theta(m)
    mins = minors_theta(m)
    reports = []

    v3 = v3_positive_sign_pattern(m)
    d = StratumDescriptor("v3_sphere", ((1, 2, 3, 4),), v3.pattern_signs,
                          "twistor")
    reports.append(_report(cfg, d, _box_label(v3.box_signs), v3.box_value,
                           2, _prune_unit))

    for triple, single in THETA_TRIPLE_SINGLE:
        for s in (1, -1):
            d = StratumDescriptor("triple_single", (triple, (single,)), (s,),
                                  "twistor")
            reports.append(_report(cfg, d, _minor_label(triple), mins[triple],
                                   2, _prune_unit))

    for zset, wset in THETA_PAIR_PAIR:
        # The fixed-point congruence determinant of the sign-resolved
        # sub-strata is 4*(ka*sa - kb*sb) where ka, kb are the exact
        # multilinear coefficients below (each +-1 times a minor).
        zf, zs = zset
        wa, wb = wset
        ka = det3([[x - y for x, y in zip(_cols(cfg, zf), _cols(cfg, zs))],
                   _cols(cfg, wa), _cols(cfg, zf)])
        kb = det3([[x - y for x, y in zip(_cols(cfg, zf), _cols(cfg, zs))],
                   _cols(cfg, wb), _cols(cfg, zf)])
        ta = tuple(sorted(zset + (wa,)))
        tb = tuple(sorted(zset + (wb,)))
        sig_a = "+" if (mins[ta] != 0 and ka == mins[ta]) else "-"
        sig_b = "+" if (mins[tb] != 0 and kb == mins[tb]) else "-"

        def comb_label(sa, sb):
            first = ("+" if sa > 0 else "-") if sig_a == "+" else ("-" if sa > 0 else "+")
            second = ("-" if sb > 0 else "+") if sig_b == "+" else ("+" if sb > 0 else "-")
            return f"{first}{_minor_label(ta)}{second}{_minor_label(tb)}"

        d = StratumDescriptor("pair_pair", (zset, wset), (), "twistor")
        comb = ka - kb
        reports.append(_report(cfg, d, comb_label(1, 1), comb, 2,
                               _prune_unit_or_zero))
        for sa, sb in itertools.product((1, -1), repeat=2):
            dd = StratumDescriptor("sub_point", (zset, wset), (sa, sb),
                                   "twistor")
            reports.append(_report(cfg, dd, comb_label(sa, sb), sa * ka - sb * kb,
                                   0, _prune_unit_or_zero))

    reports.sort(key=lambda r: r.descriptor.sort_key())
    return reports


def _theta_sasakian_box_signs(w_prime: set) -> tuple:
    # pair a relates to pair 1 through theta_1 + s_a * theta_a with
    # s_a = -1 when both pairs carry the same eigenvector type
    return tuple(-1 if ((a in w_prime) == (1 in w_prime)) else 1
                 for a in (2, 3, 4))


def enumerate_sasakian_strata_theta(m: ThetaMatrix) -> list[StratumReport]:
    """The eight w'/w''-assignment strata of the 3-Sasakian orbifold (all
    sixteen assignments, deduplicated under the global w' <-> w''
    exchange)."""
    from .weights import admissible_theta
    ok, witness = admissible_theta(m)
    if not ok:
        raise ValueError(f"inadmissible weight matrix: {witness}")
    cfg = ReductionConfig.for_theta(m)
    bx = boxes_theta(m)
    reports = []
    seen = {}
    for bits in itertools.product((True, False), repeat=4):
        w_prime = frozenset(a for a, b in zip((1, 2, 3, 4), bits) if b)
        canon = w_prime if 1 in w_prime else frozenset({1, 2, 3, 4}) - w_prime
        if canon in seen:
            continue
        seen[canon] = True
        signs = _theta_sasakian_box_signs(set(canon))
        d = StratumDescriptor(
            "sasakian",
            (tuple(sorted(canon)), tuple(sorted(set((1, 2, 3, 4)) - canon))),
            (), "sasakian")
        reports.append(_report(cfg, d, _box_label(signs), bx[signs], 0,
                               _prune_unit,
                               dedup_class="w-set " + "".join(map(str, sorted(canon)))))
    reports.sort(key=lambda r: r.descriptor.sort_key())
    return reports


OMEGA_POINT_SETS = (((1, 2), 3), ((1, 3), 2), ((2, 3), 1))


def enumerate_twistor_strata_omega(m: OmegaMatrix) -> list[StratumReport]:
    """Twistor-level strata of the 2x3 family: the selected V3 stratum
    plus six isolated points, unit determinants pruned."""
    from .weights import admissible_omega
    ok, witness = admissible_omega(m)
    if not ok:
        raise ValueError(f"inadmissible weight matrix: {witness}")
    cfg = ReductionConfig.for_omega(m)
    mins = minors_omega(m)
    reports = []

    v3 = omega_positive_sign_pattern(m)
    d = StratumDescriptor("v3_sphere", ((1, 2, 3),), v3.pattern_signs,
                          "twistor")
    reports.append(_report(cfg, d, _box_label(v3.box_signs), v3.box_value,
                           2, _prune_unit))

    for zset, gamma in OMEGA_POINT_SETS:
        for s in (1, -1):
            d = StratumDescriptor("omega_point", (zset, (gamma,)), (s,),
                                  "twistor")
            reports.append(_report(cfg, d, _minor_label(zset), mins[zset],
                                   0, _prune_unit))

    reports.sort(key=lambda r: r.descriptor.sort_key())
    return reports


def _omega_sasakian_box_signs(w_tilde: set) -> tuple:
    return tuple(-1 if ((a in w_tilde) == (1 in w_tilde)) else 1
                 for a in (2, 3))


def enumerate_sasakian_strata_omega(m: OmegaMatrix) -> list[StratumReport]:
    """The eight w~/w~~-assignment strata of the 3-Sasakian orbifold of the
    2x3 family; complementary assignments describe the same stratum (a
    phi -> pi - phi reparametrization) and share a dedup class."""
    from .weights import admissible_omega
    ok, witness = admissible_omega(m)
    if not ok:
        raise ValueError(f"inadmissible weight matrix: {witness}")
    cfg = ReductionConfig.for_omega(m)
    bx = boxes_omega(m)
    reports = []
    for bits in itertools.product((True, False), repeat=3):
        w_tilde = frozenset(a for a, b in zip((1, 2, 3), bits) if b)
        canon = w_tilde if 1 in w_tilde else frozenset({1, 2, 3}) - w_tilde
        signs = _omega_sasakian_box_signs(set(w_tilde))
        d = StratumDescriptor(
            "sasakian",
            (tuple(sorted(w_tilde)), tuple(sorted(set((1, 2, 3)) - w_tilde))),
            (), "sasakian")
        reports.append(_report(cfg, d, _box_label(signs), bx[signs], 0,
                               _prune_unit,
                               dedup_class="w-set " + "".join(map(str, sorted(canon)))))
    reports.sort(key=lambda r: r.descriptor.sort_key())
    return reports


def enumerate_strata(m, level: str) -> list[StratumReport]:
    if isinstance(m, ThetaMatrix):
        return (enumerate_twistor_strata_theta(m) if level == "twistor"
                else enumerate_sasakian_strata_theta(m))
    return (enumerate_twistor_strata_omega(m) if level == "twistor"
            else enumerate_sasakian_strata_omega(m))


# ---------------------------------------------------------------------------
# Block determinants
# ---------------------------------------------------------------------------

def fixed_point_block_det(cfg: ReductionConfig, g: GroupElement,
                          pair_index: int) -> complex:
    """det M_a of the per-pair fixed-point block for the group element.

    With rho present this is the twistor-level block; with rho None the
    3-Sasakian block (rho = 1).
    """
    angles = cfg.block_angles(g.torus)
    th = float(angles[pair_index])
    eps, sigma = g.lam.split()
    rho = g.rho if g.rho is not None else 1.0 + 0.0j
    c, s = math.cos(th), math.sin(th)
    m = np.array([
        [0, -sigma * rho, -s, c - np.conj(eps) * rho],
        [-sigma * rho, 0, c - np.conj(eps) * rho, s],
        [-s, c - eps * rho, 0, np.conj(sigma) * rho],
        [c - eps * rho, s, np.conj(sigma) * rho, 0],
    ], dtype=complex)
    return complex(np.linalg.det(m))


# ---------------------------------------------------------------------------
# Pointwise isotropy verification
# ---------------------------------------------------------------------------

@dataclass
class IsotropyVerification:
    descriptor: StratumDescriptor
    congruence_order: int
    fixing_elements: int             # solutions whose lift fixes the point
    noneffective_order: int
    effective_order: int             # fixing / non-effective
    slice_order: int                 # image of the stabilizer on the slice
    max_residual: float
    all_generators_fix: bool


def _recover_sasakian_angles(cfg, d, p: HPoint):
    """Least-squares recovery of (phi, delta) from a sasakian pattern point."""
    pairs = cfg.pairs()
    w_prime = set(d.index_sets[0])
    rows = []
    rhs = []
    for a, (ia, ib) in enumerate(pairs):
        t = 1 if (a + 1) in w_prime else -1
        za, zb = p.z[ia], p.z[ib]
        wa, wb = p.w[ia], p.w[ib]
        # w_a * xi - i t c z_a = -z_b ;  w_b * xi - i t c z_b = z_a
        # unknowns: xi = sin(phi) e^{-i delta} (complex), c = cos(phi)
        for w_val, z_self, target in ((wa, za, -zb), (wb, zb, za)):
            rows.append([w_val.real, -w_val.imag, (1j * t * z_self).real * -1.0])
            rows.append([w_val.imag, w_val.real, (1j * t * z_self).imag * -1.0])
            rhs += [target.real, target.imag]
    sol, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    xi = complex(sol[0], sol[1])
    c = float(sol[2])
    phi = math.atan2(abs(xi), c)
    delta = -np.angle(xi)
    return phi, delta


def group_element_matrix(cfg: ReductionConfig, g: GroupElement) -> np.ndarray:
    """The (orthogonal) matrix of the group element on the real ambient
    coordinates."""
    dim = 4 * cfg.ambient_n
    cols = []
    for i in range(dim):
        e = np.zeros(dim)
        e[i] = 1.0
        cols.append(act(cfg, g, HPoint.from_real(e)).to_real())
    return np.array(cols).T


def _slice_basis(cfg, p: HPoint, twistor: bool, tol: Tolerances) -> np.ndarray:
    system = constraint_system(cfg)
    x = p.to_real()
    j = system.jacobian(x)
    rows = np.vstack([j, x[None, :]])
    _, svals, vt = np.linalg.svd(rows)
    rank = int(np.count_nonzero(svals > tol.rank * svals[0]))
    tangent = vt[rank:].T                     # T_p N, ambient columns
    fields = orbit_fields(cfg, p, twistor)
    uf, sf, _ = np.linalg.svd(fields.T, full_matrices=False)
    q = uf[:, sf > 1e-9 * max(sf[0], 1.0)]
    proj = tangent - q @ (q.T @ tangent)
    u, s, _ = np.linalg.svd(proj, full_matrices=False)
    keep = s > 1e-8
    return u[:, keep]


def stratum_isotropy_verify(cfg: ReductionConfig, d: StratumDescriptor,
                            p: HPoint, params=None,
                            tol: Optional[Tolerances] = None,
                            fix_tol: float = 1e-8) -> IsotropyVerification:
    """Solve the stratum's fixed-point congruence system, lift every
    solution to a group element, and verify pointwise which elements fix p.

    effective_order divides out the non-effective kernel; slice_order is
    the order of the stabilizer's image on the slice (tangent of N modulo
    the orbit directions), the group that the quotient orbifold actually
    sees at that point.
    """
    tol = tol or Tolerances()
    twistor = d.level == "twistor"
    group = congruence_group(congruence_rows(cfg, d))
    noneff = congruence_group(noneffective_rows(cfg, d.level))

    phi = delta = None
    if d.family == "sasakian":
        if params is not None:
            phi = math.acos(float(np.clip(params[-2], -1.0, 1.0)))
            delta = float(params[-1])
        else:
            phi, delta = _recover_sasakian_angles(cfg, d, p)

    sbasis = _slice_basis(cfg, p, twistor, tol)
    fixing = []
    max_res = 0.0
    for sol in group.elements():
        best = None
        for g in lift_solution(cfg, d, sol, phi=phi, delta=delta):
            res = fixed_point_residual(cfg, g, p)
            if best is None or res < best[0]:
                best = (res, g)
        res, g = best
        max_res = max(max_res, res)
        if res < fix_tol:
            fixing.append(g)
    if not fixing:
        raise ValueError("no congruence solution fixes the point: "
                         "catalog/point mismatch")

    slice_trivial = 0
    for g in fixing:
        mg = group_element_matrix(cfg, g)
        action = sbasis.T @ mg @ sbasis
        if np.linalg.norm(action - np.eye(action.shape[0])) < 1e-6:
            slice_trivial += 1
    n_fix = len(fixing)
    eff = n_fix // noneff.order if n_fix % noneff.order == 0 else n_fix / noneff.order
    slice_order = n_fix // slice_trivial if slice_trivial else 0

    gens_fix = True
    for gen in group.generators:
        best = min(fixed_point_residual(cfg, g, p)
                   for g in lift_solution(cfg, d, gen, phi=phi, delta=delta))
        if best >= fix_tol:
            gens_fix = False

    return IsotropyVerification(
        descriptor=d, congruence_order=group.order, fixing_elements=n_fix,
        noneffective_order=noneff.order, effective_order=eff,
        slice_order=slice_order, max_residual=max_res,
        all_generators_fix=gens_fix)


# ---------------------------------------------------------------------------
# Family comparison
# ---------------------------------------------------------------------------

def _catalog_summary(reports: list[StratumReport]) -> dict:
    families = sorted(r.descriptor.family for r in reports)
    surviving = [r for r in reports if not r.pruned]
    return {
        "count_total": len(reports),
        "count_surviving": len(surviving),
        "component_types": {f: families.count(f) for f in sorted(set(families))},
        "component_types_surviving": {
            f: sum(1 for r in surviving if r.descriptor.family == f)
            for f in sorted(set(r.descriptor.family for r in surviving))},
        "isotropy_multiset": sorted(abs(r.named_determinant["value"])
                                    for r in reports),
        "isotropy_multiset_surviving": sorted(
            abs(r.named_determinant["value"]) for r in surviving),
    }


def compare_families(theta: ThetaMatrix, omega: OmegaMatrix) -> dict:
    """Side-by-side twistor and 3-Sasakian catalog comparison of one matrix
    from each family."""
    out = {"theta": {"matrix": theta.to_json()},
           "omega": {"matrix": omega.to_json()}}
    for level in ("twistor", "sasakian"):
        out["theta"][level] = _catalog_summary(enumerate_strata(theta, level))
        out["omega"][level] = _catalog_summary(enumerate_strata(omega, level))

    def distinct(level, key):
        th = out["theta"][level][key]
        om = out["omega"][level][key]
        return th != om

    out["structurally_distinct"] = bool(
        distinct("twistor", "component_types_surviving")
        or distinct("sasakian", "component_types_surviving"))
    out["structurally_distinct_prepruning"] = bool(
        distinct("twistor", "component_types")
        or distinct("sasakian", "component_types"))
    return out


# ---------------------------------------------------------------------------
# Catalog-wide numeric verification
# ---------------------------------------------------------------------------

def verify_stratum(cfg: ReductionConfig, report: StratumReport,
                   tol: Optional[Tolerances] = None, seed: int = 0,
                   n_probe: int = 40) -> dict:
    """Constrained projection onto the stratum pattern plus the full
    numeric battery: dimensions, orbit rank, pointwise isotropy."""
    tol = tol or Tolerances()
    d = report.descriptor
    pattern = descriptor_pattern(cfg, d)
    result = constrained_project(cfg, pattern, tol=tol, seed=seed)
    numeric = {"min_residual": result.residual, "converged": result.converged}
    if result.converged:
        dims = stratum_dimensions(cfg, pattern, result,
                                  twistor=(d.level == "twistor"), tol=tol)
        ver = stratum_isotropy_verify(cfg, d, result.point,
                                      params=result.params, tol=tol)
        numeric.update({
            "dim": dims.saturated_dim,
            "pattern_tangent_dim": dims.pattern_tangent_dim,
            "orbit_rank": dims.orbit_rank,
            "quotient_dim": dims.quotient_dim,
            "fixing_elements": ver.fixing_elements,
            "effective_order": ver.effective_order,
            "slice_order": ver.slice_order,
            "max_fix_residual": ver.max_residual,
        })
    else:
        probe = infeasibility_probe(cfg, pattern, n_restarts=n_probe,
                                    tol=tol, seed=seed)
        numeric.update({"empty": probe.empty,
                        "min_residual": probe.min_residual})
    report.numeric = numeric
    return numeric
