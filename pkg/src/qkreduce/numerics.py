"""Sphere-constrained projection onto the moment-map zero set and rank
diagnostics.

All moment constraints are quadratic forms x^T A x in the real ambient
coordinates x = [Re z; Im z; Re w; Im w], so Gauss-Newton Jacobians are
exact (2 A x) and the solver converges to machine precision.  The forms
are assembled here from explicit index formulas, independently of the
definitional quaternion sums in the reduction module; the test suite
cross-checks the two routes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .quat import HPoint
from .reduction import ReductionConfig


@dataclass
class Tolerances:
    residual: float = 1e-10       # absolute, on |mu|^2 + |nu|^2
    rank: float = 1e-6            # relative singular-value cutoff
    gap: float = 1e3              # required accepted/rejected ratio
    on_set: float = 1e-6          # slack for "point lies on N" preconditions
    max_iters: int = 500
    restarts: int = 20


@dataclass
class ProjectionResult:
    point: HPoint
    residual: float               # |mu|^2 + |nu|^2 at the point
    iterations: int
    converged: bool
    restarts_used: int = 0
    params: Optional[np.ndarray] = None


@dataclass
class RankReport:
    singular_values: np.ndarray
    rank: int
    gap_ratio: float
    ambiguous: bool
    implied_dim: Optional[int] = None


# ---------------------------------------------------------------------------
# Quadratic constraint forms
# ---------------------------------------------------------------------------

class _FormBuilder:
    def __init__(self, dim):
        self.a = np.zeros((dim, dim))

    def add(self, i, j, coeff):
        if i == j:
            self.a[i, i] += coeff
        else:
            self.a[i, j] += coeff / 2.0
            self.a[j, i] += coeff / 2.0


def constraint_forms(cfg: ReductionConfig) -> np.ndarray:
    """Symmetric matrices of all real moment constraints, mu stacked first
    (9 components), then nu (3 per torus row)."""
    n = cfg.ambient_n
    dim = 4 * n
    A = lambda k: k            # readability below
    ra, rb, rc, rd = 0, n, 2 * n, 3 * n   # offsets of Re z, Im z, Re w, Im w

    forms = []

    # mu: per coordinate alpha with (a, b, c, d) = (Re z, Im z, Re w, Im w):
    #   conj(u) i u = i(a^2+b^2-c^2-d^2) + 2(ad+bc) j + 2(ac-bd) k
    #   conj(u) j u = 2(bc-ad) i + (a^2-b^2+c^2-d^2) j - 2(ab+cd) k
    #   conj(u) k u = -2(ac+bd) i + (2ab-2cd) j + (a^2-b^2-c^2+d^2) k
    mu_terms = [
        # (component label, list of (offset_i, offset_j, coeff))
        [(ra, ra, 1), (rb, rb, 1), (rc, rc, -1), (rd, rd, -1)],
        [(ra, rd, 2), (rb, rc, 2)],
        [(ra, rc, 2), (rb, rd, -2)],
        [(rb, rc, 2), (ra, rd, -2)],
        [(ra, ra, 1), (rb, rb, -1), (rc, rc, 1), (rd, rd, -1)],
        [(ra, rb, -2), (rc, rd, -2)],
        [(ra, rc, -2), (rb, rd, -2)],
        [(ra, rb, 2), (rc, rd, -2)],
        [(ra, ra, 1), (rb, rb, -1), (rc, rc, -1), (rd, rd, 1)],
    ]
    for terms in mu_terms:
        fb = _FormBuilder(dim)
        for alpha in range(n):
            for oi, oj, coeff in terms:
                fb.add(oi + alpha, oj + alpha, coeff)
        forms.append(fb.a)

    # nu: per pair (ia, ib), the antisymmetrized product has components
    #   i: 2 Im(conj(z_a) z_b) + 2 Im(conj(w_a) w_b)
    #   j: 2 Re(z_a w_b - z_b w_a)
    #   k: -2 Im(z_a w_b - z_b w_a)
    pair_list = cfg.pairs()
    for row in cfg.weights.rows():
        comps = [[], [], []]
        for wgt, (ia, ib) in zip(row, pair_list):
            comps[0] += [(ra + ia, rb + ib, 2 * wgt), (rb + ia, ra + ib, -2 * wgt),
                         (rc + ia, rd + ib, 2 * wgt), (rd + ia, rc + ib, -2 * wgt)]
            comps[1] += [(ra + ia, rc + ib, 2 * wgt), (rb + ia, rd + ib, -2 * wgt),
                         (ra + ib, rc + ia, -2 * wgt), (rb + ib, rd + ia, 2 * wgt)]
            comps[2] += [(ra + ia, rd + ib, -2 * wgt), (rb + ia, rc + ib, -2 * wgt),
                         (ra + ib, rd + ia, 2 * wgt), (rb + ib, rc + ia, 2 * wgt)]
        for terms in comps:
            fb = _FormBuilder(dim)
            for i, j, coeff in terms:
                fb.add(i, j, coeff)
            forms.append(fb.a)

    return np.array(forms)


class ConstraintSystem:
    """Stacked quadratic moment constraints for one reduction family."""

    def __init__(self, cfg: ReductionConfig):
        self.cfg = cfg
        self.forms = constraint_forms(cfg)
        self.dim = 4 * cfg.ambient_n

    def values(self, x: np.ndarray) -> np.ndarray:
        return np.einsum("kij,i,j->k", self.forms, x, x)

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        return 2.0 * np.einsum("kij,j->ki", self.forms, x)

    def residual(self, x: np.ndarray) -> float:
        v = self.values(x)
        return float(v @ v)


_SYSTEMS: dict = {}


def constraint_system(cfg: ReductionConfig) -> ConstraintSystem:
    key = (cfg.family, cfg.weights)
    if key not in _SYSTEMS:
        _SYSTEMS[key] = ConstraintSystem(cfg)
    return _SYSTEMS[key]


# ---------------------------------------------------------------------------
# Patterns
# ---------------------------------------------------------------------------

class LinearPattern:
    """Real-linear subspace of the ambient space, x = P y."""

    def __init__(self, basis: np.ndarray, label: str = ""):
        basis = np.asarray(basis, dtype=float)
        if basis.ndim != 2 or basis.shape[1] == 0:
            raise ValueError("pattern has no free parameters")
        self.P = basis
        self.label = label
        self.n_params = basis.shape[1]

    def embed(self, params: np.ndarray) -> np.ndarray:
        return self.P @ params

    def jacobian(self, params: np.ndarray) -> np.ndarray:
        return self.P

    def random_params(self, rng) -> np.ndarray:
        return rng.standard_normal(self.n_params)

    def normalize(self, params: np.ndarray) -> np.ndarray:
        s = np.linalg.norm(self.embed(params))
        if s == 0:
            raise ValueError("zero pattern point")
        return params / s


def full_space_pattern(cfg: ReductionConfig) -> LinearPattern:
    return LinearPattern(np.eye(4 * cfg.ambient_n), label="ambient")


class PatternBuilder:
    """Assemble a LinearPattern from complex coordinate relations.

    Free complex slots are introduced with free_z / free_w; dependent
    slots are complex multiples of a free slot.  Unmentioned coordinates
    stay zero.
    """

    def __init__(self, cfg: ReductionConfig):
        self.n = cfg.ambient_n
        self.cols = []

    def _complex_cols(self, kind: str, index: int, factor: complex):
        # one column per real degree of freedom of the free slot
        n = self.n
        off = 0 if kind == "z" else 2 * n
        re_col = np.zeros(4 * n)
        im_col = np.zeros(4 * n)
        re_col[off + index] = factor.real
        re_col[off + n + index] = factor.imag
        im_col[off + index] = -factor.imag
        im_col[off + n + index] = factor.real
        return re_col, im_col

    def free(self, kind: str, index: int, ties=()):
        """New free complex coordinate; ties = (kind, index, factor) slots
        locked to factor * (this coordinate)."""
        re_col, im_col = self._complex_cols(kind, index, 1.0 + 0.0j)
        for tkind, tindex, tfactor in ties:
            r2, i2 = self._complex_cols(tkind, tindex, complex(tfactor))
            re_col += r2
            im_col += i2
        self.cols.append(re_col)
        self.cols.append(im_col)
        return self

    def build(self, label: str = "") -> LinearPattern:
        return LinearPattern(np.array(self.cols).T, label=label)


class EigenvalueFamilyPattern:
    """Sasakian-type pattern: free z coordinates plus the two angle
    parameters (cos phi, delta); w coordinates follow the pair formulas

        type +1:  (w_a, w_b) = e^{i delta}/sin(phi) * (-z_b + i c z_a, z_a + i c z_b)
        type -1:  (w_a, w_b) = e^{i delta}/sin(phi) * (-z_b - i c z_a, z_a - i c z_b)

    with c = cos(phi), sin(phi) = sqrt(1 - c^2) > 0.
    """

    def __init__(self, cfg: ReductionConfig, pair_types: dict, label: str = ""):
        # pair_types: {pair_index (0-based): +1 | -1}; must cover all pairs
        self.cfg = cfg
        self.n = cfg.ambient_n
        self.pairs = cfg.pairs()
        if set(pair_types) != set(range(len(self.pairs))):
            raise ValueError("pair_types must cover every quaternionic pair")
        self.types = pair_types
        self.label = label
        # free complex z's: all pair coordinates (the first coordinate of
        # an omega configuration stays zero)
        self.z_slots = [i for pr in self.pairs for i in pr]
        self.n_params = 2 * len(self.z_slots) + 2

    def _unpack(self, params):
        nz = len(self.z_slots)
        z = np.zeros(self.n, dtype=complex)
        z[self.z_slots] = params[:nz] + 1j * params[nz:2 * nz]
        c = params[-2]
        delta = params[-1]
        return z, c, delta

    def _w_of_z(self, z, c, delta):
        s = math.sqrt(max(1.0 - c * c, 1e-300))
        phase = complex(math.cos(delta), math.sin(delta)) / s
        w = np.zeros(self.n, dtype=complex)
        for a, (ia, ib) in enumerate(self.pairs):
            t = self.types[a]
            w[ia] = phase * (-z[ib] + 1j * t * c * z[ia])
            w[ib] = phase * (z[ia] + 1j * t * c * z[ib])
        return w

    def embed(self, params: np.ndarray) -> np.ndarray:
        z, c, delta = self._unpack(params)
        w = self._w_of_z(z, c, delta)
        return np.concatenate([z.real, z.imag, w.real, w.imag])

    def jacobian(self, params: np.ndarray) -> np.ndarray:
        z, c, delta = self._unpack(params)
        n = self.n
        nz = len(self.z_slots)
        s = math.sqrt(max(1.0 - c * c, 1e-300))
        phase = complex(math.cos(delta), math.sin(delta)) / s
        jac = np.zeros((4 * n, self.n_params))

        def put_w(index, value, col):
            jac[2 * n + index, col] += value.real
            jac[3 * n + index, col] += value.imag

        # z columns: identity on z-part plus the induced w motion
        for k, slot in enumerate(self.z_slots):
            jac[slot, k] = 1.0
            jac[n + slot, nz + k] = 1.0
        for a, (ia, ib) in enumerate(self.pairs):
            t = self.types[a]
            ka = self.z_slots.index(ia)
            kb = self.z_slots.index(ib)
            # dw_ia = phase*(-dz_ib + i t c dz_ia); dw_ib = phase*(dz_ia + i t c dz_ib)
            for col, dz in ((ka, 1.0), (nz + ka, 1.0j)):
                put_w(ia, phase * (1j * t * c * dz), col)
                put_w(ib, phase * dz, col)
            for col, dz in ((kb, 1.0), (nz + kb, 1.0j)):
                put_w(ia, phase * (-dz), col)
                put_w(ib, phase * (1j * t * c * dz), col)
            # d/dc: d(phase)/dc = phase * c / s^2; plus the explicit c term
            base_a = -z[ib] + 1j * t * c * z[ia]
            base_b = z[ia] + 1j * t * c * z[ib]
            put_w(ia, phase * (c / (s * s)) * base_a + phase * 1j * t * z[ia],
                  self.n_params - 2)
            put_w(ib, phase * (c / (s * s)) * base_b + phase * 1j * t * z[ib],
                  self.n_params - 2)
            # d/ddelta = i * w
            put_w(ia, 1j * phase * base_a, self.n_params - 1)
            put_w(ib, 1j * phase * base_b, self.n_params - 1)
        return jac

    def random_params(self, rng) -> np.ndarray:
        out = np.empty(self.n_params)
        out[:-2] = rng.standard_normal(self.n_params - 2)
        out[-2] = rng.uniform(-0.7, 0.7)
        out[-1] = rng.uniform(0.0, 2.0 * math.pi)
        return out

    def normalize(self, params: np.ndarray) -> np.ndarray:
        s = np.linalg.norm(self.embed(params))
        if s == 0:
            raise ValueError("zero pattern point")
        out = params.copy()
        out[:-2] /= s
        return out


# ---------------------------------------------------------------------------
# Gauss-Newton projection
# ---------------------------------------------------------------------------

def _project_on_pattern(system: ConstraintSystem, pattern, params0,
                        tol: Tolerances):
    """Gauss-Newton with Levenberg fallback on the pattern parameters,
    keeping |x| = 1 by retraction after every accepted step."""
    params = pattern.normalize(np.asarray(params0, dtype=float))
    lam = 0.0
    iters = 0
    plateau = 0
    x = pattern.embed(params)
    res = system.residual(x)
    while iters < tol.max_iters:
        if res < tol.residual and abs(x @ x - 1.0) < 1e-12:
            return ProjectionResult(HPoint.from_real(x), res, iters, True,
                                    params=params)
        f = system.values(x)
        jx = system.jacobian(x)            # m x 4n
        je = pattern.jacobian(params)      # 4n x k
        j = jx @ je                        # m x k
        # keep first-order motion tangent to the sphere
        sphere_row = 2.0 * (x @ je)
        j_aug = np.vstack([j, sphere_row])
        f_aug = np.concatenate([f, [x @ x - 1.0]])
        grad = j_aug.T @ f_aug
        if np.linalg.norm(grad) < 1e-11 * max(1.0, res):
            break              # first-order critical point with res > tol
        h = j_aug.T @ j_aug
        damping = lam if lam > 0.0 else 1e-13 * max(np.trace(h), 1.0)
        step = None
        try:
            step = np.linalg.solve(h + damping * np.eye(h.shape[0]), -grad)
        except np.linalg.LinAlgError:
            try:
                step, *_ = np.linalg.lstsq(j_aug, -f_aug, rcond=None)
            except np.linalg.LinAlgError:
                step = None
        improved = False
        if step is not None and np.all(np.isfinite(step)):
            scale = 1.0
            for _ in range(15):
                cand = params + scale * step
                if (isinstance(pattern, EigenvalueFamilyPattern)
                        and abs(cand[-2]) > 0.99):
                    scale *= 0.5
                    continue
                try:
                    cand = pattern.normalize(cand)
                except ValueError:
                    scale *= 0.5
                    continue
                xc = pattern.embed(cand)
                rc = system.residual(xc)
                if rc < res:
                    plateau = plateau + 1 if res - rc < 1e-9 * res else 0
                    params, x, res = cand, xc, rc
                    improved = True
                    break
                scale *= 0.5
        iters += 1
        if improved:
            lam = 0.0 if lam < 1e-12 else lam / 10.0
        else:
            plateau += 1
            lam = 1e-8 if lam == 0.0 else lam * 100.0
            if lam > 1e8:
                break
        if plateau >= 6 and res > 100.0 * tol.residual:
            break              # stuck at a positive local minimum
    converged = res < tol.residual and abs(x @ x - 1.0) < 1e-12
    return ProjectionResult(HPoint.from_real(x), res, iters, converged,
                            params=params)


def constrained_project(cfg: ReductionConfig, pattern, start=None,
                        tol: Optional[Tolerances] = None,
                        seed: int = 0) -> ProjectionResult:
    """Minimize |mu|^2 + |nu|^2 restricted to the pattern subspace and the
    unit sphere, with seeded random restarts on stall."""
    tol = tol or Tolerances()
    system = constraint_system(cfg)
    rng = np.random.default_rng(seed)
    best = None
    starts = []
    if start is not None:
        starts.append(np.asarray(start, dtype=float))
    while len(starts) < 1 + tol.restarts:
        starts.append(pattern.random_params(rng))
    used = 0
    for attempt, params0 in enumerate(starts):
        result = _project_on_pattern(system, pattern, params0, tol)
        result.restarts_used = attempt
        if best is None or result.residual < best.residual:
            best = result
        used = attempt
        if best.converged:
            break
    best.restarts_used = used
    return best


def project_to_N(cfg: ReductionConfig, start: Optional[HPoint] = None,
                 tol: Optional[Tolerances] = None, seed: int = 0) -> ProjectionResult:
    """Project onto N = mu^{-1}(0) cap nu^{-1}(0) cap S^{4n-1}."""
    pattern = full_space_pattern(cfg)
    start_params = start.to_real() if start is not None else None
    return constrained_project(cfg, pattern, start=start_params, tol=tol, seed=seed)


# ---------------------------------------------------------------------------
# Rank diagnostics
# ---------------------------------------------------------------------------

def _rank_from_singulars(svals: np.ndarray, tol: Tolerances) -> RankReport:
    svals = np.sort(svals)[::-1]
    if svals.size == 0 or svals[0] == 0.0:
        return RankReport(svals, 0, math.inf, False)
    keep = svals > tol.rank * svals[0]
    rank = int(np.count_nonzero(keep))
    if rank == svals.size:
        gap = math.inf
    else:
        rejected = svals[rank]
        gap = math.inf if rejected == 0 else float(svals[rank - 1] / rejected)
    ambiguous = gap < tol.gap
    return RankReport(svals, rank, gap, ambiguous)


def _require_on_set(system: ConstraintSystem, x: np.ndarray, tol: Tolerances):
    res = system.residual(x)
    if res > tol.on_set:
        raise ValueError(f"point is not on the zero set (residual {res:.3e})")


def constraint_rank(cfg: ReductionConfig, p: HPoint,
                    tol: Optional[Tolerances] = None) -> RankReport:
    """Rank of the moment-map Jacobian in the sphere tangent space at p.

    implied_dim is the zero-set dimension (4n - 1) - rank.
    """
    tol = tol or Tolerances()
    system = constraint_system(cfg)
    x = p.to_real()
    _require_on_set(system, x, tol)
    j = system.jacobian(x)
    xhat = x / np.linalg.norm(x)
    j = j - np.outer(j @ xhat, xhat)
    report = _rank_from_singulars(np.linalg.svd(j, compute_uv=False), tol)
    report.implied_dim = (4 * cfg.ambient_n - 1) - report.rank
    return report


def orbit_fields(cfg: ReductionConfig, p: HPoint, twistor: bool) -> np.ndarray:
    """Infinitesimal action fields at p, one row per group generator:
    torus_rank rotations, three Sp(1) left multiplications, and (twistor)
    one U(1) right multiplication."""
    n = cfg.ambient_n
    z, w = p.z, p.w
    rows = []
    for r in range(cfg.torus_rank):
        vz = np.zeros(n, dtype=complex)
        vw = np.zeros(n, dtype=complex)
        for a, (ia, ib) in enumerate(cfg.pairs()):
            speed = cfg.pair_weights(a)[r]
            vz[ia], vz[ib] = speed * z[ib], -speed * z[ia]
            vw[ia], vw[ib] = speed * w[ib], -speed * w[ia]
        rows.append(np.concatenate([vz.real, vz.imag, vw.real, vw.imag]))
    # Sp(1) generators i, j, k acting on the left
    for vz, vw in (((1j) * z, (-1j) * w), (-w, z), (-1j * w, -1j * z)):
        rows.append(np.concatenate([vz.real, vz.imag, vw.real, vw.imag]))
    if twistor:
        vz, vw = 1j * z, 1j * w
        rows.append(np.concatenate([vz.real, vz.imag, vw.real, vw.imag]))
    return np.array(rows)


def orbit_rank(cfg: ReductionConfig, p: HPoint, twistor: bool = False,
               tol: Optional[Tolerances] = None) -> RankReport:
    """Rank of the infinitesimal orbit at p; full rank means the action is
    locally free there."""
    tol = tol or Tolerances()
    system = constraint_system(cfg)
    x = p.to_real()
    _require_on_set(system, x, tol)
    fields = orbit_fields(cfg, p, twistor)
    return _rank_from_singulars(np.linalg.svd(fields, compute_uv=False), tol)


def pattern_tangent_basis(cfg: ReductionConfig, pattern, result: ProjectionResult,
                          tol: Optional[Tolerances] = None) -> np.ndarray:
    """Orthonormal basis (columns) of the tangent space of pattern cap N
    cap sphere at a converged projection result."""
    tol = tol or Tolerances()
    system = constraint_system(cfg)
    params = result.params
    x = pattern.embed(params)
    jx = system.jacobian(x)
    je = pattern.jacobian(params)
    rows = np.vstack([jx @ je, 2.0 * (x @ je)])
    u, s, vt = np.linalg.svd(rows)
    rankrep = _rank_from_singulars(s, tol)
    kernel = vt[rankrep.rank:].T           # param-space kernel
    tangent = je @ kernel                  # ambient directions
    q, _ = np.linalg.qr(tangent) if tangent.size else (tangent, None)
    return q


@dataclass
class StratumDimensions:
    pattern_tangent_dim: int
    saturated_dim: int
    orbit_rank: int
    quotient_dim: int


def stratum_dimensions(cfg: ReductionConfig, pattern, result: ProjectionResult,
                       twistor: bool = True,
                       tol: Optional[Tolerances] = None) -> StratumDimensions:
    """Dimension chain at a converged constrained projection: tangent of
    (pattern cap N), its group saturation, and the quotient dimension."""
    tol = tol or Tolerances()
    tangent = pattern_tangent_basis(cfg, pattern, result, tol)
    p = result.point
    fields = orbit_fields(cfg, p, twistor)
    orank = _rank_from_singulars(np.linalg.svd(fields, compute_uv=False), tol).rank
    combined = np.hstack([tangent, fields.T]) if fields.size else tangent
    sat = _rank_from_singulars(np.linalg.svd(combined, compute_uv=False), tol).rank
    return StratumDimensions(pattern_tangent_dim=tangent.shape[1],
                             saturated_dim=sat, orbit_rank=orank,
                             quotient_dim=sat - orank)


@dataclass
class ProbeReport:
    min_residual: float
    n_restarts: int
    converged_any: bool
    empty: bool
    tol_residual: float


def infeasibility_probe(cfg: ReductionConfig, pattern, n_restarts: int = 100,
                        tol: Optional[Tolerances] = None,
                        seed: int = 0) -> ProbeReport:
    """Declare an empty intersection (numerically) when the best residual
    over many restarts stays above 10^3 * tol_residual."""
    tol = tol or Tolerances()
    probe_tol = Tolerances(**{**tol.__dict__})
    probe_tol.restarts = n_restarts - 1
    best = constrained_project(cfg, pattern, tol=probe_tol, seed=seed)
    empty = best.residual > 1e3 * tol.residual
    return ProbeReport(min_residual=best.residual, n_restarts=n_restarts,
                       converged_any=best.converged, empty=empty,
                       tol_residual=tol.residual)
