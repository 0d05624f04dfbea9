"""Exact integer linear algebra on weight matrices.

Everything in this module is exact: determinants over Python ints with a
loud 64-bit overflow check, congruence solution groups via Smith normal
form, and rational solutions via fractions.Fraction.  No floats.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

INT64_MAX = 2**63 - 1
MAX_WEIGHT = 10**6

SIGNS = (1, -1)


class OverflowError64(OverflowError):
    """A determinant left the checked 64-bit range."""


def _check64(value: int) -> int:
    if abs(value) > INT64_MAX:
        raise OverflowError64(f"determinant {value} exceeds 64-bit range")
    return value


def det2(rows) -> int:
    (a, b), (c, d) = rows
    return _check64(a * d - b * c)


def det3(rows) -> int:
    (a, b, c), (d, e, f), (g, h, i) = rows
    return _check64(a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g))


def det_int(mat) -> int:
    """Exact determinant of a square integer matrix (fraction-free Bareiss)."""
    a = [list(map(int, row)) for row in mat]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return _check64(sign * a[-1][-1])


# ---------------------------------------------------------------------------
# Weight matrices
# ---------------------------------------------------------------------------

def _validate_weights(rows, ncols):
    for row in rows:
        if len(row) != ncols:
            raise ValueError(f"weight rows must have length {ncols}")
        for v in row:
            if not isinstance(v, int) or isinstance(v, bool):
                raise ValueError("weights must be integers")
            if abs(v) > MAX_WEIGHT:
                raise ValueError(f"weight {v} outside [-{MAX_WEIGHT}, {MAX_WEIGHT}]")


@dataclass(frozen=True)
class ThetaMatrix:
    """3x4 integer weight matrix with rows p, q, l."""

    p: tuple[int, int, int, int]
    q: tuple[int, int, int, int]
    l: tuple[int, int, int, int]

    def __post_init__(self):
        _validate_weights((self.p, self.q, self.l), 4)

    @classmethod
    def from_rows(cls, rows) -> "ThetaMatrix":
        p, q, l = (tuple(int(v) for v in row) for row in rows)
        return cls(p, q, l)

    def rows(self):
        return (self.p, self.q, self.l)

    def column(self, a: int) -> tuple[int, int, int]:
        """Column a (1-based): the weight triple of quaternionic pair a."""
        return (self.p[a - 1], self.q[a - 1], self.l[a - 1])

    def to_json(self) -> dict:
        return {"rows": [list(self.p), list(self.q), list(self.l)]}


@dataclass(frozen=True)
class OmegaMatrix:
    """2x3 integer weight matrix with rows p, q."""

    p: tuple[int, int, int]
    q: tuple[int, int, int]

    def __post_init__(self):
        _validate_weights((self.p, self.q), 3)

    @classmethod
    def from_rows(cls, rows) -> "OmegaMatrix":
        p, q = (tuple(int(v) for v in row) for row in rows)
        return cls(p, q)

    def rows(self):
        return (self.p, self.q)

    def column(self, a: int) -> tuple[int, int]:
        return (self.p[a - 1], self.q[a - 1])

    def to_json(self) -> dict:
        return {"rows": [list(self.p), list(self.q)]}


def parse_weight_matrix(text: str):
    """Parse 'p1,p2,../q1,../..' or a JSON {"rows": [[..], ..]} literal.

    The shape selects the family: 3 rows of 4 -> ThetaMatrix, 2 rows of 3
    -> OmegaMatrix.
    """
    text = text.strip()
    if text.startswith("{"):
        rows = json.loads(text)["rows"]
    else:
        try:
            rows = [[int(v) for v in part.split(",")] for part in text.split("/")]
        except ValueError as exc:
            raise ValueError(f"malformed weight-matrix literal: {text!r}") from exc
    shape = (len(rows), len(rows[0]) if rows else 0)
    if shape == (3, 4):
        return ThetaMatrix.from_rows(rows)
    if shape == (2, 3):
        return OmegaMatrix.from_rows(rows)
    raise ValueError(f"weight matrix must be 3x4 or 2x3, got {shape[0]}x{shape[1]}")


# ---------------------------------------------------------------------------
# Determinant batteries
# ---------------------------------------------------------------------------

THETA_TRIPLES = ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4))
OMEGA_PAIRS = ((1, 2), (1, 3), (2, 3))

# Subscript signs (s2, s3, s4) of the eight box determinants, rows
# (c1 + s2*c2, c1 + s3*c3, c1 + s4*c4) over the weight columns c_a.
THETA_BOX_SIGNS = tuple(itertools.product(SIGNS, repeat=3))
OMEGA_BOX_SIGNS = tuple(itertools.product(SIGNS, repeat=2))


@dataclass(frozen=True)
class MinorSet:
    """Maximal minors, keyed by the (1-based) column tuple."""

    values: dict

    def __getitem__(self, key):
        return self.values[tuple(key)]

    def items(self):
        return self.values.items()

    def as_tuple(self):
        return tuple(self.values[k] for k in sorted(self.values))


@dataclass(frozen=True)
class BoxSet:
    """Box determinants keyed by the subscript sign tuple."""

    values: dict

    def __getitem__(self, key):
        return self.values[tuple(key)]

    def items(self):
        return self.values.items()


def minors_theta(m: ThetaMatrix) -> MinorSet:
    vals = {t: det3([m.column(a) for a in t]) for t in THETA_TRIPLES}
    return MinorSet(vals)


def boxes_theta(m: ThetaMatrix) -> BoxSet:
    c1 = m.column(1)
    vals = {}
    for signs in THETA_BOX_SIGNS:
        rows = [tuple(x + s * y for x, y in zip(c1, m.column(a)))
                for a, s in zip((2, 3, 4), signs)]
        vals[signs] = det3(rows)
    return BoxSet(vals)


def minors_omega(m: OmegaMatrix) -> MinorSet:
    vals = {t: det2([m.column(a) for a in t]) for t in OMEGA_PAIRS}
    return MinorSet(vals)


def boxes_omega(m: OmegaMatrix) -> BoxSet:
    c1 = m.column(1)
    vals = {}
    for signs in OMEGA_BOX_SIGNS:
        rows = [tuple(x + s * y for x, y in zip(c1, m.column(a)))
                for a, s in zip((2, 3), signs)]
        vals[signs] = det2(rows)
    return BoxSet(vals)


def admissible_theta(m: ThetaMatrix):
    """All four minors and all eight boxes nonzero.

    Returns (decision, witness); witness names the first vanishing
    determinant when inadmissible.
    """
    for t, v in minors_theta(m).items():
        if v == 0:
            return False, f"minor Delta_{''.join(map(str, t))} = 0"
    for s, v in boxes_theta(m).items():
        if v == 0:
            return False, f"box {format_box_signs(s)} = 0"
    return True, None


def admissible_omega(m: OmegaMatrix):
    """Nonzero minors, nonzero minor sum, no minor equal to the sum of the
    other two, and nonzero boxes."""
    mins = minors_omega(m)
    for t, v in mins.items():
        if v == 0:
            return False, f"minor Delta_{''.join(map(str, t))} = 0"
    d12, d13, d23 = mins[(1, 2)], mins[(1, 3)], mins[(2, 3)]
    if d12 + d13 + d23 == 0:
        return False, "Delta_12 + Delta_13 + Delta_23 = 0"
    for name, v, rest in (("Delta_12", d12, d13 + d23),
                          ("Delta_13", d13, d12 + d23),
                          ("Delta_23", d23, d12 + d13)):
        if v == rest:
            return False, f"{name} equals the sum of the other two minors"
    for s, v in boxes_omega(m).items():
        if v == 0:
            return False, f"box {format_box_signs(s)} = 0"
    return True, None


def is_free_omega(m: OmegaMatrix) -> bool:
    """Freeness of the torus action on the u1 != 0 chart: gcd of the
    absolute minors is 1.  Requires all minors nonzero."""
    mins = minors_omega(m)
    vals = [abs(v) for _, v in mins.items()]
    if any(v == 0 for v in vals):
        raise ValueError("is_free_omega requires all minors nonzero")
    return math.gcd(*vals) == 1


def format_box_signs(signs) -> str:
    return "(" + ",".join("+" if s > 0 else "-" for s in signs) + ")"


# ---------------------------------------------------------------------------
# Box/minor identities
# ---------------------------------------------------------------------------

# The source's printed identity list for the eight Theta boxes, as
# coefficient vectors against (D123, D124, D134, D234), keyed by
# (s2, s3, s4).  Treated as data to validate, not as ground truth.
CLAIMED_THETA_BOX_COEFFS = {
    (1, 1, 1): (1, -1, 1, 1),
    (1, -1, 1): (-1, -1, -1, -1),
    (1, 1, -1): (1, 1, -1, -1),
    (1, -1, -1): (-1, 1, 1, 1),
    (-1, 1, 1): (-1, 1, 1, -1),
    (-1, -1, 1): (1, 1, -1, 1),
    (-1, 1, -1): (-1, -1, -1, 1),
    (-1, -1, -1): (1, -1, 1, -1),
}

# Identity-fit sample matrices; their minor vectors span Z^4.
_FIT_SAMPLES_THETA = (
    ((1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, 1)),
    ((1, 0, 1, 2), (0, 1, 1, 3), (1, 1, 0, 1)),
    ((2, 1, 0, 1), (1, 0, 1, 1), (0, 1, 1, 2)),
    ((1, 2, 3, 4), (0, 1, 2, 1), (1, 1, 0, 2)),
)


def _solve_exact(a_rows, b):
    """Solve a square rational system exactly by Gaussian elimination."""
    n = len(b)
    aug = [[Fraction(v) for v in row] + [Fraction(b[i])]
           for i, row in enumerate(a_rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def fit_box_coefficients():
    """Fit, exactly, each Theta box as an integer combination of the four
    minors, using four fixed sample matrices."""
    samples = [ThetaMatrix.from_rows(rows) for rows in _FIT_SAMPLES_THETA]
    minor_rows = [list(minors_theta(m).as_tuple()) for m in samples]
    coeffs = {}
    for signs in THETA_BOX_SIGNS:
        rhs = [boxes_theta(m)[signs] for m in samples]
        sol = _solve_exact(minor_rows, rhs)
        if any(v.denominator != 1 for v in sol):
            raise ValueError("box identity fit is not integral")
        coeffs[signs] = tuple(int(v) for v in sol)
    return coeffs


@dataclass
class BoxIdentityReport:
    fitted: dict
    claimed: dict
    mismatches: list = field(default_factory=list)
    verified_on: int = 0

    @property
    def all_match(self) -> bool:
        return not self.mismatches


def box_identities_check(matrices=None, rng=None, n_random=1000) -> BoxIdentityReport:
    """Validate the printed box/minor identity list.

    Fits coefficients exactly on four sample matrices, verifies them on
    `matrices` (or n_random seeded random ones), and reports any box whose
    fitted combination differs from the printed list.
    """
    fitted = fit_box_coefficients()
    if matrices is None:
        rng = rng or np.random.default_rng(0)
        matrices = [ThetaMatrix.from_rows(rng.integers(-9, 10, size=(3, 4)).tolist())
                    for _ in range(n_random)]
    for m in matrices:
        mt = minors_theta(m).as_tuple()
        bx = boxes_theta(m)
        for signs, coeff in fitted.items():
            lhs = bx[signs]
            rhs = sum(c * d for c, d in zip(coeff, mt))
            if lhs != rhs:
                raise AssertionError(
                    f"fitted identity failed for box {format_box_signs(signs)} on {m}")
    mismatches = [signs for signs in THETA_BOX_SIGNS
                  if fitted[signs] != CLAIMED_THETA_BOX_COEFFS[signs]]
    return BoxIdentityReport(fitted=fitted, claimed=dict(CLAIMED_THETA_BOX_COEFFS),
                             mismatches=mismatches, verified_on=len(matrices))


def omega_box_coefficients():
    """The four Omega boxes as exact combinations of (D12, D13, D23),
    fitted the same way (bilinear expansion gives s3*D13 - s2*D12 + s2*s3*D23)."""
    samples = [OmegaMatrix.from_rows(r) for r in
               (((1, 0, 0), (0, 1, 0)), ((1, 0, 1), (0, 1, 1)), ((1, 2, 3), (1, 3, 6)))]
    minor_rows = [list(minors_omega(m).as_tuple()) for m in samples]
    coeffs = {}
    for signs in OMEGA_BOX_SIGNS:
        rhs = [boxes_omega(m)[signs] for m in samples]
        sol = _solve_exact(minor_rows, rhs)
        coeffs[signs] = tuple(int(v) for v in sol)
    return coeffs


# ---------------------------------------------------------------------------
# Congruence solution groups (Smith normal form)
# ---------------------------------------------------------------------------

@dataclass
class IsotropyGroup:
    """Finite solution group {x in (R/Z)^k : B x in Z^rows}.

    order is the group order; generators are rational torus points (each
    coordinate a fraction of a full turn) that generate the group, one per
    nontrivial invariant factor.
    """

    order: int
    generators: list
    invariant_factors: tuple

    def elements(self, cap: int = 1_000_000):
        """All group elements as tuples of Fractions mod 1."""
        if self.order > cap:
            raise ValueError(f"group order {self.order} exceeds enumeration cap")
        k = len(self.generators[0]) if self.generators else 0
        elems = {tuple(Fraction(0) for _ in range(k))}
        for g, d in zip(self.generators, self.invariant_factors):
            new = set()
            for mult in range(d):
                shift = tuple((mult * gi) % 1 for gi in g)
                for e in elems:
                    new.add(tuple((a + b) % 1 for a, b in zip(e, shift)))
            elems = new
        return sorted(elems)


def smith_normal_form(mat):
    """Smith normal form over Z: returns (U, D, V) with U*mat*V = D,
    U and V unimodular, D diagonal with d_i | d_{i+1}."""
    a = [list(map(int, row)) for row in mat]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def row_op(i, j, f):           # row_i += f*row_j
        a[i] = [x + f * y for x, y in zip(a[i], a[j])]
        u[i] = [x + f * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, f):           # col_i += f*col_j
        for row in a:
            row[i] += f * row[j]
        for row in v:
            row[i] += f * row[j]

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def smallest_nonzero(t):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        return best

    t = 0
    while t < min(nr, nc):
        piv = smallest_nonzero(t)
        if piv is None:
            break
        while True:
            swap_rows(t, piv[0])
            swap_cols(t, piv[1])
            # reduce column and row t by the pivot; |pivot| strictly
            # decreases whenever a remainder appears, so this terminates
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t] != 0:
                    row_op(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t] != 0:
                        dirty = True
            for j in range(t + 1, nc):
                if a[t][j] != 0:
                    col_op(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j] != 0:
                        dirty = True
            if not dirty:
                # pivot divides the rest of its row/column; check the
                # remaining block for non-divisible entries
                bad = None
                for i in range(t + 1, nr):
                    for j in range(t + 1, nc):
                        if a[i][j] % a[t][t] != 0:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_op(t, bad, 1)  # drags a non-divisible entry into row t
            piv = smallest_nonzero(t)
        t += 1

    r = min(nr, nc)
    for i in range(r):
        if a[i][i] < 0:
            col_op(i, i, -2)  # negate column i
    return u, a, v


def _mat_inverse_unimodular(v):
    """Exact inverse of a unimodular integer matrix."""
    n = len(v)
    aug = [[Fraction(v[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    inv = [[aug[i][n + j] for j in range(n)] for i in range(n)]
    assert all(x.denominator == 1 for row in inv for x in row)
    return [[int(x) for x in row] for row in inv]


def congruence_group(mat) -> IsotropyGroup:
    """Solution group {x in (R/Z)^k : B x in Z^m} for an integer matrix B
    with full column rank; the order is the product of the invariant
    factors (for square B, |det B|)."""
    nr = len(mat)
    nc = len(mat[0])
    _, d, v = smith_normal_form(mat)
    diag = [d[i][i] for i in range(min(nr, nc))]
    if len(diag) < nc or any(x == 0 for x in diag):
        raise ValueError("congruence matrix has nontrivial kernel: "
                         "continuous stabilizer")
    vinv_cols_scaled = []
    order = 1
    factors = []
    # x = V y with y_i in (1/d_i) Z; generators are columns of V / d_i mod 1.
    for i, di in enumerate(diag):
        order *= abs(di)
        if abs(di) > 1:
            gen = tuple(Fraction(v[r][i], di) % 1 for r in range(nc))
            vinv_cols_scaled.append(gen)
            factors.append(abs(di))
    return IsotropyGroup(order=order, generators=vinv_cols_scaled,
                         invariant_factors=tuple(factors))


def isotropy_group(b) -> IsotropyGroup:
    """Solution group of a square integer congruence system B x in Z^k.

    Order equals |det B|; det B = 0 signals a continuous stabilizer and is
    rejected.
    """
    b = [list(map(int, row)) for row in b]
    n = len(b)
    if any(len(row) != n for row in b):
        raise ValueError("isotropy_group expects a square matrix")
    if det_int(b) == 0:
        raise ValueError("det B = 0: continuous stabilizer")
    return congruence_group(b)


def brute_force_congruence_count(b) -> int:
    """Grid oracle: count x in {0..D-1}^k / D with B x in Z^k, D = |det B|."""
    b = np.asarray(b, dtype=object)
    n = b.shape[0]
    d = abs(det_int(b.tolist()))
    if d == 0:
        raise ValueError("det B = 0")
    bmod = np.asarray(b, dtype=np.int64) % d
    count = 0
    for k in itertools.product(range(d), repeat=n):
        if all(int(np.dot(bmod[i], k)) % d == 0 for i in range(n)):
            count += 1
    return count


# ---------------------------------------------------------------------------
# Free-action impossibility
# ---------------------------------------------------------------------------

@dataclass
class FreeSearchReport:
    bound: int
    candidate_minor_tuples: list
    matrices_checked: int
    free_matrices: list
    residual_check: dict

    @property
    def no_free_action(self) -> bool:
        return not self.free_matrices


def _theta_from_columns(cols):
    rows = [tuple(int(c[r]) for c in cols) for r in range(3)]
    return ThetaMatrix.from_rows(rows)


# The paper's (X, Y, Z, W) box selection, as subscript sign tuples.
XYZW_BOXES = ((1, 1, 1), (1, -1, 1), (-1, 1, -1), (1, -1, -1))


def free_impossibility_search(bound: int = 2) -> FreeSearchReport:
    """Scan all Theta with entries in [-bound, bound] for a free action.

    A free action needs all eight |box| = 1.  Pruning: the fitted identity
    table maps four independent boxes (X, Y, Z, W) linearly to the minors,
    so any matrix with all-|box| = 1 has its minor 4-tuple among the exact
    integral solutions of C * Delta = b, b in {+-1}^4.  Every candidate
    minor tuple (whether or not the remaining four boxes stay at +-1) is
    enumerated exhaustively: column triples with the right leading minor
    determine the fourth column in closed form, and each reconstructed
    matrix gets the full battery check.
    """
    coeffs = fit_box_coefficients()
    c_rows = [list(coeffs[s]) for s in XYZW_BOXES]
    others = [s for s in THETA_BOX_SIGNS if s not in XYZW_BOXES]

    candidates = []
    for b in itertools.product((1, -1), repeat=4):
        sol = _solve_exact(c_rows, list(b))
        if any(v.denominator != 1 or v == 0 for v in sol):
            continue
        candidates.append(tuple(int(v) for v in sol))
    candidates = sorted(set(candidates))

    vals = range(-bound, bound + 1)
    cols = np.array(list(itertools.product(vals, repeat=3)), dtype=np.int64)
    checked = 0
    free = []
    for delta in candidates:
        d123, d124, d134, d234 = delta
        for i1 in range(len(cols)):
            a = cols[i1]
            cross = np.cross(np.broadcast_to(a, cols.shape), cols)
            dets = cross @ cols.T          # det[a, c2, c3] over (i2, i3)
            idx2, idx3 = np.nonzero(dets == d123)
            if idx2.size == 0:
                continue
            b_cols = cols[idx2]
            c_cols = cols[idx3]
            # In the basis (a, b, c): x = (d234*a - d134*b + d124*c)/d123.
            num = d234 * a - d134 * b_cols + d124 * c_cols
            if abs(d123) != 1:
                ok_div = np.all(num % d123 == 0, axis=1)
                b_cols, c_cols, num = b_cols[ok_div], c_cols[ok_div], num[ok_div]
            x_cols = num // d123
            in_box = np.all(np.abs(x_cols) <= bound, axis=1)
            checked += int(np.count_nonzero(in_box))
            for bc, cc, xc in zip(b_cols[in_box], c_cols[in_box], x_cols[in_box]):
                theta = _theta_from_columns([a.tolist(), bc.tolist(),
                                             cc.tolist(), xc.tolist()])
                ok, _ = admissible_theta(theta)
                if ok and all(abs(v) == 1 for _, v in boxes_theta(theta).items()):
                    free.append(theta)

    residual = _residual_sign_check(coeffs, XYZW_BOXES, others)
    return FreeSearchReport(bound=bound, candidate_minor_tuples=candidates,
                            matrices_checked=checked, free_matrices=free,
                            residual_check=residual)


def _residual_sign_check(coeffs, sel, others):
    """Symbolic check that (X,Y,Z,W) = +-(1,1,-1,1) fails the remaining
    box equations: substituting the solved minors leaves at least one of
    the other four boxes with |value| != 1."""
    c_rows = [list(coeffs[s]) for s in sel]
    out = {}
    for xyzw in ((1, 1, -1, 1), (-1, -1, 1, -1)):
        sol = _solve_exact(c_rows, list(xyzw))
        delta = tuple(int(v) for v in sol)
        residuals = {format_box_signs(s):
                     sum(c * d for c, d in zip(coeffs[s], delta))
                     for s in others}
        out[xyzw] = {"minors": delta, "residual_boxes": residuals,
                     "violations": [k for k, v in residuals.items() if abs(v) != 1]}
    return out


# ---------------------------------------------------------------------------
# Dimension feasibility
# ---------------------------------------------------------------------------

def feasible_grassmannians() -> list[dict]:
    """The real Grassmannians Gr_4(R^{n+1}) on which a weighted maximal-torus
    reduction can reach dimension 4: n - 4 < floor((n+1)/2), n >= 5."""
    out = []
    for n in range(5, 16):
        if n - 4 < (n + 1) // 2:
            out.append({"n": n, "grassmannian": f"Gr4(R^{n + 1})",
                        "torus_rank": n - 4})
    return out
