"""Quaternion arithmetic in complex-split form.

A quaternion u = z + j*w is stored through its two complex halves
(z, w); this is the coordinate system in which every moment-map and
fixed-point computation of the package is written.  The 4-component
basis form {1, i, j, k} is derived on demand.

Conventions (checked by the test suite):
    i*j = k,  j*k = i,  k*i = j
    j*c = conj(c)*j               for complex c = a + b*i
    u = z + j*w  <->  (re, im_i, im_j, im_k) = (Re z, Im z, Re w, -Im w)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Quaternion:
    re: float = 0.0
    im_i: float = 0.0
    im_j: float = 0.0
    im_k: float = 0.0

    @classmethod
    def from_split(cls, z: complex, w: complex) -> "Quaternion":
        """Quaternion z + j*w from its complex halves."""
        return cls(z.real, z.imag, w.real, -w.imag)

    def split(self) -> tuple[complex, complex]:
        """Complex halves (z, w) with self == z + j*w."""
        return complex(self.re, self.im_i), complex(self.im_j, -self.im_k)

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.re + other.re, self.im_i + other.im_i,
                          self.im_j + other.im_j, self.im_k + other.im_k)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.re - other.re, self.im_i - other.im_i,
                          self.im_j - other.im_j, self.im_k - other.im_k)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.re, -self.im_i, -self.im_j, -self.im_k)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return quat_mul(self, other)
        return Quaternion(self.re * other, self.im_i * other,
                          self.im_j * other, self.im_k * other)

    __rmul__ = __mul__

    def conj(self) -> "Quaternion":
        return Quaternion(self.re, -self.im_i, -self.im_j, -self.im_k)

    def norm2(self) -> float:
        return self.re**2 + self.im_i**2 + self.im_j**2 + self.im_k**2

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def inverse(self) -> "Quaternion":
        n2 = self.norm2()
        c = self.conj()
        return Quaternion(c.re / n2, c.im_i / n2, c.im_j / n2, c.im_k / n2)

    def as_array(self) -> np.ndarray:
        return np.array([self.re, self.im_i, self.im_j, self.im_k])


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def quat_mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product a*b."""
    return Quaternion(
        a.re * b.re - a.im_i * b.im_i - a.im_j * b.im_j - a.im_k * b.im_k,
        a.re * b.im_i + a.im_i * b.re + a.im_j * b.im_k - a.im_k * b.im_j,
        a.re * b.im_j - a.im_i * b.im_k + a.im_j * b.re + a.im_k * b.im_i,
        a.re * b.im_k + a.im_i * b.im_j - a.im_j * b.im_i + a.im_k * b.re,
    )


@dataclass
class HPoint:
    """A point of H^n in complex-split form: u_a = z_a + j*w_a.

    z and w are complex vectors of equal length n (n = 8 for the
    3x4-weight family, n = 7 for the 2x3-weight family).
    """

    z: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        self.z = np.asarray(self.z, dtype=complex)
        self.w = np.asarray(self.w, dtype=complex)
        if self.z.shape != self.w.shape or self.z.ndim != 1:
            raise ValueError("z and w must be 1-d complex vectors of equal length")

    @property
    def n(self) -> int:
        return self.z.shape[0]

    def to_quaternions(self) -> list[Quaternion]:
        return [Quaternion.from_split(z, w) for z, w in zip(self.z, self.w)]

    @classmethod
    def from_quaternions(cls, qs) -> "HPoint":
        zs, ws = zip(*(q.split() for q in qs))
        return cls(np.array(zs), np.array(ws))

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.z) ** 2 + np.abs(self.w) ** 2))

    def normalized(self) -> "HPoint":
        s = math.sqrt(self.norm2())
        return HPoint(self.z / s, self.w / s)

    # Real-vector layout used by the numerics: [Re z; Im z; Re w; Im w].
    def to_real(self) -> np.ndarray:
        return np.concatenate([self.z.real, self.z.imag, self.w.real, self.w.imag])

    @classmethod
    def from_real(cls, x: np.ndarray) -> "HPoint":
        n = x.shape[0] // 4
        return cls(x[:n] + 1j * x[n:2 * n], x[2 * n:3 * n] + 1j * x[3 * n:])

    def to_json(self) -> list[list[float]]:
        """One [re_z, im_z, re_w, im_w] quadruple per coordinate."""
        return [[za.real, za.imag, wa.real, wa.imag]
                for za, wa in zip(self.z, self.w)]

    @classmethod
    def from_json(cls, quads) -> "HPoint":
        z = np.array([q[0] + 1j * q[1] for q in quads])
        w = np.array([q[2] + 1j * q[3] for q in quads])
        return cls(z, w)


@dataclass(frozen=True)
class Sp1Element:
    """Unit quaternion eps + j*sigma parametrized by three angles.

    eps   = cos(theta) + i sin(theta) cos(phi)
    sigma = sin(theta) sin(phi) e^{i delta}
    """

    theta: float
    phi: float
    delta: float

    def eps_sigma(self) -> tuple[complex, complex]:
        eps = complex(math.cos(self.theta),
                      math.sin(self.theta) * math.cos(self.phi))
        sigma = math.sin(self.theta) * math.sin(self.phi) * complex(
            math.cos(self.delta), math.sin(self.delta))
        return eps, sigma

    def to_quaternion(self) -> Quaternion:
        eps, sigma = self.eps_sigma()
        return Quaternion.from_split(eps, sigma)


def sp1_from_angles(e: Sp1Element) -> Quaternion:
    return e.to_quaternion()


def left_mul_split(z: np.ndarray, w: np.ndarray, lam: Quaternion):
    """Left multiplication u -> lam*u on split vectors.

    For lam = eps + j*sigma:  z' = eps z - conj(sigma) w,
                              w' = sigma z + conj(eps) w.
    """
    eps, sigma = lam.split()
    return eps * z - np.conj(sigma) * w, sigma * z + np.conj(eps) * w


def right_mul_complex(z: np.ndarray, w: np.ndarray, rho: complex):
    """Right multiplication u -> u*rho by a unit complex number."""
    return z * rho, w * rho
