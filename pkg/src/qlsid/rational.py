"""Zero-pole-gain rational functions of one complex variable.

Zeros and poles are stored as multisets of complex numbers; matching
zero/pole pairs cancel on construction.  The reflections f(-s), f(s#)# and
f(-s#)# used throughout the spectral bookkeeping act directly on the root
data, so products and reflections stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

CANCEL_TOL = 1e-9


def _as_roots(values) -> np.ndarray:
    arr = np.asarray(list(values), dtype=complex).ravel()
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError("roots must be finite")
    return arr


def cancel_pairs(zeros: np.ndarray, poles: np.ndarray,
                 tol: float = CANCEL_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Remove zero/pole pairs that agree within an absolute tolerance."""
    zs = list(zeros)
    ps = list(poles)
    out_z = []
    for z in zs:
        hit = None
        for i, p in enumerate(ps):
            if abs(z - p) <= tol * max(1.0, abs(p)):
                hit = i
                break
        if hit is None:
            out_z.append(z)
        else:
            ps.pop(hit)
    return np.asarray(out_z, dtype=complex), np.asarray(ps, dtype=complex)


@dataclass(frozen=True)
class RationalFn:
    """gain * prod(s - z_i) / prod(s - p_j), reduced on construction."""

    zeros: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    poles: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    gain: complex = 1.0

    def __post_init__(self):
        z = _as_roots(self.zeros)
        p = _as_roots(self.poles)
        g = complex(self.gain)
        if g == 0:
            z = np.zeros(0, complex)
            p = np.zeros(0, complex)
        else:
            z, p = cancel_pairs(z, p)
        object.__setattr__(self, "zeros", z)
        object.__setattr__(self, "poles", p)
        object.__setattr__(self, "gain", g)

    @classmethod
    def const(cls, c) -> "RationalFn":
        return cls(np.zeros(0, complex), np.zeros(0, complex), complex(c))

    @classmethod
    def zero(cls) -> "RationalFn":
        return cls.const(0.0)

    @classmethod
    def from_poly(cls, num, den, trim: float = 1e-12) -> "RationalFn":
        """Build from coefficient arrays (highest power first)."""
        num = np.atleast_1d(np.asarray(num, dtype=complex))
        den = np.atleast_1d(np.asarray(den, dtype=complex))
        num = _trim_leading(num, trim)
        den = _trim_leading(den, trim)
        if den.size == 0 or np.all(den == 0):
            raise ZeroDivisionError("zero denominator polynomial")
        if num.size == 0 or np.all(num == 0):
            return cls.zero()
        zeros = np.roots(num) if num.size > 1 else np.zeros(0, complex)
        poles = np.roots(den) if den.size > 1 else np.zeros(0, complex)
        return cls(zeros, poles, num[0] / den[0])

    @property
    def is_zero(self) -> bool:
        return self.gain == 0

    @property
    def degree(self) -> int:
        return max(len(self.zeros), len(self.poles))

    def __call__(self, s):
        s = np.asarray(s, dtype=complex)
        num = np.ones_like(s) * self.gain
        for z in self.zeros:
            num = num * (s - z)
        den = np.ones_like(s)
        for p in self.poles:
            den = den * (s - p)
        return num / den

    def __mul__(self, other) -> "RationalFn":
        if not isinstance(other, RationalFn):
            return RationalFn(self.zeros, self.poles, self.gain * complex(other))
        if self.is_zero or other.is_zero:
            return RationalFn.zero()
        return RationalFn(np.concatenate([self.zeros, other.zeros]),
                          np.concatenate([self.poles, other.poles]),
                          self.gain * other.gain)

    __rmul__ = __mul__

    def __add__(self, other) -> "RationalFn":
        if not isinstance(other, RationalFn):
            other = RationalFn.const(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        # common denominator over the pole multiset union, so that shared
        # poles are not duplicated and keep their exact stored values
        extra2 = multiset_difference(other.poles, self.poles, 1e-9)
        union = np.concatenate([self.poles, extra2])
        extra1 = multiset_difference(union, self.poles, 1e-9)
        extra2 = multiset_difference(union, other.poles, 1e-9)
        num1 = self.gain * np.polymul(np.poly(self.zeros)
                                      if len(self.zeros) else [1.0],
                                      np.poly(extra1) if len(extra1) else [1.0])
        num2 = other.gain * np.polymul(np.poly(other.zeros)
                                       if len(other.zeros) else [1.0],
                                       np.poly(extra2) if len(extra2) else [1.0])
        num = np.polyadd(num1, num2)
        scale = max(np.abs(num).max(initial=0.0), 1.0)
        num = np.where(np.abs(num) < 1e-13 * scale, 0.0, num)
        num = _trim_leading(np.atleast_1d(num), 1e-12)
        if num.size == 0:
            return RationalFn.zero()
        zeros = np.roots(num) if num.size > 1 else np.zeros(0, complex)
        return RationalFn(zeros, union, num[0])

    def __sub__(self, other) -> "RationalFn":
        if not isinstance(other, RationalFn):
            other = RationalFn.const(other)
        return self + RationalFn(other.zeros, other.poles, -other.gain)

    def as_poly(self) -> tuple[np.ndarray, np.ndarray]:
        """(numerator, denominator) coefficient arrays, highest power first."""
        num = self.gain * np.poly(self.zeros) if len(self.zeros) \
            else np.array([self.gain])
        den = np.poly(self.poles) if len(self.poles) else np.array([1.0 + 0j])
        return np.atleast_1d(num).astype(complex), np.atleast_1d(den).astype(complex)

    def reflect_neg(self) -> "RationalFn":
        """f(-s) as a rational function of s."""
        sign = (-1.0) ** (len(self.zeros) - len(self.poles))
        return RationalFn(-self.zeros, -self.poles, sign * self.gain)

    def conj_arg(self) -> "RationalFn":
        """f(s#)# as a rational function of s."""
        return RationalFn(self.zeros.conj(), self.poles.conj(),
                          np.conj(self.gain))

    def reflect_conj(self) -> "RationalFn":
        """f(-s#)# as a rational function of s."""
        sign = (-1.0) ** (len(self.zeros) - len(self.poles))
        return RationalFn(-self.zeros.conj(), -self.poles.conj(),
                          sign * np.conj(self.gain))


def _trim_leading(coeffs: np.ndarray, rel: float) -> np.ndarray:
    if coeffs.size == 0:
        return coeffs
    scale = np.abs(coeffs).max()
    if scale == 0:
        return np.zeros(0, complex)
    i = 0
    while i < coeffs.size - 1 and abs(coeffs[i]) <= rel * scale:
        i += 1
    out = coeffs[i:]
    if out.size == 1 and abs(out[0]) <= rel * scale:
        return np.zeros(0, complex)
    return out


def match_multisets(a, b, tol: float) -> bool:
    """Greedy matching of two complex multisets within tolerance."""
    a = list(np.asarray(a, dtype=complex))
    b = list(np.asarray(b, dtype=complex))
    if len(a) != len(b):
        return False
    for x in a:
        dists = [abs(x - y) for y in b]
        if not dists:
            return False
        i = int(np.argmin(dists))
        if dists[i] > tol * max(1.0, abs(x)):
            return False
        b.pop(i)
    return True


def multiset_difference(a, b, tol: float) -> list:
    """Elements of multiset a with matched elements of b removed."""
    a = list(np.asarray(a, dtype=complex))
    b = list(np.asarray(b, dtype=complex))
    out = []
    for x in a:
        hit = None
        for i, y in enumerate(b):
            if abs(x - y) <= tol * max(1.0, abs(x)):
                hit = i
                break
        if hit is None:
            out.append(x)
        else:
            b.pop(hit)
    return out


def count_at(values, target: complex, tol: float) -> int:
    """Multiplicity of target in a complex multiset, within tolerance."""
    values = np.asarray(values, dtype=complex)
    if values.size == 0:
        return 0
    return int(np.sum(np.abs(values - target)
                      <= tol * max(1.0, abs(target))))
