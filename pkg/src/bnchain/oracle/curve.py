"""Elliptic curves over F_p with a chosen torsion point, plus local expansions.

The curve is y^2 = x^3 + A x + B. The origin O is the point at infinity; the
marked point P has exact order t, so P - O is t-torsion in Pic^0.

Functions are handled through the monomial basis of the coordinate ring
graded by pole order at O: x^i has pole 2i, x^i y has pole 2i + 3. Every
weight except 1 occurs exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

Point = tuple[int, int] | None  # None is the point at infinity


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def primes_from(start: int):
    n = max(2, start)
    while True:
        if is_prime(n):
            yield n
        n += 1


def prime_factors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def monomial(weight: int) -> tuple[int, int]:
    """(i, e) with x^i y^e of pole order ``weight`` at O."""
    if weight < 0 or weight == 1:
        raise ValueError(f"no monomial of pole order {weight}")
    if weight % 2 == 0:
        return weight // 2, 0
    return (weight - 3) // 2, 1


def weights_upto(n: int) -> list[int]:
    return [w for w in range(n + 1) if w != 1]


@dataclass
class EllipticCurveFp:
    p: int
    A: int
    B: int
    _series: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not is_prime(self.p) or self.p < 5:
            raise ValueError(f"p={self.p} must be a prime >= 5")
        if (4 * self.A**3 + 27 * self.B**2) % self.p == 0:
            raise ValueError("singular curve")

    def rhs(self, x: int) -> int:
        return (x * x * x + self.A * x + self.B) % self.p

    def contains(self, pt: Point) -> bool:
        if pt is None:
            return True
        x, y = pt
        return (y * y - self.rhs(x)) % self.p == 0

    def points(self):
        """Affine points in (x, y) lexicographic order."""
        p = self.p
        for x in range(p):
            v = self.rhs(x)
            if v == 0:
                yield (x, 0)
                continue
            if pow(v, (p - 1) // 2, p) != 1:
                continue
            for y in range(1, p):
                if y * y % p == v:
                    yield (x, y)
                    yield (x, p - y)
                    break

    def order(self) -> int:
        p = self.p
        total = 1
        for x in range(p):
            v = self.rhs(x)
            if v == 0:
                total += 1
            elif pow(v, (p - 1) // 2, p) == 1:
                total += 2
        return total

    def neg(self, pt: Point) -> Point:
        if pt is None:
            return None
        return pt[0], (-pt[1]) % self.p

    def add(self, a: Point, b: Point) -> Point:
        p = self.p
        if a is None:
            return b
        if b is None:
            return a
        (x1, y1), (x2, y2) = a, b
        if x1 == x2 and (y1 + y2) % p == 0:
            return None
        if a == b:
            lam = (3 * x1 * x1 + self.A) * pow(2 * y1, p - 2, p) % p
        else:
            lam = (y2 - y1) * pow(x2 - x1, p - 2, p) % p
        x3 = (lam * lam - x1 - x2) % p
        return x3, (lam * (x1 - x3) - y1) % p

    def mul(self, n: int, pt: Point) -> Point:
        if n < 0:
            return self.mul(-n, self.neg(pt))
        acc: Point = None
        while n:
            if n & 1:
                acc = self.add(acc, pt)
            pt = self.add(pt, pt)
            n >>= 1
        return acc

    def point_order(self, pt: Point, group_order: int | None = None) -> int:
        n = self.order() if group_order is None else group_order
        for q in prime_factors(n):
            while n % q == 0 and self.mul(n // q, pt) is None:
                n //= q
        return n

    # -- local expansions ---------------------------------------------------

    def local_xy(self, pt: tuple[int, int], prec: int) -> tuple[np.ndarray, np.ndarray]:
        """Power series of x and y in a uniformizer at the affine point ``pt``.

        The uniformizer is x - x0 unless pt is 2-torsion, where it is y.
        """
        key = ("xy", pt, prec)
        if key in self._series:
            return self._series[key]
        p = self.p
        x0, y0 = pt
        f1 = (3 * x0 * x0 + self.A) % p
        f2 = 3 * x0 % p
        X = np.zeros(prec, dtype=np.int64)
        Y = np.zeros(prec, dtype=np.int64)
        if y0 % p:
            # y^2 = y0^2 + f1 s + f2 s^2 + s^3 with s = x - x0
            F = [y0 * y0 % p, f1, f2, 1]
            inv2y = pow(2 * y0, p - 2, p)
            X[0] = x0
            if prec > 1:
                X[1] = 1
            Y[0] = y0
            for n in range(1, prec):
                acc = F[n] if n < 4 else 0
                acc -= sum(int(Y[i]) * int(Y[n - i]) for i in range(1, n))
                Y[n] = acc % p * inv2y % p
        else:
            # s = x - x0 solves f1 s + f2 s^2 + s^3 = y^2
            inv = pow(f1, p - 2, p)
            s = np.zeros(prec, dtype=np.int64)
            pi2 = np.zeros(prec, dtype=np.int64)
            if prec > 2:
                pi2[2] = 1
            for _ in range(prec):
                s2 = mul_series(s, s, p)
                s3 = mul_series(s2, s, p)
                s = (pi2 - f2 * s2 - s3) % p * inv % p
            X = s.copy()
            X[0] = (X[0] + x0) % p
            if prec > 1:
                Y[1] = 1
        self._series[key] = (X, Y)
        return X, Y

    def expansion_matrix(self, pt: tuple[int, int], max_weight: int, prec: int) -> np.ndarray:
        """Column w' holds the local series of the monomial with the w'-th weight up to ``max_weight``."""
        key = ("mono", pt, max_weight, prec)
        if key in self._series:
            return self._series[key]
        p = self.p
        X, Y = self.local_xy(pt, prec)
        one = np.zeros(prec, dtype=np.int64)
        one[0] = 1
        xpow = [one]
        ws = weights_upto(max_weight)
        cols = []
        for w in ws:
            i, e = monomial(w)
            while len(xpow) <= i:
                xpow.append(mul_series(xpow[-1], X, p))
            cols.append(mul_series(xpow[i], Y, p) if e else xpow[i])
        mat = np.stack(cols, axis=1) if cols else np.zeros((prec, 0), dtype=np.int64)
        self._series[key] = mat
        return mat


def mul_series(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    n = len(a)
    return np.convolve(a, b)[:n] % p


@dataclass
class CurveInstance:
    """A curve together with a point P of exact order t (the other marked point is O)."""

    curve: EllipticCurveFp
    P: tuple[int, int]
    t: int
    group_order: int
    tries: int = 0
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def p(self) -> int:
        return self.curve.p

    @property
    def two_torsion(self) -> bool:
        return self.P[1] % self.curve.p == 0

    def describe(self) -> str:
        c = self.curve
        return f"y^2 = x^3 + {c.A}x + {c.B} over F_{c.p}, P = {self.P} of order {self.t}, #E = {self.group_order}"


class CurveSearchError(RuntimeError):
    pass


def make_curve(t: int, search_budget: int = 200_000, *, allow_two_torsion: bool = False, p_min: int = 101) -> CurveInstance:
    """First curve (p, then A, then B ascending) with a point of exact order t.

    ``search_budget`` caps the number of (p, A, B) triples examined.
    """
    if t < 2 or (t == 2 and not allow_two_torsion):
        raise ValueError(f"torsion order t={t} unsupported (t >= 3, or t = 2 with allow_two_torsion)")
    tries = 0
    for p in primes_from(p_min):
        for A in range(p):
            for B in range(p):
                if (4 * A**3 + 27 * B**2) % p == 0:
                    continue
                tries += 1
                if tries > search_budget:
                    raise CurveSearchError(f"no curve with a point of order {t} within {search_budget} tries")
                curve = EllipticCurveFp(p, A, B)
                n = curve.order()
                if n % t:
                    continue
                cof = n // t
                for pt in curve.points():
                    q = curve.mul(cof, pt)
                    if q is not None and curve.point_order(q, t) == t:
                        return CurveInstance(curve, q, t, n, tries)
    raise AssertionError("unreachable")  # pragma: no cover
