"""
Elliptic curves in long Weierstrass form over Q, F_p and Q_p: invariants,
reduction types, naive point counting and the chord-tangent group law.
"""

import logging
from fractions import Fraction

from sympy import GF, factorint, isprime, legendre_symbol, sqrt_mod

from starkrankin.exceptions import DomainError, IdentityFailure, ResourceError

logger = logging.getLogger(__name__)

POINT_COUNT_BOUND = 10**5

GOOD = "good"
SPLIT_MULTIPLICATIVE = "split"
NONSPLIT_MULTIPLICATIVE = "nonsplit"
ADDITIVE = "additive"


class WeierstrassModel:
    """
    y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6 with integer coefficients,
    assumed globally minimal.
    """

    def __init__(self, a1, a2, a3, a4, a6, conductor=None):
        self.a1, self.a2, self.a3, self.a4, self.a6 = (int(a) for a in (a1, a2, a3, a4, a6))
        a1, a2, a3, a4, a6 = self.ainvs
        self.b2 = a1 * a1 + 4 * a2
        self.b4 = 2 * a4 + a1 * a3
        self.b6 = a3 * a3 + 4 * a6
        self.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        self.c4 = self.b2 * self.b2 - 24 * self.b4
        self.c6 = -self.b2 ** 3 + 36 * self.b2 * self.b4 - 216 * self.b6
        self.discriminant = (
            -self.b2 * self.b2 * self.b8 - 8 * self.b4 ** 3 - 27 * self.b6 * self.b6 + 9 * self.b2 * self.b4 * self.b6
        )
        if self.discriminant == 0:
            raise DomainError(f"singular curve {list(self.ainvs)}")
        self.conductor = conductor
        if conductor is not None:
            bad = sorted(factorint(abs(self.discriminant)))
            if sorted(factorint(conductor)) != bad:
                raise DomainError(
                    f"conductor {conductor} and discriminant {self.discriminant} have different prime support;"
                    " the model is not minimal or the conductor is wrong"
                )

    @classmethod
    def from_list(cls, ainvs, conductor=None):
        if len(ainvs) != 5:
            raise DomainError(f"expected [a1, a2, a3, a4, a6], got {ainvs}")
        return cls(*ainvs, conductor=conductor)

    @property
    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def bad_primes(self):
        return sorted(factorint(abs(self.discriminant)))

    def is_good(self, p):
        return self.discriminant % p != 0

    def equation(self, x, y):
        """Left minus right hand side of the Weierstrass equation"""
        return y * y + self.a1 * x * y + self.a3 * y - (x * x * x + self.a2 * x * x + self.a4 * x + self.a6)

    def contains(self, P):
        if P.is_infinity():
            return True
        return self.equation(P.x, P.y) == 0

    def reduction_type(self, q):
        if self.is_good(q):
            return GOOD
        a_q = bad_prime_aq(self, q)
        return {1: SPLIT_MULTIPLICATIVE, -1: NONSPLIT_MULTIPLICATIVE, 0: ADDITIVE}[a_q]

    def to_json(self):
        return list(self.ainvs)

    def __repr__(self):
        return f"WeierstrassModel({list(self.ainvs)})"


class CurvePoint:
    """Affine point (x, y) over any field, or the point at infinity"""

    __slots__ = ("x", "y")

    def __init__(self, x=None, y=None):
        self.x = x
        self.y = y

    @classmethod
    def infinity(cls):
        return cls()

    def is_infinity(self):
        return self.x is None

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.is_infinity() or other.is_infinity():
            return self.is_infinity() and other.is_infinity()
        return self.x == other.x and self.y == other.y

    __hash__ = None

    def __repr__(self):
        if self.is_infinity():
            return "CurvePoint(O)"
        return f"CurvePoint({self.x}, {self.y})"


O = CurvePoint.infinity()


def rational_point(x, y):
    return CurvePoint(Fraction(x), Fraction(y))


def _require_on_curve(E, P):
    if not E.contains(P):
        raise DomainError(f"{P!r} is not on {E!r}")


def point_neg(E, P):
    if P.is_infinity():
        return P
    return CurvePoint(P.x, -P.y - E.a1 * P.x - E.a3)


def _add(E, P, Q):
    if P.is_infinity():
        return Q
    if Q.is_infinity():
        return P
    a1, a2, a3, a4, a6 = E.ainvs
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return O
        denominator = 2 * y1 + a1 * x1 + a3
        slope = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / denominator
        intercept = (-x1 * x1 * x1 + a4 * x1 + 2 * a6 - a3 * y1) / denominator
    else:
        slope = (y2 - y1) / (x2 - x1)
        intercept = (y1 * x2 - y2 * x1) / (x2 - x1)
    x3 = slope * slope + a1 * slope - a2 - x1 - x2
    y3 = -(slope + a1) * x3 - intercept - a3
    return CurvePoint(x3, y3)


def point_add(E, P, Q, check=True):
    """P + Q by the chord-tangent law"""
    if check:
        _require_on_curve(E, P)
        _require_on_curve(E, Q)
    return _add(E, P, Q)


def point_mul(E, n, P, check=True):
    """n*P by double-and-add"""
    if check:
        _require_on_curve(E, P)
    if n < 0:
        return point_mul(E, -n, point_neg(E, P), check=False)
    result = O
    addend = P
    while n:
        if n & 1:
            result = _add(E, result, addend)
        addend = _add(E, addend, addend)
        n >>= 1
    return result


def _quadratic_disc(E, x):
    """(a1 x + a3)^2 + 4 (x^3 + a2 x^2 + a4 x + a6)"""
    return (E.a1 * x + E.a3) ** 2 + 4 * (x ** 3 + E.a2 * x * x + E.a4 * x + E.a6)


def count_points(E, p, bound=POINT_COUNT_BOUND):
    """
    |E(F_p)| by enumeration of x in F_p.

    Arguments:
        E: WeierstrassModel with good reduction at p
        p: prime up to bound
    Returns:
        int
    """
    if not isprime(p):
        raise DomainError(f"{p} is not prime")
    if p > bound:
        raise ResourceError(f"p = {p} exceeds the point counting bound {bound}")
    if not E.is_good(p):
        raise DomainError(f"{E!r} has bad reduction at {p}")
    if p == 2:
        affine = sum(1 for x in range(2) for y in range(2) if E.equation(x, y) % 2 == 0)
        return affine + 1
    total = 1
    for x in range(p):
        total += 1 + legendre_symbol(_quadratic_disc(E, x) % p, p)
    if (total - p - 1) ** 2 > 4 * p:
        raise IdentityFailure(f"Hasse bound violated: |E(F_{p})| = {total}")
    return total


def trace_ap(E, p, bound=POINT_COUNT_BOUND):
    """a_p = p + 1 - |E(F_p)|"""
    return p + 1 - count_points(E, p, bound)


def bad_prime_aq(E, q):
    """
    a_q at a bad prime: 1 split multiplicative, -1 nonsplit, 0 additive.
    """
    if E.is_good(q):
        raise DomainError(f"{q} is a prime of good reduction for {E!r}")
    if E.c4 % q == 0:
        return 0
    node = _singular_point(E, q)
    x0 = node[0]
    # tangent slopes at the node are the roots of m^2 + a1 m - (3 x0 + a2)
    roots = sum(1 for m in range(q) if (m * m + E.a1 * m - (3 * x0 + E.a2)) % q == 0)
    return 1 if roots else -1


def _singular_point(E, q):
    a1, a2, a3, a4, _ = E.ainvs
    if q == 2:
        candidates = [(x, y) for x in range(2) for y in range(2)]
    else:
        half = pow(2, -1, q)
        candidates = [
            (x, -(a1 * x + a3) * half % q)
            for x in range(q)
            if _quadratic_disc(E, x) % q == 0 and _quadratic_disc_derivative(E, x) % q == 0
        ]
    for x, y in candidates:
        fx = (a1 * y - 3 * x * x - 2 * a2 * x - a4) % q
        fy = (2 * y + a1 * x + a3) % q
        if E.equation(x, y) % q == 0 and fx == 0 and fy == 0:
            return x, y
    raise DomainError(f"no singular point of {E!r} modulo {q}")


def _quadratic_disc_derivative(E, x):
    return 2 * E.a1 * (E.a1 * x + E.a3) + 4 * (3 * x * x + 2 * E.a2 * x + E.a4)


def reduce_point(P, p):
    """Image of a rational point in E(F_p) (None for points reducing to O)"""
    if P.is_infinity():
        return O
    F = GF(p)
    if P.x.denominator % p == 0:
        return O
    return CurvePoint(F(P.x.numerator) / F(P.x.denominator), F(P.y.numerator) / F(P.y.denominator))


def random_fp_point(E, p, rng):
    """A uniformly chosen affine point of E(F_p), p odd, as GF(p) coordinates"""
    if p == 2 or not E.is_good(p):
        raise DomainError(f"random points need an odd good prime, got {p}")
    F = GF(p)
    while True:
        x = rng.randrange(p)
        disc = _quadratic_disc(E, x) % p
        if disc and legendre_symbol(disc, p) != 1:
            continue
        s = sqrt_mod(disc, p) if disc else 0
        if rng.random() < 0.5:
            s = -s
        y = (s - E.a1 * x - E.a3) * pow(2, -1, p) % p
        return CurvePoint(F(x), F(y))

