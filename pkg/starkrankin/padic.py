"""
p-adic numbers with precision tracking and the p-adic analysis needed for
the Heegner point formula: Teichmueller lifts, the Iwasawa logarithm, the
exponential, square roots, the embedding of K into Q_p, elliptic units and
the formal group of an elliptic curve.

A PadicNumber is p^val * unit with the unit known modulo
p^(prec - val); prec is the absolute precision. A tracked zero has
val == prec. Precision rules:

    x + y   absolute precision min(prec_x, prec_y)
    x * y   relative precision min(rel_x, rel_y)
    1 / x   relative precision rel_x
"""

import logging
from fractions import Fraction
from functools import cached_property, lru_cache

from sympy import legendre_symbol, primitive_root, sqrt_mod

from starkrankin.elliptic import CurvePoint, count_points, point_mul
from starkrankin.exactalg import CyclotomicElement, RootExtensionElement
from starkrankin.exceptions import DomainError, NoSquareRootError, PrecisionError
from starkrankin.quadfield import SPLIT, ImagQuadField, QuadraticNumber, prime_splitting, principal_generator

logger = logging.getLogger(__name__)

PADIC_DIGITS = 30
T_MARGIN = 10


def valuation(n, p):
    """v_p of a nonzero integer"""
    if n == 0:
        raise DomainError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _rational_valuation(value, p):
    value = Fraction(value)
    return valuation(value.numerator, p) - valuation(value.denominator, p)


def _ilog(k, p):
    """floor(log_p k) for k >= 1"""
    e = 0
    while k >= p:
        k //= p
        e += 1
    return e


class PadicNumber:
    """Element of Q_p known modulo p^prec"""

    __slots__ = ("p", "val", "unit", "prec")

    def __init__(self, p, val, unit, prec):
        r = prec - val
        if r <= 0 or unit % p ** r == 0:
            val, unit = prec, 0
        else:
            while unit % p == 0:
                unit //= p
                val += 1
            unit %= p ** (prec - val)
        self.p = p
        self.val = val
        self.unit = unit
        self.prec = prec

    @classmethod
    def zero(cls, p, prec):
        return cls(p, prec, 0, prec)

    @classmethod
    def from_rational(cls, value, p, prec):
        """value mod p^prec"""
        value = Fraction(value)
        if value == 0:
            return cls.zero(p, prec)
        v = _rational_valuation(value, p)
        if v >= prec:
            return cls.zero(p, prec)
        num = value.numerator // p ** max(v, 0) if v >= 0 else value.numerator
        den = value.denominator // p ** max(-v, 0) if v < 0 else value.denominator
        modulus = p ** (prec - v)
        unit = num * pow(den, -1, modulus) % modulus
        return cls(p, v, unit, prec)

    from_int = from_rational

    @property
    def relative_precision(self):
        return self.prec - self.val

    def is_zero(self):
        return self.unit == 0

    @property
    def valuation(self):
        return self.val

    def _coerce(self, other):
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise DomainError(f"mixing Q_{self.p} and Q_{other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            rel = max(self.relative_precision, 1)
            if other == 0:
                return PadicNumber.zero(self.p, self.prec + rel + abs(self.val))
            v = _rational_valuation(other, self.p)
            return PadicNumber.from_rational(other, self.p, max(self.prec, v + rel))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        prec = min(self.prec, other.prec)
        v = min(self.val, other.val)
        if v >= prec:
            return PadicNumber.zero(self.p, prec)
        p = self.p
        total = self.unit * p ** (self.val - v) + other.unit * p ** (other.val - v)
        return PadicNumber(p, v, total, prec)

    __radd__ = __add__

    def __neg__(self):
        return PadicNumber(self.p, self.val, -self.unit, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        val = self.val + other.val
        rel = min(self.relative_precision, other.relative_precision)
        return PadicNumber(self.p, val, self.unit * other.unit, val + rel)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError(f"inverse of O({self.p}^{self.prec})")
        rel = self.relative_precision
        return PadicNumber(self.p, -self.val, pow(self.unit, -1, self.p ** rel), rel - self.val)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = PadicNumber(self.p, 0, 1, self.val * n + self.relative_precision) if not self.is_zero() else None
        if result is None:
            return PadicNumber.one(self.p, self.prec) if n == 0 else PadicNumber.zero(self.p, self.prec * n)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    @classmethod
    def one(cls, p, prec):
        return cls(p, 0, 1, prec)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def agrees_with(self, other, digits):
        """Equality modulo p^digits"""
        return (self - other).truncate(digits).is_zero()

    def truncate(self, prec):
        if prec >= self.prec:
            return self
        return PadicNumber(self.p, self.val, self.unit, prec)

    def lift(self):
        """Integer congruent to the value modulo p^prec (value must be integral)"""
        if self.val < 0:
            raise DomainError(f"{self} is not integral")
        return self.unit * self.p ** self.val % self.p ** self.prec

    def to_fraction(self):
        """Exact rational p^val * unit for the stored representative"""
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def digits(self):
        """Base-p digits of the unit part, lowest first"""
        out = []
        u = self.unit
        for _ in range(self.relative_precision if not self.is_zero() else 0):
            out.append(u % self.p)
            u //= self.p
        return out

    def to_dict(self):
        return {"p": self.p, "val": self.val if not self.is_zero() else None,
                "digits": self.digits(), "prec": self.prec}

    def __str__(self):
        terms = []
        for i, d in enumerate(self.digits()):
            if d:
                e = self.val + i
                power = "" if e == 0 else (f"*{self.p}" if e == 1 else f"*{self.p}^{e}")
                terms.append(f"{d}{power}")
        terms.append(f"O({self.p}^{self.prec})")
        return " + ".join(terms)

    def __repr__(self):
        return f"PadicNumber({self})"


def _require_odd(p):
    if p == 2:
        raise DomainError("p = 2 is not supported")


def teichmuller(a, p, prec=PADIC_DIGITS):
    """omega(a) = lim a^(p^n), the (p-1)-th root of unity congruent to a"""
    if a % p == 0:
        raise DomainError(f"{a} is not a unit mod {p}")
    modulus = p ** prec
    return PadicNumber(p, 0, pow(a, p ** (prec - 1), modulus), prec)


def padic_log(x):
    """
    Iwasawa logarithm: log(p) = 0, log(omega) = 0, so
    log x = log(u^(p-1)) / (p-1) for the unit part u of x.
    The result is known to absolute precision rel(x).
    """
    if x.is_zero():
        raise DomainError("logarithm of zero")
    p = x.p
    _require_odd(p)
    r = x.relative_precision
    P = p ** r
    z = (pow(x.unit, p - 1, P) - 1) % P
    if z == 0:
        return PadicNumber.zero(p, r)
    vz = valuation(z, p)
    stop = 1
    while stop * vz - _ilog(stop, p) < r:
        stop += 1
    extra = _ilog(stop, p)
    M = p ** (r + extra)
    total = 0
    for k in range(1, stop):
        vk = valuation(k, p)
        term = (pow(z, k, M) // p ** vk) * pow(k // p ** vk, -1, P)
        total += term if k % 2 else -term
    total = total * pow(p - 1, -1, P) % P
    logger.debug(f"log_{p}: {stop - 1} terms at precision {r}")
    return PadicNumber(p, 0, total, r)


def padic_exp(x):
    """exp(x) for v(x) >= 1, known to the absolute precision of x"""
    p = x.p
    _require_odd(p)
    N = x.prec
    if x.is_zero():
        return PadicNumber.one(p, N)
    if x.val < 1:
        raise PrecisionError(f"exp does not converge at valuation {x.val}")
    X = x.lift()
    v = x.val
    stop = 1
    while stop * v - Fraction(stop - 1, p - 1) < N:
        stop += 1
    extra = sum((stop - 1) // p ** i for i in range(1, _ilog(max(stop - 1, 1), p) + 1))
    M = p ** (N + extra)
    P = p ** N
    total = 1
    factorial = 1
    for k in range(1, stop):
        factorial *= k
        vf = valuation(factorial, p)
        term = (pow(X, k, M) // p ** vf) * pow(factorial // p ** vf, -1, P)
        total += term
    return PadicNumber(p, 0, total % P, N)


def padic_sqrt(x):
    """
    Both square roots (y, -y) of x, y the Hensel lift of the smallest square
    root of the leading unit digit.
    """
    p = x.p
    _require_odd(p)
    if x.is_zero():
        half = PadicNumber.zero(p, x.prec // 2)
        return half, half
    if x.val % 2:
        raise NoSquareRootError(f"odd valuation {x.val}", valuation=x.val)
    a = x.unit % p
    if legendre_symbol(a, p) != 1:
        raise NoSquareRootError(f"unit part {a} is not a square mod {p}")
    s = min(sqrt_mod(a, p, all_roots=True))
    r = x.relative_precision
    k = 1
    while k < r:
        k = min(2 * k, r)
        M = p ** k
        s = (s - (s * s - x.unit) * pow(2 * s, -1, M)) % M
    half = x.val // 2
    y = PadicNumber(p, half, s, half + r)
    return y, -y


@lru_cache(maxsize=64)
def _sqrt_minus_D(D, p, prec):
    field = ImagQuadField(D)
    splitting = prime_splitting(field, 1, p)
    if splitting.kind != SPLIT:
        raise DomainError(f"{p} is {splitting.kind} in Q(sqrt(-{D}))")
    b = splitting.prime.form.b
    for root in padic_sqrt(PadicNumber.from_int(-D, p, prec)):
        if (root.unit - b) % p == 0:
            return root
    raise DomainError(f"no square root of -{D} congruent to {b} mod {p}")


def embed_K(field, p, x, prec=PADIC_DIGITS):
    """
    Image of x in Q_p under sqrt(-D) -> the root congruent to b mod p, where
    (p, b, .) is the distinguished prime above p, so that P maps into pZ_p.
    """
    root = _sqrt_minus_D(field.D, p, prec)
    if isinstance(x, QuadraticNumber):
        return PadicNumber.from_rational(x.u, p, prec) + root * x.v
    return PadicNumber.from_rational(x, p, prec)


def elliptic_unit_log(field, p, prec=PADIC_DIGITS, conjugate=False):
    """
    log_p of a generator u of the distinguished prime above p (or of its
    conjugate) for a field of class number one.

    u is the generator returned by principal_generator for the distinguished
    form, the prime sent into pZ_p by embed_K. For D = 11, p = 3 this is
    u = (1 - sqrt(-11))/2, whose conjugate (1 + sqrt(-11))/2 has log_p of the
    opposite sign since log_p(p) = 0. The predicted integral
    lambda log_E(P)^2 / log_p(u) changes sign with that choice.
    """
    if field.D < 7:
        raise DomainError(f"elliptic units need D_K >= 7, got {field.D}")
    if field.class_number != 1:
        raise DomainError(f"elliptic units are only implemented for h_K = 1 (h = {field.class_number})")
    splitting = prime_splitting(field, 1, p)
    if splitting.kind != SPLIT:
        raise DomainError(f"{p} is {splitting.kind} in Q(sqrt(-{field.D}))")
    prime = splitting.conjugate if conjugate else splitting.prime
    gamma = principal_generator(field, prime.form, 1)
    value = padic_log(embed_K(field, p, gamma, prec))
    logger.info(f"log_{p} of the elliptic unit {gamma!r}: {value}")
    return value


def embed_scalar(value, p, prec=PADIC_DIGITS, zeta_residue=None):
    """
    Image of an exact scalar in Q_p: rationals directly, Q(zeta_m) with
    m | p - 1 through zeta_m -> Teichmueller lift of g^((p-1)/m) for the
    least primitive root g (or of zeta_residue when given), root extension
    elements through a fixed square root of the discriminant.
    """
    if isinstance(value, PadicNumber):
        return value
    if isinstance(value, (int, Fraction)):
        return PadicNumber.from_rational(value, p, prec)
    if isinstance(value, QuadraticNumber):
        return embed_K(ImagQuadField(value.D), p, value, prec)
    if isinstance(value, CyclotomicElement):
        if value.is_rational():
            return PadicNumber.from_rational(value.to_rational(), p, prec)
        m = value.order
        if (p - 1) % m:
            raise DomainError(f"Q(zeta_{m}) does not embed in Q_{p}")
        residue = zeta_residue if zeta_residue is not None else pow(primitive_root(p), (p - 1) // m, p)
        zeta = teichmuller(residue, p, prec)
        total = PadicNumber.zero(p, prec)
        power = PadicNumber.one(p, prec)
        for c in value.coeffs:
            if c:
                total = total + power * c
            power = power * zeta
        return total
    if isinstance(value, RootExtensionElement):
        rho = _embed_root(value.field, p, prec, zeta_residue)
        u = embed_scalar(value.u, p, prec, zeta_residue)
        v = embed_scalar(value.v, p, prec, zeta_residue)
        return u + v * rho
    raise DomainError(f"cannot embed {value!r} in Q_{p}")


def _embed_root(field, p, prec, zeta_residue):
    """rho -> (t + y)/2 with y the first root returned by padic_sqrt(t^2 - 4n)"""
    t = embed_scalar(field.trace, p, prec, zeta_residue)
    n = embed_scalar(field.norm, p, prec, zeta_residue)
    try:
        y, _ = padic_sqrt(t * t - n * 4)
    except NoSquareRootError as e:
        raise DomainError(f"{field!r} does not embed in Q_{p}: {e}") from e
    return (t + y) / 2


def _series_mul(a, b, n):
    out = [0] * (n + 1)
    for i, x in enumerate(a[:n + 1]):
        if x:
            for j, y in enumerate(b[:n + 1 - i]):
                if y:
                    out[i + j] += x * y
    return out


def _series_inverse(a, n):
    inv = [Fraction(1, 1) / a[0]]
    for k in range(1, n + 1):
        s = sum(a[i] * inv[k - i] for i in range(1, min(k, len(a) - 1) + 1))
        inv.append(-s / a[0])
    return inv


def w_series(E, n):
    """w(t) = t^3 + a1 t w + a2 t^2 w + a3 w^2 + a4 t w^2 + a6 w^3 to degree n"""
    a1, a2, a3, a4, a6 = E.ainvs
    w = [0] * (n + 1)
    for _ in range(n + 1):
        w2 = _series_mul(w, w, n)
        w3 = _series_mul(w2, w, n)
        new = [0] * (n + 1)
        if n >= 3:
            new[3] = 1
        for k in range(n + 1):
            new[k] += a3 * w2[k] + a6 * w3[k]
            if k >= 1:
                new[k] += a1 * w[k - 1] + a4 * w2[k - 1]
            if k >= 2:
                new[k] += a2 * w[k - 2]
        if new == w:
            break
        w = new
    return w


class FormalLog:
    """log_{E,p}(P); torsion is set when m P = O"""

    def __init__(self, value, torsion=False):
        self.value = value
        self.torsion = torsion

    def to_dict(self):
        return {"value": self.value.to_dict(), "rendered": str(self.value), "torsion": self.torsion}


class RecoveredPoints:
    """The two formal group points exp_F(+X), exp_F(-X)"""

    def __init__(self, plus, minus, parameter):
        self.plus = plus
        self.minus = minus
        self.parameter = parameter

    def __iter__(self):
        yield self.plus
        yield self.minus


class FormalGroupContext:
    """
    Formal group of E at a good odd prime p: the power series w(t), the
    invariant differential, log_F and exp_F to t-precision t_precision.
    """

    def __init__(self, E, p, prec=PADIC_DIGITS, t_precision=None, margin=T_MARGIN):
        _require_odd(p)
        if not E.is_good(p):
            raise DomainError(f"{E!r} has bad reduction at {p}")
        self.E = E
        self.p = p
        self.prec = prec
        self.t_precision = prec + 2 * margin if t_precision is None else t_precision
        self.m = count_points(E, p)
        self.w = w_series(E, self.t_precision + 3)
        logger.debug(f"formal group of {E!r} at {p}: m = {self.m}, t-precision {self.t_precision}")

    @cached_property
    def differential(self):
        """Coefficients of omega/dt = 1 + a1 t + ... to degree t_precision - 1"""
        n = self.t_precision - 1
        W = [Fraction(c) for c in self.w[3:3 + n + 1]]
        V = _series_inverse(W, n)
        numerator = [(k - 2) * V[k] for k in range(n + 1)]
        denominator = [-2 * V[k] for k in range(n + 1)]
        for k in range(1, n + 1):
            denominator[k] += self.E.a1 * V[k - 1]
        if n >= 3:
            denominator[3] += self.E.a3
        inv = _series_inverse(denominator, n)
        return _series_mul(numerator, inv, n)

    @cached_property
    def log_coefficients(self):
        """c_0 = 0, c_n = omega_{n-1}/n"""
        return [Fraction(0)] + [Fraction(c) / (n + 1) for n, c in enumerate(self.differential)]

    @cached_property
    def exp_coefficients(self):
        """Compositional inverse of log_F by Lagrange inversion"""
        n = self.t_precision
        c = self.log_coefficients
        G = [c[k + 1] for k in range(n)]
        phi = _series_inverse(G, n - 1)
        coeffs = [Fraction(0)]
        power = [Fraction(1)] + [Fraction(0)] * (n - 1)
        for k in range(1, n + 1):
            power = _series_mul(power, phi, n - 1)
            coeffs.append(power[k - 1] / k)
        return coeffs

    def _require_formal(self, t):
        if not isinstance(t, PadicNumber):
            t = PadicNumber.from_rational(t, self.p, self.prec)
        if not t.is_zero() and t.val < 1:
            raise PrecisionError(f"parameter of valuation {t.val} is outside the formal group")
        return t

    def log(self, t):
        """log_F(t) for v(t) >= 1"""
        t = self._require_formal(t)
        if t.is_zero():
            return PadicNumber.zero(self.p, t.prec)
        L = self.t_precision
        total = PadicNumber.zero(self.p, t.prec + L)
        power = t
        for n in range(1, L + 1):
            c = self.log_coefficients[n]
            if c:
                total = total + power * c
            power = power * t
        tail = (L + 1) * t.val - _ilog(L + 1, self.p)
        return total.truncate(tail)

    def exp(self, X):
        """exp_F(X) by the contraction t -> X - (log_F(t) - t)"""
        X = self._require_formal(X)
        if X.is_zero():
            return X
        t = X
        for _ in range(X.prec + 2):
            new = X - (self.log(t) - t)
            if (new - t).is_zero():
                return new
            t = new
        return t

    def point_from_parameter(self, t):
        """(x, y) = (t/w(t), -1/w(t))"""
        t = self._require_formal(t)
        if t.is_zero():
            return CurvePoint.infinity()
        n = len(self.w) - 1
        w = PadicNumber.zero(self.p, t.prec + 3 * t.val + n)
        power = t ** 3
        for k in range(3, n + 1):
            if self.w[k]:
                w = w + power * self.w[k]
            power = power * t
        w = w.truncate((n + 1) * t.val + t.relative_precision)
        return CurvePoint(t / w, -w.inverse())

    def parameter(self, P):
        """t = -x/y"""
        if P.is_infinity():
            return PadicNumber.zero(self.p, self.prec)
        x, y = P.x, P.y
        if not isinstance(x, PadicNumber):
            value = -Fraction(x) / Fraction(y)
            return PadicNumber.from_rational(value, self.p, self.prec + max(_rational_valuation(value, self.p), 0))
        return -x / y


def formal_log(ctx, P):
    """
    log_{E,p}(P) = log_F(t(mP))/m, m = |E(F_p)|; points already in the
    formal group use their own parameter.
    """
    p = ctx.p
    if P.is_infinity():
        return FormalLog(PadicNumber.zero(p, ctx.prec))
    if isinstance(P.x, PadicNumber) and not P.x.is_zero() and P.x.val < 0:
        return FormalLog(ctx.log(ctx.parameter(P)).truncate(ctx.prec))
    Q = point_mul(ctx.E, ctx.m, P, check=not isinstance(P.x, PadicNumber))
    if Q.is_infinity():
        logger.info(f"{P!r} is torsion of order dividing {ctx.m}")
        return FormalLog(PadicNumber.zero(p, ctx.prec), torsion=True)
    t = ctx.parameter(Q)
    if t.is_zero() or t.val < 1:
        raise PrecisionError(f"{ctx.m} P does not reduce to O mod {p}")
    value = ctx.log(t) / ctx.m
    return FormalLog(value.truncate(ctx.prec))


def recover_point(ctx, integral, log_u, lam, zeta_residue=None):
    """
    X = sqrt(log_u / lam * integral) and the points exp_F(+-X).
    A cyclotomic lam is embedded with zeta sent to zeta_residue.
    """
    p = ctx.p
    lam = embed_scalar(lam, p, ctx.prec, zeta_residue)
    if lam.is_zero():
        raise DomainError("lambda vanishes")
    integral = embed_scalar(integral, p, ctx.prec)
    if integral.is_zero():
        infinity = CurvePoint.infinity()
        return RecoveredPoints(infinity, infinity, PadicNumber.zero(p, ctx.prec))
    log_u = embed_scalar(log_u, p, ctx.prec)
    if log_u.is_zero():
        raise DomainError("log of the elliptic unit vanishes")
    quotient = log_u / lam * integral
    try:
        X, minus_X = padic_sqrt(quotient)
    except NoSquareRootError as e:
        raise NoSquareRootError(f"no p-adic square root of {quotient}: {e}") from e
    if X.val < 1:
        raise PrecisionError(f"recovered parameter has valuation {X.val} < 1")
    plus = ctx.point_from_parameter(ctx.exp(X))
    minus = ctx.point_from_parameter(ctx.exp(minus_X))
    return RecoveredPoints(plus, minus, X)
