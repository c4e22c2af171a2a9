"""
Imaginary quadratic fields and their orders, modelled through binary
quadratic forms: reduced forms, Gaussian composition, class group
structure, prime splitting, ideals of a given norm and the Heegner
hypothesis.

A form (a, b, c) of discriminant -D*c^2 stands for the lattice
[a, (-b + sqrt(-D c^2))/2].
"""

import itertools
import logging
import math
from fractions import Fraction

import mpmath
from sympy import factorint, isprime
from sympy.core.numbers import igcdex

from starkrankin import cache
from starkrankin.exactalg import CyclotomicElement, DirichletCharacter, abelian_basis, kronecker_symbol
from starkrankin.exceptions import DomainError, ResourceError

logger = logging.getLogger(__name__)

CLASS_GROUP_BOUND = 10**7

SPLIT = "split"
INERT = "inert"
RAMIFIED = "ramified"


def is_fundamental_discriminant(disc):
    if disc >= 0 or disc % 4 not in (0, 1):
        return False
    if disc % 4 == 1:
        return all(e == 1 for e in factorint(-disc).values())
    m = disc // 4
    if m % 4 not in (2, 3):
        return False
    return all(e == 1 for e in factorint(-m).values())


class ImagQuadField:
    """
    The field K = Q(sqrt(-D)) with fundamental discriminant -D.
    """

    def __init__(self, D):
        if not isinstance(D, int) or D <= 0 or not is_fundamental_discriminant(-D):
            raise DomainError(f"-{D} is not a fundamental discriminant")
        self.D = D
        self.w = 6 if D == 3 else 4 if D == 4 else 2
        self.small = D < 7
        if self.small:
            logger.warning(f"D_K = {D} < 7: extra units present, results are for oracle use only")

    @property
    def disc(self):
        return -self.D

    def kronecker(self, n):
        """chi_K(n) = (-D|n)"""
        return kronecker_symbol(-self.D, n)

    @property
    def character(self):
        return DirichletCharacter.kronecker(-self.D)

    def class_group(self, c=1, bound=CLASS_GROUP_BOUND):
        return class_group(-self.D * c * c, bound)

    @property
    def class_number(self):
        return self.class_group().h

    def prime_divisors(self):
        return sorted(factorint(self.D))

    def __eq__(self, other):
        return isinstance(other, ImagQuadField) and other.D == self.D

    def __hash__(self):
        return hash(("ImagQuadField", self.D))

    def __repr__(self):
        return f"ImagQuadField({self.D})"


def _solve_linmod(a, b, m):
    """Solve a*x = b (mod m); returns (u, v) with solutions x = u + v*n"""
    d, _, g = igcdex(a, m)
    if b % g:
        raise DomainError("linear congruence has no solution")
    return (b // g) * d % m, m // g


class QuadForm:
    """Positive definite binary quadratic form a*x^2 + b*x*y + c*y^2"""

    __slots__ = ("a", "b", "c")

    def __init__(self, a, b, c):
        self.a = int(a)
        self.b = int(b)
        self.c = int(c)

    @classmethod
    def principal(cls, disc):
        k = disc % 2
        return cls(1, k, (k * k - disc) // 4)

    @property
    def discriminant(self):
        return self.b * self.b - 4 * self.a * self.c

    def __iter__(self):
        yield self.a
        yield self.b
        yield self.c

    def __eq__(self, other):
        if not isinstance(other, QuadForm):
            return NotImplemented
        return tuple(self) == tuple(other)

    def __hash__(self):
        return hash(tuple(self))

    def __lt__(self, other):
        return tuple(self) < tuple(other)

    def __repr__(self):
        return f"QuadForm({self.a}, {self.b}, {self.c})"

    def is_primitive(self):
        return math.gcd(self.a, self.b, self.c) == 1

    def is_reduced(self):
        a, b, c = self
        return abs(b) <= a <= c and not (b < 0 and (a == -b or a == c))

    def compose(self, other):
        """Gaussian composition without reduction"""
        a, b, c = self
        alpha, beta, _ = other
        g = (b + beta) // 2
        h = -(b - beta) // 2
        w = math.gcd(a, alpha, g)
        s, t, u = a // w, alpha // w, g // w
        mu, nu = _solve_linmod(t * u, h * u + s * c, s * t)
        lam = _solve_linmod(t * nu, h - t * mu, s)[0]
        k = mu + nu * lam
        l = (k * t - h) // s
        m = (t * u * k - h * u - c * s) // (s * t)
        return QuadForm(s * t, w * u - (k * t + l * s), k * l - w * m)

    def __mul__(self, other):
        return self.compose(other).reduce()

    def normalize(self):
        a, b, c = self
        r = (a - b) // (2 * a)
        return QuadForm(a, b + 2 * r * a, a * r * r + b * r + c)

    def reduce(self):
        a, b, c = self.normalize()
        while not (a < c or (a == c and b >= 0)):
            s = (c + b) // (2 * c)
            a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
        return QuadForm(a, b, c)

    def inverse(self):
        return QuadForm(self.a, -self.b, self.c)

    def power(self, n, reduce=True):
        """self^n; with reduce=False the intermediate forms are kept unreduced"""
        if n < 0:
            return self.inverse().power(-n, reduce)
        result = QuadForm.principal(self.discriminant)
        for _ in range(n):
            result = result.compose(self)
            if reduce:
                result = result.reduce()
        return result


class ClassGroup:
    """
    Class group of forms of a negative discriminant with its decomposition
    into cyclic factors of orders d_1 | d_2 | ...
    """

    def __init__(self, disc, elements):
        self.disc = disc
        self.elements = sorted(elements)
        self.identity = QuadForm.principal(disc)
        self.generators, self.orders, self.log = abelian_basis(self.elements, self.multiply, self.identity)

    @staticmethod
    def multiply(f, g):
        return f * g

    @property
    def h(self):
        return len(self.elements)

    @property
    def genus_number(self):
        """[Cl : Cl^2]"""
        return 2 ** sum(1 for d in self.orders if d % 2 == 0)

    g = genus_number

    def dlog(self, form):
        """Exponent vector of a form's class on the generators"""
        return self.log[form.reduce()]

    def __contains__(self, form):
        return form.reduce() in self.log

    def __repr__(self):
        return f"ClassGroup(disc={self.disc}, h={self.h}, orders={self.orders})"


def reduced_forms(disc):
    """All reduced primitive forms of discriminant disc < 0"""
    forms = []
    amax = math.isqrt(-disc // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - disc) % 2:
                continue
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (a == c and b < 0) or math.gcd(a, b, c) != 1:
                continue
            forms.append(QuadForm(a, b, c))
    return forms


def class_group(disc, bound=CLASS_GROUP_BOUND):
    """
    Class group of primitive positive definite forms of discriminant disc.

    Arguments:
        disc: negative integer congruent to 0 or 1 mod 4
        bound: largest |disc| accepted
    Returns:
        ClassGroup
    """
    if disc >= 0 or disc % 4 not in (0, 1):
        raise DomainError(f"{disc} is not a negative discriminant")
    if -disc > bound:
        raise ResourceError(f"|disc| = {-disc} exceeds the class group bound {bound}")
    key = f"class_group:{disc}"
    group = cache.get(key)
    if group is None:
        forms = reduced_forms(disc)
        group = ClassGroup(disc, forms)
        logger.debug(f"class group of {disc}: h={group.h} orders={group.orders}")
        cache.set(key, group)
    return group


def genus_number(disc):
    return class_group(disc).genus_number


class PrimeIdeal:
    """
    A prime of the order of conductor c above the rational prime q.
    sign is +1 for the distinguished prime above a split q, -1 for its
    conjugate and 0 otherwise.
    """

    __slots__ = ("q", "kind", "sign", "form")

    def __init__(self, q, kind, sign, form):
        self.q = q
        self.kind = kind
        self.sign = sign
        self.form = form

    @property
    def norm(self):
        return self.q * self.q if self.kind == INERT else self.q

    def conjugate(self):
        if self.kind != SPLIT:
            return self
        return PrimeIdeal(self.q, self.kind, -self.sign, self.form.inverse())

    def _key(self):
        return (self.q, -self.sign)

    def __eq__(self, other):
        return isinstance(other, PrimeIdeal) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __lt__(self, other):
        return self._key() < other._key()

    def __repr__(self):
        mark = {1: "", -1: "bar", 0: ""}[self.sign]
        return f"P{self.q}{mark}({self.kind})"


class PrimeSplitting:
    """Splitting type of q together with the distinguished prime and its conjugate"""

    def __init__(self, q, kind, prime=None):
        self.q = q
        self.kind = kind
        self.prime = prime
        self.conjugate = prime.conjugate() if prime is not None else None

    def __repr__(self):
        return f"PrimeSplitting(q={self.q}, kind={self.kind})"


def distinguished_form(disc, q):
    """The form (q, b, .) with the smallest b in [0, q] representing a prime above q"""
    for b in range(0, q + 1):
        if (b - disc) % 2 == 0 and (b * b - disc) % (4 * q) == 0:
            return QuadForm(q, b, (b * b - disc) // (4 * q))
    raise DomainError(f"no prime form of discriminant {disc} above {q}")


def prime_splitting(K, c, q):
    """
    Arguments:
        K: ImagQuadField
        c: conductor of the order
        q: rational prime coprime to c
    Returns:
        PrimeSplitting
    """
    if not isprime(q):
        raise DomainError(f"{q} is not prime")
    if c % q == 0:
        raise DomainError(f"prime {q} divides the conductor {c}")
    disc = -K.D * c * c
    symbol = kronecker_symbol(disc, q)
    if symbol == -1:
        return PrimeSplitting(q, INERT, PrimeIdeal(q, INERT, 0, None))
    if symbol == 0:
        return PrimeSplitting(q, RAMIFIED, PrimeIdeal(q, RAMIFIED, 0, distinguished_form(disc, q)))
    return PrimeSplitting(q, SPLIT, PrimeIdeal(q, SPLIT, 1, distinguished_form(disc, q)))


class Ideal:
    """
    Integral ideal of the order of conductor c, coprime to c, stored as its
    prime factorisation.
    """

    def __init__(self, field, c, factors=()):
        self.field = field
        self.c = c
        merged = {}
        for prime, e in factors:
            if e:
                merged[prime] = merged.get(prime, 0) + e
        self.factors = tuple(sorted(merged.items()))

    @classmethod
    def unit(cls, field, c=1):
        return cls(field, c)

    @property
    def disc(self):
        return -self.field.D * self.c * self.c

    @property
    def norm(self):
        n = 1
        for prime, e in self.factors:
            n *= prime.norm ** e
        return n

    def is_unit(self):
        return not self.factors

    def is_coprime(self, m):
        return all(m % prime.q for prime, _ in self.factors)

    def conjugate(self):
        return Ideal(self.field, self.c, [(prime.conjugate(), e) for prime, e in self.factors])

    def __mul__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return Ideal(self.field, self.c, self.factors + other.factors)

    def __pow__(self, n):
        return Ideal(self.field, self.c, [(prime, e * n) for prime, e in self.factors])

    def class_form(self):
        """Reduced form of the ideal class"""
        result = QuadForm.principal(self.disc)
        for prime, e in self.factors:
            if prime.kind != INERT:
                result = result * prime.form.power(e)
        return result

    def __eq__(self, other):
        return isinstance(other, Ideal) and (self.field, self.c, self.factors) == (other.field, other.c, other.factors)

    def __hash__(self):
        return hash((self.field, self.c, self.factors))

    def __repr__(self):
        body = "*".join(f"{p!r}^{e}" if e > 1 else repr(p) for p, e in self.factors) or "(1)"
        return f"Ideal({body})"


def _prime_power_choices(K, c, q, e):
    splitting = prime_splitting(K, c, q)
    if splitting.kind == INERT:
        if e % 2:
            return []
        return [[(splitting.prime, e // 2)]]
    if splitting.kind == RAMIFIED:
        return [[(splitting.prime, e)]]
    return [[(splitting.prime, i), (splitting.conjugate, e - i)] for i in range(e + 1)]


def ideals_of_norm(K, c, n):
    """
    Every ideal of norm n of the order of conductor c, for gcd(n, c) = 1.
    """
    if n < 1:
        raise DomainError(f"norm must be positive, got {n}")
    if math.gcd(n, c) != 1:
        raise DomainError(f"norm {n} is not coprime to the conductor {c}")
    choices = [_prime_power_choices(K, c, q, e) for q, e in sorted(factorint(n).items())]
    ideals = []
    for combination in itertools.product(*choices):
        ideals.append(Ideal(K, c, [f for part in combination for f in part]))
    return ideals


def heegner_ideal(K, N_E, c=1):
    """
    Cyclic ideal of norm N_E, or None when the Heegner hypothesis fails.
    """
    if N_E < 1:
        raise DomainError(f"conductor must be positive, got {N_E}")
    factors = []
    for q, e in sorted(factorint(N_E).items()):
        if c % q == 0:
            logger.info(f"Heegner hypothesis fails: {q} divides the conductor {c}")
            return None
        splitting = prime_splitting(K, c, q)
        if splitting.kind == INERT or (splitting.kind == RAMIFIED and e > 1):
            logger.info(f"Heegner hypothesis fails at {q}^{e} ({splitting.kind})")
            return None
        factors.append((splitting.prime, e))
    return Ideal(K, c, factors)


class QuadraticNumber:
    """u + v*sqrt(-D) with rational u, v"""

    __slots__ = ("D", "u", "v")

    def __init__(self, D, u, v=0):
        self.D = D
        self.u = Fraction(u)
        self.v = Fraction(v)

    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if other.D != self.D:
                raise DomainError("elements of different quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(self.D, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuadraticNumber(self.D, self.u + other.u, self.v + other.v)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(self.D, -self.u, -self.v)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuadraticNumber(self.D, self.u - other.u, self.v - other.v)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuadraticNumber(
            self.D,
            self.u * other.u - self.D * self.v * other.v,
            self.u * other.v + self.v * other.u,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero")
        p = self * other.conjugate()
        return QuadraticNumber(self.D, p.u / n, p.v / n)

    def __pow__(self, n):
        if n < 0:
            return QuadraticNumber(self.D, 1) / self ** (-n)
        result = QuadraticNumber(self.D, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except DomainError:
            return False
        if other is None:
            return NotImplemented
        return self.u == other.u and self.v == other.v

    def __hash__(self):
        return hash((self.D, self.u, self.v))

    def conjugate(self):
        return QuadraticNumber(self.D, self.u, -self.v)

    def norm(self):
        return self.u * self.u + self.D * self.v * self.v

    def trace(self):
        return 2 * self.u

    def is_rational(self):
        return self.v == 0

    def to_cyclotomic(self):
        """Image in Q(zeta_D) with sqrt(-D) sent to the Gauss sum of chi_K"""
        chi = DirichletCharacter.kronecker(-self.D)
        tau = CyclotomicElement(self.D, [0])
        for a in range(1, self.D):
            value = chi(a)
            if value:
                tau = tau + value * CyclotomicElement.zeta(self.D, a)
        return tau * self.v + self.u

    def to_complex(self, precision_bits=53):
        with mpmath.workprec(precision_bits):
            return mpmath.mpc(mpmath.mpf(self.u.numerator) / self.u.denominator,
                              mpmath.mpf(self.v.numerator) / self.v.denominator * mpmath.sqrt(self.D))

    def __repr__(self):
        return f"QuadraticNumber({self.u} + {self.v}*sqrt(-{self.D}))"


def principal_generator(K, form, h=1):
    """
    Generator of the ideal represented by form^h, which must be principal.

    Arguments:
        K: ImagQuadField (maximal order)
        form: a primitive form of discriminant -D
        h: exponent, usually the class number
    Returns:
        QuadraticNumber gamma with norm form.a^h, normalised among its
        associates to the largest (x, y) in gamma = (x + y*sqrt(-D))/2
    """
    power = form.power(h, reduce=False)
    A, B, _ = power
    D = K.D
    candidates = []
    ymax = math.isqrt(4 * A // D)
    for y in range(-ymax, ymax + 1):
        rest = 4 * A - D * y * y
        if rest < 0:
            continue
        x0 = math.isqrt(rest)
        if x0 * x0 != rest:
            continue
        for x in {x0, -x0}:
            if (x + y * B) % 2 == 0 and ((x + y * B) // 2) % A == 0:
                candidates.append((x, y))
    if not candidates:
        raise DomainError(f"{form}^{h} is not principal")
    x, y = max(candidates)
    logger.debug(f"generator of {form}^{h}: ({x} + {y}*sqrt(-{D}))/2")
    return QuadraticNumber(D, Fraction(x, 2), Fraction(y, 2))


def prime_generator(K, prime):
    """Generator of a prime ideal of the maximal order of a class number one field"""
    if prime.kind == INERT:
        return QuadraticNumber(K.D, prime.q)
    return principal_generator(K, prime.form, 1)


def ideal_generator(ideal):
    """Generator of an ideal of the maximal order of a class number one field"""
    K = ideal.field
    if ideal.c != 1 or K.class_number != 1:
        raise DomainError("ideal generators are only available when h_K = 1 and c = 1")
    gamma = QuadraticNumber(K.D, 1)
    for prime, e in ideal.factors:
        gamma = gamma * prime_generator(K, prime) ** e
    return gamma
