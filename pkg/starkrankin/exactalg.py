"""
Exact arithmetic substrate: rationals, cyclotomic field elements, Dirichlet
characters, generalized Bernoulli numbers, Gauss sums and a sampling based
verifier for rational-function identities.
"""

import itertools
import logging
import math
import random
from fractions import Fraction
from functools import lru_cache, reduce

import mpmath
import sympy
from sympy import Poly, Symbol, cyclotomic_poly, totient

from starkrankin.exceptions import DomainError, ResamplingExhausted

logger = logging.getLogger(__name__)

BigRational = Fraction
BigComplex = mpmath.mpc

DEFAULT_SEED = 20240229
DEFAULT_RETRIES = 16

_X = Symbol("x")


def to_fraction(value):
    """Convert ints, Fractions and sympy rationals to Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"cannot convert {value!r} to a rational")


def lcm(*values):
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def kronecker_symbol(a, n):
    """
    Kronecker symbol (a|n).

    Arguments:
        a: any integer
        n: nonzero integer
    Returns:
        -1, 0 or 1
    """
    if n == 0:
        raise DomainError("Kronecker symbol is undefined for n = 0")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * sympy.jacobi_symbol(a % n, n)


# Helper functions for local use

@lru_cache(maxsize=None)
def _cyclotomic_modulus(m):
    """Coefficients of the m-th cyclotomic polynomial, lowest degree first"""
    coeffs = Poly(cyclotomic_poly(m, _X), _X).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


def _reduce(coeffs, m):
    modulus = _cyclotomic_modulus(m)
    degree = len(modulus) - 1
    coeffs = list(coeffs)
    for i in range(len(coeffs) - 1, degree - 1, -1):
        lead = coeffs[i]
        if lead:
            shift = i - degree
            for j, c in enumerate(modulus):
                if c:
                    coeffs[shift + j] -= lead * c
    coeffs = coeffs[:degree] + [Fraction(0)] * (degree - len(coeffs))
    return tuple(Fraction(c) for c in coeffs)


@lru_cache(maxsize=None)
def _ramanujan_sum(m, i):
    """Sum of zeta^i over the primitive m-th roots of unity"""
    n = m // math.gcd(i, m)
    factors = sympy.factorint(n)
    if any(e > 1 for e in factors.values()):
        return 0
    return (-1) ** len(factors) * (euler_phi(m) // euler_phi(n))


class CyclotomicElement:
    """
    Element of Q(zeta_m) in the power basis modulo the m-th cyclotomic
    polynomial. Values are immutable; mixed orders are lifted to the lcm.
    """

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order, coeffs):
        if order < 1:
            raise DomainError(f"cyclotomic order must be positive, got {order}")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", _reduce(coeffs, order))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicElement is immutable")

    @classmethod
    def zeta(cls, m, k=1):
        """zeta_m ** k"""
        k %= m
        return cls(m, [0] * k + [1])

    @classmethod
    def rational(cls, value, order=1):
        return cls(order, [Fraction(value)])

    @property
    def degree(self):
        return len(self.coeffs)

    def lift(self, order):
        """Image under Q(zeta_m) -> Q(zeta_order) for m | order"""
        if order % self.order:
            raise DomainError(f"cannot lift order {self.order} to {order}")
        step = order // self.order
        coeffs = [Fraction(0)] * (step * (self.degree - 1) + 1)
        for i, c in enumerate(self.coeffs):
            coeffs[i * step] = c
        return CyclotomicElement(order, coeffs)

    def _coerce(self, other):
        if isinstance(other, CyclotomicElement):
            if other.order == self.order:
                return self, other
            order = lcm(self.order, other.order)
            return self.lift(order), other.lift(order)
        if isinstance(other, (int, Fraction)):
            return self, CyclotomicElement(self.order, [other])
        if isinstance(other, sympy.Rational):
            return self, CyclotomicElement(self.order, [to_fraction(other)])
        return None

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CyclotomicElement(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement(self.order, [-c for c in self.coeffs])

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CyclotomicElement(a.order, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicElement(self.order, [c * other for c in self.coeffs])
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        product = [Fraction(0)] * (a.degree + b.degree - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        product[i + j] += x * y
        return CyclotomicElement(a.order, product)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return CyclotomicElement(self.order, [1 / self.coeffs[0]])
        f = Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(self.coeffs)], _X, domain="QQ")
        g = Poly(list(reversed(_cyclotomic_modulus(self.order))), _X, domain="QQ")
        inv = f.invert(g)
        return CyclotomicElement(self.order, [to_fraction(c) for c in reversed(inv.all_coeffs())])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return CyclotomicElement(self.order, [c / other for c in self.coeffs])
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a * b.inverse()

    def __rtruediv__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return b * a.inverse()

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        result = CyclotomicElement(self.order, [1])
        exponent = abs(exponent)
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.canonical_coordinates()))
        return self._hash

    def galois(self, a):
        """Image under zeta -> zeta^a, a prime to the order"""
        m = self.order
        coeffs = [Fraction(0)] * m
        for i, c in enumerate(self.coeffs):
            coeffs[(a * i) % m] += c
        return CyclotomicElement(m, coeffs)

    def conductor(self):
        """Smallest d with self in Q(zeta_d)"""
        m = self.order
        units = [a for a in range(1, m + 1) if math.gcd(a, m) == 1]
        for d in sympy.divisors(m):
            if all(self.galois(a) == self for a in units if (a - 1) % d == 0):
                return d
        return m

    def normalised_trace(self):
        """Tr(self) / [Q(zeta_m):Q], the same in every cyclotomic field holding self"""
        m = self.order
        total = sum((c * _ramanujan_sum(m, i) for i, c in enumerate(self.coeffs) if c), Fraction(0))
        return total / euler_phi(m)

    def canonical_coordinates(self):
        """
        (d, t_0, ..., t_(phi(d)-1)) with d the conductor and t_j the normalised
        trace of self * zeta_d^-j; equal elements of any order agree.
        """
        d = self.conductor()
        traces = tuple((self * CyclotomicElement.zeta(d, -j)).normalised_trace() for j in range(euler_phi(d)))
        return (d,) + traces

    def __bool__(self):
        return not self.is_zero()

    def is_zero(self):
        return not any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def to_rational(self):
        if not self.is_rational():
            raise DomainError(f"{self} is not rational")
        return self.coeffs[0]

    def conjugate(self):
        """Image under zeta -> zeta^-1"""
        m = self.order
        coeffs = [Fraction(0)] * m
        for i, c in enumerate(self.coeffs):
            coeffs[(-i) % m] += c
        return CyclotomicElement(m, coeffs)

    def to_complex(self, precision_bits=53):
        """Value under zeta_m -> exp(2 pi i / m)"""
        with mpmath.workprec(precision_bits):
            total = mpmath.mpc(0)
            for i, c in enumerate(self.coeffs):
                if c:
                    total += mpmath.mpf(c.numerator) / c.denominator * mpmath.expjpi(mpmath.mpf(2 * i) / self.order)
            return +total

    def coordinates(self):
        return self.coeffs

    def to_json(self):
        return {"order": self.order, "coeffs": [str(c) for c in self.coeffs]}

    def __repr__(self):
        return f"CyclotomicElement({self.order}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                power = "" if i == 0 else (f"z{self.order}" if i == 1 else f"z{self.order}^{i}")
                terms.append(f"({c})*{power}" if power else f"({c})")
        return " + ".join(terms)


def simplify(value):
    """Collapse rational cyclotomic elements to Fraction"""
    if isinstance(value, CyclotomicElement) and value.is_rational():
        return value.to_rational()
    if isinstance(value, int):
        return Fraction(value)
    return value


def is_zero(value):
    return value == 0


class RootExtension:
    """
    The ring base[rho]/(rho^2 - trace*rho + norm), used for Hecke roots that
    do not lie in the cyclotomic value field. Extensions may be stacked;
    depth counts the number of adjoined roots.
    """

    def __init__(self, trace, norm, name="rho", base_depth=0):
        self.trace = trace
        self.norm = norm
        self.name = name
        self.depth = base_depth + 1

    @classmethod
    def over(cls, trace, norm, name="rho"):
        depth = max(_depth(trace), _depth(norm))
        return cls(trace, norm, name, depth)

    def generator(self):
        return RootExtensionElement(self, 0, 1)

    def element(self, u, v=0):
        return RootExtensionElement(self, u, v)

    def __repr__(self):
        return f"RootExtension({self.name}^2 - ({self.trace})*{self.name} + ({self.norm}))"


def _depth(value):
    if isinstance(value, RootExtensionElement):
        return value.field.depth
    return 0


class RootExtensionElement:
    """u + v*rho in a RootExtension"""

    __slots__ = ("field", "u", "v")

    def __init__(self, field, u, v=0):
        self.field = field
        self.u = Fraction(u) if isinstance(u, int) else u
        self.v = Fraction(v) if isinstance(v, int) else v

    def _coerce(self, other):
        if isinstance(other, RootExtensionElement):
            if other.field is self.field:
                return other
            if other.field.depth < self.field.depth:
                return RootExtensionElement(self.field, other, 0)
            if other.field.depth == self.field.depth:
                raise DomainError("elements of unrelated root extensions")
            return None
        if isinstance(other, (int, Fraction, CyclotomicElement)):
            return RootExtensionElement(self.field, other, 0)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RootExtensionElement(self.field, self.u + other.u, self.v + other.v)

    __radd__ = __add__

    def __neg__(self):
        return RootExtensionElement(self.field, -self.u, -self.v)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RootExtensionElement(self.field, self.u - other.u, self.v - other.v)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        t, n = self.field.trace, self.field.norm
        vv = self.v * other.v
        return RootExtensionElement(
            self.field,
            self.u * other.u - n * vv,
            self.u * other.v + other.u * self.v + t * vv,
        )

    __rmul__ = __mul__

    def conjugate(self):
        """Image under rho -> trace - rho"""
        return RootExtensionElement(self.field, self.u + self.field.trace * self.v, -self.v)

    def relative_norm(self):
        t, n = self.field.trace, self.field.norm
        return self.u * self.u + t * self.u * self.v + n * self.v * self.v

    def inverse(self):
        norm = self.relative_norm()
        if norm == 0:
            raise ZeroDivisionError("element has zero relative norm")
        conj = self.conjugate()
        return RootExtensionElement(self.field, conj.u / norm, conj.v / norm)

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

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        result = RootExtensionElement(self.field, 1, 0)
        exponent = abs(exponent)
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
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
        return hash((self.u, self.v))

    def is_zero(self):
        return self.u == 0 and self.v == 0

    def to_complex(self, precision_bits=53):
        """Value with rho sent to the root of larger imaginary part (then larger real part)"""
        with mpmath.workprec(precision_bits):
            t = _complex(self.field.trace, precision_bits)
            n = _complex(self.field.norm, precision_bits)
            root = mpmath.sqrt(t * t - 4 * n)
            candidates = sorted([(t + root) / 2, (t - root) / 2], key=lambda z: (z.imag, z.real))
            rho = candidates[-1]
            return _complex(self.u, precision_bits) + _complex(self.v, precision_bits) * rho

    def __repr__(self):
        return f"RootExtensionElement({self.u!r}, {self.v!r})"

    def __str__(self):
        return f"({self.u}) + ({self.v})*{self.field.name}"


def _complex(value, precision_bits):
    if isinstance(value, (CyclotomicElement, RootExtensionElement)):
        return value.to_complex(precision_bits)
    value = Fraction(value)
    return mpmath.mpc(mpmath.mpf(value.numerator) / value.denominator)


def abelian_basis(elements, multiply, identity):
    """
    Decompose a finite abelian group into cyclic factors.

    Arguments:
        elements: all group elements (hashable)
        multiply: the group law
        identity: the neutral element
    Returns:
        (generators, orders, log) with orders d_1 | d_2 | ... and log mapping
        every element to its exponent vector on the generators
    """
    elements = list(elements)
    generators, orders = [], []
    subgroup = {identity: ()}
    while len(subgroup) < len(elements):
        best, best_order, best_power = None, 0, None
        for x in elements:
            if x in subgroup:
                continue
            k, y = 1, x
            while y not in subgroup:
                y = multiply(y, x)
                k += 1
            if k > best_order:
                best, best_order, best_power = x, k, subgroup[y]
        x = best
        for i, s in enumerate(best_power):
            if s % best_order:
                raise DomainError("group law is not abelian")
            x = multiply(x, _power(generators[i], (-s // best_order) % orders[i], multiply, identity))
        generators.append(x)
        orders.append(best_order)
        grown = {}
        xj = identity
        for j in range(best_order):
            for y, vector in subgroup.items():
                grown[multiply(xj, y)] = vector + (j,)
            xj = multiply(xj, x)
        subgroup = grown
    generators.reverse()
    orders.reverse()
    log = {g: tuple(reversed(v)) for g, v in subgroup.items()}
    return tuple(generators), tuple(orders), log


def _power(x, n, multiply, identity):
    result = identity
    while n:
        if n & 1:
            result = multiply(result, x)
        x = multiply(x, x)
        n >>= 1
    return result


class DirichletCharacter:
    """
    Dirichlet character modulo N with values in mu_m. Values are stored as
    exponents k (value zeta_m^k) on the units mod N; the generators of
    (Z/N)^x and their exponents are kept as the defining presentation.
    """

    def __init__(self, modulus, order, table):
        self.modulus = modulus
        self.order = order
        self._table = dict(table)
        if modulus > 1:
            units = [a for a in range(1, modulus) if math.gcd(a, modulus) == 1]
            if len(self._table) != len(units):
                raise DomainError(f"value table does not cover (Z/{modulus})^x")
            for a in units:
                for b in units:
                    if (self._table[a] + self._table[b] - self._table[a * b % modulus]) % order:
                        raise DomainError("values do not define a character")
        minus_one = self._table.get((-1) % modulus, 0) if modulus > 1 else 0
        self.parity = 1 if minus_one % order == 0 else -1

    @classmethod
    def trivial(cls, modulus=1):
        return cls(modulus, 1, {a: 0 for a in range(1, max(modulus, 2)) if math.gcd(a, modulus) == 1})

    @classmethod
    def kronecker(cls, disc):
        """The quadratic character n -> (disc|n) of conductor |disc|"""
        modulus = abs(disc)
        table = {}
        for a in range(1, modulus):
            if math.gcd(a, modulus) == 1:
                table[a] = 0 if kronecker_symbol(disc, a) == 1 else 1
        return cls(modulus, 2, table)

    @classmethod
    def from_generators(cls, modulus, generators, exponents, order):
        """Character with chi(g_i) = zeta_order^e_i"""
        table = {1 % modulus if modulus > 1 else 1: 0}
        for g, e in zip(generators, exponents):
            grown = dict(table)
            power, k = g % modulus, 1
            while power != 1:
                for a, value in table.items():
                    b = a * power % modulus
                    exponent = (value + k * e) % order
                    if grown.setdefault(b, exponent) != exponent:
                        raise DomainError("exponents are inconsistent with the group relations")
                power = power * g % modulus
                k += 1
            table = grown
        return cls(modulus, order, table)

    @property
    def generators(self):
        units = [a for a in range(1, self.modulus) if math.gcd(a, self.modulus) == 1]
        if not units or self.modulus <= 2:
            return ()
        return abelian_basis(units, lambda a, b: a * b % self.modulus, 1)[0]

    def exponent(self, a):
        if self.modulus == 1:
            return 0
        return self._table.get(a % self.modulus)

    def __call__(self, a):
        """chi(a): an int for characters of order at most two, else a CyclotomicElement"""
        k = self.exponent(a)
        if k is None:
            return 0
        if self.order <= 2:
            return -1 if k else 1
        return CyclotomicElement.zeta(self.order, k)

    def value(self, a):
        """chi(a) as a CyclotomicElement"""
        k = self.exponent(a)
        if k is None:
            return CyclotomicElement.rational(0)
        return CyclotomicElement.zeta(self.order, k)

    def induced_value(self, a, level):
        """chi_N(a): zero when gcd(a, level) > 1"""
        if math.gcd(a, level) > 1:
            return 0
        return self(a)

    def is_trivial(self):
        return all(k % self.order == 0 for k in self._table.values())

    def conjugate(self):
        return DirichletCharacter(self.modulus, self.order, {a: (-k) % self.order for a, k in self._table.items()})

    def conductor(self):
        for d in sympy.divisors(self.modulus):
            if all(self._table[a] % self.order == 0 for a in self._table if a % d == 1 % d):
                return d
        return self.modulus

    def is_primitive(self):
        return self.conductor() == self.modulus

    def __eq__(self, other):
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        if self.modulus != other.modulus:
            return False
        m = lcm(self.order, other.order)
        return all(self._table[a] * (m // self.order) % m == other._table[a] * (m // other.order) % m
                   for a in self._table)

    def __hash__(self):
        return hash((self.modulus, self.conductor()))

    def __repr__(self):
        return f"DirichletCharacter(modulus={self.modulus}, order={self.order})"


@lru_cache(maxsize=64)
def _bernoulli_polynomial(k):
    coeffs = Poly(sympy.bernoulli(k, _X), _X).all_coeffs()
    return tuple(to_fraction(c) for c in coeffs)


def bernoulli_polynomial(k, x):
    """Evaluate the k-th Bernoulli polynomial at a rational x"""
    value = Fraction(0)
    for c in _bernoulli_polynomial(k):
        value = value * x + c
    return value


def generalized_bernoulli(k, chi):
    """
    B_{k,chi} = N^(k-1) * sum_{a=1}^{N} chi(a) B_k(a/N) as an exact element
    of the value field of chi.
    """
    if k < 1:
        raise DomainError(f"generalized Bernoulli numbers need k >= 1, got {k}")
    n = chi.modulus
    total = CyclotomicElement.rational(0, max(chi.order, 1))
    for a in range(1, n + 1):
        k_a = chi.exponent(a)
        if k_a is None:
            continue
        total = total + CyclotomicElement.zeta(chi.order, k_a) * bernoulli_polynomial(k, Fraction(a, n))
    return total * Fraction(n) ** (k - 1)


def gauss_sum(chi, precision_bits=256):
    """tau(chi) = sum_a chi(a) exp(2 pi i a / N) for primitive chi"""
    if not chi.is_primitive():
        raise DomainError(f"Gauss sum requested for imprimitive {chi!r}")
    n = chi.modulus
    with mpmath.workprec(precision_bits + 16):
        total = mpmath.mpc(0)
        for a in range(1, n + 1):
            k = chi.exponent(a)
            if k is None:
                continue
            total += mpmath.expjpi(mpmath.mpf(2 * k) / chi.order) * mpmath.expjpi(mpmath.mpf(2 * a) / n)
    with mpmath.workprec(precision_bits):
        return +total


class RationalFunction:
    """
    A sympy rational expression split into numerator and denominator
    polynomials with rational coefficients, evaluable over any ring.
    """

    def __init__(self, expr, variables):
        self.variables = tuple(variables)
        expr = sympy.sympify(expr)
        stray = expr.free_symbols - set(self.variables)
        if stray:
            raise DomainError(f"expression has symbols outside {self.variables}: {sorted(map(str, stray))}")
        numerator, denominator = sympy.fraction(sympy.together(expr))
        self.numerator = self._terms(numerator)
        self.denominator = self._terms(denominator)
        if not self.denominator:
            raise DomainError("denominator is identically zero")

    def _terms(self, expr):
        if not self.variables:
            value = sympy.nsimplify(expr)
            return [((), to_fraction(value))] if value != 0 else []
        poly = Poly(sympy.expand(expr), *self.variables, domain="QQ")
        return [(monomial, to_fraction(c)) for monomial, c in poly.terms() if c != 0]

    @staticmethod
    def _evaluate(terms, values):
        total = Fraction(0)
        for monomial, c in terms:
            term = c
            for value, e in zip(values, monomial):
                if e:
                    term = term * value ** e
            total = term + total
        return total

    def evaluate(self, point):
        """
        Arguments:
            point: mapping variable -> ring element (or a sequence in variable order)
        Returns:
            the value; raises ZeroDivisionError at poles
        """
        values = [point[v] for v in self.variables] if isinstance(point, dict) else list(point)
        denominator = self._evaluate(self.denominator, values)
        if denominator == 0:
            raise ZeroDivisionError("evaluation at a pole")
        return self._evaluate(self.numerator, values) / denominator

    def degree(self):
        degrees = [sum(m) for m, _ in self.numerator + self.denominator]
        return max(degrees) if degrees else 0


def _sample_values(rng, count):
    values = set()
    while len(values) < count:
        values.add(Fraction(rng.randint(-97, 97), rng.randint(1, 13)))
    return sorted(values)


def verify_rational_identity(lhs, rhs, variables, degree_bound, seed=DEFAULT_SEED, retries=DEFAULT_RETRIES):
    """
    Decide lhs == rhs for rational functions whose cross-multiplied difference
    has degree at most degree_bound in each variable, by exact evaluation on a
    grid of (degree_bound + 1)^#vars pole-free rational points.

    Returns:
        True iff every sample agrees exactly
    """
    left = RationalFunction(lhs, variables)
    right = RationalFunction(rhs, variables)
    rng = random.Random(seed)
    for attempt in range(retries + 1):
        axes = [_sample_values(rng, degree_bound + 1) for _ in variables]
        try:
            for point in itertools.product(*axes):
                if left.evaluate(point) != right.evaluate(point):
                    logger.debug(f"identity fails at {point} (seed {seed})")
                    return False
        except ZeroDivisionError:
            logger.debug(f"pole hit on attempt {attempt}, resampling")
            continue
        logger.debug(f"identity verified on {(degree_bound + 1) ** len(variables)} points (seed {seed})")
        return True
    raise ResamplingExhausted(f"every sample grid hit a pole after {retries} retries", seed=seed)


def euler_phi(m):
    return int(totient(m))
