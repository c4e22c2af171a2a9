"""
Hecke characters of imaginary quadratic fields: finite order ring class
characters of conductor c and, for class number one, the characters of
infinity type (0, k) sending (alpha) to conj(alpha)^k.
"""

import logging
import math
from fractions import Fraction

from sympy import factorint

from starkrankin.exactalg import CyclotomicElement, DirichletCharacter, lcm
from starkrankin.exceptions import DomainError, IdentityFailure
from starkrankin.quadfield import (
    INERT,
    SPLIT,
    Ideal,
    class_group,
    ideal_generator,
    ideals_of_norm,
    prime_splitting,
    prime_generator,
)

logger = logging.getLogger(__name__)


class FrobeniusData:
    """alpha = psi(P) and beta = psi(Pbar) at a split prime p = P*Pbar"""

    def __init__(self, p, alpha, beta):
        self.p = p
        self.alpha = alpha
        self.beta = beta

    def __iter__(self):
        yield self.alpha
        yield self.beta

    def __repr__(self):
        return f"FrobeniusData(p={self.p}, alpha={self.alpha}, beta={self.beta})"


class RingClassCharacter:
    """
    Character of Cl(O_c) given by exponents e_i on the cyclic generators
    g_i of orders d_i: psi(g_i) = zeta_{d_i}^{e_i}.
    """

    def __init__(self, field, c=1, exponents=None):
        self.field = field
        self.c = c
        self.group = class_group(-field.D * c * c)
        if exponents is None:
            exponents = [0] * len(self.group.orders)
        if len(exponents) != len(self.group.orders):
            raise DomainError(
                f"expected {len(self.group.orders)} exponents for orders {self.group.orders}, got {len(exponents)}"
            )
        self.exponents = tuple(e % d for e, d in zip(exponents, self.group.orders))
        self.order = lcm(*(d // math.gcd(d, e) for d, e in zip(self.group.orders, self.exponents)))
        self._prime_cache = {}

    @classmethod
    def trivial(cls, field, c=1):
        return cls(field, c)

    @classmethod
    def from_json(cls, field, doc):
        """Build from {"c", "exponents", "generator_forms"?}"""
        c = doc.get("c", 1)
        character = cls(field, c, doc.get("exponents"))
        forms = doc.get("generator_forms")
        if forms is not None:
            expected = [tuple(g) for g in character.group.generators]
            if [tuple(f) for f in forms] != expected:
                raise DomainError(f"generator forms {forms} do not match the computed generators {expected}")
        return character

    def to_json(self):
        return {
            "D_K": self.field.D,
            "c": self.c,
            "generator_forms": [list(g) for g in self.group.generators],
            "orders": list(self.group.orders),
            "exponents": list(self.exponents),
        }

    def is_trivial(self):
        return self.order == 1

    def _class_exponent(self, form):
        vector = self.group.dlog(form)
        m = self.order
        return sum(v * (e * m // d) for v, e, d in zip(vector, self.exponents, self.group.orders)) % m

    def _prime_exponent(self, prime):
        if prime not in self._prime_cache:
            if prime.kind == INERT:
                k = 0
            else:
                k = self._class_exponent(prime.form)
            self._prime_cache[prime] = k
        return self._prime_cache[prime]

    def exponent(self, ideal):
        """k with psi(ideal) = zeta_order^k"""
        if not ideal.is_coprime(self.c):
            raise DomainError(f"{ideal!r} is not coprime to the conductor {self.c}")
        return sum(self._prime_exponent(prime) * e for prime, e in ideal.factors) % self.order

    def evaluate(self, ideal):
        return CyclotomicElement.zeta(self.order, self.exponent(ideal))

    __call__ = evaluate

    def value_of_class(self, form):
        return CyclotomicElement.zeta(self.order, self._class_exponent(form))

    def conjugate_character(self):
        """psi'(a) = psi(conj(a)); conjugation inverts classes"""
        return RingClassCharacter(self.field, self.c, [-e for e in self.exponents])

    def power(self, n):
        return RingClassCharacter(self.field, self.c, [e * n for e in self.exponents])

    def square(self):
        return self.power(2)

    def inverse(self):
        return self.power(-1)

    def is_self_dual(self):
        """psi * psi' == 1, checked on the generators"""
        for g in self.group.generators:
            if self.value_of_class(g) * self.value_of_class(g.inverse()) != 1:
                return False
        return True

    def central_character(self):
        """epsilon_psi(a) = psi((a)) as a Dirichlet character modulo D*c^2"""
        modulus = self.field.D * self.c * self.c
        table = {}
        for a in range(1, modulus):
            if math.gcd(a, modulus) != 1:
                continue
            table[a] = self.exponent(principal_rational_ideal(self.field, self.c, a))
        return DirichletCharacter(modulus, self.order, table)

    def theta_coefficient(self, n):
        """
        a_n(psi) = sum of psi over the ideals of norm n coprime to c.
        a_0 is h/w for the trivial character and 0 otherwise.
        """
        if n < 0:
            raise DomainError(f"coefficient index must be non-negative, got {n}")
        if n == 0:
            if self.is_trivial():
                w = self.field.w if self.c == 1 else 2
                return CyclotomicElement.rational(Fraction(self.group.h, w), self.order)
            return CyclotomicElement.rational(0, self.order)
        if math.gcd(n, self.c) > 1:
            return CyclotomicElement.rational(0, self.order)
        counts = [0] * self.order
        for ideal in ideals_of_norm(self.field, self.c, n):
            counts[self.exponent(ideal)] += 1
        value = CyclotomicElement.rational(0, self.order)
        for k, count in enumerate(counts):
            if count:
                value = value + CyclotomicElement.zeta(self.order, k) * count
        return value

    def frobenius_data(self, p):
        return frobenius_data(self, p)

    def __eq__(self, other):
        return (
            isinstance(other, RingClassCharacter)
            and (self.field, self.c, self.exponents) == (other.field, other.c, other.exponents)
        )

    def __hash__(self):
        return hash((self.field, self.c, self.exponents))

    def __repr__(self):
        return f"RingClassCharacter(D={self.field.D}, c={self.c}, exponents={list(self.exponents)})"


def principal_rational_ideal(field, c, a):
    """The ideal (a) for an integer a coprime to c"""
    factors = []
    for q, e in factorint(a).items():
        splitting = prime_splitting(field, c, q)
        if splitting.kind == SPLIT:
            factors += [(splitting.prime, e), (splitting.conjugate, e)]
        elif splitting.kind == INERT:
            factors.append((splitting.prime, e))
        else:
            factors.append((splitting.prime, 2 * e))
    return Ideal(field, c, factors)


def frobenius_data(psi, p):
    """
    (psi(P), psi(Pbar)) for the distinguished prime P above a split p.
    """
    field = psi.field
    c = getattr(psi, "c", 1)
    if (field.D * c * c) % p == 0:
        raise DomainError(f"{p} divides D_K c^2")
    splitting = prime_splitting(field, c, p)
    if splitting.kind != SPLIT:
        raise DomainError(f"{p} is {splitting.kind} in Q(sqrt(-{field.D}))")
    alpha = psi.evaluate(Ideal(field, c, [(splitting.prime, 1)]))
    beta = psi.evaluate(Ideal(field, c, [(splitting.conjugate, 1)]))
    expected = psi.norm_relation(p) if hasattr(psi, "norm_relation") else 1
    if alpha * beta != expected:
        raise IdentityFailure(f"psi(P) psi(Pbar) != {expected} at p = {p}")
    return FrobeniusData(p, alpha, beta)


def scale_by_norm_power(coeffs, k):
    """Coefficients of psi*N^k: a_n -> n^k a_n (a_0 kept only for k = 0)"""
    scaled = []
    for n, a in enumerate(coeffs):
        if n == 0:
            scaled.append(a if k == 0 else 0 * a)
        else:
            scaled.append(a * Fraction(n) ** k)
    return scaled


class InfinityTypeCharacter:
    """
    psi_k((alpha)) = conj(alpha)^k on a field of class number one, k even.
    """

    def __init__(self, field, k):
        if k < 0 or k % 2:
            raise DomainError(f"infinity type weight must be even and non-negative, got {k}")
        if field.class_number != 1:
            raise DomainError(f"infinity type characters need h_K = 1, Q(sqrt(-{field.D})) has h = {field.class_number}")
        if k % field.w:
            raise DomainError(f"conj(alpha)^{k} is not well defined with {field.w} units")
        self.field = field
        self.k = k
        self.c = 1

    def evaluate(self, ideal):
        """QuadraticNumber conj(gamma)^k for a generator gamma of the ideal"""
        return ideal_generator(ideal).conjugate() ** self.k

    __call__ = evaluate

    def prime_value(self, prime):
        return prime_generator(self.field, prime).conjugate() ** self.k

    def norm_relation(self, p):
        return p ** self.k

    def theta_coefficient(self, n):
        """Rational coefficient a_n = sum of conj(gamma)^k over ideals of norm n"""
        if n == 0:
            return Fraction(1, self.field.w) if self.k == 0 else Fraction(0)
        total = 0
        for ideal in ideals_of_norm(self.field, 1, n):
            total = self.evaluate(ideal) + total
        if total == 0:
            return Fraction(0)
        if not total.is_rational():
            raise IdentityFailure(f"theta coefficient a_{n} is not rational: {total!r}")
        return total.u

    def frobenius_data(self, p):
        return frobenius_data(self, p)

    def to_json(self):
        return {"D_K": self.field.D, "c": 1, "infinity_type": [0, self.k]}

    def __repr__(self):
        return f"InfinityTypeCharacter(D={self.field.D}, k={self.k})"
