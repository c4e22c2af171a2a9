"""
Truncated q-expansions over exact coefficient rings and the operators
acting on them: d, U_p, V_p, p-depletion, p-stabilisation, Hecke
operators, products and Eisenstein series.
"""

import logging
import math
from fractions import Fraction

import sympy
from sympy import divisors

from starkrankin.exactalg import CyclotomicElement, generalized_bernoulli, lcm, simplify
from starkrankin.exceptions import DomainError, TruncationError

logger = logging.getLogger(__name__)

MIN_TRUNCATION = 30


class QExpansion:
    """
    a_0 + a_1 q + ... + a_Q q^Q + O(q^(Q+1)).

    Coefficients may be Fractions, CyclotomicElements, RootExtensionElements
    or PadicNumbers; weight, level and nebentype are carried as metadata.
    """

    __slots__ = ("coeffs", "weight", "level", "character", "min_truncation")

    def __init__(self, coeffs, weight=None, level=None, character=None, min_truncation=MIN_TRUNCATION):
        coeffs = tuple(Fraction(c) if isinstance(c, int) else c for c in coeffs)
        if not coeffs:
            raise TruncationError("a q-expansion needs at least the constant term")
        if len(coeffs) - 1 < min_truncation:
            raise TruncationError(
                f"truncation {len(coeffs) - 1} is below the minimum {min_truncation}",
                truncation=len(coeffs) - 1,
            )
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "weight", weight)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "character", character)
        object.__setattr__(self, "min_truncation", min_truncation)

    def __setattr__(self, name, value):
        raise AttributeError("QExpansion is immutable")

    @property
    def truncation(self):
        return len(self.coeffs) - 1

    def derive(self, coeffs, **changes):
        """A new expansion with the same metadata except for the given changes"""
        meta = dict(weight=self.weight, level=self.level, character=self.character,
                    min_truncation=self.min_truncation)
        meta.update(changes)
        return QExpansion(coeffs, **meta)

    def __getitem__(self, n):
        if isinstance(n, slice):
            return self.coeffs[n]
        if n < 0:
            raise IndexError(n)
        if n > self.truncation:
            raise TruncationError(f"coefficient a_{n} is beyond the truncation {self.truncation}")
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, Q):
        if Q > self.truncation:
            raise TruncationError(f"cannot extend truncation {self.truncation} to {Q}")
        return self.derive(self.coeffs[:Q + 1])

    def __add__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        Q = min(self.truncation, other.truncation)
        return self.derive([a + b for a, b in zip(self.coeffs[:Q + 1], other.coeffs)])

    def __sub__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        Q = min(self.truncation, other.truncation)
        return self.derive([a - b for a, b in zip(self.coeffs[:Q + 1], other.coeffs)])

    def __neg__(self):
        return self.derive([-a for a in self.coeffs])

    def scale(self, scalar):
        return self.derive([a * scalar for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, QExpansion):
            return product(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def agrees_with(self, other, upto=None):
        """Coefficientwise equality on the common range (optionally capped at upto)"""
        Q = min(self.truncation, other.truncation)
        if upto is not None:
            Q = min(Q, upto)
        return all(a == b for a, b in zip(self.coeffs[:Q + 1], other.coeffs[:Q + 1]))

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        return self.truncation == other.truncation and self.agrees_with(other)

    __hash__ = None

    def is_zero(self):
        return all(a == 0 for a in self.coeffs)

    def to_json(self):
        return {
            "weight": self.weight,
            "level": self.level,
            "truncation": self.truncation,
            "coeffs": [render_coefficient(a) for a in self.coeffs],
        }

    def __repr__(self):
        head = ", ".join(str(a) for a in self.coeffs[:6])
        return f"QExpansion([{head}, ...], Q={self.truncation}, k={self.weight}, N={self.level})"


def render_coefficient(value):
    """Exact coefficient as JSON: rationals as "a/b", cyclotomics as coordinate vectors"""
    value = simplify(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, CyclotomicElement):
        return value.to_json()
    if hasattr(value, "to_dict"):
        return value.to_dict()
    return str(value)


def zero_series(Q, **meta):
    return QExpansion([Fraction(0)] * (Q + 1), **meta)


def serre_d(f):
    """d = q d/dq: a_n -> n a_n"""
    weight = None if f.weight is None else f.weight + 2
    return f.derive([a * n for n, a in enumerate(f.coeffs)], weight=weight)


def serre_d_inverse(f, p=None):
    """
    Inverse of d on series supported on indices prime to p: a_n -> a_n / n.
    """
    for n, a in enumerate(f.coeffs):
        if a != 0 and (n == 0 or (p is not None and n % p == 0)):
            raise DomainError(f"d^-1 needs a_{n} = 0 (got {a})")
    weight = None if f.weight is None else f.weight - 2
    coeffs = [f.coeffs[0]] + [a / n if a != 0 else a for n, a in enumerate(f.coeffs) if n]
    return f.derive(coeffs, weight=weight)


def u_operator(f, p):
    """U_p: a_n -> a_{pn}, truncation floor(Q/p)"""
    Q = f.truncation // p
    return f.derive([f.coeffs[p * n] for n in range(Q + 1)])


def v_operator(f, p, cap=None):
    """V_p: f(q) -> f(q^p), truncation Q*p (or cap, if smaller)"""
    Q = f.truncation * p if cap is None else min(f.truncation * p, cap)
    zero = 0 * f.coeffs[0]
    coeffs = [zero] * (Q + 1)
    for n in range(Q // p + 1):
        coeffs[p * n] = f.coeffs[n]
    level = None if f.level is None else f.level * p
    return f.derive(coeffs, level=level)


def deplete(f, p):
    """f^[p] = (1 - UV) f: zero every a_n with p | n"""
    return f.derive([0 * a if n % p == 0 else a for n, a in enumerate(f.coeffs)])


def _character_value(chi, level, n):
    if chi is None:
        return 1 if level is None or math.gcd(n, level) == 1 else 0
    if level is not None and math.gcd(n, level) > 1:
        return 0
    return chi(n)


def stabilize(g, alpha, beta, p, weight=None):
    """
    g_alpha(q) = g(q) - beta g(q^p), after checking that alpha, beta are the
    roots of X^2 - a_p X + chi(p) p^(k-1).
    """
    k = g.weight if weight is None else weight
    if alpha + beta != g[p]:
        raise DomainError(f"alpha + beta != a_{p}")
    expected = _character_value(g.character, g.level, p) * Fraction(p) ** (k - 1)
    if alpha * beta != expected:
        raise DomainError(f"alpha * beta != chi({p}) {p}^{k - 1}")
    if beta == 0:
        return g
    shifted = v_operator(g, p, cap=g.truncation)
    level = None if g.level is None else lcm(g.level, p)
    return g.derive([a - beta * b for a, b in zip(g.coeffs, shifted.coeffs)], level=level)


def hecke_Tl(f, l, k=None, chi=None):
    """
    T_l: a_n -> a_{nl} + chi(l) l^(k-1) a_{n/l}, with chi(l) = 0 for l | N.
    """
    if not sympy.isprime(l):
        raise DomainError(f"{l} is not prime")
    k = f.weight if k is None else k
    chi = f.character if chi is None else chi
    factor = _character_value(chi, f.level, l)
    if factor != 0:
        factor = factor * Fraction(l) ** (k - 1)
    Q = f.truncation // l
    coeffs = []
    for n in range(Q + 1):
        value = f.coeffs[n * l]
        if n % l == 0 and factor != 0:
            value = value + factor * f.coeffs[n // l]
        coeffs.append(value)
    return f.derive(coeffs)


def hecke_eigen_check(f, l, k=None, chi=None):
    """True iff T_l f == a_l(f) f up to the truncation of T_l f (requires a_1 = 1)"""
    if f[1] != 1:
        raise DomainError("eigenform check needs a normalised series (a_1 = 1)")
    image = hecke_Tl(f, l, k, chi)
    eigenvalue = f[l]
    return all(image.coeffs[n] == eigenvalue * f.coeffs[n] for n in range(1, image.truncation + 1))


def product(f, g):
    """f*g truncated at the smaller truncation"""
    Q = min(f.truncation, g.truncation)
    coeffs = []
    for n in range(Q + 1):
        total = 0 * f.coeffs[0] * g.coeffs[0]
        for i in range(n + 1):
            a = f.coeffs[i]
            if a != 0:
                b = g.coeffs[n - i]
                if b != 0:
                    total = total + a * b
        coeffs.append(total)
    weight = None if f.weight is None or g.weight is None else f.weight + g.weight
    level = None if f.level is None or g.level is None else lcm(f.level, g.level)
    return QExpansion(coeffs, weight=weight, level=level, character=None,
                      min_truncation=min(f.min_truncation, g.min_truncation))


def breve(f, weights, cap=None):
    """
    sum_d mu_d f(q^d) for an oldform choice {d: mu_d}.
    """
    Q = f.truncation if cap is None else cap
    total = None
    for d, mu in sorted(weights.items()):
        term = v_operator(f, d, cap=Q).scale(mu) if d > 1 else f.truncate(min(Q, f.truncation)).scale(mu)
        total = term if total is None else total + term
    if total is None:
        raise DomainError("oldform choice has no terms")
    return total


def sigma_chi(n, k, chi, level):
    """sigma_{k-1,chi}(n) = sum_{d | n} chi_N(d) d^(k-1)"""
    total = Fraction(0)
    for d in divisors(n):
        value = _character_value(chi, level, d)
        if value != 0:
            total = value * Fraction(d) ** (k - 1) + total
    return simplify(total)


def eisenstein_series(k, chi, N=None, Q=200, min_truncation=MIN_TRUNCATION):
    """
    E_{k,chi_N} = a_0 + sum_n sigma_{k-1,chi_N}(n) q^n.

    Arguments:
        k: weight, with chi(-1) = (-1)^k
        chi: Dirichlet character of modulus N_chi
        N: level, a multiple of N_chi (defaults to N_chi)
        Q: truncation
    Returns:
        QExpansion with a_0 = -B_{k,chi}/(2k) prod_{q | N, q not | N_chi} (1 - chi(q) q^(k-1))
    """
    if k < 1:
        raise DomainError(f"weight must be positive, got {k}")
    if chi.parity != (-1) ** k:
        raise DomainError(f"chi(-1) = {chi.parity} but the weight {k} needs {(-1) ** k}")
    N_chi = chi.modulus
    N = N_chi if N is None else N
    if N % N_chi:
        raise DomainError(f"level {N} is not a multiple of the modulus {N_chi}")
    constant = -generalized_bernoulli(k, chi) / (2 * k)
    for q in sympy.primefactors(N):
        if N_chi % q:
            constant = constant * (1 - _character_value(chi, None, q) * Fraction(q) ** (k - 1))
    coeffs = [simplify(constant)]
    coeffs += [sigma_chi(n, k, chi, N) for n in range(1, Q + 1)]
    logger.debug(f"Eisenstein series E_{k} of level {N}, a_0 = {coeffs[0]}")
    return QExpansion(coeffs, weight=k, level=N, character=chi, min_truncation=min_truncation)


def eisenstein_normalisation(k, chi):
    """
    The factor N^k (k-1)! / (2 (-2 pi i)^k tau(chi^-1)) relating the
    analytically normalised Eisenstein series to the q-expansion above,
    as a sympy expression. tau is kept as a symbol unless chi is quadratic,
    in which case tau(chi) = sqrt(chi(-1) N).
    """
    N = chi.modulus
    if chi.order <= 2 and chi.is_primitive():
        tau = sympy.sqrt(chi.parity * N)
    else:
        tau = sympy.Symbol("tau")
    return sympy.simplify(N ** k * sympy.factorial(k - 1) / (2 * (-2 * sympy.pi * sympy.I) ** k * tau))


def from_coefficients(function, Q, **meta):
    """Expansion with a_n = function(n) for n = 0..Q"""
    return QExpansion([function(n) for n in range(Q + 1)], **meta)
