"""
Euler factors: labelled roots of Hecke polynomials, local factors of Rankin
convolutions, the ratio of bad Euler factors between the Rankin L-function
of (g, f) and L(f, psi, s), and truncated Dirichlet series.
"""

import logging
import math
from fractions import Fraction

import mpmath
from sympy import primefactors

from starkrankin.elliptic import bad_prime_aq, trace_ap
from starkrankin.exactalg import CyclotomicElement, RootExtension, lcm, simplify
from starkrankin.exceptions import DomainError
from starkrankin.heckechar import InfinityTypeCharacter
from starkrankin.qexp import render_coefficient
from starkrankin.quadfield import INERT, RAMIFIED, Ideal, QuadraticNumber, ideals_of_norm, prime_splitting

logger = logging.getLogger(__name__)

# roots of unity of these extra orders are tried before adjoining a root
ROOT_OF_UNITY_SEARCH = 12


def _as_ring(value):
    if isinstance(value, QuadraticNumber):
        return simplify(value.to_cyclotomic()) if not value.is_rational() else value.u
    if isinstance(value, int):
        return Fraction(value)
    return value


def _order(value):
    return value.order if isinstance(value, CyclotomicElement) else 1


def _rational_sqrt(value):
    if value < 0:
        return None
    num, den = math.isqrt(value.numerator), math.isqrt(value.denominator)
    if num * num == value.numerator and den * den == value.denominator:
        return Fraction(num, den)
    return None


def _valuation(value, q):
    if isinstance(value, Fraction):
        if value == 0:
            return math.inf
        v, num, den = 0, value.numerator, value.denominator
        while num % q == 0:
            num //= q
            v += 1
        while den % q == 0:
            den //= q
            v -= 1
        return v
    return 0


def _in_upper_half(value):
    """arg(value) in [0, pi) under the standard embedding"""
    if isinstance(value, Fraction):
        return value > 0
    z = value.to_complex(64)
    if isinstance(value, CyclotomicElement) and value == value.conjugate():
        return z.real > 0
    return z.imag > 0 or (z.imag == 0 and z.real > 0)


def _coordinates(value):
    if isinstance(value, CyclotomicElement):
        return value.coeffs
    if isinstance(value, Fraction):
        return (value,)
    return ()


class HeckeRoots:
    """
    The roots (alpha, beta) of X^2 - a_q X + chi(q) q^(k-1) at q, or
    (a_q, 0) at a bad prime.
    """

    def __init__(self, q, alpha, beta, a_q=None, labelling="valuation"):
        self.q = q
        self.alpha = alpha
        self.beta = beta
        self.a_q = alpha + beta if a_q is None else a_q
        self.labelling = labelling

    def __iter__(self):
        yield self.alpha
        yield self.beta

    @property
    def bad(self):
        return self.beta == 0 and self.labelling == "bad"

    def to_json(self):
        return {
            "q": self.q,
            "alpha": render_coefficient(self.alpha),
            "beta": render_coefficient(self.beta),
            "labelling": self.labelling,
        }

    def __repr__(self):
        return f"HeckeRoots(q={self.q}, alpha={self.alpha}, beta={self.beta})"


def label_roots(q, first, second, a_q=None):
    """
    Order a root pair: smaller q-valuation first, then the root with argument
    in [0, pi), then lexicographically smaller coordinates.
    """
    def key(root):
        return (_valuation(root, q), 0 if _in_upper_half(root) else 1, _coordinates(root))

    alpha, beta = sorted((simplify(first), simplify(second)), key=key)
    return HeckeRoots(q, alpha, beta, a_q=a_q)


def hecke_roots(a_q, chi_q, q, k, bad=False):
    """
    Roots of X^2 - a_q X + chi_q q^(k-1).

    Arguments:
        a_q: Hecke eigenvalue (rational, cyclotomic or quadratic)
        chi_q: nebentype value at q, 0 when q divides the level
        q: prime
        k: weight
        bad: q divides the level
    Returns:
        HeckeRoots; irrational roots live in a RootExtension over Q(a_q)
    """
    a = _as_ring(a_q)
    if bad or chi_q == 0:
        return HeckeRoots(q, simplify(a), Fraction(0), a_q=a, labelling="bad")
    n = _as_ring(chi_q) * Fraction(q) ** (k - 1)
    a, n = simplify(a), simplify(n)
    if isinstance(a, Fraction) and isinstance(n, Fraction):
        root = _rational_sqrt(a * a - 4 * n)
        if root is not None:
            return label_roots(q, (a + root) / 2, (a - root) / 2, a_q=a)
    if k == 1:
        M = ROOT_OF_UNITY_SEARCH * lcm(_order(a), _order(n))
        for j in range(M):
            alpha = CyclotomicElement.zeta(M, j)
            beta = a - alpha
            if alpha * beta == n:
                return label_roots(q, alpha, beta, a_q=a)
    extension = RootExtension.over(a, n, name=f"alpha{q}")
    rho = extension.generator()
    logger.debug(f"Hecke polynomial at {q} is irreducible over Q(a_q); adjoining {extension!r}")
    return HeckeRoots(q, rho, a - rho, a_q=a, labelling="upper root")


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


class LocalFactor:
    """Polynomial 1 + c_1 X + ... in X = q^-s (the inverse Euler factor)"""

    def __init__(self, q, coeffs):
        coeffs = [simplify(c) for c in coeffs]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if coeffs[0] != 1:
            raise DomainError(f"local factor at {q} has constant term {coeffs[0]}")
        self.q = q
        self.coeffs = coeffs

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def evaluate(self, X):
        value = Fraction(0)
        for c in reversed(self.coeffs):
            value = value * X + c
        return value

    def series(self, count):
        """Coefficients b_0..b_count of 1/P(X), the Dirichlet coefficients at q^j"""
        inverse = [Fraction(1)]
        for j in range(1, count + 1):
            total = Fraction(0)
            for i in range(1, min(j, self.degree) + 1):
                total = total + self.coeffs[i] * inverse[j - i]
            inverse.append(simplify(-total))
        return inverse

    def to_json(self):
        return {"q": self.q, "coefficients": [render_coefficient(c) for c in self.coeffs]}

    def __repr__(self):
        return f"LocalFactor(q={self.q}, degree={self.degree})"


def rankin_local_factor(roots_g, roots_f):
    """prod over root pairs of (1 - rho sigma X)"""
    if roots_g.q != roots_f.q:
        raise DomainError(f"roots at different primes {roots_g.q} and {roots_f.q}")
    poly = [Fraction(1)]
    for rho in roots_g:
        for sigma in roots_f:
            product = rho * sigma
            if product != 0:
                poly = _poly_mul(poly, [Fraction(1), -product])
    return LocalFactor(roots_g.q, poly)


def prime_power_coefficients(roots, count):
    """a_{q^j} = sum_{i <= j} alpha^i beta^(j-i) for j = 0..count"""
    alpha, beta = roots
    out = []
    for j in range(count + 1):
        total = Fraction(0)
        for i in range(j + 1):
            total = total + alpha ** i * beta ** (j - i)
        out.append(simplify(total))
    return out


def f_roots(E, q):
    """Hecke roots of the newform of E at q"""
    if not E.is_good(q):
        a_q = Fraction(bad_prime_aq(E, q))
        return HeckeRoots(q, a_q, Fraction(0), a_q=a_q, labelling="bad")
    return hecke_roots(trace_ap(E, q), 1, q, 2)


def _infinity_value(field, prime, l):
    k = 2 * l + 2
    if k == 0:
        return Fraction(1)
    return _as_ring(InfinityTypeCharacter(field, k).prime_value(prime))


def g_roots(psi, q, l=-1):
    """
    Hecke roots at q of the theta series of psi * psi_(2l+2) (weight 2l+3);
    l = -1 is the weight one form theta_psi itself.
    """
    field, c = psi.field, psi.c
    if c % q == 0:
        return HeckeRoots(q, Fraction(0), Fraction(0), a_q=Fraction(0), labelling="bad")
    splitting = prime_splitting(field, c, q)
    if splitting.kind == INERT:
        root = Fraction(q) ** (l + 1)
        return label_roots(q, root, -root, a_q=Fraction(0))

    def value(prime):
        result = psi(Ideal(field, c, [(prime, 1)]))
        if l > -1:
            result = result * _infinity_value(field, prime, l)
        return simplify(result)

    if splitting.kind == RAMIFIED:
        a_q = value(splitting.prime)
        return HeckeRoots(q, a_q, Fraction(0), a_q=a_q, labelling="bad")
    return label_roots(q, value(splitting.prime), value(splitting.conjugate))


class EulerFactor:
    """Numerator and denominator contributed by one q | N"""

    def __init__(self, q, kind, numerator, denominator):
        self.q = q
        self.kind = kind
        self.numerator = numerator
        self.denominator = denominator

    def to_json(self):
        return {
            "q": self.q,
            "kind": self.kind,
            "numerator": render_coefficient(self.numerator),
            "denominator": render_coefficient(self.denominator),
        }


class EulerRatio:
    """The product of bad Euler factor ratios over q | N"""

    def __init__(self, value, factors, nonvanishing, reconstructed=False):
        self.value = value
        self.factors = factors
        self.nonvanishing = nonvanishing
        self.reconstructed = reconstructed

    def to_json(self):
        return {
            "value": render_coefficient(self.value) if self.value is not None else None,
            "nonvanishing": self.nonvanishing,
            "reconstructed": self.reconstructed,
            "factors": [f.to_json() for f in self.factors],
        }


def _bad_ratio(scenario, s, l, literal):
    E, psi, N = scenario.E, scenario.psi, scenario.N
    D, N_E = psi.field.D, scenario.N_E
    factors = []
    for q in primefactors(N):
        X = Fraction(1) / Fraction(q) ** s
        rf = f_roots(E, q)
        rg = g_roots(psi, q, l)
        a_f = rf.a_q
        if N_E % q == 0 and D % q == 0:
            kind = "N_E and D_K"
            numerator = 1 + X if literal else 1 - a_f * rg.alpha * X
        elif N_E % q == 0:
            kind = "N_E only"
            if literal:
                numerator = (1 - a_f * X) ** 2
            else:
                numerator = (1 - a_f * rg.alpha * X) * (1 - a_f * rg.beta * X)
        else:
            kind = "D_K c^2 only"
            square = Fraction(q) * X * X if literal else Fraction(q) * rg.a_q * rg.a_q * X * X
            numerator = 1 - a_f * rg.a_q * X + square
        denominator = 1 - rf.alpha * rg.alpha * X
        factors.append(EulerFactor(q, kind, simplify(numerator), simplify(denominator)))
    nonvanishing = all(f.numerator != 0 and f.denominator != 0 for f in factors)
    if any(f.denominator == 0 for f in factors):
        logger.error(f"a bad Euler factor denominator vanishes for {scenario!r}")
        return EulerRatio(None, factors, False)
    value = Fraction(1)
    try:
        for f in factors:
            value = value * f.numerator / f.denominator
    except DomainError as e:
        logger.warning(f"Euler factors live in unrelated extensions, value left unassembled: {e}")
        return EulerRatio(None, factors, nonvanishing)
    return EulerRatio(simplify(value), factors, nonvanishing)


def euler_ratio_bad(scenario, s=1, literal=False):
    """
    Eul_N(s): ratio of the bad Euler factors of L(g x f, s) and L(f, psi, s)
    at the primes q | N.

    Arguments:
        scenario: object with E, psi, N_E and N
        s: integer point of evaluation
        literal: use (1 + q^-s) at q | (N_E, D_K) and (1 - a_q q^-s)^2 at
            q || N_E instead of the local Rankin factors
    Returns:
        EulerRatio
    """
    return _bad_ratio(scenario, s, -1, literal)


def euler_ratio_hr(scenario, l, literal=False):
    """
    Eul^HR_N(l): the same ratio for g replaced by the weight 2l+3 member of
    the CM family, at s = l + 2. Needs h_K = 1 when l > -1.
    """
    if l < -1:
        raise DomainError(f"l must be at least -1, got {l}")
    return _bad_ratio(scenario, l + 2, l, literal)


def _petersson_local(field, roots, k):
    """
    Local ratio at q of the Rankin-Selberg series sum a_n(h) a_n(h^rho) q^(-js)
    at s = k, for h the U_q-eigen oldform g(z) - beta g(qz) against h = g.
    The roots of g^rho are (chi(q) beta, chi(q) alpha).
    """
    q = roots.q
    chi = Fraction(field.kronecker(q))
    conjugate = HeckeRoots(q, chi * roots.beta, chi * roots.alpha, labelling="conjugate")
    X = Fraction(1, q ** k)
    norm = roots.alpha * roots.beta
    numerator = rankin_local_factor(roots, conjugate).evaluate(X)
    denominator = (1 - roots.alpha * conjugate.alpha * X) * (1 - norm * norm * X * X)
    return simplify(numerator), simplify(denominator)


def euler_ratio_pet(scenario, l):
    """
    Eul^Pet_N(l) = <g_breve, g_breve>_N / <g, g>_N for g the weight 2l+3
    member of the CM family and g_breve its oldform with U_q-eigenvalue
    alpha_q at every q | N prime to D_K c^2.

    Both norms are the residue at s = 2l+3 of sum a_n(h) a_n(h^rho) n^-s
    times the same level N constant, so the ratio is a product of local
    ratios; primes dividing D_K c^2 contribute 1. Needs h_K = 1 when l > -1.
    Scenarios with N > D_K c^2 are marked reconstructed.
    """
    if l < -1:
        raise DomainError(f"l must be at least -1, got {l}")
    psi = scenario.psi
    level = psi.field.D * psi.c ** 2
    factors = []
    for q in primefactors(scenario.N):
        if level % q == 0:
            factors.append(EulerFactor(q, "level of g", Fraction(1), Fraction(1)))
            continue
        numerator, denominator = _petersson_local(psi.field, g_roots(psi, q, l), 2 * l + 3)
        factors.append(EulerFactor(q, "oldform at q", numerator, denominator))
    value = Fraction(1)
    for f in factors:
        value = value * f.numerator / f.denominator
    value = simplify(value)
    reconstructed = scenario.N > level
    if reconstructed:
        logger.warning(f"Petersson discrepancy at N = {scenario.N} > {level} is reconstructed from local ratios")
    return EulerRatio(value, factors, value != 0, reconstructed=reconstructed)


class PartialSum:
    """sum_{n <= terms} a_n n^-s with a crude tail estimate"""

    def __init__(self, value, tail, terms):
        self.value = value
        self.tail = tail
        self.terms = terms

    def __repr__(self):
        return f"PartialSum({self.value}, tail<={self.tail}, terms={self.terms})"


def _coefficient_size(value, precision_bits):
    if isinstance(value, Fraction):
        return mpmath.mpf(abs(value.numerator)) / value.denominator
    return abs(value.to_complex(precision_bits))


def _to_mpc(value, precision_bits):
    if isinstance(value, Fraction):
        return mpmath.mpc(mpmath.mpf(value.numerator) / value.denominator)
    return value.to_complex(precision_bits)


def dirichlet_partial_sum(coeffs, s, terms=None, abscissa=1, precision_bits=256):
    """
    Truncated Dirichlet series.

    Arguments:
        coeffs: a_0, a_1, ... (a_0 ignored)
        s: real point with s > abscissa
        terms: number of terms (defaults to every supplied coefficient)
        abscissa: growth exponent, |a_n| << n^(abscissa - 1)
    Returns:
        PartialSum
    """
    if s <= abscissa:
        raise DomainError(f"s = {s} is outside the half plane Re(s) > {abscissa}")
    terms = len(coeffs) - 1 if terms is None else min(terms, len(coeffs) - 1)
    with mpmath.workprec(precision_bits):
        total = mpmath.mpc(0)
        size = mpmath.mpf(0)
        for n in range(1, terms + 1):
            a = simplify(coeffs[n])
            if a == 0:
                continue
            total += _to_mpc(a, precision_bits) / mpmath.power(n, s)
            size = max(size, _coefficient_size(a, precision_bits) / mpmath.power(n, abscissa - 1))
        tail = size * mpmath.power(max(terms, 1), abscissa - s) / (s - abscissa)
        return PartialSum(+total, +tail, terms)


def hecke_partial_sum(psi, s, terms, precision_bits=256):
    """L(psi, s) summed over the ideals of norm at most terms"""
    field, c = psi.field, psi.c
    coeffs = [Fraction(0)]
    for n in range(1, terms + 1):
        if math.gcd(n, c) > 1:
            coeffs.append(Fraction(0))
            continue
        total = Fraction(0)
        for ideal in ideals_of_norm(field, c, n):
            total = _as_ring(psi(ideal)) + total
        coeffs.append(simplify(total))
    return dirichlet_partial_sum(coeffs, s, terms, precision_bits=precision_bits)
