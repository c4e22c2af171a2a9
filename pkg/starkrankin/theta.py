"""
Theta series of Hecke characters of imaginary quadratic fields.
"""

import logging
import math
from fractions import Fraction

import sympy

from starkrankin.exceptions import DomainError
from starkrankin.heckechar import InfinityTypeCharacter, RingClassCharacter
from starkrankin.qexp import MIN_TRUNCATION, QExpansion, hecke_Tl, render_coefficient
from starkrankin.quadfield import QuadraticNumber

logger = logging.getLogger(__name__)

WEIGHT_NOTE = (
    "weight counted as k1 + k2 + 1 (weight one for finite order characters, "
    "k + 1 for infinity type (0, k))"
)


class ThetaSeries:
    """
    theta_psi = sum_n a_n(psi) q^n together with its modular data.
    """

    def __init__(self, character, expansion, weight, level, nebentype, cuspidal):
        self.character = character
        self.expansion = expansion
        self.weight = weight
        self.level = level
        self.nebentype = nebentype
        self.cuspidal = cuspidal
        self.weight_note = WEIGHT_NOTE

    @property
    def eisenstein(self):
        return not self.cuspidal

    def __getitem__(self, n):
        return self.expansion[n]

    @property
    def truncation(self):
        return self.expansion.truncation

    def to_json(self):
        doc = self.expansion.to_json()
        doc.update(
            character=self.character.to_json(),
            cuspidal=self.cuspidal,
            weight_note=self.weight_note,
        )
        return doc

    def __repr__(self):
        return f"ThetaSeries({self.character!r}, weight={self.weight}, level={self.level}, Q={self.truncation})"


def theta_series(psi, Q=200, min_truncation=MIN_TRUNCATION):
    """
    Build theta_psi to truncation Q.

    Arguments:
        psi: RingClassCharacter or InfinityTypeCharacter
        Q: truncation
    Returns:
        ThetaSeries
    """
    field = psi.field
    if isinstance(psi, InfinityTypeCharacter):
        weight = psi.k + 1
        level = field.D
        cuspidal = psi.k > 0
    elif isinstance(psi, RingClassCharacter):
        weight = 1
        level = field.D * psi.c * psi.c
        cuspidal = psi != psi.conjugate_character()
    else:
        raise DomainError(f"unsupported character {psi!r}")
    coeffs = [psi.theta_coefficient(n) for n in range(Q + 1)]
    nebentype = field.character
    expansion = QExpansion(coeffs, weight=weight, level=level, character=nebentype, min_truncation=min_truncation)
    logger.debug(f"theta series of {psi!r} to q^{Q}")
    return ThetaSeries(psi, expansion, weight, level, nebentype, cuspidal)


class EigenformCheck:
    """Outcome of T_l theta == a_l theta at one prime"""

    def __init__(self, prime, passed, checked_upto, eigenvalue, first_failure=None):
        self.prime = prime
        self.passed = passed
        self.checked_upto = checked_upto
        self.eigenvalue = eigenvalue
        self.first_failure = first_failure

    def to_json(self):
        return {
            "prime": self.prime,
            "passed": self.passed,
            "checked_upto": self.checked_upto,
            "eigenvalue": render_coefficient(self.eigenvalue),
            "first_failure": self.first_failure,
        }


def verify_eigenform(theta, primes, Q=None):
    """
    Check T_l theta = a_l(theta) theta coefficientwise for every good prime l.

    Returns:
        dict prime -> EigenformCheck; failures are entries, never raised
    """
    f = theta.expansion if isinstance(theta, ThetaSeries) else theta
    if Q is not None and Q < f.truncation:
        f = f.truncate(Q)
    if f[1] != 1:
        raise DomainError("eigenform check needs a_1 = 1")
    relaxed = f.derive(f.coeffs, min_truncation=0)
    report = {}
    for l in primes:
        if not sympy.isprime(l):
            raise DomainError(f"{l} is not prime")
        upto = f.truncation // l
        if upto < 1:
            report[l] = EigenformCheck(l, False, 0, f[l] if l <= f.truncation else None, first_failure=1)
            continue
        image = hecke_Tl(relaxed, l)
        eigenvalue = f[l]
        failure = next((n for n in range(1, upto + 1) if image.coeffs[n] != eigenvalue * f.coeffs[n]), None)
        report[l] = EigenformCheck(l, failure is None, upto, eigenvalue, failure)
        if failure is not None:
            logger.warning(f"T_{l} eigenform check fails at n = {failure}")
    return report


class FamilyCheck:
    """Hecke roots of theta_{psi_k} at p against {psi_k(P), psi_k(Pbar)}"""

    def __init__(self, p, l, a_p, roots, expected, passed):
        self.p = p
        self.l = l
        self.a_p = a_p
        self.roots = roots
        self.expected = expected
        self.passed = passed

    def to_json(self):
        return {
            "p": self.p,
            "l": self.l,
            "a_p": str(self.a_p),
            "roots": [str(r) for r in self.roots],
            "expected": [str(r) for r in self.expected],
            "passed": self.passed,
        }


def hecke_quadratic_roots(field, a_p, norm):
    """Roots of X^2 - a_p X + norm in K, or None if they do not lie in K"""
    disc = a_p * a_p - 4 * norm
    if disc == 0:
        return (QuadraticNumber(field.D, a_p / 2),) * 2
    t = -disc / field.D
    if t < 0 or t.denominator != 1 or math.isqrt(t.numerator) ** 2 != t.numerator:
        return None
    v = math.isqrt(t.numerator)
    return QuadraticNumber(field.D, a_p / 2, Fraction(v, 2)), QuadraticNumber(field.D, a_p / 2, Fraction(-v, 2))


def family_eigenvalue_check(field, p, l, Q=None):
    """
    For g = theta of psi_{2l+2} (weight 2l+3) solve X^2 - a_p X + p^(2l+2)
    and compare the roots with psi_{2l+2}(P) and psi_{2l+2}(Pbar).
    """
    k = 2 * l + 2
    if k < 0:
        raise DomainError(f"l = {l} gives a negative infinity type")
    psi = InfinityTypeCharacter(field, k)
    Q = p if Q is None else max(Q, p)
    theta = theta_series(psi, Q, min_truncation=0)
    a_p = theta[p]
    frob = psi.frobenius_data(p)
    expected = (frob.alpha, frob.beta)
    roots = hecke_quadratic_roots(field, a_p, Fraction(p) ** k)
    passed = roots is not None and set(roots) == set(expected)
    logger.info(f"family check p={p} l={l}: a_p = {a_p}, passed = {passed}")
    return FamilyCheck(p, l, a_p, roots or (), expected, passed)
