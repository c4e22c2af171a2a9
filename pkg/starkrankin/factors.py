"""
Interpolation factors relating the Hida-Rankin, Katz and BDP p-adic
L-functions, the identities that make them fit together, and the elliptic
Stark constant lambda.

Frobenius values are symbolic: A stands for psi_(2l+2)(P) at the
distinguished prime P above p and B = p^(2l+2)/A for psi_(2l+2)(Pbar).
pi is an indeterminate, sqrtD stands for sqrt(D_K) and psiN for
psi_(2l+2)(N) at the Heegner ideal.
"""

import logging
from fractions import Fraction

import sympy
from sympy import Integer, Rational, Symbol, factorial, primefactors

from starkrankin.elliptic import count_points, trace_ap
from starkrankin.exactalg import CyclotomicElement, RationalFunction, lcm, simplify, to_fraction, verify_rational_identity
from starkrankin.exceptions import DegenerateError, DomainError
from starkrankin.heckechar import frobenius_data
from starkrankin.lfun import euler_ratio_hr, euler_ratio_pet
from starkrankin.padic import embed_scalar, formal_log
from starkrankin.qexp import render_coefficient
from starkrankin.quadfield import SPLIT, class_group, heegner_ideal, prime_splitting

logger = logging.getLogger(__name__)

A = Symbol("A", nonzero=True)
a = Symbol("a")
PI = Symbol("pi", positive=True)
SQRT_D = Symbol("sqrtD", positive=True)
PSI_N = Symbol("psiN", nonzero=True)

EULER_DEGREE_BOUND = 16
DEFAULT_L_RANGE = range(0, 6)


class FactorScenario:
    """
    The data (E, K, c, psi, p) with everything derived from it: the
    Heegner ideal, N = lcm(D_K c^2, N_E), class numbers and the Frobenius
    values of psi at p.
    """

    def __init__(self, E, field, psi, p, label=None, pet_discrepancy=None, zeta_residue=None):
        if E.conductor is None:
            raise DomainError("the curve needs its conductor")
        self.E = E
        self.field = field
        self.psi = psi
        self.c = psi.c
        self.p = p
        self.label = label or f"E{E.conductor}-D{field.D}-p{p}"
        self.N_E = E.conductor
        self.D = field.D
        self.N = lcm(field.D * self.c * self.c, self.N_E)
        self.heegner = heegner_ideal(field, self.N_E, self.c)
        if self.heegner is None:
            raise DomainError(f"Heegner hypothesis fails for N_E = {self.N_E} in Q(sqrt(-{field.D}))")
        if not sympy.isprime(p) or p == 2:
            raise DomainError(f"p = {p} must be an odd prime")
        if self.N % p == 0:
            raise DomainError(f"p = {p} divides N = {self.N}")
        if prime_splitting(field, self.c, p).kind != SPLIT:
            raise DomainError(f"p = {p} does not split in Q(sqrt(-{field.D}))")
        self.h_K = field.class_number
        self.g_K = field.class_group().genus_number
        self.h_c = class_group(-field.D * self.c * self.c).h
        self.w_c = field.w if self.c == 1 else 2
        self.a_p = trace_ap(E, p)
        frob = frobenius_data(psi, p)
        self.psi_p, self.psi_pbar = simplify(frob.alpha), simplify(frob.beta)
        self.psi2_pbar = simplify(frob.beta * frob.beta)
        self.psi_square_trivial = psi.square().is_trivial()
        if not self.psi_square_trivial and self.psi_p == self.psi_pbar:
            raise DomainError(f"psi(P) = psi(Pbar) at p = {p}: the weight one form is not p-regular")
        self.psi_N = simplify(psi(self.heegner))
        self.n_common = sum(1 for q in primefactors(field.D) if self.N_E % q == 0)
        self.pet_discrepancy = pet_discrepancy
        self.zeta_residue = zeta_residue

    @property
    def theorem_applies(self):
        return self.D == self.N_E and self.c == 1

    def to_json(self):
        return {
            "label": self.label,
            "curve": self.E.to_json(),
            "N_E": self.N_E,
            "D_K": self.D,
            "c": self.c,
            "p": self.p,
            "N": self.N,
            "h_K": self.h_K,
            "g_K": self.g_K,
            "h_c": self.h_c,
            "w_c": self.w_c,
            "a_p": self.a_p,
            "heegner_ideal": repr(self.heegner),
            "psi": self.psi.to_json(),
            "psi(P)": render_coefficient(self.psi_p),
            "psi(Pbar)": render_coefficient(self.psi_pbar),
            "psi(N)": render_coefficient(self.psi_N),
        }

    def __repr__(self):
        return f"FactorScenario({self.label})"


def gamma_index(n):
    """[SL_2(Z) : Gamma_0(n)] = n prod_{q | n} (1 + 1/q)"""
    value = Fraction(n)
    for q in primefactors(n):
        value *= Fraction(q + 1, q)
    return int(value)


class FactorContext:
    """
    The constants the symbolic factors depend on. a_p may be left symbolic.
    """

    def __init__(self, p, a_p=None, D=11, N=11, c=1, h_c=1, w_c=2, n_common=1):
        self.p = p
        self.a_p = a if a_p is None else Integer(a_p)
        self.D = D
        self.N = N
        self.c = c
        self.h_c = h_c
        self.w_c = w_c
        self.n_common = n_common
        self.index_ratio = Rational(gamma_index(N), gamma_index(D * c * c))

    @classmethod
    def from_scenario(cls, scenario, symbolic_ap=False):
        return cls(
            scenario.p,
            None if symbolic_ap else scenario.a_p,
            D=scenario.D,
            N=scenario.N,
            c=scenario.c,
            h_c=scenario.h_c,
            w_c=scenario.w_c,
            n_common=scenario.n_common,
        )

    @property
    def variables(self):
        return [A] if self.a_p != a else [A, a]


class SymbolicFactor:
    """A named sympy expression with an exact evaluation hook"""

    def __init__(self, name, expr, l=None):
        self.name = name
        self.expr = expr
        self.l = l

    @property
    def variables(self):
        return sorted(self.expr.free_symbols, key=lambda s: s.name)

    def evaluate(self, **values):
        """Exact value at {symbol name: ring element}"""
        variables = self.variables
        missing = [v.name for v in variables if v.name not in values]
        if missing:
            raise DomainError(f"{self.name} needs values for {missing}")
        function = RationalFunction(self.expr, variables)
        return simplify(function.evaluate([values[v.name] for v in variables]))

    def __mul__(self, other):
        return SymbolicFactor(f"{self.name}*{other.name}", self.expr * other.expr, self.l)

    def __truediv__(self, other):
        return SymbolicFactor(f"{self.name}/({other.name})", self.expr / other.expr, self.l)

    def render(self):
        return str(sympy.factor(self.expr))

    def to_json(self):
        return {"name": self.name, "l": self.l, "expression": self.render()}

    def __repr__(self):
        return f"SymbolicFactor({self.name}, l={self.l})"


def _require_l(l):
    if l < -1:
        raise DomainError(f"l must be at least -1, got {l}")


def _require_factorial(l, name):
    if l < 0:
        raise DomainError(f"{name} involves l! and (l+1)!, undefined at l = {l}")


def _pair(trace, norm, y):
    """(1 - alpha y)(1 - beta y) for the roots of X^2 - trace X + norm"""
    return 1 - trace * y + norm * y ** 2


def beta_theta(ctx, l):
    return Integer(ctx.p) ** (2 * l + 2) / A


def e_HR(ctx, l):
    """E(2l+3, 2, l+2) / (E_1 E_0) with beta_theta = B"""
    _require_l(l)
    p = Integer(ctx.p)
    B = beta_theta(ctx, l)
    E = (1 - ctx.a_p * B * p ** (-l - 2) + B ** 2 * p ** (-2 * l - 3)) ** 2
    E1 = 1 - B ** 2 * p ** (-2 * l - 3)
    E0 = 1 - B ** 2 * p ** (-2 * l - 2)
    return SymbolicFactor("e_HR", E / (E1 * E0), l)


def e_hr_general(l, k, m, beta_g, a_f, n_f, p, chi_p=1):
    """
    e_HR(l, k, j) for g of weight l, f of weight k and l = k + m + 2t,
    j = l - t - 1: the four products of beta_g against the roots of f
    (plain and twisted by chi(p)) over E_1 E_0.
    """
    t, odd = divmod(l - k - m, 2)
    if odd or t < 0:
        raise DomainError(f"l - k - m = {l - k - m} must be even and non-negative")
    p = Integer(p)
    y = beta_g * p ** (t - l + 1)
    E = _pair(a_f, n_f, y) * _pair(a_f * chi_p, n_f * chi_p ** 2, y)
    E1 = 1 - beta_g ** 2 * p ** (-l)
    E0 = 1 - beta_g ** 2 * p ** (1 - l)
    return SymbolicFactor("e_HR(l,k,m)", E / (E1 * E0))


def f_hr_general(l, k, m, N):
    """(-1)^t (m+t-1)! (j-1)! (iN)^m / (2^(l-1) (2 pi)^(l+m-1) tau(chi_K)), tau = i sqrtD"""
    t, odd = divmod(l - k - m, 2)
    if odd or t < 0 or m < 1:
        raise DomainError(f"(l, k, m) = {(l, k, m)} is not an admissible triple")
    j = l - t - 1
    tau = sympy.I * SQRT_D
    expr = (-1) ** t * factorial(m + t - 1) * factorial(j - 1) * (sympy.I * N) ** m
    expr = expr / (Integer(2) ** (l - 1) * (2 * PI) ** (l + m - 1) * tau)
    return SymbolicFactor("f_HR(l,k,m)", sympy.simplify(expr))


def critical_range(l, k):
    """Critical j in [(l+k-1)/2, l-1]"""
    return list(range(-(-(l + k - 1) // 2), l))


def e_K(ctx, l):
    """(1 - psi_(2l+2)^-2(P) p^(2l+2)) (1 - psi_(2l+2)^2(Pbar) / p^(2l+3))"""
    _require_l(l)
    p = Integer(ctx.p)
    B = beta_theta(ctx, l)
    return SymbolicFactor("e_K", (1 - p ** (2 * l + 2) / A ** 2) * (1 - B ** 2 / p ** (2 * l + 3)), l)


def f_K(ctx, l):
    """(2 pi / sqrtD)^(2l+1) (2l+2)!"""
    _require_l(l)
    return SymbolicFactor("f_K", (2 * PI / SQRT_D) ** (2 * l + 1) * factorial(2 * l + 2), l)


def e_katz(psi_wp, psi_wpbar_inv, p):
    """(1 - psi(P)/p)(1 - psi^-1(Pbar)) for a character in the interpolation range"""
    return (1 - psi_wp / Integer(p)) * (1 - psi_wpbar_inv)


def f_katz(k1, k2):
    """(k1 - 1)! D^(k2/2) / (2 pi)^k2 for infinity type (k1, k2)"""
    return factorial(k1 - 1) * SQRT_D ** k2 / (2 * PI) ** k2


def e_BDP(ctx, l):
    """(1 - a_p B p^(-2-l) + B^2 p^(-2l-3))^2"""
    _require_l(l)
    p = Integer(ctx.p)
    B = beta_theta(ctx, l)
    return SymbolicFactor("e_BDP", (1 - ctx.a_p * B * p ** (-2 - l) + B ** 2 * p ** (-2 * l - 3)) ** 2, l)


def omega_value(ctx, l):
    """omega(f, Psi_l) = (-1/N)^(l+1) psiN^-1"""
    _require_l(l)
    return Rational(-1, ctx.N) ** (l + 1) / PSI_N


def f_BDP(ctx, l):
    """(2 pi / (c sqrtD))^(2l+1) l! (l+1)! 2^#{q | (D_K, N_E)} / omega"""
    _require_l(l)
    _require_factorial(l, "f_BDP")
    expr = (2 * PI / (ctx.c * SQRT_D)) ** (2 * l + 1) * factorial(l) * factorial(l + 1)
    expr = expr * Integer(2) ** ctx.n_common / omega_value(ctx, l)
    return SymbolicFactor("f_BDP", expr, l)


def E_c(field, c):
    """prod_{q | c} (q - chi_K(q)) / (q - 1)"""
    value = Fraction(1)
    for q in primefactors(c):
        value *= Fraction(q - field.kronecker(q), q - 1)
    return value


def f_HR(ctx, l):
    """(-1)^l l! (l+1)! N / (2^(4l+5) pi^(2l+3) sqrtD)"""
    _require_l(l)
    _require_factorial(l, "f_HR")
    expr = (-1) ** l * factorial(l) * factorial(l + 1) * ctx.N
    return SymbolicFactor("f_HR", expr / (Integer(2) ** (4 * l + 5) * PI ** (2 * l + 3) * SQRT_D), l)


def f_Pet(ctx, l):
    """[I(N)/I(D_K c^2)] (2l+2)! / (2^(4l+4) pi^(2l+3)) h_c c sqrtD / w_c"""
    _require_l(l)
    expr = ctx.index_ratio * factorial(2 * l + 2) / (Integer(2) ** (4 * l + 4) * PI ** (2 * l + 3))
    return SymbolicFactor("f_Pet", expr * ctx.h_c * ctx.c * SQRT_D / ctx.w_c, l)


def f_infty(ctx, l):
    """
    Closed form of f_HR f_K / (f_BDP f_Pet):
    -(I(D_K c^2)/I(N)) N 2^-n (w_c/2) / (h_c D_K) c^(2l) / (N^(l+1) psiN).
    """
    _require_l(l)
    N = Integer(ctx.N)
    expr = -N * Integer(2) ** (-ctx.n_common) * Rational(ctx.w_c, 2) / (ctx.index_ratio * ctx.h_c * ctx.D)
    expr = expr * Integer(ctx.c) ** (2 * l) / (N ** (l + 1) * PSI_N)
    return SymbolicFactor("f_infty", expr, l)


def f_infty_value(scenario, l=-1):
    """f_infty(l) with psiN resolved to psi_(2l+2)(N); only l = -1 needs no infinity type"""
    if l != -1:
        raise DomainError("numeric f_infty is only resolved at the weight one point")
    ctx = FactorContext.from_scenario(scenario)
    expr = f_infty(ctx, l).expr
    return simplify(to_fraction(expr * PSI_N) / scenario.psi_N)


class IdentityCheck:
    """Outcome of one exact identity check"""

    def __init__(self, name, l, passed, lhs, rhs, detail=None):
        self.name = name
        self.l = l
        self.passed = passed
        self.lhs = lhs
        self.rhs = rhs
        self.detail = detail

    def to_json(self):
        doc = {"name": self.name, "l": self.l, "passed": self.passed, "lhs": str(self.lhs), "rhs": str(self.rhs)}
        if self.detail:
            doc["detail"] = self.detail
        return doc


def assembled_quotient(ctx, l, perturbations=None):
    perturbations = perturbations or {}
    parts = {name: build(ctx, l) for name, build in (("f_HR", f_HR), ("f_K", f_K), ("f_BDP", f_BDP), ("f_Pet", f_Pet))}
    for name, scale in perturbations.items():
        parts[name] = SymbolicFactor(parts[name].name, parts[name].expr * scale, l)
    return (parts["f_HR"] * parts["f_K"]) / (parts["f_BDP"] * parts["f_Pet"])


def verify_assembly(ctx, l_range=DEFAULT_L_RANGE, perturbations=None):
    """
    Compare the closed form f_infty(l) with the assembled quotient of the
    four f-factors, pi kept as an indeterminate.

    Returns:
        list of IdentityCheck; l = -1 is reported as not applicable
    """
    checks = []
    for l in l_range:
        if l < 0:
            checks.append(IdentityCheck("assembly", l, None, "-", "-", detail="f_HR and f_BDP need l >= 0"))
            continue
        sqrt_d = sympy.sqrt(ctx.D)
        closed = f_infty(ctx, l).expr.subs(SQRT_D, sqrt_d)
        assembled = assembled_quotient(ctx, l, perturbations).expr.subs(SQRT_D, sqrt_d)
        reduced = sympy.cancel(sympy.radsimp(assembled))
        passed = sympy.cancel(sympy.radsimp(reduced - closed)) == 0 and not reduced.has(PI)
        if not passed:
            logger.error(f"assembly identity fails at l = {l}")
        checks.append(IdentityCheck("assembly", l, passed, reduced, closed))
    return checks


def verify_euler_identity(ctx, l_range=DEFAULT_L_RANGE, degree_bound=EULER_DEGREE_BOUND, seed=20240229, retries=16):
    """
    e_HR(l) e_K(l) = e_BDP(l) as rational functions in A (and a when a_p
    is symbolic), decided by exact evaluation on a sample grid.
    """
    checks = []
    for l in l_range:
        lhs = e_HR(ctx, l).expr * e_K(ctx, l).expr
        rhs = e_BDP(ctx, l).expr
        passed = verify_rational_identity(lhs, rhs, ctx.variables, degree_bound, seed=seed, retries=retries)
        if not passed:
            logger.error(f"Euler identity fails at l = {l}")
        checks.append(IdentityCheck("euler", l, passed, "e_HR*e_K", "e_BDP"))
    return checks


def interpolation_weights(p, count):
    """The first count l >= 0 with 2l + 3 = 1 mod (p - 1)"""
    out = []
    l = 0
    while len(out) < count:
        if (2 * l + 2) % (p - 1) == 0:
            out.append(l)
        l += 1
    return out


def katz_fudge(value_pbar, p, c, trivial=False):
    """
    f_p(chi) for a finite order chi: (1/p - 1)/2 when chi = 1, otherwise
    -(1 - chi(Pbar))(1 - chi(Pbar)/p)/(24 c).
    """
    if trivial:
        return Fraction(1 - p, 2 * p)
    return simplify(Fraction(-1, 24 * c) * ((1 - value_pbar) * (1 - value_pbar / Fraction(p))))


def bdp_fudge(a_p, psi_pbar, psi2_pbar, p):
    """(1 - psi(Pbar) a_p / p + psi^2(Pbar) / p)^2"""
    inner = 1 - psi_pbar * Fraction(a_p, p) + psi2_pbar / Fraction(p)
    return simplify(inner * inner)


def euler_discrepancy(scenario, l=-1):
    """Eul_N(l) = Eul^HR_N(l) / (E_c Eul^Pet_N(l))"""
    hr = euler_ratio_hr(scenario, l)
    if hr.value is None:
        raise DegenerateError(f"Eul^HR_N({l}) could not be assembled", factor="Eul_N")
    if scenario.pet_discrepancy is not None:
        pet = scenario.pet_discrepancy
    else:
        pet = euler_ratio_pet(scenario, l).value
    return simplify(hr.value / (E_c(scenario.field, scenario.c) * pet))


def _katz_at_minus_two(scenario):
    if scenario.psi_square_trivial:
        return katz_fudge(None, scenario.p, scenario.c, trivial=True)
    value = katz_fudge(1 / scenario.psi2_pbar, scenario.p, scenario.c)
    if value == 0:
        raise DegenerateError("psi^-2(Pbar) = 1 makes the Katz value vanish", factor="f_p(psi^-2)")
    return value


def lambda_breakdown(scenario):
    """The four ingredients of lambda at l = -1"""
    return {
        "Eul_N(-1)": euler_discrepancy(scenario, -1),
        "f_infty(-1)": f_infty_value(scenario),
        "f_p(f,psi)": bdp_fudge(scenario.a_p, scenario.psi_pbar, scenario.psi2_pbar, scenario.p),
        "f_p(psi^-2)": _katz_at_minus_two(scenario),
    }


def lambda_general(scenario):
    """lambda = Eul_N(-1) f_infty(-1) f_p(f, psi) / f_p(psi^-2)"""
    parts = lambda_breakdown(scenario)
    value = parts["Eul_N(-1)"] * parts["f_infty(-1)"] * parts["f_p(f,psi)"] / parts["f_p(psi^-2)"]
    value = simplify(value)
    if value == 0:
        raise DegenerateError("lambda vanishes", factor="f_p(f,psi)")
    logger.info(f"lambda for {scenario!r}: {value}")
    return value


def lambda_zero(scenario):
    p = scenario.p
    if scenario.psi_square_trivial:
        return Fraction(1, p - 1)
    x = 1 / scenario.psi2_pbar
    denominator = p - (p + 1) * x + x * x
    if denominator == 0:
        raise DegenerateError("cuspidal lambda_0 has a vanishing denominator", factor="lambda_0")
    return simplify(12 / denominator)


def lambda_theorem(scenario):
    """(p - a_p psi(Pbar) + psi^2(Pbar))^2 / p * lambda_0 / (h_K g_K) for D_K = N_E, c = 1"""
    if not scenario.theorem_applies:
        raise DomainError(f"needs D_K = N_E and c = 1 ({scenario!r})")
    p = scenario.p
    inner = p - scenario.a_p * scenario.psi_pbar + scenario.psi2_pbar
    value = inner * inner / Fraction(p) * lambda_zero(scenario) / (scenario.h_K * scenario.g_K)
    return simplify(value)


def christmas(scenario):
    """|E(F_p)|^2 / (p (p - 1) h_K) for psi = 1 and prime N_E"""
    if not scenario.psi.is_trivial() or not sympy.isprime(scenario.N_E):
        raise DomainError("needs psi = 1 and N_E prime")
    order = count_points(scenario.E, scenario.p)
    return Fraction(order * order, scenario.p * (scenario.p - 1) * scenario.h_K)


class PredictedIntegral:
    """lambda log_E(P)^2 / log_p(u)"""

    def __init__(self, value, formal, torsion=False):
        self.value = value
        self.formal = formal
        self.torsion = torsion

    def to_json(self):
        return {"value": self.value.to_dict(), "rendered": str(self.value), "torsion": self.torsion}


def predicted_integral(ctx, scenario, point, u_log, lam=None):
    """
    The predicted value of the iterated integral for a point P.

    Arguments:
        ctx: FormalGroupContext of E at p
        scenario: FactorScenario
        point: CurvePoint (rational or p-adic)
        u_log: PadicNumber log_p of the elliptic unit
        lam: lambda, computed by lambda_general when omitted
    """
    if u_log.is_zero():
        raise DomainError("log of the elliptic unit vanishes")
    lam = lambda_general(scenario) if lam is None else lam
    formal = formal_log(ctx, point)
    if formal.torsion or formal.value.is_zero():
        return PredictedIntegral(formal.value, formal, torsion=True)
    lam_p = embed_scalar(lam, ctx.p, ctx.prec, scenario.zeta_residue)
    value = lam_p * formal.value * formal.value / u_log
    return PredictedIntegral(value, formal)


def render_value(value, p=None, prec=None, zeta_residue=None):
    """Exact rendering plus, when possible, the image in Q_p"""
    doc = {"exact": render_coefficient(value)}
    if isinstance(value, CyclotomicElement):
        doc["complex"] = str(value.to_complex(64))
    if p is not None:
        try:
            doc["padic"] = str(embed_scalar(value, p, prec, zeta_residue))
        except DomainError as e:
            doc["padic"] = None
            doc["padic_note"] = str(e)
    return doc
