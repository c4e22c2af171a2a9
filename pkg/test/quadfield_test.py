""" Tests for imaginary quadratic fields, forms, class groups and ideals. """
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies
from sympy import primefactors

from starkrankin.exactalg import DirichletCharacter, generalized_bernoulli
from starkrankin.exceptions import DomainError, ResourceError
from starkrankin.quadfield import (
    INERT,
    RAMIFIED,
    SPLIT,
    Ideal,
    ImagQuadField,
    QuadForm,
    QuadraticNumber,
    class_group,
    genus_number,
    heegner_ideal,
    ideal_generator,
    ideals_of_norm,
    is_fundamental_discriminant,
    prime_splitting,
    principal_generator,
    reduced_forms,
)
from test.test_utils import represented_counts

GROUP_DISCS = [-23, -47, -56, -71, -84, -104, -231]


class TestDiscriminants(object):
    """Fundamental discriminants and field construction"""

    def test_fundamental(self):
        for disc in (-3, -4, -7, -8, -20, -23, -84):
            assert is_fundamental_discriminant(disc)
        for disc in (-12, -16, -27, -1, 5, 0):
            assert not is_fundamental_discriminant(disc)

    def test_field(self):
        assert ImagQuadField(3).w == 6
        assert ImagQuadField(4).w == 4
        K = ImagQuadField(23)
        assert K.w == 2
        assert K.disc == -23
        assert K.class_number == 3
        assert K.kronecker(2) == 1
        with pytest.raises(DomainError):
            ImagQuadField(12)


class TestClassGroup(object):
    """Reduced forms, composition and the class group structure"""

    def test_reduced_forms(self):
        assert reduced_forms(-23) == [QuadForm(1, 1, 6), QuadForm(2, -1, 3), QuadForm(2, 1, 3)]
        assert len(reduced_forms(-20)) == 2

    def test_structure(self):
        group = class_group(-23)
        assert group.h == 3
        assert group.orders == (3,)
        assert group.genus_number == 1
        klein = class_group(-84)
        assert klein.h == 4
        assert klein.orders == (2, 2)
        assert klein.genus_number == 4

    def test_composition(self):
        f = QuadForm(2, 1, 3)
        assert f * f.inverse() == QuadForm.principal(-23)
        assert f.power(3) == QuadForm.principal(-23)
        assert f * f == QuadForm(2, -1, 3)
        assert f.power(-1) == QuadForm(2, -1, 3)

    def test_dlog(self):
        group = class_group(-23)
        g = group.generators[0]
        assert group.dlog(g) == (1,)
        assert group.dlog(group.identity) == (0,)
        assert group.dlog(g * g) == (2,)

    def test_bounds(self):
        with pytest.raises(ResourceError):
            class_group(-23, bound=10)
        with pytest.raises(DomainError):
            class_group(5)

    @settings(derandomize=True, deadline=None, max_examples=30)
    @given(strategies.sampled_from(GROUP_DISCS).flatmap(
        lambda disc: strategies.tuples(*[strategies.sampled_from(reduced_forms(disc))] * 3)))
    def test_group_axioms(self, forms):
        f, g, h = forms
        identity = QuadForm.principal(f.discriminant)
        assert (f * g) * h == f * (g * h)
        assert f * g == g * f
        assert f * identity == f.reduce()
        assert (f * g).discriminant == f.discriminant

    def test_genus_identity(self):
        """[Cl : Cl^2] = 2^(omega(D) - 1) for every fundamental -D up to 500"""
        for D in range(7, 501):
            if is_fundamental_discriminant(-D):
                assert genus_number(-D) == 2 ** (len(primefactors(D)) - 1), D

    @pytest.mark.parametrize("D", [3, 4, 7, 8, 11, 15, 20, 23, 24, 47, 71])
    def test_class_number_formula(self, D):
        K = ImagQuadField(D)
        B = generalized_bernoulli(1, DirichletCharacter.kronecker(-D))
        assert B == Fraction(-2 * K.class_number, K.w)


class TestIdeals(object):
    """Prime splitting, ideals of given norm and Heegner ideals"""

    def test_splitting(self):
        K = ImagQuadField(11)
        split = prime_splitting(K, 1, 3)
        assert split.kind == SPLIT
        assert split.prime.form == QuadForm(3, 1, 1)
        assert split.conjugate.form == QuadForm(3, -1, 1)
        assert split.prime != split.conjugate
        assert prime_splitting(K, 1, 2).kind == INERT
        assert prime_splitting(K, 1, 11).kind == RAMIFIED
        with pytest.raises(DomainError):
            prime_splitting(K, 1, 9)
        with pytest.raises(DomainError):
            prime_splitting(K, 3, 3)

    def test_ideals_of_norm(self):
        K = ImagQuadField(11)
        assert len(ideals_of_norm(K, 1, 9)) == 3
        assert len(ideals_of_norm(K, 1, 4)) == 1
        assert ideals_of_norm(K, 1, 2) == []
        assert all(ideal.norm == 27 for ideal in ideals_of_norm(K, 1, 27))
        with pytest.raises(DomainError):
            ideals_of_norm(K, 3, 6)

    @pytest.mark.parametrize("D", [7, 11, 15, 23, 47, 56])
    def test_ideal_count_against_forms(self, D):
        """#{ideals of norm n} = sum over reduced forms of r_Q(n) / w"""
        K = ImagQuadField(D)
        bound = 200
        counts = [represented_counts(f, bound) for f in reduced_forms(-D)]
        for n in range(1, bound + 1):
            expected = Fraction(sum(r[n] for r in counts), K.w)
            assert len(ideals_of_norm(K, 1, n)) == expected, n

    def test_class_form(self):
        K = ImagQuadField(23)
        P2 = prime_splitting(K, 1, 2).prime
        assert P2.form == QuadForm(2, 1, 3)
        ideal = Ideal(K, 1, [(P2, 1)])
        assert ideal.class_form() == QuadForm(2, 1, 3)
        assert (ideal ** 3).class_form() == QuadForm.principal(-23)
        assert (ideal * ideal.conjugate()).class_form() == QuadForm.principal(-23)

    def test_heegner_ideal(self):
        K = ImagQuadField(11)
        assert heegner_ideal(K, 11).norm == 11
        assert heegner_ideal(ImagQuadField(7), 11).norm == 11
        assert heegner_ideal(ImagQuadField(23), 26).norm == 26
        assert heegner_ideal(ImagQuadField(7), 3) is None
        assert heegner_ideal(K, 121) is None


class TestGenerators(object):
    """Quadratic numbers and generators of principal ideals"""

    def test_arithmetic(self):
        x = QuadraticNumber(11, Fraction(1, 2), Fraction(1, 2))
        assert x.norm() == 3
        assert x.trace() == 1
        assert x * x.conjugate() == 3
        assert x / x == 1
        assert x ** 2 == x - 3
        with pytest.raises(DomainError):
            x + QuadraticNumber(7, 1, 1)

    def test_principal_generator(self):
        K = ImagQuadField(11)
        gamma = principal_generator(K, QuadForm(3, 1, 1))
        assert gamma == QuadraticNumber(11, Fraction(1, 2), Fraction(-1, 2))
        assert gamma.norm() == 3
        with pytest.raises(DomainError):
            principal_generator(ImagQuadField(23), QuadForm(2, 1, 3))

    def test_ideal_generator(self):
        K = ImagQuadField(11)
        for n in (3, 5, 9, 15):
            for ideal in ideals_of_norm(K, 1, n):
                assert ideal_generator(ideal).norm() == n
        with pytest.raises(DomainError):
            ideal_generator(Ideal(ImagQuadField(23), 1))
