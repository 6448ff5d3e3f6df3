"""Exterior algebra: wedge, Hodge star, contact star, SD/ASD split."""

import numpy as np
import pytest

from swcheck.extalg import (
    INDEX_TUPLES,
    KForm,
    anti_self_dual_basis,
    basis_form,
    contact_star,
    deta,
    e,
    form_inner,
    hodge_star,
    horizontal_split,
    sd_project,
    self_dual_basis,
    volume_form,
    wedge,
    zero_form,
)


def _eq(a: KForm, b: KForm) -> bool:
    return a.degree == b.degree and np.array_equal(a.coeffs, b.coeffs)


class TestWedge:
    def test_basis_product(self):
        assert _eq(wedge(e(1), e(2)), basis_form(1, 2))

    def test_square_is_zero(self):
        assert wedge(e(1), e(1)).norm_inf() == 0

    def test_volume_from_parts(self):
        # (e1^e2) ^ (e3^e4) ^ eta: the identity permutation, coefficient +1.
        v = wedge(wedge(basis_form(1, 2), basis_form(3, 4)), e(5))
        assert _eq(v, volume_form())

    def test_graded_commutativity(self):
        rng = np.random.default_rng(0)
        for ka, kb in [(1, 1), (1, 2), (2, 2), (2, 3)]:
            a = KForm(ka, rng.normal(size=len(INDEX_TUPLES[ka])).astype(complex))
            b = KForm(kb, rng.normal(size=len(INDEX_TUPLES[kb])).astype(complex))
            lhs = wedge(a, b)
            rhs = (-1.0) ** (ka * kb) * wedge(b, a)
            assert (lhs - rhs).norm_inf() < 1e-14

    def test_associativity(self):
        rng = np.random.default_rng(1)
        a = KForm(1, rng.normal(size=5).astype(complex))
        b = KForm(1, rng.normal(size=5).astype(complex))
        c = KForm(2, rng.normal(size=10).astype(complex))
        lhs = wedge(wedge(a, b), c)
        rhs = wedge(a, wedge(b, c))
        assert (lhs - rhs).norm_inf() < 1e-14

    def test_degree_overflow(self):
        with pytest.raises(ValueError):
            wedge(volume_form(), e(1))


class TestHodgeStar:
    def test_examples(self):
        assert _eq(hodge_star(wedge(basis_form(1, 2), e(5))), basis_form(3, 4))
        assert _eq(hodge_star(volume_form()), KForm(0, [1]))
        assert _eq(hodge_star(wedge(basis_form(1, 3), e(5))), -basis_form(2, 4))

    def test_involution_all_32_basis_forms(self):
        # In dimension 5 with Euclidean signature k(5-k) is even for all k.
        for k in range(6):
            for idx in INDEX_TUPLES[k]:
                b = basis_form(*idx)
                assert _eq(hodge_star(hodge_star(b)), b)

    def test_defining_property_exact_on_basis(self):
        vol = volume_form()
        for k in range(6):
            for idx in INDEX_TUPLES[k]:
                b = basis_form(*idx)
                assert _eq(wedge(b, hodge_star(b)), vol)

    def test_defining_property_random_real_forms(self):
        rng = np.random.default_rng(7)
        vol = volume_form()
        for k in range(6):
            for _ in range(20):
                c = rng.normal(size=len(INDEX_TUPLES[k]))
                a = KForm(k, c.astype(complex))
                expected = float(np.dot(c, c)) * vol
                assert (wedge(a, hodge_star(a)) - expected).norm_inf() < 1e-13


class TestHorizontalSplit:
    def test_pure_vertical(self):
        a = basis_form(1, 5)
        h, v = horizontal_split(a)
        assert h.norm_inf() == 0
        assert _eq(v, a)

    def test_pure_horizontal(self):
        a = basis_form(1, 2)
        h, v = horizontal_split(a)
        assert _eq(h, a)
        assert v.norm_inf() == 0

    def test_mixed(self):
        a = basis_form(1, 2) + 3 * basis_form(3, 5)
        h, v = horizontal_split(a)
        assert _eq(h, basis_form(1, 2))
        assert _eq(v, 3 * basis_form(3, 5))
        assert _eq(h + v, a)

    def test_idempotent_linear(self):
        rng = np.random.default_rng(3)
        a = KForm(2, (rng.normal(size=10) + 1j * rng.normal(size=10)))
        h, v = horizontal_split(a)
        h2, v2 = horizontal_split(h)
        assert _eq(h2, h) and v2.norm_inf() == 0
        hs, _ = horizontal_split(2.5 * a)
        assert (hs - 2.5 * h).norm_inf() == 0

    def test_degree_check(self):
        with pytest.raises(ValueError):
            horizontal_split(e(1))


class TestContactStar:
    def test_examples(self):
        assert _eq(contact_star(basis_form(1, 2)), basis_form(3, 4))
        assert _eq(contact_star(deta()), deta())
        assert _eq(contact_star(basis_form(1, 3)), -basis_form(2, 4))

    def test_involution_on_horizontal_basis(self):
        for idx in INDEX_TUPLES[2]:
            if 5 in idx:
                continue
            b = basis_form(*idx)
            assert _eq(contact_star(contact_star(b)), b)

    def test_rejects_vertical_input(self):
        with pytest.raises(ValueError):
            contact_star(basis_form(1, 5))
        with pytest.raises(ValueError):
            contact_star(e(1))


class TestSelfDualProjection:
    def test_deta_is_self_dual(self):
        p, m = sd_project(deta())
        assert _eq(p, deta())
        assert m.norm_inf() == 0

    def test_asd_example(self):
        # e1^e4 - e2^e3 is anti-self-dual.
        b = basis_form(1, 4) - basis_form(2, 3)
        p, m = sd_project(b)
        assert p.norm_inf() == 0
        assert _eq(m, b)

    def test_projector_formula(self):
        b = basis_form(1, 2)
        p, m = sd_project(b)
        assert _eq(p, (basis_form(1, 2) + basis_form(3, 4)) / 2)
        assert _eq(m, (basis_form(1, 2) - basis_form(3, 4)) / 2)

    def test_eigenbases(self):
        for b in self_dual_basis():
            assert (contact_star(b) - b).norm_inf() == 0
        for b in anti_self_dual_basis():
            assert (contact_star(b) + b).norm_inf() == 0

    def test_bases_span_three_dimensions_each(self):
        sd = np.array([b.coeffs for b in self_dual_basis()])
        asd = np.array([b.coeffs for b in anti_self_dual_basis()])
        assert np.linalg.matrix_rank(sd) == 3
        assert np.linalg.matrix_rank(asd) == 3
        assert np.max(np.abs(sd @ asd.conj().T)) == 0

    def test_orthogonality_random(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            c = (rng.normal(size=10) + 1j * rng.normal(size=10))
            for pos, idx in enumerate(INDEX_TUPLES[2]):
                if 5 in idx:
                    c[pos] = 0
            beta = KForm(2, c)
            p, m = sd_project(beta)
            assert abs(form_inner(p, m)) < 1e-14
            assert (p + m - beta).norm_inf() < 1e-15
            assert (contact_star(p) - p).norm_inf() < 1e-15
            assert (contact_star(m) + m).norm_inf() < 1e-15


class TestEvaluate:
    def test_two_form_on_frame_vectors(self):
        ei = np.eye(5)
        assert deta().evaluate(ei[0], ei[1]) == 1
        assert deta().evaluate(ei[2], ei[3]) == 1
        assert deta().evaluate(ei[0], ei[2]) == 0
        assert deta().evaluate(ei[4], ei[0]) == 0

    def test_antisymmetry(self):
        rng = np.random.default_rng(5)
        a = KForm(2, (rng.normal(size=10) + 1j * rng.normal(size=10)))
        x, y = rng.normal(size=5), rng.normal(size=5)
        assert abs(a.evaluate(x, y) + a.evaluate(y, x)) < 1e-14

    def test_signed_coefficient(self):
        a = basis_form(1, 3)
        assert a.coefficient(1, 3) == 1
        assert a.coefficient(3, 1) == -1
        assert a.coefficient(1, 1) == 0
