from fractions import Fraction

import pytest

from postlie import liealg, products, rmatrix
from postlie.errors import DimensionMismatch, InvalidInput
from conftest import random_vector, seeded

F = Fraction


def _zero_product(L):
    n = L.dim
    return products.BilinearProduct(
        L, [[[0] * n for _ in range(n)] for _ in range(n)]
    )


def test_from_rmatrix_matches_pointwise(borel_ctx):
    L = borel_ctx.algebra
    rng = seeded(31)
    for sign in ("+", "-"):
        prod = products.from_rmatrix(borel_ctx, sign)
        for _ in range(10):
            x, y = random_vector(L, rng), random_vector(L, rng)
            assert prod.apply(x, y) == rmatrix.post_product(borel_ctx, sign, x, y)


def test_minus_product_is_right_post_lie(borel_ctx, split2_ctx):
    for ctx in (borel_ctx, split2_ctx):
        prod = products.from_rmatrix(ctx, "-")
        report = products.check_postlie(prod, ctx.algebra, products.RIGHT)
        assert report["ok"], report


def test_plus_product_is_left_post_lie(borel_ctx, split2_ctx):
    for ctx in (borel_ctx, split2_ctx):
        prod = products.from_rmatrix(ctx, "+")
        report = products.check_postlie(prod, ctx.algebra, products.LEFT)
        assert report["ok"], report


def test_handedness_is_not_interchangeable(split2_ctx):
    # the same tensor fails the opposite axiom set (the bracket axiom flips)
    prod = products.from_rmatrix(split2_ctx, "-")
    report = products.check_postlie(prod, split2_ctx.algebra, products.LEFT)
    assert not report["ok"]
    assert not report["bracket_axiom"]["ok"]
    assert report["derivation_axiom"]["ok"]  # shared between both sets


def test_zero_product_is_left_post_lie(sl2):
    report = products.check_postlie(_zero_product(sl2), sl2, products.LEFT)
    assert report["ok"]


def test_check_postlie_rejects_bad_handedness(sl2):
    with pytest.raises(InvalidInput):
        products.check_postlie(_zero_product(sl2), sl2, "sideways")


def test_structure_constructor_validates(borel_ctx):
    prod = products.from_rmatrix(borel_ctx, "-")
    pl = products.PostLieStructure(prod, borel_ctx.algebra, products.RIGHT)
    assert pl.handedness == products.RIGHT
    with pytest.raises(InvalidInput):
        products.PostLieStructure(prod, borel_ctx.algebra, products.LEFT)


def test_derived_bracket_of_zero_product_is_negated_bracket(sl2):
    pl = products.PostLieStructure(_zero_product(sl2), sl2, products.LEFT)
    derived = products.derived_bracket(pl)
    rng = seeded(37)
    for _ in range(10):
        x, y = random_vector(sl2, rng), random_vector(sl2, rng)
        assert liealg.bracket(derived, x, y) == tuple(
            -c for c in liealg.bracket(sl2, x, y)
        )


def test_to_right_preserves_derived_data(sl2):
    pl = products.PostLieStructure(_zero_product(sl2), sl2, products.LEFT)
    pr = products.to_right(pl)
    assert pr.handedness == products.RIGHT
    # right conversion of the zero product is x o' y = -[x,y]
    x, y = (1, 0, 2), (0, 1, -1)
    assert pr.product.apply(x, y) == tuple(-c for c in liealg.bracket(sl2, x, y))
    report = products.check_postlie(pr.product, sl2, products.RIGHT)
    assert report["ok"]


def test_lie_admissible_antisymmetrization_recovers_r_bracket(borel_ctx):
    # for x |> y = [R_minus x, y] the companion's antisymmetrization
    # x|>y - y|>x + [x,y] equals the halved R-bracket on the nose
    L = borel_ctx.algebra
    prod = products.from_rmatrix(borel_ctx, "-")
    pl = products.PostLieStructure(prod, L, products.RIGHT)
    comp = products.lie_admissible(pl)
    rng = seeded(41)
    for _ in range(10):
        x, y = random_vector(L, rng), random_vector(L, rng)
        anti = liealg.vsub(comp.apply(x, y), comp.apply(y, x))
        assert anti == rmatrix.r_bracket(L, borel_ctx.R, x, y)


def test_lie_admissible_quarter_associator_identity(split2_ctx):
    # oracle: expanding [R~x,R~y] - R~([R~x,y]+[x,R~y]) with R~ = R/2 against
    # the theta=1 equation leaves +[x,y]/4, so the associator asymmetry of
    # the companion is +[[x,y],z]/4 (pinned numerically on all basis triples)
    L = split2_ctx.algebra
    prod = products.from_rmatrix(split2_ctx, "-")
    pl = products.PostLieStructure(prod, L, products.RIGHT)
    comp = products.lie_admissible(pl)
    quarter = F(1, 4)
    for i in range(L.dim):
        for j in range(L.dim):
            for k in range(L.dim):
                x, y, z = L.basis(i), L.basis(j), L.basis(k)
                a1 = liealg.vsub(
                    comp.apply(comp.apply(x, y), z), comp.apply(x, comp.apply(y, z))
                )
                a2 = liealg.vsub(
                    comp.apply(comp.apply(y, x), z), comp.apply(y, comp.apply(x, z))
                )
                want = liealg.vscale(
                    quarter,
                    liealg.bracket(L, liealg.bracket(L, x, y), z),
                )
                assert liealg.vsub(a1, a2) == want


def test_check_prelie_on_theta_zero_product(sl2):
    # R = ad_e solves the theta=0 equation; x o y = [Rx, y] is then pre-Lie
    R = liealg.ad(sl2, sl2.basis(0))
    prod = products.BilinearProduct.from_function(
        sl2, lambda x, y: liealg.bracket(sl2, R.apply(x), y)
    )
    assert products.check_prelie(prod)["ok"]


def test_check_prelie_fails_for_theta_one_product(borel_ctx):
    prod = products.from_rmatrix(borel_ctx, "-")
    report = products.check_prelie(prod)
    assert not report["ok"]
    assert report["worst_triple"] is not None


def test_product_json_round_trip(borel_ctx):
    prod = products.from_rmatrix(borel_ctx, "-")
    data = products.product_to_json(prod)
    back = products.product_from_json(borel_ctx.algebra, data)
    assert back.T == prod.T


def test_product_json_dimension_check(sl2):
    data = {"dim": 4, "product": []}
    with pytest.raises(DimensionMismatch):
        products.product_from_json(sl2, data)


def test_tensor_shape_validated(sl2):
    with pytest.raises(DimensionMismatch):
        products.BilinearProduct(sl2, [[[0] * 2] * 3] * 3)
