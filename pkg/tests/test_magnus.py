from fractions import Fraction

import pytest

from postlie import liealg, magnus, products, rmatrix, scalars
from postlie.errors import (
    CollapseFailure,
    InvalidInput,
    NotAbelian,
    NotPreLie,
)
from conftest import BUILTIN_RMATRICES, random_vector, seeded

F = Fraction


# ---------------------------------------------------------------------------
# Bernoulli numbers
# ---------------------------------------------------------------------------


def test_bernoulli_values():
    # oracle: independent recurrence sum_{j<=m} C(m+1,j) B_j = 0 seeded at
    # B_0 = 1 (first kind, B_1 = -1/2), tests/oracles/oracle_values.py
    want = [
        F(1),
        F(-1, 2),
        F(1, 6),
        F(0),
        F(-1, 30),
        F(0),
        F(1, 42),
        F(0),
        F(-1, 30),
        F(0),
        F(5, 66),
    ]
    assert magnus.bernoulli(10) == want


def test_bernoulli_recurrence():
    from math import comb

    b = magnus.bernoulli(12)
    for m in range(1, 12):
        assert sum(comb(m + 1, j) * b[j] for j in range(m + 1)) == 0


# ---------------------------------------------------------------------------
# graded elements
# ---------------------------------------------------------------------------


def test_graded_element_arithmetic(sl2):
    x = magnus.GradedLieElement.from_vector(sl2, 4, (1, 0, 2))
    y = magnus.GradedLieElement.from_vector(sl2, 4, (0, 1, 0), degree=2)
    z = x + y.scale(F(3))
    assert z.coeff(1) == (1, 0, 2)
    assert z.coeff(2) == (0, 3, 0)
    assert (z - z).is_zero()
    assert magnus.GradedLieElement.zero(sl2, 4).is_zero()
    with pytest.raises(InvalidInput):
        magnus.GradedLieElement.from_vector(sl2, 4, (1, 0, 0), degree=7)


def test_graded_json_round_trip(sl2):
    x = magnus.GradedLieElement.from_vector(sl2, 3, (1, 0, 2))
    y = x + magnus.GradedLieElement.from_vector(sl2, 3, (0, F(-1, 2), 0), degree=2)
    data = magnus.graded_to_json(y)
    back = magnus.graded_from_json(sl2, data)
    assert back == y


# ---------------------------------------------------------------------------
# BCH via the graded enveloping layer
# ---------------------------------------------------------------------------


def test_bch_low_degrees(sl2):
    e, f = sl2.basis(0), sl2.basis(2)
    out = magnus.bch(sl2, e, f, 4)
    assert out.coeff(1) == (1, 0, 1)
    # oracle: (1/2)[e,f] = h/2, hand evaluation
    assert out.coeff(2) == (0, F(1, 2), 0)
    # oracle: (1/12)([e,[e,f]] + [f,[f,e]]) = -(e+f)/6, hand evaluation
    # cross-checked in tests/oracles/oracle_values.py
    assert out.coeff(3) == (F(-1, 6), 0, F(-1, 6))
    # oracle: degree-4 term -(1/24)[f,[e,[e,f]]] for the (x,y)=(e,f) pair,
    # evaluated with the independent bracket tables = -(1/12) h ... value
    # frozen from the graded-log expansion cross-checked at two truncations
    assert out.coeff(4) == (0, F(-1, 12), 0)


def test_bch_degree_one_and_two_generic(sl2):
    rng = seeded(211)
    for _ in range(6):
        x, y = random_vector(sl2, rng), random_vector(sl2, rng)
        out = magnus.bch(sl2, x, y, 2)
        assert out.coeff(1) == liealg.vadd(x, y)
        half = liealg.vscale(F(1, 2), liealg.bracket(sl2, x, y))
        assert out.coeff(2) == half


# ---------------------------------------------------------------------------
# the chi expansion: closed forms and both computation paths
# ---------------------------------------------------------------------------


def test_chi_closed_forms_sl2_borel(borel_ctx, borel_product):
    L = borel_ctx.algebra
    x = (1, 0, 1)  # e + f
    chi = magnus.postlie_magnus(L, x, borel_product, 5)
    assert chi.coeff(1) == (1, 0, 1)
    # oracle: chi_2 = -(1/2) x|>x with x|>x = [R_-x, x] = -h,
    # tests/oracles/oracle_values.py
    assert chi.coeff(2) == (0, F(-1, 2), 0)
    # oracle: chi_3 = (1/4)[R_-(x|>x), x] + (1/12)([[R_-x,x],x] +
    # [R_-x,[R_-x,x]]) evaluated by hand = e/6 - f/3
    assert chi.coeff(3) == (F(1, 6), 0, F(-1, 3))
    # frozen from the star recursion, cross-checked against the
    # derivation-equation path (method="ode") which shares no code
    assert chi.coeff(4) == (0, F(1, 12), 0)
    assert chi.coeff(5) == (F(-1, 30), 0, F(2, 15))


def test_chi_closed_forms_gl2_split(split2_ctx, split2_product):
    L = split2_ctx.algebra
    idx = {lab: i for i, lab in enumerate(L.labels)}
    x = [0] * 4
    x[idx["E12"]] = 1
    x[idx["E21"]] = 1
    chi = magnus.postlie_magnus(L, tuple(x), split2_product, 4)
    # oracle: matrix route in tests/oracles/oracle_values.py,
    # chi_2 = -(1/2)[R_-x, x] = diag(-1/2, 1/2)
    want2 = [0] * 4
    want2[idx["E11"]] = F(-1, 2)
    want2[idx["E22"]] = F(1, 2)
    assert list(chi.coeff(2)) == want2
    # chi_3, chi_4: frozen after verifying the two independent paths agree
    want3 = [0] * 4
    want3[idx["E12"]] = F(1, 6)
    want3[idx["E21"]] = F(-1, 3)
    assert list(chi.coeff(3)) == want3
    want4 = [0] * 4
    want4[idx["E11"]] = F(1, 12)
    want4[idx["E22"]] = F(-1, 12)
    assert list(chi.coeff(4)) == want4


def test_chi_two_paths_agree(borel_ctx, borel_product, split2_ctx, split2_product):
    cases = [(borel_ctx, borel_product), (split2_ctx, split2_product)]
    rng = seeded(223)
    for ctx, prod in cases:
        L = ctx.algebra
        for _ in range(4):
            x = random_vector(L, rng, span=2)
            star = magnus.postlie_magnus(L, x, prod, 6, method="star")
            ode = magnus.postlie_magnus(L, x, prod, 6, method="ode")
            for m in range(1, 7):
                assert star.coeff(m) == ode.coeff(m), (m, x)


def test_chi_identity_r_matrix_is_trivial():
    ctx = rmatrix.builtin_rmatrix("sl2-id")
    prod = products.from_rmatrix(ctx, "-")
    L = ctx.algebra
    chi = magnus.postlie_magnus(L, (1, 2, -1), prod, 5)
    assert chi.coeff(1) == (1, 2, -1)
    for m in range(2, 6):
        assert all(c == 0 for c in chi.coeff(m))


def test_chi_scaling_homogeneity(borel_ctx, borel_product):
    # chi_m(c x) = c^m chi_m(x): the expansion is graded in its argument
    L = borel_ctx.algebra
    x = (1, 1, 2)
    c = F(2, 3)
    chi1 = magnus.postlie_magnus(L, x, borel_product, 5)
    chi2 = magnus.postlie_magnus(
        L, tuple(c * v for v in x), borel_product, 5
    )
    for m in range(1, 6):
        assert chi2.coeff(m) == tuple(c**m * v for v in chi1.coeff(m))


# ---------------------------------------------------------------------------
# the defining identity and the collapse property
# ---------------------------------------------------------------------------


def test_grouplike_identity_holds_for_minus_products():
    rng = seeded(227)
    for name in BUILTIN_RMATRICES:
        ctx = rmatrix.builtin_rmatrix(name)
        prod = products.from_rmatrix(ctx, "-")
        L = ctx.algebra
        for _ in range(3):
            x = random_vector(L, rng, span=2)
            report = magnus.verify_grouplike_identity(L, x, prod, 5)
            assert report["ok"], (name, x, report)
            assert report["degrees_checked"] == 5


def test_grouplike_identity_fails_for_plus_product(borel_ctx):
    # the lifted recursions pair with right-handed tensors; feeding the
    # left-handed companion breaks the identity at degree 3, which the
    # checker must surface rather than mask
    prod = products.from_rmatrix(borel_ctx, "+")
    L = borel_ctx.algebra
    report = magnus.verify_grouplike_identity(L, (1, 0, 1), prod, 4)
    assert not report["ok"]
    assert report["first_failure"] == 3


def test_collapse_residual_zero(borel_ctx, borel_product):
    # every chi_n must be a bare Lie element: length->=2 PBW residual zero
    L = borel_ctx.algebra
    rng = seeded(229)
    for _ in range(5):
        x = random_vector(L, rng, span=2)
        chi = magnus.postlie_magnus(L, x, borel_product, 5)
        assert not chi.is_zero()  # reaching here means no CollapseFailure


def test_collapse_alone_does_not_certify_a_postlie_tensor(sl2):
    # the lifted product is coproduct-compatible for ANY tensor, so the
    # recursion's outputs stay primitive and extraction succeeds even for
    # junk input (CollapseFailure guards the invariant rather than being a
    # reachable rejection path); what a junk tensor does break is the
    # defining group-like identity, and the checker must catch that
    T = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    T[0][2][1] = 1  # e o f = h, everything else zero: not post-Lie
    bad = products.BilinearProduct(sl2, T)
    assert not products.check_postlie(bad, sl2, products.RIGHT)["ok"]
    chi = magnus.postlie_magnus(sl2, (1, 0, 1), bad, 4)  # no CollapseFailure
    assert chi.coeff(2) == (0, F(-1, 2), 0)  # -(1/2) x|>x is tensor-generic
    report = magnus.verify_grouplike_identity(sl2, (1, 0, 1), bad, 5)
    assert not report["ok"] and report["first_failure"] == 3


# ---------------------------------------------------------------------------
# factorization parts
# ---------------------------------------------------------------------------


def test_chi_pm_recombines(borel_ctx, borel_product):
    L = borel_ctx.algebra
    chi = magnus.postlie_magnus(L, (1, 0, 1), borel_product, 4)
    plus, minus = magnus.chi_pm(chi, borel_ctx)
    total = plus + minus
    for m in range(1, 5):
        assert total.coeff(m) == chi.coeff(m)


def test_chi_pm_parts_live_in_their_ranges(borel_ctx, borel_product):
    # borel splitting: plus part has no f component, minus part only f
    L = borel_ctx.algebra
    chi = magnus.postlie_magnus(L, (1, 0, 1), borel_product, 4)
    plus, minus = magnus.chi_pm(chi, borel_ctx)
    for m in range(1, 5):
        assert plus.coeff(m)[2] == 0
        assert minus.coeff(m)[0] == 0 and minus.coeff(m)[1] == 0


# ---------------------------------------------------------------------------
# the derivation-equation form and dexp
# ---------------------------------------------------------------------------


def test_verify_chi_ode_passes_exactly(borel_ctx, borel_product):
    L = borel_ctx.algebra
    report = magnus.verify_chi_ode(L, (1, 0, 1), borel_product, 4)
    assert report["ok"], report
    report2 = magnus.verify_chi_ode(L, (2, 1, -1), borel_product, 4)
    assert report2["ok"], report2


def test_dexp_star_inverse_round_trip(borel_ctx, borel_product):
    L = borel_ctx.algebra
    bar = rmatrix.derived_algebra(borel_ctx)
    order = 5
    beta = magnus.GradedLieElement.from_vector(L, order, (1, 0, 1))
    v = magnus.GradedLieElement.from_vector(L, order, (0, 1, 2))
    fwd = magnus.dexp_star(beta, v, bar, order)
    back = magnus.dexp_star_inv(beta, fwd, bar, order)
    for m in range(1, order + 1):
        assert back.coeff(m) == v.coeff(m)


# ---------------------------------------------------------------------------
# pre-Lie specialization
# ---------------------------------------------------------------------------


def _theta_zero_product(s=None):
    """Pre-Lie product [Rx, y] from the nilpotent r-matrix R = ad_e,
    optionally conjugated by exp(s ad_f)."""
    sl2 = liealg.builtin("sl(2)")
    R = liealg.ad(sl2, sl2.basis(0))
    if s is not None:
        adf = liealg.ad(sl2, sl2.basis(2)).scale(s)
        # exp(ad) of a nilpotent endo: cubic terms suffice on sl(2)
        ident = liealg.LinearEndo.identity(3)
        E = ident + adf + adf.compose(adf).scale(F(1, 2))
        Einv = ident + adf.scale(-1) + adf.compose(adf).scale(F(1, 2))
        R = E.compose(R).compose(Einv)
    prod = products.BilinearProduct.from_function(
        sl2, lambda x, y: liealg.bracket(sl2, R.apply(x), y)
    )
    return sl2, prod


def test_prelie_magnus_matches_postlie_with_abelian_bracket():
    sl2, prod = _theta_zero_product()
    flat = liealg.new_lie_algebra(3, ["e", "h", "f"], [])
    flat_prod = products.BilinearProduct(flat, prod.T)
    rng = seeded(233)
    for _ in range(5):
        x = random_vector(sl2, rng, span=2)
        via_pre = magnus.prelie_magnus(flat, x, flat_prod, 4)
        via_post = magnus.postlie_magnus(flat, x, flat_prod, 4)
        for m in range(1, 5):
            assert via_pre.coeff(m) == via_post.coeff(m)


def test_prelie_magnus_rejects_nonabelian(sl2, borel_product):
    with pytest.raises(NotAbelian):
        magnus.prelie_magnus(sl2, (1, 0, 1), borel_product, 3)


def test_prelie_magnus_rejects_non_prelie_product():
    flat = liealg.new_lie_algebra(3, ["a", "b", "c"], [])
    T = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    T[0][1][2] = 1  # a o b = c, associator asymmetric
    T[1][0][0] = 1
    bad = products.BilinearProduct(flat, T)
    if not products.check_prelie(bad)["ok"]:
        with pytest.raises(NotPreLie):
            magnus.prelie_magnus(flat, (1, 1, 1), bad, 3)


def test_conjugated_theta_zero_products_are_prelie():
    for s in (F(1), F(-2), F(1, 2)):
        sl2, prod = _theta_zero_product(s)
        assert products.check_prelie(prod)["ok"]


# ---------------------------------------------------------------------------
# float mode
# ---------------------------------------------------------------------------


def test_float_mode_ode_path_matches_exact():
    ctx_e = rmatrix.builtin_rmatrix("sl2-borel")
    prod_e = products.from_rmatrix(ctx_e, "-")
    chi_e = magnus.postlie_magnus(ctx_e.algebra, (F(3, 10), 0, F(3, 10)), prod_e, 6)

    ctx_f = rmatrix.builtin_rmatrix("sl2-borel", mode=scalars.FLOAT)
    prod_f = products.from_rmatrix(ctx_f, "-")
    chi_f = magnus.postlie_magnus(
        ctx_f.algebra, (0.3, 0.0, 0.3), prod_f, 6, method="ode"
    )
    for m in range(1, 7):
        exact = [float(v) for v in chi_e.coeff(m)]
        got = list(chi_f.coeff(m))
        assert max(abs(a - b) for a, b in zip(exact, got)) < 1e-15


def test_star_method_requires_exact_mode():
    ctx_f = rmatrix.builtin_rmatrix("sl2-borel", mode=scalars.FLOAT)
    prod_f = products.from_rmatrix(ctx_f, "-")
    with pytest.raises(Exception):
        magnus.postlie_magnus(ctx_f.algebra, (0.3, 0.0, 0.3), prod_f, 4, method="star")
