import random

import pytest

from vfalg.chern import (
    ZFIELD,
    BundleSymbol,
    cap_total_chern,
    chern_class,
    evaluate_k_class,
    k_lambda_chern,
    root_c1,
    total_chern_series,
)
from vfalg.coeffs import CoefficientRing, GradedVariable
from vfalg.errors import ContractError, InputError
from vfalg.fgl import additive_law, law_from_table, multiplicative_law
from vfalg.series import MultiSeries, TruncationPolicy, Window
from vfalg.spaces import (
    BIG,
    SpaceModel,
    bu_block,
    cp_block,
    push_diag,
    push_mu,
    push_phi,
    push_psi,
)


def u_law(order=8):
    R = CoefficientRing("Z", (GradedVariable("u", 2),))
    return law_from_table(R, {(1, 1): "u"}, order=order, name="u-law")


def all_laws(order=8):
    return [additive_law(order), multiplicative_law(order), u_law(order)]


def cp_model(law, degree=8, prefix="x", size=BIG):
    return SpaceModel(law.ring, (cp_block(size, prefix),), degree)


def cp2_model(law, degree=8):
    return SpaceModel(law.ring, (cp_block(BIG, "x"), cp_block(BIG, "y")), degree)


def zmono(law, exp=1):
    return MultiSeries.monomial(law.ring, (ZFIELD,), "z", exp)


def rand_symbol(rng, names=("x", "y"), span=2):
    monos = []
    for _ in range(rng.randrange(1, 3)):
        exps = {n: rng.randrange(-span, span + 1) for n in names}
        monos.append((rng.randrange(-2, 3), exps))
    return BundleSymbol(tuple(monos), rng.randrange(-2, 3))


# -- symbols ---------------------------------------------------------------


def test_symbol_canonicalization():
    a = BundleSymbol.line(x=1) + BundleSymbol.line(x=1)
    assert a.monomials == ((2, (("x", 1),)),)
    assert a.rank == 2
    folded = BundleSymbol.line(x=0)
    assert folded.monomials == () and folded.trivial_rank == 1
    assert (a - a).is_zero
    v = BundleSymbol.line(x=1) - BundleSymbol.trivial(1)
    assert not v.is_genuine and v.rank == 0
    assert v.dual().monomials == ((1, (("x", -1),)),)


def test_symbol_tensor_line():
    t = BundleSymbol.trivial(2).tensor_line({"y": 1})
    assert t.monomials == ((2, (("y", 1),)),) and t.trivial_rank == 0
    s = BundleSymbol.line(x=1).tensor_line({"x": -1})
    assert s.monomials == () and s.trivial_rank == 1
    assert BundleSymbol.line(x=2).rename_roots({"x": "y"}) == BundleSymbol.line(y=2)


# -- first Chern classes of line monomials ---------------------------------


def test_root_c1_single_root():
    for law in all_laws():
        m = cp_model(law)
        assert root_c1({"x": 1}, law, m) == m.coh_root("x")
    m = cp_model(additive_law(8))
    assert str(root_c1({"x": 3}, additive_law(8), m)) == "3*x"


def test_root_c1_tensor_multiplicative():
    law = multiplicative_law(8)
    m = cp2_model(law)
    assert str(root_c1({"x": 1, "y": 1}, law, m)) == "x + y + x*y"


def test_root_c1_dual_is_inverse_series():
    law = multiplicative_law(8)
    m = cp_model(law, degree=6)
    assert str(root_c1({"x": -1}, law, m)) == "-x + x^2 - x^3"


def test_root_c1_additive_is_linear():
    law = additive_law(8)
    m = cp2_model(law)
    c = root_c1({"x": 2, "y": -3}, law, m)
    expect = m.coh_root("x") * 2 - m.coh_root("y") * 3
    ok, w = c.equal_within(expect)
    assert ok, w


# -- elementary symmetric Chern classes ------------------------------------


def test_chern_class_split_rank_two():
    law = additive_law(8)
    m = SpaceModel(law.ring, (bu_block(2, "x"),), 8)
    V = BundleSymbol.line(x1=1) + BundleSymbol.line(x2=1)
    assert chern_class(V, 0, law, m) == m.coh_one()
    ok, w = chern_class(V, 1, law, m).equal_within(m.coh_root("x1") + m.coh_root("x2"))
    assert ok, w
    ok, w = chern_class(V, 2, law, m).equal_within(m.coh_root("x1") * m.coh_root("x2"))
    assert ok, w
    assert chern_class(V, 3, law, m).is_zero


def test_chern_class_c2_is_product_of_roots():
    for law in all_laws():
        m = cp2_model(law)
        V = BundleSymbol.line(x=1) + BundleSymbol.line(y=2)
        a = root_c1({"x": 1}, law, m)
        b = root_c1({"y": 2}, law, m)
        ok, w = chern_class(V, 2, law, m).equal_within(a * b)
        assert ok, (law.name, w)


def test_chern_class_trivial_bundle_vanishes():
    law = additive_law(8)
    m = cp_model(law)
    assert chern_class(BundleSymbol.trivial(3), 1, law, m).is_zero
    assert chern_class(BundleSymbol.trivial(3), 0, law, m) == m.coh_one()


def test_chern_class_rejects_virtual_and_bad_index():
    law = additive_law(8)
    m = cp_model(law)
    with pytest.raises(ContractError):
        chern_class(BundleSymbol.line(x=1) - BundleSymbol.trivial(1), 1, law, m)
    with pytest.raises(InputError):
        chern_class(BundleSymbol.trivial(3), -1, law, m)


def test_whitney_sum_formula():
    law = u_law(8)
    m = SpaceModel(law.ring, (bu_block(2, "x"), bu_block(1, "y")), 8)
    V = BundleSymbol.line(x1=1) + BundleSymbol.line(x2=1)
    W = BundleSymbol.line(y1=1)
    for k in range(4):
        lhs = chern_class(V + W, k, law, m)
        rhs = MultiSeries.zero(law.ring, m.roots)
        for i in range(k + 1):
            rhs = rhs + chern_class(V, i, law, m) * chern_class(W, k - i, law, m)
        ok, w = lhs.equal_within(rhs)
        assert ok, (k, w)


# -- total Laurent class ----------------------------------------------------


def test_total_chern_trivial_rank():
    law = additive_law(8)
    m = cp_model(law)
    assert str(total_chern_series(BundleSymbol.trivial(2), law, m)) == "z^2"
    assert str(total_chern_series(BundleSymbol.trivial(-1), law, m)) == "z^-1"
    assert total_chern_series(BundleSymbol(), law, m) == 1


def test_total_chern_single_line_is_the_law():
    for law in all_laws():
        m = cp_model(law)
        C = total_chern_series(BundleSymbol.line(x=1), law, m)
        ok, w = C.equal_within(law.compose(zmono(law), m.coh_root("x")))
        assert ok, (law.name, w)


def test_total_chern_line_minus_trivial_golden():
    law = additive_law(8)
    m = cp_model(law)
    th = BundleSymbol.line(x=1) - BundleSymbol.trivial(1)
    assert str(total_chern_series(th, law, m)) == "1 + x*z^-1"


def test_total_chern_multiplicative_under_sum():
    rng = random.Random(3)
    for law in all_laws(6):
        m = cp2_model(law, degree=6)
        for _ in range(4):
            th1, th2 = rand_symbol(rng), rand_symbol(rng)
            C1 = total_chern_series(th1, law, m)
            C2 = total_chern_series(th2, law, m)
            C12 = total_chern_series(th1 + th2, law, m)
            ok, w = C12.equal_within((C1 * C2).truncate(law.policy))
            assert ok, (law.name, th1.monomials, th2.monomials, w)


def test_total_chern_virtual_inverse():
    rng = random.Random(4)
    for law in all_laws(6):
        m = cp2_model(law, degree=6)
        for _ in range(4):
            th = rand_symbol(rng)
            prod = total_chern_series(th, law, m) * total_chern_series(-th, law, m)
            ok, w = prod.truncate(law.policy).equal_within(1)
            assert ok, (law.name, th.monomials, th.trivial_rank, w)


def test_tensor_twist_rule():
    for law in all_laws(6):
        m = cp2_model(law, degree=6)
        symbols = [
            BundleSymbol.line(y=1) - BundleSymbol.trivial(1),
            BundleSymbol(((-1, {"y": 2}),), 1),
            BundleSymbol(((2, {"y": 1}), (-1, {"y": -1})), -1),
        ]
        zx = law.compose(zmono(law), m.coh_root("x"))
        for th in symbols:
            lhs = total_chern_series(th.tensor_line({"x": 1}), law, m)
            rhs = total_chern_series(th, law, m, zarg=zx)
            ok, w = lhs.equal_within(rhs)
            assert ok, (law.name, th.monomials, w)


# -- capping ----------------------------------------------------------------


def test_cap_single_line_additive_golden():
    law = additive_law(8)
    m = cp_model(law)
    out = cap_total_chern(m.basis_class(((2,),)), BundleSymbol.line(x=1), law)
    assert str(out) == "(1)*t1 + (z)*t2"
    expect = m.hclass({((2,),): zmono(law), ((1,),): 1}, fvars=(ZFIELD,))
    ok, w = out.equal_within(expect)
    assert ok, w


def test_cap_zero_symbol_is_identity():
    law = multiplicative_law(8)
    m = cp2_model(law)
    h = m.basis_class(((2,), (1,))) + m.basis_class(((0,), (3,)), coeff=2)
    ok, w = cap_total_chern(h, BundleSymbol(), law).equal_within(h)
    assert ok, w


def test_cap_line_minus_trivial_golden():
    law = additive_law(8)
    m = cp_model(law)
    out = cap_total_chern(m.basis_class(((1,),)), BundleSymbol.line(x=1) - BundleSymbol.trivial(1), law)
    expect = m.hclass({((1,),): 1, ((0,),): zmono(law, -1)}, fvars=(ZFIELD,))
    ok, w = out.equal_within(expect)
    assert ok, w


def test_cap_is_linear():
    law = additive_law(8)
    m = cp_model(law)
    th = BundleSymbol.line(x=2) - BundleSymbol.trivial(1)
    a = m.basis_class(((1,),))
    b = m.basis_class(((3,),), coeff=2)
    lhs = cap_total_chern(a + b, th, law)
    rhs = cap_total_chern(a, th, law) + cap_total_chern(b, th, law)
    ok, w = lhs.equal_within(rhs)
    assert ok, w


def test_cap_direct_sum_both_orders():
    rng = random.Random(5)
    for law in all_laws(6):
        m = cp2_model(law, degree=6)
        for _ in range(3):
            h = m.basis_class(((rng.randrange(3),), (rng.randrange(3),)))
            th1, th2 = rand_symbol(rng, span=1), rand_symbol(rng, span=1)
            lhs = cap_total_chern(h, th1 + th2, law)
            ok, w = lhs.equal_within(cap_total_chern(cap_total_chern(h, th1, law), th2, law))
            assert ok, (law.name, w)
            ok, w = lhs.equal_within(cap_total_chern(cap_total_chern(h, th2, law), th1, law))
            assert ok, (law.name, w)


def test_cap_degree_drop():
    law = additive_law(8)
    m = cp2_model(law)
    h = m.basis_class(((2,), (1,)))
    cases = [
        (BundleSymbol.line(x=1) + BundleSymbol.line(y=1), 2),
        (BundleSymbol.line(x=2) - BundleSymbol.trivial(2), -1),
        (BundleSymbol.line(x=1).dual() - BundleSymbol.line(y=1), 0),
    ]
    for th, r in cases:
        out = cap_total_chern(h, th, law)
        assert out.homogeneous_degree() == h.homogeneous_degree() - 2 * r, th.monomials


# -- naturality under the pushforwards --------------------------------------


def pull_symbol_mu(th):
    monos = []
    for mult, exps in th.monomials:
        k = dict(exps).get("x", 0)
        monos.append((mult, {"x": k, "y": k}))
    return BundleSymbol(tuple(monos), th.trivial_rank)


def pull_symbol_psi(th):
    monos = []
    for mult, exps in th.monomials:
        e = dict(exps)
        e["u"] = sum(e.values())
        monos.append((mult, e))
    return BundleSymbol(tuple(monos), th.trivial_rank)


def test_naturality_push_mu():
    rng = random.Random(9)
    for law in all_laws(6):
        m = cp2_model(law, degree=6)
        target = cp_model(law, degree=6)
        for _ in range(4):
            h = m.basis_class(((rng.randrange(3),), (rng.randrange(3),)))
            th = rand_symbol(rng, names=("x",), span=1)
            lhs = push_mu(cap_total_chern(h, pull_symbol_mu(th), law), law, prefix="x")
            rhs = cap_total_chern(push_mu(h, law, prefix="x"), th, law)
            assert rhs.model == target
            ok, w = lhs.equal_within(rhs)
            assert ok, (law.name, th.monomials, w)


def test_naturality_push_diag():
    rng = random.Random(10)
    for law in all_laws(6):
        m = cp_model(law, degree=6)
        for _ in range(4):
            h = m.basis_class(((rng.randrange(4),),))
            th = rand_symbol(rng, names=("xd1", "xd2"), span=1)
            pulled = th.rename_roots({"xd1": "x", "xd2": "x"})
            lhs = push_diag(cap_total_chern(h, pulled, law))
            rhs = cap_total_chern(push_diag(h), th, law)
            ok, w = lhs.equal_within(rhs)
            assert ok, (law.name, th.monomials, w)


def test_naturality_push_phi():
    rng = random.Random(11)
    for law in all_laws(6):
        source = SpaceModel(law.ring, (bu_block(1, "x"), bu_block(1, "y")), 6)
        target = SpaceModel(law.ring, (bu_block(2, "r"),), 6)
        for _ in range(4):
            h = source.basis_class(((rng.randrange(3),), (rng.randrange(3),)))
            # symbols on the rank-two cover must be symmetric in the roots
            a, b = rng.randrange(-1, 2), rng.randrange(-1, 2)
            mult = rng.randrange(-1, 2) or 1
            monos = [(mult, {"r1": a, "r2": b})]
            if a != b:
                monos.append((mult, {"r1": b, "r2": a}))
            th = BundleSymbol(tuple(monos), rng.randrange(-1, 2))
            pulled = th.rename_roots({"r1": "x1", "r2": "y1"})
            lhs = push_phi(cap_total_chern(h, pulled, law), prefix="r")
            rhs = cap_total_chern(push_phi(h, prefix="r"), th, law)
            assert rhs.model == target
            ok, w = lhs.equal_within(rhs)
            assert ok, (law.name, th.monomials, w)


def test_naturality_push_psi():
    rng = random.Random(12)
    for law in all_laws(6):
        m = SpaceModel(law.ring, (cp_block(BIG, "u"), cp_block(BIG, "x")), 6)
        for _ in range(4):
            h = m.basis_class(((rng.randrange(2),), (rng.randrange(3),)))
            th = rand_symbol(rng, names=("x",), span=1)
            lhs = push_psi(cap_total_chern(h, pull_symbol_psi(th), law), law)
            rhs = cap_total_chern(push_psi(h, law), th, law)
            ok, w = lhs.equal_within(rhs)
            assert ok, (law.name, th.monomials, w)


# -- the cap/expansion bookkeeping identity ----------------------------------


def test_power_twist_cap_rows():
    """Capping t_k by the n-fold line class reproduces the power table rows.

    The left side runs through unit inversion; the right side through the
    geometric-series expansion, so the two computations are independent.
    """
    policy = TruncationPolicy(8)
    for law in (additive_law(8), multiplicative_law(8)):
        for n in (-2, -1, 1, 2):
            m = cp_model(law, degree=8)
            table = law.power_coeffs(n, policy)
            sym = BundleSymbol(((n, {"x": 1}),))
            win = Window(cuts={"z": 8}, floors={"z": None}, tcut=8, tfloor=min(n, 0))
            for k in (0, 1, 3):
                lhs = cap_total_chern(m.basis_class(((k,),)), sym, law, policy=policy)
                rows = {}
                for (i, j), c in table.items():
                    if 0 <= j <= k:
                        rows.setdefault(((k - j,),), {})[(i,)] = c
                expect = m.hclass(
                    {
                        key: MultiSeries.from_terms(law.ring, (ZFIELD,), t, win)
                        for key, t in rows.items()
                    },
                    fvars=(ZFIELD,),
                )
                ok, w = lhs.equal_within(expect)
                assert ok, (law.name, n, k, w)
                # leading coefficient guard against vacuous windows
                lead = lhs.value(((k,),)).coefficient(z=n)
                assert lead == 1, (law.name, n, k, str(lead))


# -- K-theory exterior-power classes -----------------------------------------


def test_k_lambda_frozen_values():
    assert k_lambda_chern(1, 1) == {0: -1, 1: 1}
    assert k_lambda_chern(2, 1) == {0: -2, 1: 1}
    assert k_lambda_chern(2, 2) == {0: 1, 1: -1, 2: 1}
    assert k_lambda_chern(3, 0) == {0: 1}
    with pytest.raises(InputError):
        k_lambda_chern(2, 3)
    with pytest.raises(InputError):
        k_lambda_chern(2, -1)


def test_k_lambda_matches_chern_class_on_split_bundles():
    law = multiplicative_law(10)
    for n in range(1, 5):
        m = SpaceModel(law.ring, (bu_block(n, "x"),), 2 * n)
        V = BundleSymbol(tuple((1, {f"x{j + 1}": 1}) for j in range(n)))
        for i in range(n + 1):
            lhs = evaluate_k_class(k_lambda_chern(n, i), m)
            rhs = chern_class(V, i, law, m)
            ok, w = lhs.equal_within(rhs)
            assert ok, (n, i, w)
