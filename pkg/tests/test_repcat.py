"""Module category operations: Hom, Ext, tau, decomposition, base change."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import bruteforce as bf
from hallforge.errors import (
    MixedContextError,
    NotIndecomposableError,
    UndecidableError,
    ZeroModuleError,
)
from hallforge.gf import Mat, make_field
from hallforge.presentation import injective, make_rep, preset, projective, simple
from hallforge.repcat import (
    base_change,
    decompose,
    direct_sum,
    direct_sum_many,
    ext1_dim,
    fitting_decompose,
    hom_basis,
    hom_dim,
    is_indecomposable,
    is_isomorphic,
    list_indecomposables,
    min_projective_presentation,
    module_to_text,
    parse_module,
    residue_degree,
    stable_hom_dim,
    tau,
)

F2 = make_field(2)
F3 = make_field(3)


@pytest.fixture(scope="module")
def a2():
    return preset("hereditary-a2", F2)


@pytest.fixture(scope="module")
def ct():
    return preset("ct-a3-cyclic", F2)


@pytest.fixture(scope="module")
def a2_cat(a2):
    return list_indecomposables(a2, F2, 3)


@pytest.fixture(scope="module")
def ct_cat(ct):
    return list_indecomposables(ct, F2, 4)


# -- hom spaces -------------------------------------------------------------

def test_hom_dims_hereditary_a2(a2):
    P1, S1, S2 = projective(a2, 1), simple(a2, 1), simple(a2, 2)
    assert hom_dim(P1, P1) == 1
    assert hom_dim(S1, S2) == 0
    assert hom_dim(P1, S2) == 0


def test_hom_basis_elements_intertwine(a2_cat):
    for e1 in a2_cat.entries:
        for e2 in a2_cat.entries:
            hb = hom_basis(e1.rep, e2.rep)
            for f in hb.basis:
                for a, am, bm in zip(e1.rep.algebra.quiver.arrows,
                                     e1.rep.mats, e2.rep.mats):
                    s, t = a.source - 1, a.target - 1
                    assert (f[t] @ am) == (bm @ f[s])


def test_hom_mixed_context(a2, ct):
    with pytest.raises(MixedContextError):
        hom_dim(simple(a2, 1), simple(ct, 1))
    with pytest.raises(MixedContextError):
        hom_dim(simple(a2, 1), simple(a2, 1, F3))


# -- direct sums ------------------------------------------------------------

def test_direct_sum_with_zero(a2):
    from hallforge.presentation import zero_rep
    P1 = projective(a2, 1)
    assert direct_sum(P1, zero_rep(a2, F2)) == P1


def test_direct_sum_dims(a2):
    s = direct_sum(simple(a2, 1), simple(a2, 2))
    assert s.dims == (1, 1)
    assert s.mats[0].is_zero()


def test_hom_additivity(a2_cat):
    entries = a2_cat.entries
    for x in entries:
        for m in entries:
            for n in entries:
                both = direct_sum(m.rep, n.rep)
                assert hom_dim(x.rep, both) == hom_dim(x.rep, m.rep) + hom_dim(x.rep, n.rep)
                assert hom_dim(both, x.rep) == hom_dim(m.rep, x.rep) + hom_dim(n.rep, x.rep)


# -- isomorphism ------------------------------------------------------------

def test_conjugated_projective_is_isomorphic():
    a2_3 = preset("hereditary-a2", F3)
    P1 = projective(a2_3, 1)
    twisted = make_rep(a2_3, F3, (1, 1), (Mat(F3, 1, 1, [[2]]),))
    assert is_isomorphic(P1, twisted)


def test_simples_not_isomorphic(a2):
    assert not is_isomorphic(simple(a2, 1), simple(a2, 2))


def test_semisimple_recognition(a2):
    S2 = simple(a2, 2)
    twice = direct_sum(S2, S2)
    raw = make_rep(a2, F2, (0, 2), (Mat(F2, 2, 0),))
    assert is_isomorphic(twice, raw)


def test_isomorphism_undecidable_without_catalog():
    a2_5 = preset("hereditary-a2", make_field(5))
    big = direct_sum_many(a2_5, make_field(5), [simple(a2_5, 1)] * 4)
    other = direct_sum_many(a2_5, make_field(5), [simple(a2_5, 1)] * 4)
    with pytest.raises(UndecidableError):
        is_isomorphic(big, other, idempotent_cap=10 ** 6)


# -- decomposition ----------------------------------------------------------

def test_decompose_examples(a2, a2_cat):
    P1, S1, S2 = projective(a2, 1), simple(a2, 1), simple(a2, 2)
    assert decompose(direct_sum(P1, S2), a2_cat) == ("P1", "S2")
    assert decompose(S1, a2_cat) == ("S1",)
    assert decompose(direct_sum(P1, P1), a2_cat) == ("P1", "P1")


def test_decompose_agrees_with_fitting(ct, ct_cat):
    labels = ct_cat.labels()
    for i in range(len(labels)):
        for j in range(i, len(labels)):
            m = direct_sum(ct_cat.entry(labels[i]).rep, ct_cat.entry(labels[j]).rep)
            fast = decompose(m, ct_cat)
            slow = tuple(sorted(ct_cat.identify(leaf) for leaf in fitting_decompose(m)))
            assert fast == slow == tuple(sorted((labels[i], labels[j])))


def test_krull_schmidt(ct, ct_cat):
    for e1 in ct_cat.entries:
        for e2 in ct_cat.entries:
            both = direct_sum(e1.rep, e2.rep)
            assert decompose(both, ct_cat) == tuple(sorted((e1.label, e2.label)))


def test_is_indecomposable(a2, ct):
    assert is_indecomposable(simple(a2, 1))
    assert not is_indecomposable(direct_sum(simple(a2, 1), simple(a2, 1)))
    assert is_indecomposable(projective(ct, 1))
    with pytest.raises(ZeroModuleError):
        from hallforge.presentation import zero_rep
        is_indecomposable(zero_rep(a2, F2))


# -- catalogs --------------------------------------------------------------

def test_catalog_counts():
    for p in (2, 3):
        f = make_field(p)
        assert len(list_indecomposables(preset("hereditary-a2", f), f, 2).entries) == 3
        assert len(list_indecomposables(preset("hereditary-a3", f), f, 3).entries) == 6
        assert len(list_indecomposables(preset("ct-a3-cyclic", f), f, 4).entries) == 6


def test_catalog_labels(a2_cat, ct_cat):
    assert sorted(a2_cat.labels()) == ["P1", "S1", "S2"]
    assert sorted(ct_cat.labels()) == ["P1", "P2", "P3", "S1", "S2", "S3"]


def test_catalog_determinism(ct):
    one = list_indecomposables(preset("ct-a3-cyclic", F3), F3, 4)
    two = list_indecomposables(preset("ct-a3-cyclic", F3), F3, 4)
    assert [e.label for e in one.entries] == [e.label for e in two.entries]
    assert [e.rep.encode() for e in one.entries] == [e.rep.encode() for e in two.entries]


def test_extension_catalog_matches_direct_enumeration(ct):
    F4 = make_field(2, 2)
    ext = list_indecomposables(ct, F2, 4).extension(2)
    direct = list_indecomposables(ct, F4, 4)
    assert len(ext.entries) == len(direct.entries) == 6
    for e in ext.entries:
        assert any(is_isomorphic(e.rep, d.rep, catalog=direct) for d in direct.entries)


# -- presentations, Ext and tau --------------------------------------------

def test_min_presentation_s1_a2(a2):
    pres = min_projective_presentation(simple(a2, 1))
    assert pres.p0_vertices == (1,)
    assert pres.p1_vertices == (2,)
    assert pres.syzygy_module.dims == (0, 1)


def test_min_presentation_projective(a2):
    pres = min_projective_presentation(projective(a2, 1))
    assert pres.p1_vertices == ()
    assert pres.syzygy_module.total_dim == 0


def test_min_presentation_s1_ct(ct):
    pres = min_projective_presentation(simple(ct, 1))
    assert pres.p0_vertices == (1,)
    assert pres.p1_vertices == (2,)


def test_ext1_examples(a2, ct):
    assert ext1_dim(simple(a2, 1), simple(a2, 2)) == 1
    assert ext1_dim(simple(ct, 1), simple(ct, 2)) == 1


def test_ext1_from_projectives_vanishes(a2_cat, ct_cat):
    for cat in (a2_cat, ct_cat):
        alg = cat.algebra
        for i in alg.quiver.vertices():
            P = projective(alg, i)
            for e in cat.entries:
                assert ext1_dim(P, e.rep) == 0


def test_ext1_into_injectives_vanishes(ct_cat):
    alg = ct_cat.algebra
    for i in alg.quiver.vertices():
        inj = injective(alg, i)
        for e in ct_cat.entries:
            assert ext1_dim(e.rep, inj) == 0


def test_ext1_matches_bruteforce_oracle(a2_cat, ct_cat):
    # enumerative extension counting, q = 2, total dim <= 3
    for cat in (a2_cat, ct_cat):
        for em in cat.entries:
            for en in cat.entries:
                if em.rep.total_dim + en.rep.total_dim > 3:
                    continue
                got = ext1_dim(em.rep, en.rep)
                want = bf.ext1_count(bf.plain_of(em.rep), bf.plain_of(en.rep))
                assert got == want, (em.label, en.label)


def test_tau_examples(a2, ct, a2_cat, ct_cat):
    assert tau(projective(a2, 1)).total_dim == 0
    assert is_isomorphic(tau(simple(a2, 1)), simple(a2, 2), catalog=a2_cat)
    assert is_isomorphic(tau(simple(ct, 1)), simple(ct, 2), catalog=ct_cat)
    with pytest.raises(ZeroModuleError):
        from hallforge.presentation import zero_rep
        tau(zero_rep(a2, F2))


def test_tau_vanishes_exactly_on_projectives(a2_cat, ct_cat):
    for cat in (a2_cat, ct_cat):
        alg = cat.algebra
        projs = [projective(alg, i) for i in alg.quiver.vertices()]
        for e in cat.entries:
            is_proj = any(is_isomorphic(e.rep, p, catalog=cat) for p in projs)
            assert (tau(e.rep).total_dim == 0) == is_proj


def test_stable_hom_examples(a2):
    S1, S2 = simple(a2, 1), simple(a2, 2)
    t = tau(S1)
    assert stable_hom_dim(S2, t) == 1 == ext1_dim(S1, S2)
    # S1 is the injective at the source vertex
    assert is_isomorphic(S1, injective(a2, 1))
    assert stable_hom_dim(S1, S1) == 0


def test_stable_hom_from_injectives_vanishes(ct_cat):
    alg = ct_cat.algebra
    for i in alg.quiver.vertices():
        inj = injective(alg, i)
        for e in ct_cat.entries:
            assert stable_hom_dim(inj, e.rep) == 0


def test_ar_formula_sample():
    for name, bound in (("hereditary-a2", 2), ("ct-a3-cyclic", 4)):
        alg = preset(name, F2)
        cat = list_indecomposables(alg, F2, bound)
        for em in cat.entries:
            t = tau(em.rep)
            for en in cat.entries:
                rhs = stable_hom_dim(en.rep, t) if t.total_dim else 0
                assert ext1_dim(em.rep, en.rep) == rhs


# -- base change and residue degrees ---------------------------------------

def kronecker_d2_module():
    kr = preset("kronecker", F2)
    return make_rep(kr, F2, (2, 2),
                    (Mat.identity(F2, 2), Mat(F2, 2, 2, [[0, 1], [1, 1]])))


def test_base_change_simple(a2):
    F4 = make_field(2, 2)
    s = base_change(simple(a2, 1), F4)
    assert s.dims == (1, 0) and is_indecomposable(s)


def test_base_change_keeps_matrices(a2):
    F8 = make_field(2, 3)
    P1 = projective(a2, 1)
    up = base_change(P1, F8)
    assert [m.data for m in up.mats] == [m.data for m in P1.mats]


def test_base_change_errors(a2):
    with pytest.raises(Exception):
        base_change(simple(a2, 1), make_field(3))
    F4 = make_field(2, 2)
    lifted = base_change(simple(a2, 1), F4)
    with pytest.raises(Exception):
        base_change(lifted, make_field(2, 3))


def test_kronecker_module_residue_degree_and_base_change():
    K = kronecker_d2_module()
    assert residue_degree(K) == 2
    assert is_indecomposable(K)
    K4 = base_change(K, make_field(2, 2))
    assert not is_indecomposable(K4)
    parts = fitting_decompose(K4)
    assert len(parts) == 2
    assert not is_isomorphic(parts[0], parts[1])
    K8 = base_change(K, make_field(2, 3))
    assert is_indecomposable(K8)


def test_gcd_one_base_change_stays_indecomposable(ct_cat):
    # every ct-a3-cyclic entry has residue degree 1, so any extension works
    E = make_field(2, 2)
    for e in ct_cat.entries:
        assert e.residue_degree == 1
        assert is_indecomposable(base_change(e.rep, E))


def test_residue_degree_simple_and_projective(a2, ct):
    assert residue_degree(simple(a2, 1)) == 1
    assert residue_degree(projective(a2, 1)) == 1
    assert residue_degree(projective(ct, 2)) == 1


def test_residue_degree_rejects_decomposable(a2):
    both = direct_sum(simple(a2, 1), simple(a2, 2))
    with pytest.raises(NotIndecomposableError):
        residue_degree(both)


# -- module text format -----------------------------------------------------

def test_module_text_roundtrip_prime_field(ct, ct_cat):
    for e in ct_cat.entries:
        text = module_to_text(e.rep)
        back = parse_module(text, ct)
        assert back == e.rep
        assert module_to_text(back) == text


def test_module_text_roundtrip_extension_field():
    K4 = base_change(kronecker_d2_module(), make_field(2, 2))
    kr = preset("kronecker", F2)
    text = module_to_text(K4)
    back = parse_module(text, kr)
    assert back == K4 and module_to_text(back) == text


def test_module_text_wrong_algebra(a2, ct):
    text = module_to_text(simple(a2, 1))
    with pytest.raises(MixedContextError):
        parse_module(text, ct)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_random_a2_modules_roundtrip(data):
    alg = preset("hereditary-a2", F3)
    d1 = data.draw(st.integers(0, 2))
    d2 = data.draw(st.integers(0, 2))
    entries = data.draw(st.lists(st.integers(0, 2), min_size=d1 * d2, max_size=d1 * d2))
    m = make_rep(alg, F3, (d1, d2),
                 (Mat(F3, d2, d1, [entries[i * d1:(i + 1) * d1] for i in range(d2)]),))
    assert parse_module(module_to_text(m), alg) == m
