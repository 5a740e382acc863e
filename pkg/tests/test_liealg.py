"""Lie algebra layer: sl_n models, triples, gradings, setups."""

from fractions import Fraction

import pytest

import wreduce as w
from wreduce import linalg as la
from wreduce.liealg import (
    Grading,
    LieAlgebraError,
    SetupError,
    graded_canonical_basis,
)


def unit(alg, label, c=1):
    v = alg.basis_vector(alg.label_index(label))
    return [Fraction(c) * x for x in v]


def add(u, v):
    return [a + b for a, b in zip(u, v)]


def test_sl_n_model_validates_and_brackets():
    alg = w.build_sl_n(3)
    assert alg.dim == 8
    alg.validate()
    # [e12, e21] = h1
    br = alg.bracket(unit(alg, "e12"), unit(alg, "e21"))
    assert br == unit(alg, "h1")
    # trace form: <e12|e21> = 1, <e12|e12> = 0
    assert alg.pair(unit(alg, "e12"), unit(alg, "e21")) == 1
    assert alg.pair(unit(alg, "e12"), unit(alg, "e12")) == 0


def test_bad_bracket_table_rejected():
    with pytest.raises(LieAlgebraError):
        w.LieAlgebra(2, ["x", "y"], {(1, 0): ((0, 1),)},
                     [[1, 0], [0, 1]]).validate()


def test_sl2_triples_satisfy_relations():
    for n, part in ((2, [2]), (3, [2, 1]), (4, [4])):
        alg = w.build_sl_n(n)
        t = w.sl2_from_partition(n, part)
        t.validate(alg)
        assert alg.bracket(t.h, t.e) == [2 * x for x in t.e]
        assert alg.bracket(t.h, t.f) == [-2 * x for x in t.f]
        assert alg.bracket(t.e, t.f) == list(t.h)


def test_minimal_triple_is_the_corner_one():
    alg = w.build_sl_n(3)
    t = w.sl2_from_partition(3, [2, 1])
    assert list(t.e) == unit(alg, "e13")
    assert list(t.f) == unit(alg, "e31")
    assert list(t.h) == add(unit(alg, "h1"), unit(alg, "h2"))


def test_all_parts_one_rejected():
    with pytest.raises(LieAlgebraError, match="all parts 1"):
        w.sl2_from_partition(2, [1, 1])


def test_dynkin_grading_degrees():
    alg = w.build_sl_n(3)
    t = w.sl2_from_partition(3, [2, 1])
    g = w.dynkin_grading(alg, t.h)
    # labels e12, e13, e21, e23, e31, e32, h1, h2
    assert list(g.degs) == [1, 2, -1, 1, -2, -1, 0, 0]
    g.validate(alg)


def test_incompatible_grading_rejected():
    alg = w.build_sl_n(2)
    g = Grading([1, 0, 0])  # deg e12 = 1 breaks [e12, e21] = h1
    with pytest.raises(LieAlgebraError, match="does not respect the bracket"):
        g.validate(alg)


def test_good_grading_report():
    alg = w.build_sl_n(3)
    t = w.sl2_from_partition(3, [2, 1])
    rep = w.verify_good_grading(alg, t, w.dynkin_grading(alg, t.h))
    assert rep.ok
    assert "injective" in rep.summary()
    # the zero grading puts f in degree 0: not good
    bad = w.verify_good_grading(alg, t, Grading([0] * 8))
    assert not bad.ok


def test_graded_canonical_basis_is_homogeneous_echelon():
    alg = w.build_sl_n(3)
    t = w.sl2_from_partition(3, [2, 1])
    g = w.dynkin_grading(alg, t.h)
    rows = [unit(alg, "e21"), unit(alg, "e31"), add(unit(alg, "e32"),
                                                    unit(alg, "e31"))]
    basis = graded_canonical_basis(alg, g, rows)
    assert len(basis) == 3
    for v in basis:
        g.degree_of(v)  # raises if mixed
    assert la.row_space(basis) == la.row_space(rows)


def test_derive_subspaces_shapes(fkdv):
    s = fkdv
    assert s.m == 4
    assert len(s.s_basis) == 6
    assert len(s.n_minus) == 2
    assert len(s.g_minus) == 2
    # duals are dual to slice + complement under the trace form
    frame = s.full_basis()
    duals = [list(v) for v in s.duals]
    for i, u in enumerate(duals):
        for j, v in enumerate(frame):
            assert s.algebra.pair(v, u) == (1 if i == j else 0)


def test_slice_coordinates_are_grading_independent(fkdv_family):
    frames = {tuple(map(tuple, v.slice_basis)) for v in fkdv_family.values()}
    assert len(frames) == 1


def test_nonisotropic_ell_rejected():
    alg = w.build_sl_n(3)
    t = w.sl2_from_partition(3, [2, 1])
    g = w.dynkin_grading(alg, t.h)
    with pytest.raises(SetupError, match="isotropic"):
        w.derive_subspaces(alg, t, g,
                           isotropic=[unit(alg, "e21"), unit(alg, "e32")],
                           a=unit(alg, "e31"))


def test_ell_outside_g_minus_one_rejected():
    alg = w.build_sl_n(3)
    t = w.sl2_from_partition(3, [2, 1])
    g = w.dynkin_grading(alg, t.h)
    with pytest.raises(SetupError, match="g_-1"):
        w.derive_subspaces(alg, t, g, isotropic=[unit(alg, "e31")],
                           a=unit(alg, "e31"))


def test_inadmissible_a_rejected():
    alg = w.build_sl_n(3)
    t = w.sl2_from_partition(3, [2, 1])
    g = w.dynkin_grading(alg, t.h)
    with pytest.raises(SetupError, match="centralizer"):
        w.derive_subspaces(alg, t, g, a=unit(alg, "e21"))


def test_inhomogeneous_complement_rejected(kdv):
    alg = w.build_sl_n(2)
    t = w.sl2_from_partition(2, [2])
    g = w.dynkin_grading(alg, t.h)
    mixed = add(unit(alg, "h1"), unit(alg, "e12"))
    with pytest.raises(SetupError, match="homogeneous"):
        w.derive_subspaces(alg, t, g, a=t.f,
                           slice_basis=[list(t.f)],
                           complement=[mixed, unit(alg, "e12")])


def test_mixed_pairing_of_iso_and_a_rejected():
    # ell = span(e21 + e32) with a = e21 - e32: [a, ell] does not vanish
    alg = w.build_sl_n(3)
    t = w.sl2_from_partition(3, [2, 1])
    g = w.dynkin_grading(alg, t.h)
    lplus = add(unit(alg, "e21"), unit(alg, "e32"))
    aminus = add(unit(alg, "e21"), unit(alg, "e32", -1))
    with pytest.raises(SetupError, match="centralizer"):
        w.derive_subspaces(alg, t, g, isotropic=[lplus], a=aminus)


def test_setup_json_round_trip(fkdv):
    data = w.setup_to_json(fkdv)
    back = w.setup_from_json(data)
    assert back.m == fkdv.m
    assert back.slice_basis == fkdv.slice_basis
    assert back.s_basis == fkdv.s_basis
    assert back.a == fkdv.a
    assert back.grading.degs == fkdv.grading.degs


def test_setup_json_rejects_inconsistent_brackets():
    data = w.setup_to_json(w.kdv_setup())
    # contradict antisymmetry: state [y,x] = +[x,y] for a stored pair
    i, j, terms = data["brackets"][0]
    data["brackets"].append([j, i, terms])
    with pytest.raises(LieAlgebraError):
        w.setup_from_json(data)


def test_builtin_variants_all_admissible(fkdv_family):
    assert len(fkdv_family) == 8
    for s in fkdv_family.values():
        assert s.m == 4


def test_unknown_variant_name_lists_choices():
    with pytest.raises(ValueError, match="g1-lplus"):
        w.fkdv_setup("nope")
