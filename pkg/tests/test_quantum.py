"""Quantum side: universal R-operators from the chain, braid relations,
classical limits, the quadratic-exponential solution, and the L-operator
with its bialgebra matrix identities."""

from fractions import Fraction

import pytest

from osptwist.algebra import build_osp
from osptwist.pbw import UEElement, UETensor
from osptwist.scalars import Poly
import osptwist.rmatrix as rm
import osptwist.twist as tws
import osptwist.quantum as qt
from osptwist.errors import (
    CubeNotZero,
    HeterogeneousOperand,
    NotFirstOrderLie,
)


ALG = build_osp(2)
DEG = 3  # module-test truncation; the acceptance gate re-runs at contract depth


def jordanian_R():
    return qt.universal_R(tws.build_factor(ALG, "jordanian", DEG))


def chain_R():
    return qt.universal_R(tws.full_chain(ALG, DEG))


# -- universal R --------------------------------------------------------------------


def test_r_is_flipped_inverse():
    """R = flip(F) * F^{-1}; triangularity R21 R = 1 is then structural."""
    r = chain_R()
    assert qt.triangularity_residual(r).is_zero


def test_augmentation():
    r = chain_R()
    assert r.augmentation_ok()


def test_qybe_universal_jordanian():
    assert qt.qybe_residual(jordanian_R()).is_zero


def test_qybe_rep_full_chain():
    assert qt.qybe_residual_rep(chain_R()).is_zero


def test_intertwining_sampled_generators():
    """R * twisted-coproduct = flipped-twisted-coproduct * R on generators
    spanning all three behaviors (Cartan, odd root, long root)."""
    r = chain_R()
    w = tws.workshop(ALG, DEG)
    for nm in ("H", "v+", "X+", "J"):
        assert qt.intertwining_residual(r, w.gen(nm)).is_zero, nm


def test_rmatrix_needs_twist_for_intertwining():
    """A rep-only operator cannot be checked against the universal coproduct."""
    r = chain_R()
    bare = qt.RMatrix(None, None, rep_matrix=r.rep_matrix)
    w = tws.workshop(ALG, DEG)
    with pytest.raises((HeterogeneousOperand, AttributeError)):
        qt.intertwining_residual(bare, w.gen("H"))


# -- classical limits ---------------------------------------------------------------


def test_classical_limit_of_grading_family():
    """Rescaling each grade-2k component by eta^k makes a one-parameter
    family; its first order in eta is the classical cascade solution."""
    fam = qt.universal_R(tws.full_chain(ALG, DEG), eta="eta")
    assert qt.classical_limit(fam) == rm.r_full_borel(ALG)


def test_classical_limit_of_unparameterized_R():
    """Without the parameter the same information sits in the grade-2
    component (the leading deviation from 1 (x) 1)."""
    r = chain_R()
    assert qt.classical_limit(r) == rm.r_full_borel(ALG)


def test_classical_limit_rejects_composite_legs():
    """A grade-2 term with a quadratic leg is not first order in the Lie
    algebra and has no classical-tensor reading."""
    iv = ALG.generator_index("v+")
    t = UETensor(
        ALG,
        {((iv, iv), ()): Fraction(1)},
        2,
        g2cap=2 * DEG,
    )
    fake = qt.RMatrix(UETensor.one(ALG, 2, 2 * DEG) + t, None)
    with pytest.raises(NotFirstOrderLie):
        qt.classical_limit(fake)


def test_multi_parameter_family():
    """Independent symbolic weights on the chain factors survive to the
    classical term with their expected wedge structure."""
    fam = qt.universal_R(
        qt.multi_parameter_twist(
            ALG,
            {"sj2": "a", "super": "b", "extension": "c", "jordanian": "d"},
            DEG,
        )
    )
    got = qt.classical_limit(fam)
    a, b, c, d = (Poly.var(nm) for nm in ("a", "b", "c", "d"))
    want = (
        rm.wedge(ALG, "J", "Y+", coeff=a)
        - rm.wedge(ALG, "w+", "w+", coeff=a).scale(Fraction(1, 2))
        - rm.wedge(ALG, "v+", "v+", coeff=b).scale(Fraction(1, 2))
        + rm.wedge(ALG, "Z+", "U+", coeff=c)
        + rm.wedge(ALG, "H", "X+", coeff=d)
    )
    assert got == want


# -- quadratic exponential -----------------------------------------------------------


def test_exp_r_matrix_qybe():
    """exp(eta * rho(r)) solves the braid relation with polynomial entries
    because the cube of the rep image of r vanishes."""
    r = qt.exp_r_matrix(ALG)
    assert qt.qybe_residual_rep(r, ALG).is_zero


def test_exp_r_matrix_cube_guard():
    """The construction must refuse a seed whose rep cube survives."""
    with pytest.raises(CubeNotZero):
        qt.exp_r_matrix(ALG, r=rm.casimir_tensor(ALG))


# -- L-operator ---------------------------------------------------------------------


def test_l_operator_shape():
    l = qt.l_operator(chain_R())
    assert l.shape_ok()
    assert l.diagonal_unit_ok()


def test_l_operator_skew_corner_entries():
    """Raising-operator images put zeros below the antidiagonal pattern:
    entry (i,j) pairs row functional i with column vector j, so lower rows
    of the matrix collapse to scalars."""
    l = qt.l_operator(chain_R())
    for i in range(l.dim):
        assert l.entries[i][i].coefficient(()) == 1, i
    # strictly-lower entries vanish
    for i in range(l.dim):
        for j in range(l.dim):
            if i > j:
                assert l.entries[i][j].is_zero, (i, j)


def test_l_rep_consistency():
    r = chain_R()
    assert qt.l_operator(r).to_matrix() == r.rep_matrix


def test_rtt_exact():
    assert qt.rtt_residual(chain_R()).is_zero


def test_rtt_detects_corruption():
    """Poisoning one entry of L must break the quadratic exchange relation."""
    r = chain_R()
    l = qt.l_operator(r)
    cap = l.entries[0][0].g2cap
    l.entries[0][1] = l.entries[0][1] + UEElement.generator(
        ALG, "v+", g2cap=cap
    )
    assert not qt.rtt_residual(r, l=l).is_zero


def test_frt_identity_sampled():
    """Entry coproducts follow the column-first matrix-product law, modulo
    the truncation window (see frt_residual's docstring for the margin)."""
    l = qt.l_operator(chain_R())
    for (i, j) in ((0, 0), (0, 2), (2, 4)):
        assert l.frt_residual(i, j).is_zero, (i, j)


def test_frt_margin_is_needed_at_the_corner():
    """At the far corner the truncation shadow is visible: with no margin
    the difference keeps top-grade debris, with the structural margin it is
    clean.  This documents why the margin exists."""
    l = qt.l_operator(chain_R())
    with_margin = l.frt_residual(0, 4, margin=2)
    without = l.frt_residual(0, 4, margin=0)
    assert with_margin.is_zero
    assert not without.is_zero
    cap = l.entries[0][4].g2cap
    from osptwist.pbw import monomial_g2

    for mono in without.terms:
        g = sum(monomial_g2(ALG, m) for m in mono)
        assert g > cap - 2  # all surviving debris sits above the window
