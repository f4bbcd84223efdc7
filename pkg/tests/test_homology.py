"""U-module homology against frozen values and the brute-force oracle."""

import random

import pytest

from conftest import random_reduced_complex
from knotfloer.complexes import Complex, Generator, dualize
from knotfloer.homology import (UHomology, hfk_hat, hfk_minus, locality_rank,
                                torsion_order)
from knotfloer.knotlib import build_cable
from knotfloer.tensorsum import tensor
from oracles import hfk_minus_oracle, locality_rank_oracle

# expected values computed with the brute-force oracle and frozen
FROZEN = {
    "unknot": ((0,), ()),
    "fig8": ((0,), ((1, 0), (1, 1))),
    "cable2": ((0,), ((1, 0), (1, 0), (1, 1), (1, 2), (2, 3), (3, 4), (3, 5))),
    "cable3": ((0,), ((1, 0), (1, 0), (1, 0), (1, 0), (1, 1), (1, 2), (2, 3),
                      (2, 4), (3, 5), (3, 6), (4, 7), (5, 8), (5, 9))),
}


def test_unknot_decomposition(unknot):
    d = hfk_minus(unknot)
    assert d.tower_count == 1 and d.tower_gradings == (0,)
    assert d.torsion == ()
    assert torsion_order(d) == 0


def test_fig8_decomposition(fig8):
    d = hfk_minus(fig8)
    assert (d.tower_gradings, d.torsion) == FROZEN["fig8"]
    assert torsion_order(d) == 1


def test_k2_decomposition_matches_frozen(k2):
    d = hfk_minus(k2)
    assert (d.tower_gradings, d.torsion) == FROZEN["cable2"]


def test_k3_decomposition_matches_frozen(k3):
    d = hfk_minus(k3)
    assert (d.tower_gradings, d.torsion) == FROZEN["cable3"]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_oracle_cross_check(n):
    C = build_cable(n)
    d = hfk_minus(C)
    tower, torsion = hfk_minus_oracle(C)
    assert list(d.tower_gradings) == tower
    assert sorted(d.torsion) == torsion


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_torsion_order_family_law(n):
    assert torsion_order(hfk_minus(build_cable(n))) == 2 * n - 1


def test_hat_ranks(unknot, fig8, k2):
    assert hfk_hat(unknot).ranks == ((0, 0, 1),)
    assert hfk_hat(fig8).total == 5
    assert hfk_hat(k2).total == 15


@pytest.mark.parametrize("n", [2, 3, 4])
def test_hat_rank_counts_generators_of_reduced(n):
    C = build_cable(n)
    assert hfk_hat(C).total == len(C) == 15 + 12 * (n - 2)
    assert hfk_hat(C).total % 2 == 1


def test_locality_rank(unknot, k2, k3):
    assert locality_rank(unknot) == 1
    assert locality_rank(k2) == 1
    assert locality_rank(k3) == 1
    assert locality_rank(build_cable(4)) == 1


def test_two_towers():
    C = Complex([Generator("a", 0, 0), Generator("b", 0, 0)], {})
    assert locality_rank(C) == 2


@pytest.mark.parametrize("builder", ["unknot", "fig8", "k2", "k3"])
def test_locality_rank_matches_fraction_field(builder, request):
    C = request.getfixturevalue(builder)
    assert locality_rank(C) == locality_rank_oracle(C)


@pytest.mark.parametrize("seed", range(10))
def test_random_complexes_against_oracle(seed):
    rng = random.Random(2000 + seed)
    C = random_reduced_complex(rng)
    d = hfk_minus(C)
    tower, torsion = hfk_minus_oracle(C)
    assert list(d.tower_gradings) == tower
    assert sorted(d.torsion) == torsion
    assert d.tower_count == locality_rank_oracle(C)


def test_tensor_with_unknot_keeps_homology(unknot, fig8, k2):
    for C in (fig8, k2):
        T = tensor(unknot, C)
        assert hfk_minus(T) == hfk_minus(C)


def test_dual_negates_tower_grading_and_reflects_torsion(k2, k3):
    for C in (k2, k3):
        d = hfk_minus(C)
        dd = hfk_minus(dualize(C))
        assert dd.tower_gradings == tuple(sorted(-g for g in d.tower_gradings))
        # a torsion pair x -> U^k y dualizes to y* -> U^k x*, moving the
        # summand generator from grading g to 2k - 1 - g
        assert sorted(dd.torsion) == sorted((k, 2 * k - 1 - g)
                                            for k, g in d.torsion)


def test_tower_generator_class(k2):
    H = UHomology(k2)
    t = H.tower_generator()
    assert H.tower_unit_coefficient(t)
