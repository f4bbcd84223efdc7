"""Local-map search, self-local equivalences, connected complexes."""

import random

import pytest

from knotfloer.errors import ResourceError, StructuralError
from knotfloer.homology import hfk_minus, torsion_order
from knotfloer.knotlib import build_cable
from knotfloer.localequiv import (KernelSpace, LocalSearchSpec,
                                  SelfLocalFamily, concordance_unknotting_bound,
                                  connected_complex, kernel_space,
                                  maximal_self_local_map, omega,
                                  search_local_map, self_local_equivalences,
                                  verify_almost_local)
from knotfloer.morphism import IotaData, LinMap, enumerate_almost_iotas
from knotfloer.ring import Ideal, RingElt

ONE = RingElt.one()


# -- search_local_map --------------------------------------------------------

def test_unknot_to_k2_exists(unknot, k2):
    cert = search_local_map(LocalSearchSpec((unknot, None), (k2, None)))
    assert cert.exists
    assert cert.found.action == {"a": {"a": ONE}}


def test_k2_to_unknot_nonexistent(unknot, k2):
    cert = search_local_map(LocalSearchSpec((k2, None), (unknot, None)))
    assert not cert.exists
    assert cert.token is not None
    assert cert.token.iota_pairs == 2


def test_k3_to_k2_nonexistent(k2, k3):
    cert = search_local_map(LocalSearchSpec((k3, None), (k2, None)))
    assert not cert.exists
    assert cert.token.iota_pairs == len(enumerate_almost_iotas(k3)) * 2


@pytest.mark.parametrize("direction", ["k2u", "k3k2"])
def test_nonexistence_stable_under_cap_increase(unknot, k2, k3, direction):
    src, tgt = (k2, unknot) if direction == "k2u" else (k3, k2)
    base = search_local_map(LocalSearchSpec((src, None), (tgt, None)))
    assert not base.exists
    again = search_local_map(LocalSearchSpec((src, None), (tgt, None),
                                             cap=base.token.cap + 1))
    assert not again.exists


def test_self_map_exists_and_reverifies(k2):
    cert = search_local_map(LocalSearchSpec((k2, None), (k2, None)))
    assert cert.exists
    i1, i2 = cert.iota_pair
    assert verify_almost_local(cert.found, i1, i2)


def test_asymmetry_of_local_classes(unknot, k2):
    ab = search_local_map(LocalSearchSpec((unknot, None), (k2, None)))
    ba = search_local_map(LocalSearchSpec((k2, None), (unknot, None)))
    assert ab.exists and not ba.exists


def test_budget_guard(k2, k3):
    with pytest.raises(ResourceError):
        search_local_map(LocalSearchSpec((k3, None), (k2, None), budget=10))


def test_full_mode_unknot_identity(unknot):
    iota = IotaData(LinMap(unknot, unknot, "skew", (0, 0),
                           {"a": {"a": ONE}}), "full")
    cert = search_local_map(LocalSearchSpec((unknot, iota), (unknot, iota),
                                            mode="local"))
    assert cert.exists


# -- omega -------------------------------------------------------------------

def test_omega_unknot(unknot):
    iu = enumerate_almost_iotas(unknot)[0]
    assert omega(iu).is_zero()


def test_omega_k2_values(k2, k2_iotas):
    w = omega(k2_iotas[0])
    assert w.of_gen("b") == {"a": ONE}
    assert w.of_gen("a") == {}
    assert w.of_gen("f") == {"f": ONE, "g": ONE}


# -- self-local equivalences -------------------------------------------------

def test_unknot_self_local_is_identity(unknot):
    iu = enumerate_almost_iotas(unknot)[0]
    maps = self_local_equivalences(unknot, iu)
    assert len(maps) == 1
    assert maps[0].map.action == {"a": {"a": ONE}}


def test_k2_family_too_large_to_enumerate(k2, k2_iotas):
    with pytest.raises(ResourceError):
        self_local_equivalences(k2, k2_iotas[0])


def test_k2_diagonal_coefficients_forced(k2, k2_iotas):
    # <f(b), b> = 1 and <f(c), c> = 1 across the whole family, proven
    # from the affine structure rather than by sampling
    for io in k2_iotas:
        fam = SelfLocalFamily(k2, io, 2_000_000)
        assert fam.unit_coefficient_constant("b", "b") == (True, 1)
        assert fam.unit_coefficient_constant("c", "c") == (True, 1)


def test_k2_sampled_members_verify(k2, k2_iotas):
    fam = SelfLocalFamily(k2, k2_iotas[0], 2_000_000)
    for f in fam.sample_members(12, seed=7):
        assert verify_almost_local(f, k2_iotas[0], k2_iotas[0])
        assert f.of_gen("b").get("b") == ONE
        assert f.of_gen("c").get("c") == ONE


def test_identity_is_self_local(k2, k2_iotas):
    from knotfloer.morphism import identity_map
    ident = identity_map(k2)
    for io in k2_iotas:
        assert verify_almost_local(ident, io, io)


def test_maximality_restriction_injective(k2, k2_iotas):
    # for a maximal f and sampled self-local g, g restricted to im f is
    # injective: ker g meets im f trivially
    io = k2_iotas[0]
    f, ker_f, note = maximal_self_local_map(k2, io)
    fam = SelfLocalFamily(k2, io, 2_000_000)
    cap = fam.cap
    conn = connected_complex(k2, io)
    im_names = {g.name for g in conn.basis}
    for g in fam.sample_members(6, seed=11):
        ker_g = kernel_space(k2, g, cap)
        # intersect: vectors of ker g supported on im f generators only
        # must be zero; approximate via kernel dim comparison after
        # composing: ker(g o f) = ker f for maximal f
        gf = g.compose(f)
        assert kernel_space(k2, gf, cap).rows == ker_f.rows


# -- connected complex -------------------------------------------------------

def test_connected_unknot(unknot):
    iu = enumerate_almost_iotas(unknot)[0]
    conn = connected_complex(unknot, iu)
    assert len(conn) == 1
    assert hfk_minus(conn) == hfk_minus(unknot)


def test_connected_k2_torsion_survives(k2, k2_iotas):
    for io in k2_iotas:
        conn = connected_complex(k2, io)
        assert conn.validate().ok
        d = hfk_minus(conn)
        assert d.tower_count == 1
        assert torsion_order(d) >= 2


def test_connected_k2_independent_of_order(k2, k2_iotas):
    for io in k2_iotas:
        a = connected_complex(k2, io, order="forward")
        b = connected_complex(k2, io, order="reverse")
        assert hfk_minus(a) == hfk_minus(b)


def test_bound_values(unknot, fig8, fig8_iotas, k2, k2_iotas):
    iu = enumerate_almost_iotas(unknot)[0]
    assert concordance_unknotting_bound(unknot, iu) == 0
    for io in k2_iotas:
        assert concordance_unknotting_bound(k2, io) >= 2
    # derived value, frozen after the first pipeline run
    for io in fig8_iotas:
        assert concordance_unknotting_bound(fig8, io) == 1


def test_kernel_space_basics(k2, k2_iotas):
    io = k2_iotas[0]
    f, ker, note = maximal_self_local_map(k2, io)
    assert "maximal within cap" in note
    from knotfloer.morphism import identity_map
    ker_id = kernel_space(k2, identity_map(k2), 4)
    assert ker_id.dim == 0
    assert ker.contains(ker_id)
    assert ker.dim > 0
