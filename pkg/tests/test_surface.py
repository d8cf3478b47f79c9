import json
import math

import pytest

from conftest import random_rep
from twistlab import dynamics, hyp2, surface
from twistlab.errors import DimensionMismatch, IntegrityError, UnsupportedCurve, ValidationError
from twistlab.hyp2 import GroupElement
from twistlab.surface import B, D, ChainRep, Peripheral, TwistedD


def test_curve_words():
    assert surface.curve_word(B(1)) == ((2, -1), (1, -1))
    assert surface.curve_word(B(3)) == ((4, -1), (3, -1), (2, -1), (1, -1))
    assert surface.curve_word(D(1)) == ((3, -1), (2, -1))
    assert surface.curve_word(Peripheral(2)) == ((2, 1),)
    assert surface.curve_word(TwistedD(2, 0)) == surface.curve_word(D(2))
    with pytest.raises(UnsupportedCurve):
        surface.curve_word(TwistedD(1, 2))


@pytest.mark.parametrize(
    "text, curve",
    [("c3", Peripheral(3)), ("b1", B(1)), ("d2", D(2)), ("d2~m-3", TwistedD(2, -3)), ("d1~m0", D(1))],
)
def test_parse_curve(text, curve):
    c = surface.parse_curve(text)
    assert c == curve
    if "~m0" not in text:
        assert str(c) == text


def test_parse_curve_rejects():
    for bad in ("x1", "b", "c2~m1", "d1~mx"):
        with pytest.raises(ValidationError):
            surface.parse_curve(bad)


def test_check_curve_ranges():
    surface.check_curve(B(2), 5)
    with pytest.raises(ValidationError):
        surface.check_curve(B(3), 5)
    with pytest.raises(ValidationError):
        surface.check_curve(Peripheral(0), 5)
    assert len(surface.chain_curves(6)) == 6 + 2 * 3


def test_chainrep_validation(rng):
    rep = random_rep(rng, 4)
    with pytest.raises(DimensionMismatch):
        ChainRep(4, rep.alpha[:3], rep.gens)
    with pytest.raises(ValidationError):
        ChainRep(4, (7.0,) + rep.alpha[1:], rep.gens)
    bad = rep.with_gens((hyp2.rot(0.3),) + rep.gens[1:])
    with pytest.raises(IntegrityError):
        bad.check()


def test_word_consistency(rng):
    for n in (4, 5, 7):
        rep = random_rep(rng, n)
        for i in range(1, n - 2):
            b = surface.holonomy(rep, B(i))
            head = surface.evaluate_word(rep, tuple((j, 1) for j in range(1, i + 2)))
            assert hyp2.is_identity(b @ head)
            tail = surface.evaluate_word(rep, tuple((j, 1) for j in range(i + 2, n + 1)))
            assert hyp2.distance(b, tail) <= 1e-9


def test_complementary_angles_at_b(rng):
    for n in (4, 5, 6):
        rep = random_rep(rng, n)
        for i in range(1, n - 2):
            inside = surface.holonomy(rep, B(i))
            outside = surface.evaluate_word(rep, tuple((j, 1) for j in range(1, i + 2)))
            total = hyp2.rotation_angle(inside) + hyp2.rotation_angle(outside)
            assert total == pytest.approx(2 * math.pi, abs=1e-9)


def test_twisted_d_holonomy(rng):
    rep = random_rep(rng, 5)
    assert surface.holonomy(rep, TwistedD(1, 0)) == surface.holonomy(rep, D(1))
    for m in (-3, 1, 4):
        twisted = dynamics.dehn_twist_power(rep, B(2), m)
        lhs = hyp2.rotation_angle(surface.holonomy(rep, TwistedD(2, m)))
        rhs = hyp2.rotation_angle(surface.holonomy(twisted, D(2)))
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_total_ellipticity_of_dt_reps(rng):
    for n in (4, 5, 6, 7):
        rep = random_rep(rng, n)
        curves = surface.chain_curves(n) + [TwistedD(i, m) for i in range(1, n - 2) for m in range(-8, 9)]
        for c in curves:
            assert hyp2.is_elliptic(surface.holonomy(rep, c)), c


def test_conjugate_rep(rng):
    rep = random_rep(rng, 5)
    same = surface.conjugate_rep(rep, GroupElement.identity())
    assert same.gens == rep.gens
    h = GroupElement(1.3, -0.4, 0.2, 0.7)
    moved = surface.conjugate_rep(rep, h)
    assert moved.product_defect() <= 1e-9
    for c in surface.chain_curves(5):
        assert hyp2.rotation_angle(surface.holonomy(moved, c)) == pytest.approx(
            hyp2.rotation_angle(surface.holonomy(rep, c)), abs=1e-9
        )
    p = complex(hyp2.fixed_point(surface.holonomy(rep, B(1))))
    q = complex(hyp2.fixed_point(surface.holonomy(moved, B(1))))
    assert abs(hyp2.mobius(h, p) - q) <= 1e-9


def test_normalize_at(rng):
    rep = random_rep(rng, 6)
    for c in (B(1), B(3), D(2), Peripheral(4)):
        norm = surface.normalize_at(rep, c)
        assert abs(complex(hyp2.fixed_point(surface.holonomy(norm, c))) - 1j) <= 1e-9
        assert norm.product_defect() <= 1e-9
        twice = surface.normalize_at(norm, c)
        assert abs(complex(hyp2.fixed_point(surface.holonomy(twice, c))) - 1j) <= 1e-9


def test_json_round_trip_is_exact(rng):
    rep = random_rep(rng, 5)
    back = ChainRep.from_json(rep.to_json())
    assert back == rep
    data = json.loads(rep.to_json())
    assert set(data) == {"n", "alpha", "generators"}
    assert len(data["generators"][0]) == 2


def test_renormalized_and_verify(rng):
    rep = random_rep(rng, 4)
    again = rep.renormalized().verify()
    assert max(abs(g.det - 1) for g in again.gens) <= 1e-15
