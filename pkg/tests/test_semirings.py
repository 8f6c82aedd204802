import random
from fractions import Fraction

import pytest

from tvg.intervals import EMPTY, INF, REALS, IntervalSet, hausdorff
from tvg.semirings.basic import (BOOL, LIFETIME, TROPICAL, WalkBudgetExceeded, path_mul,
                                 path_semiring, walk)
from tvg.semirings.contact import (CONTACT_ONE, CONTACT_ZERO, ContactMap, contact_add,
                                   contact_mul, format_contact, parse_contact, random_contact)
from tvg.semirings.delay import (LITERAL_DELAY, PDS_ONE, PDS_ZERO, DelayedLifetime, format_delayed,
                                 parse_delayed, pds_add, pds_mul)
from tvg.semirings.endo import IDENTITY, NEVER, MonotoneEndo, endo_compose, endo_min, random_endo
from tvg.semirings.homs import (NotInSubsemiring, bool_to_contact, contact_to_delay, contact_to_endo,
                                contact_to_lifetime, contact_to_tropical, endo_to_contact,
                                lifetime_to_contact, random_delay_contact, random_endo_contact,
                                random_tropical_contact)
from tvg.suites import random_intervalset, run_suite

F = Fraction
I = IntervalSet


@pytest.mark.parametrize("name", ["boolean", "lifetime", "tropical", "endomorphism", "contact", "path",
                                  "matrix-boolean", "matrix-lifetime", "matrix-tropical"])
def test_axiom_suites_hold(name):
    trials = 300 if name in ("contact", "endomorphism") else 500
    report = run_suite(name, trials, seed=1)
    assert report.ok, str(report)


def test_matrix_contact_lift_small_budget():
    report = run_suite("matrix-contact", 30, seed=2)
    assert report.ok, str(report)


def test_literal_delay_exhibits_annihilation_witness():
    report = run_suite("delay-literal", 1000)
    assert "annihilation" in {v.identity for v in report.violations}
    zero = LITERAL_DELAY.zero
    assert LITERAL_DELAY.mul(zero, (REALS, F(3))) == (EMPTY, F(3))


def test_normalized_delay_annihilates():
    for x in (DelayedLifetime(I([(0, 4)]), 2), DelayedLifetime(EMPTY, 7), PDS_ONE):
        assert pds_mul(PDS_ZERO, x) == PDS_ZERO
        assert pds_mul(x, PDS_ZERO) == PDS_ZERO
    assert DelayedLifetime(EMPTY, 7) == PDS_ZERO


def test_delay_is_not_distributive():
    # sums keep only the larger delay, so they shift less finely than the distributed form
    a, b, c = DelayedLifetime(I([(0, 10)]), 0), DelayedLifetime(I([(0, 10)]), 5), DelayedLifetime(I([(0, 10)]), 0)
    lhs = pds_mul(pds_add(a, b), c)
    rhs = pds_add(pds_mul(a, c), pds_mul(b, c))
    assert lhs == DelayedLifetime(I([(0, 5)]), 5)
    assert rhs == DelayedLifetime(I([(0, 10)]), 5)
    report = run_suite("delay", 1000)
    assert {v.identity for v in report.violations} == {"left distributivity", "right distributivity"}


def test_delay_four_node_example():
    ab, ac = DelayedLifetime(I([(0, 10)]), 1), DelayedLifetime(I([(0, 10)]), 3)
    bd, cd = DelayedLifetime(I([(9, 15)]), 3), DelayedLifetime(I([(9, 10)]), 2)
    assert pds_mul(ab, bd) == DelayedLifetime(I([(8, 10)]), 4)
    assert pds_mul(ac, cd) == DelayedLifetime(I([(6, 7)]), 5)
    assert pds_add(pds_mul(ab, bd), pds_mul(ac, cd)) == DelayedLifetime(I([(6, 7), (8, 10)]), 5)


def test_delay_text_roundtrip():
    rng = random.Random(3)
    for _ in range(100):
        x = DelayedLifetime(random_intervalset(rng), F(rng.randint(0, 9), 2))
        assert parse_delayed(format_delayed(x)) == x
    assert parse_delayed("([6,7]u[8,10]; 5)") == DelayedLifetime(I([(6, 7), (8, 10)]), 5)
    with pytest.raises(ValueError):
        DelayedLifetime(REALS, -1)


def test_tropical_basics():
    assert TROPICAL.add(F(3), INF) == 3
    assert TROPICAL.mul(F(3), INF) == INF
    assert TROPICAL.mul(F(3), F(4)) == 7


def test_boolean_and_lifetime_tables():
    assert BOOL.add(False, True) and not BOOL.mul(False, True)
    assert LIFETIME.mul(I([(0, 5)]), I([(3, 9)])) == I([(3, 5)])


def test_path_semiring_concatenates_matching_walks():
    S = path_semiring("abc")
    x = walk("a", "b") | walk("c", "a")
    y = walk("b", "c")
    assert S.mul(x, y) == walk("a", "b", "c")
    assert S.mul(S.one, x) == x
    with pytest.raises(WalkBudgetExceeded):
        path_mul(walk("a", "b"), walk("b", "c"), max_length=1)


# -- monotone endomorphisms ------------------------------------------------------

def test_endo_compose_example():
    w = MonotoneEndo.affine(1, 5)
    v = MonotoneEndo(((-INF, 0, 12), (10, 1, 2)))  # t -> max(t, 10) + 2
    assert str(endo_compose(w, v)) == "[-inf,10): 0*t+17; [10,inf): 1*t+7"


def test_endo_pointwise_oracle():
    rng = random.Random(11)
    pts = [F(k, 3) for k in range(-90, 90)]
    for _ in range(200):
        w, v = random_endo(rng), random_endo(rng)
        m, c = endo_min(w, v), endo_compose(w, v)
        for t in pts:
            assert m(t) == min(w(t), v(t))
            assert c(t) == w(v(t))


def test_endo_validation():
    with pytest.raises(ValueError):
        MonotoneEndo.affine(-1, 0)
    with pytest.raises(ValueError):
        MonotoneEndo(((-INF, 1, 10), (0, 1, 0)))  # drops at 0
    assert endo_min(IDENTITY, NEVER) == IDENTITY
    assert endo_compose(NEVER, IDENTITY) == NEVER


# -- universal contact semi-ring ---------------------------------------------------

def store_and_forward():
    ab = ContactMap.window(I([(0, 1)]), 10)
    ac = ContactMap.window(I([(0, 1)]), 0)
    bd = ContactMap.window(I([(10, 11)]), 5)
    cd = ContactMap.window(I([(5, 6)]), 0)
    return ab, ac, bd, cd, ContactMap.storage()


def test_store_and_forward_routes():
    ab, ac, bd, cd, cc = store_and_forward()
    abd = contact_mul(ab, bd)
    accd = contact_mul(contact_mul(ac, cc), cd)
    assert accd == contact_mul(ac, contact_mul(cc, cd))
    for k in range(0, 21):
        t = F(k, 20)
        assert abd(t) == I.point(15)
        assert accd(t) == I([(5 - t, 6 - t)])
    for t in (F(-1, 10), F(11, 10), F(7)):
        assert abd(t) == EMPTY and accd(t) == EMPTY
    total = contact_add(abd, accd)
    assert total(F(1, 2)) == I([(15, 15), (F(9, 2), F(11, 2))])


def test_contact_text_roundtrip():
    rng = random.Random(4)
    for _ in range(200):
        f = random_contact(rng)
        assert parse_contact(format_contact(f)) == f
    ab, ac, bd, cd, cc = store_and_forward()
    f = contact_mul(contact_mul(ac, cc), cd)
    assert parse_contact(format_contact(f)) == f


def test_contact_add_is_pointwise_union():
    rng = random.Random(6)
    ts = [F(k, 8) for k in range(-100, 100)]
    for _ in range(150):
        f, g = random_contact(rng), random_contact(rng)
        h = contact_add(f, g)
        for t in ts:
            assert h(t) == f(t) | g(t)


def test_contact_mul_matches_sampled_composition():
    # h(t) must contain g(t + x) + x for every sampled x in f(t) and be
    # within a few grid steps of the sampled union
    rng = random.Random(8)
    step = F(1, 32)
    ts = [F(k, 4) for k in range(-30, 30)]
    for _ in range(60):
        f, g = random_contact(rng), random_contact(rng)
        h = contact_mul(f, g)
        for t in ts:
            ft = f(t)
            if not ft.bounded:
                continue
            sampled = EMPTY
            for lo, hi in ft:
                n = int((hi - lo) / step)
                xs = {lo + k * step for k in range(n + 1)} | {hi}
                for x in xs:
                    sampled = sampled | I((a + x, b + x) for a, b in g(t + x))
            assert sampled.issubset(h(t))
            assert hausdorff(sampled, h(t)) <= 8 * step


def test_contact_neutral_elements():
    rng = random.Random(9)
    for _ in range(50):
        f = random_contact(rng)
        assert contact_mul(CONTACT_ONE, f) == f == contact_mul(f, CONTACT_ONE)
        assert contact_mul(CONTACT_ZERO, f) == CONTACT_ZERO == contact_mul(f, CONTACT_ZERO)


# -- sub-semi-ring homomorphisms ------------------------------------------------------

def test_bool_and_lifetime_embed():
    for a in (False, True):
        for b in (False, True):
            assert bool_to_contact(a or b) == contact_add(bool_to_contact(a), bool_to_contact(b))
            assert bool_to_contact(a and b) == contact_mul(bool_to_contact(a), bool_to_contact(b))
    rng = random.Random(2)
    for _ in range(200):
        a, b = random_intervalset(rng), random_intervalset(rng)
        la, lb = lifetime_to_contact(a), lifetime_to_contact(b)
        assert contact_add(la, lb) == lifetime_to_contact(a | b)
        assert contact_mul(la, lb) == lifetime_to_contact(a & b)
        assert contact_to_lifetime(la) == a


def test_tropical_quotient_is_a_homomorphism():
    rng = random.Random(3)
    for _ in range(200):
        x, y = random_tropical_contact(rng), random_tropical_contact(rng)
        hx, hy = contact_to_tropical(x), contact_to_tropical(y)
        assert contact_to_tropical(contact_add(x, y)) == TROPICAL.add(hx, hy)
        assert contact_to_tropical(contact_mul(x, y)) == TROPICAL.mul(hx, hy)
    with pytest.raises(NotInSubsemiring):
        contact_to_tropical(ContactMap.window(I([(0, 1)]), 2))


def test_delay_quotient_is_additive():
    rng = random.Random(4)
    for _ in range(200):
        x, y = random_delay_contact(rng), random_delay_contact(rng)
        assert contact_to_delay(contact_add(x, y)) == pds_add(contact_to_delay(x), contact_to_delay(y))
    assert contact_to_delay(ContactMap.window(I([(0, 10)]), 3)) == DelayedLifetime(I([(0, 10)]), 3)


def test_endo_quotient_reverses_products():
    rng = random.Random(5)
    forward_fail = 0
    for _ in range(200):
        x, y = random_endo_contact(rng), random_endo_contact(rng)
        hx, hy = contact_to_endo(x), contact_to_endo(y)
        assert contact_to_endo(contact_add(x, y)) == endo_min(hx, hy)
        assert contact_to_endo(contact_mul(x, y)) == endo_compose(hy, hx)
        forward_fail += contact_to_endo(contact_mul(x, y)) != endo_compose(hx, hy)
    # composition order matters: the walk applies x first
    assert forward_fail > 0


def test_endo_preimage_roundtrip():
    rng = random.Random(6)
    for _ in range(200):
        w = random_endo(rng)
        assert contact_to_endo(endo_to_contact(w)) == w
