import itertools
from fractions import Fraction as Q

import pytest

from backlim.exactnum import IntervalSet, interval
from backlim.orbits import (
    EventualPeriod,
    PeriodicOrbit,
    eventual_period,
    fixed_point_set,
    forward_orbit,
    least_period_of,
    periodic_orbits,
    periodic_points,
    sharkovsky_precedes,
)
from backlim.plmap import identity_map, iterate, make_plmap


def f5():
    return make_plmap(interval(0, 5), [(0, 1), (1, 5), (4, 2), (5, 0)])


def f8():
    return make_plmap(interval(0, 8), [(0, 4), (4, 8), (5, 3), (8, 0)])


def iset(*pairs):
    return IntervalSet.of(interval(lo, hi) for lo, hi in pairs)


class TestForwardOrbit:
    def test_f5_three_cycle(self):
        assert forward_orbit(f5(), Q(0), 3) == [0, 1, 5, 0]

    def test_f8_four_cycle(self):
        assert forward_orbit(f8(), Q(1), 4) == [1, 5, 3, 7, 1]

    def test_identity(self):
        assert forward_orbit(identity_map(interval(0, 1)), Q(1, 2), 2) == [Q(1, 2)] * 3


class TestEventualPeriod:
    def test_f5_preperiodic(self):
        # 9/2 -> 1 -> 5 -> 0 -> 1: lands on the 3-cycle after one step
        assert eventual_period(f5(), Q(9, 2)) == EventualPeriod(1, 3)

    def test_f8_fixed(self):
        assert eventual_period(f8(), Q(14, 3)) == EventualPeriod(0, 1)

    def test_undetermined_within_cap(self):
        assert eventual_period(f5(), Q(1, 7), cap=3) is None


class TestFixedPoints:
    def test_f5(self):
        assert fixed_point_set(f5()) == iset((3, 3))

    def test_f8(self):
        assert fixed_point_set(f8()) == iset((Q(14, 3), Q(14, 3)))

    def test_identity(self):
        assert fixed_point_set(identity_map(interval(0, 1))) == iset((0, 1))


class TestPeriodicPoints:
    def test_f5_period_two(self):
        expected = iset((Q(8, 9), Q(8, 9)), (2, 4), (Q(41, 9), Q(41, 9)))
        assert periodic_points(f5(), 2) == expected

    def test_f8_contains_two_six(self):
        pts = periodic_points(f8(), 2)
        assert pts.contains(Q(2)) and pts.contains(Q(6))

    def test_identity_whole_domain(self):
        ident = identity_map(interval(0, 1))
        assert periodic_points(ident, 5) == iset((0, 1))

    def test_exactness_invariant(self):
        for f, n in ((f5(), 3), (f8(), 4)):
            h = iterate(f, n)
            for part in periodic_points(f, n).parts:
                assert h.eval_at(part.lo) == part.lo
                assert h.eval_at(part.hi) == part.hi

    def test_divisor_containment(self):
        for f, n, k in ((f5(), 2, 2), (f5(), 1, 3), (f8(), 2, 2), (f8(), 1, 4)):
            base = periodic_points(f, n)
            assert periodic_points(f, n * k).contains_set(base)


class TestPeriodicOrbits:
    def test_f5_structure(self):
        st = periodic_orbits(f5(), 3)
        orbit_sets = {o.point_set for o in st.isolated_orbits}
        assert frozenset({Q(3)}) in orbit_sets
        assert frozenset({Q(0), Q(1), Q(5)}) in orbit_sets
        assert frozenset({Q(8, 9), Q(41, 9)}) in orbit_sets
        assert st.fixed_intervals == ((2, iset((2, 4))),)

    def test_f8_contains_named_orbits(self):
        st = periodic_orbits(f8(), 4)
        orbit_sets = {o.point_set for o in st.isolated_orbits}
        assert frozenset({Q(14, 3)}) in orbit_sets
        assert frozenset({Q(2), Q(6)}) in orbit_sets
        assert frozenset({Q(0), Q(4), Q(8)}) in orbit_sets
        # the period-4 orbit bounds a continuum of period-4 points
        assert (4, iset((1, 3), (5, 7))) in st.fixed_intervals

    def test_identity_continuum(self):
        st = periodic_orbits(identity_map(interval(0, 1)), 1)
        assert st.isolated_orbits == ()
        assert st.fixed_intervals == ((1, iset((0, 1))),)

    def test_least_period_consistency(self):
        for f, bound in ((f5(), 3), (f8(), 4)):
            for orbit in periodic_orbits(f, bound).isolated_orbits:
                p = orbit.least_period
                for d in range(1, p):
                    if p % d == 0:
                        assert f.eval_chain(orbit.points[0], d) != orbit.points[0]

    def test_temporal_order_from_least(self):
        orbit = PeriodicOrbit.from_point(f8(), Q(5), 4)
        assert orbit.points == (1, 5, 3, 7)


class TestSharkovsky:
    def test_three_forces_everything(self):
        assert sharkovsky_precedes(3, 17)
        assert sharkovsky_precedes(3, 2)

    def test_powers_of_two_descend(self):
        assert sharkovsky_precedes(4, 2)
        assert not sharkovsky_precedes(2, 8)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            sharkovsky_precedes(0, 1)

    def test_strict_total_order_exhaustive(self):
        nums = range(1, 65)
        for m, n in itertools.combinations(nums, 2):
            assert sharkovsky_precedes(m, n) != sharkovsky_precedes(n, m)
        for m in nums:
            assert not sharkovsky_precedes(m, m)
        for m, n, k in itertools.permutations((3, 12, 64), 3):
            if sharkovsky_precedes(m, n) and sharkovsky_precedes(n, k):
                assert sharkovsky_precedes(m, k)
        # transitivity over the full range
        order = sorted(nums, key=lambda v: sum(sharkovsky_precedes(v, w) for w in nums))
        ranked = list(reversed(order))
        for a, b in zip(ranked, ranked[1:]):
            assert sharkovsky_precedes(a, b)
