"""Forward-orbit analysis: periodic points, least periods, Sharkovsky order.

Periodic structure distinguishes isolated periodic orbits from whole
intervals of n-periodic points (continua), which arise as soon as some
composition is the identity on a subinterval.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactnum import Interval, IntervalSet
from .plmap import DEFAULT_PIECE_CAP, PieceBudgetExceeded, PLMap, compose, iterate


def forward_orbit(f: PLMap, x: Fraction, n: int) -> list[Fraction]:
    out = [x]
    for _ in range(n):
        out.append(f.eval_at(out[-1]))
    return out


@dataclass(frozen=True)
class EventualPeriod:
    preperiod: int
    period: int


def eventual_period(f: PLMap, x: Fraction, cap: int = 64) -> EventualPeriod | None:
    """Smallest (m, p) with f^{m+p}(x) = f^m(x), or None within cap steps.

    Rational denominators can grow without bound, so an honest None is
    returned when no exact repeat shows up.
    """
    seen: dict[Fraction, int] = {}
    v = x
    for i in range(cap + 1):
        if v in seen:
            return EventualPeriod(seen[v], i - seen[v])
        seen[v] = i
        v = f.eval_at(v)
    return None


def fixed_point_set(f: PLMap) -> IntervalSet:
    """Exact {x : f(x) = x}; an identity piece contributes its whole span."""
    out = []
    for piece in f.pieces:
        if piece.slope == 1:
            if piece.intercept == 0:
                out.append(piece.span)
            continue
        x = piece.intercept / (1 - piece.slope)
        if piece.span.contains(x):
            out.append(Interval(x, x))
    return IntervalSet.of(out)


def periodic_points(f: PLMap, n: int, piece_cap: int = DEFAULT_PIECE_CAP) -> IntervalSet:
    if n < 1:
        raise ValueError("period must be at least 1")
    return fixed_point_set(iterate(f, n, piece_cap))


def least_period_of(f: PLMap, x: Fraction, bound: int) -> int | None:
    """Smallest d <= bound with f^d(x) = x."""
    v = x
    for d in range(1, bound + 1):
        v = f.eval_at(v)
        if v == x:
            return d
    return None


@dataclass(frozen=True)
class PeriodicOrbit:
    """Exact periodic orbit, temporally ordered starting from its least point."""

    points: tuple[Fraction, ...]

    @property
    def least_period(self) -> int:
        return len(self.points)

    @property
    def point_set(self) -> frozenset[Fraction]:
        return frozenset(self.points)

    @staticmethod
    def from_point(f: PLMap, x: Fraction, bound: int) -> "PeriodicOrbit":
        d = least_period_of(f, x, bound)
        if d is None:
            raise ValueError(f"{x} is not periodic within {bound} steps")
        pts = forward_orbit(f, x, d - 1)
        k = pts.index(min(pts))
        return PeriodicOrbit(tuple(pts[k:] + pts[:k]))


@dataclass(frozen=True)
class PeriodicStructure:
    isolated_orbits: tuple[PeriodicOrbit, ...]
    fixed_intervals: tuple[tuple[int, IntervalSet], ...]

    def orbits_of_period(self, p: int) -> tuple[PeriodicOrbit, ...]:
        return tuple(o for o in self.isolated_orbits if o.least_period == p)


def periodic_orbits(
    f: PLMap, n_max: int, piece_cap: int = DEFAULT_PIECE_CAP
) -> PeriodicStructure:
    """All isolated orbits of least period <= n_max plus periodic continua.

    Continua are reported once, at the smallest n at which they appear; points
    inside a continuum are not classified individually.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    orbits: list[PeriodicOrbit] = []
    seen: set[Fraction] = set()
    continua: list[tuple[int, IntervalSet]] = []
    composed = None
    for n in range(1, n_max + 1):
        composed = f if composed is None else compose(f, composed)
        if len(composed.dots) - 1 > piece_cap:
            raise PieceBudgetExceeded(f"more than {piece_cap} pieces in f^{n}")
        s = fixed_point_set(composed)
        fresh = []
        for part in s.parts:
            if part.is_point:
                continue
            covered = any(
                n % d == 0 and c.contains_set(IntervalSet((part,)))
                for d, c in continua
            )
            if not covered:
                fresh.append(part)
        if fresh:
            continua.append((n, IntervalSet.of(fresh)))
        for part in s.parts:
            if not part.is_point or part.lo in seen:
                continue
            p = part.lo
            if least_period_of(f, p, n) != n:
                continue
            orbit = PeriodicOrbit.from_point(f, p, n)
            orbits.append(orbit)
            seen.update(orbit.points)
    orbits.sort(key=lambda o: (o.least_period, o.points[0]))
    return PeriodicStructure(tuple(orbits), tuple(continua))


def _sharkovsky_key(m: int):
    a, b = 0, m
    while b % 2 == 0:
        b //= 2
        a += 1
    if b == 1:
        return (1, -a)
    return (0, a, b)


def sharkovsky_precedes(m: int, n: int) -> bool:
    """True iff a period-m orbit forces a period-n orbit (strict order):
    3 > 5 > 7 > ... > 2*3 > 2*5 > ... > 2^k > ... > 4 > 2 > 1."""
    if m < 1 or n < 1:
        raise ValueError("periods must be positive")
    return m != n and _sharkovsky_key(m) < _sharkovsky_key(n)
