"""Rate regions as exact rational polytopes.

Regions are downward-closed convex polytopes in the nonnegative orthant,
carried as both a vertex list and an inequality list (normal . x <= offset).
All analytic constructions use fractions.Fraction end to end; points handed
in as floats are converted exactly (floats are dyadic rationals), so
serialization is lossless for both analytic and simulation-derived regions.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DimensionMismatchError, InvalidInputError

__all__ = [
    "RateRegion",
    "time_share",
    "region_from_inequalities",
    "contains",
    "dominates",
    "equivalent",
    "nontrivial_vertices",
    "save_region",
    "load_region",
]

FLOAT_TOL = 1e-12


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise InvalidInputError(f"coordinates must be int, float, or Fraction, got {type(x)!r}")


def _normalize_ineq(normal, offset):
    """Scale an inequality to a primitive integer normal, keeping direction."""
    denoms = [f.denominator for f in normal] + [offset.denominator]
    scale = 1
    for d in denoms:
        scale = scale * d // gcd(scale, d)
    ints = [int(f * scale) for f in normal]
    off = offset * scale
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
        off = off / g
    return tuple(Fraction(v) for v in ints), Fraction(off)


@dataclass(frozen=True)
class RateRegion:
    """Downward-closed convex polytope with exact rational data.

    vertices: tuple of coordinate tuples (Fractions), the extreme points.
    inequalities: tuple of (normal, offset) pairs meaning normal . x <= offset;
    the nonnegativity constraints are included explicitly.
    """

    dimension: int
    vertices: tuple
    inequalities: tuple
    downward_closed: bool = True

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise InvalidInputError(f"dimension must be 2 or 3, got {self.dimension}")
        verts = tuple(
            tuple(_frac(c) for c in v) for v in self.vertices
        )
        for v in verts:
            if len(v) != self.dimension:
                raise InvalidInputError(f"vertex {v} does not have dimension {self.dimension}")
        ineqs = []
        for normal, offset in self.inequalities:
            n = tuple(_frac(c) for c in normal)
            if len(n) != self.dimension:
                raise InvalidInputError(f"normal {n} does not have dimension {self.dimension}")
            ineqs.append(_normalize_ineq(n, _frac(offset)))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "inequalities", tuple(dict.fromkeys(ineqs)))


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_2d(points):
    """Monotone-chain convex hull, exact, CCW order; handles degenerate input."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def time_share(points):
    """Downward closure of the convex hull of ``points`` and the origin (2-D).

    Any rate pair below a convex combination of achievable pairs is
    achievable by time sharing, so this is the region generated by a finite
    set of operating points. Idempotent: feeding the result's vertices back
    in reproduces the same region.
    """
    if not points:
        raise InvalidInputError("time_share needs at least one point")
    pts = []
    for p in points:
        if len(p) != 2:
            raise InvalidInputError("time_share operates on 2-D points")
        q = (_frac(p[0]), _frac(p[1]))
        if q[0] < 0 or q[1] < 0:
            raise InvalidInputError(f"point {q} has a negative coordinate")
        pts.append(q)
    zero = Fraction(0)
    augmented = set(pts)
    augmented.add((zero, zero))
    for x, y in pts:
        augmented.add((x, zero))
        augmented.add((zero, y))
    hull = _hull_2d(augmented)
    xmax = max(p[0] for p in hull)
    ymax = max(p[1] for p in hull)
    ineqs = [
        ((Fraction(-1), zero), zero),
        ((zero, Fraction(-1)), zero),
        ((Fraction(1), zero), xmax),
        ((zero, Fraction(1)), ymax),
    ]
    if len(hull) >= 3:
        m = len(hull)
        for i in range(m):
            p, q = hull[i], hull[(i + 1) % m]
            normal = (q[1] - p[1], p[0] - q[0])
            ineqs.append((normal, normal[0] * p[0] + normal[1] * p[1]))
    return RateRegion(2, tuple(hull), tuple(ineqs))


def _solve_square(rows, rhs):
    """Exact solve of a small square Fraction system; None if singular."""
    n = len(rows)
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        pv = a[col][col]
        a[col] = [v / pv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return tuple(a[r][n] for r in range(n))


def region_from_inequalities(inequalities, dimension):
    """Polytope from an inequality list, vertices enumerated exactly.

    Every subset of ``dimension`` inequalities is intersected; a feasible
    intersection point of ``dimension`` independent tight constraints is a
    basic feasible solution, i.e. exactly a vertex. Intended for the small
    analytic regions (a handful of inequalities). Nonnegativity constraints
    must be included by the caller if wanted; the polytope must be bounded
    for the vertex list to generate it.
    """
    import itertools

    ineqs = [
        (tuple(_frac(c) for c in n), _frac(o)) for n, o in inequalities
    ]
    verts = set()
    for combo in itertools.combinations(ineqs, dimension):
        rows = [c[0] for c in combo]
        rhs = [c[1] for c in combo]
        x = _solve_square(rows, rhs)
        if x is None:
            continue
        if all(sum(nc * xc for nc, xc in zip(n, x)) <= o for n, o in ineqs):
            verts.add(x)
    return RateRegion(dimension, tuple(sorted(verts)), tuple(ineqs))


def contains(region, point):
    """Membership test; exact for rational points, 1e-12 slack for floats."""
    if len(point) != region.dimension:
        raise DimensionMismatchError(
            f"point of dimension {len(point)} tested against region of "
            f"dimension {region.dimension}"
        )
    exact = all(isinstance(c, (int, Fraction)) for c in point)
    if exact:
        p = tuple(_frac(c) for c in point)
        return all(
            sum(nc * pc for nc, pc in zip(n, p)) <= o for n, o in region.inequalities
        )
    p = tuple(float(c) for c in point)
    for n, o in region.inequalities:
        lhs = sum(float(nc) * pc for nc, pc in zip(n, p))
        scale = max(1.0, *(abs(float(nc)) for nc in n))
        if lhs > float(o) + FLOAT_TOL * scale:
            return False
    return True


def dominates(a, b):
    """True iff region ``a`` contains region ``b`` (every vertex of b in a)."""
    if a.dimension != b.dimension:
        raise DimensionMismatchError(
            f"cannot compare regions of dimension {a.dimension} and {b.dimension}"
        )
    return all(contains(a, v) for v in b.vertices)


def equivalent(a, b):
    """Set equality of two regions via mutual containment."""
    return dominates(a, b) and dominates(b, a)


def nontrivial_vertices(region):
    """Vertices other than the origin (every downward-closed region has it)."""
    zero = tuple(Fraction(0) for _ in range(region.dimension))
    return tuple(v for v in region.vertices if v != zero)


def _frac_pair(f):
    return [f.numerator, f.denominator]


def region_to_dict(region):
    return {
        "dimension": region.dimension,
        "vertices": [[_frac_pair(c) for c in v] for v in region.vertices],
        "inequalities": [
            {"normal": [_frac_pair(c) for c in n], "offset": _frac_pair(o)}
            for n, o in region.inequalities
        ],
        "downward_closed": region.downward_closed,
    }


def region_from_dict(data):
    def unpair(p):
        return Fraction(p[0], p[1])

    return RateRegion(
        dimension=data["dimension"],
        vertices=tuple(tuple(unpair(c) for c in v) for v in data["vertices"]),
        inequalities=tuple(
            (tuple(unpair(c) for c in q["normal"]), unpair(q["offset"]))
            for q in data["inequalities"]
        ),
        downward_closed=data["downward_closed"],
    )


def save_region(region, path):
    with open(path, "w") as fh:
        json.dump(region_to_dict(region), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_region(path):
    with open(path) as fh:
        return region_from_dict(json.load(fh))
