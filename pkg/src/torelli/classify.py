"""Curve taxonomy: separating curves, bounding pairs, marked triples.

On the closed model every predicate is computed twice, once from homology
and once by cutting, and the two answers must agree.  Bounded subsurfaces
(components of the closed surface cut along a system of curves) are
handled by cutting only.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .curves import (CurveError, IsotopicInputError, NormalCurve, OrientedCurve,
                     closed_surface, geometric_intersection, homology_class,
                     homology_class_by_pairing, joint_realization)
from .surface import CutResult, SurfaceError, cut_along


class ClassificationMismatch(AssertionError):
    """The homological and the cutting route disagree."""


@lru_cache(maxsize=200000)
def _cut_keys(keys: tuple, sid: str) -> CutResult:
    curves = [NormalCurve(sid, k) for k in keys]
    return cut_along(closed_surface(curves[0].genus), joint_realization(curves))


def cut_curves(curves) -> CutResult:
    """Cut the closed model along pairwise disjoint curves (cached)."""
    curves = list(curves)
    if not curves:
        raise CurveError("empty curve family")
    return _cut_keys(tuple(c.crossings for c in curves), curves[0].surface_id)


def homology_zero(c: NormalCurve) -> bool:
    return homology_class(OrientedCurve(c)).is_zero()


def is_separating(c: NormalCurve) -> bool:
    by_homology = homology_zero(c)
    by_cut = len(cut_curves([c]).components) == 2
    if by_homology != by_cut:
        raise ClassificationMismatch(f"separation: homology {by_homology}, cut {by_cut} for {c}")
    return by_homology


def separation_routes(c: NormalCurve) -> dict:
    """All three separation tests, computed independently."""
    return {"abelianization": homology_zero(c),
            "pairing": homology_class_by_pairing(OrientedCurve(c)).is_zero(),
            "cut": len(cut_curves([c]).components) == 2}


@dataclass(frozen=True)
class SeparationProfile:
    sides: tuple            # sorted ((genus, boundary_count), (genus, boundary_count))
    is_genus_one: bool

    @property
    def genus(self) -> int:
        """Smaller side genus."""
        return self.sides[0][0]

    def to_json(self):
        return {"sides": [list(s) for s in self.sides], "genus_one": self.is_genus_one}


def separation_profile(c: NormalCurve) -> SeparationProfile:
    if not is_separating(c):
        raise CurveError("separation profile of a non-separating curve")
    comps = cut_curves([c]).components
    sides = tuple(sorted((k.genus, k.boundary_count) for k in comps))
    return SeparationProfile(sides, any(s == (1, 1) for s in sides))


def _same_class_up_to_sign(a: NormalCurve, b: NormalCurve) -> bool:
    ha, hb = homology_class(OrientedCurve(a)), homology_class(OrientedCurve(b))
    return ha == hb or ha == -hb


def is_bounding_pair(a: NormalCurve, b: NormalCurve, disjoint: bool | None = None) -> bool:
    """``disjoint`` may be supplied when the intersection number is known."""
    if a.surface_id != b.surface_id:
        raise SurfaceError("curves live on different surfaces")
    if a.crossings == b.crossings:
        raise IsotopicInputError("a bounding pair needs non-isotopic curves")
    if disjoint is None:
        disjoint = geometric_intersection(a, b) == 0
    if not disjoint:
        return False
    if is_separating(a) or is_separating(b):
        return False
    by_cut = len(cut_curves([a, b]).components) == 2
    by_homology = _same_class_up_to_sign(a, b)
    if by_cut != by_homology:
        raise ClassificationMismatch(f"bounding pair: cut {by_cut}, homology {by_homology}")
    return by_cut


@dataclass(frozen=True)
class TripleCheck:
    marked: bool
    reason: str           # "marked", "isotopic_members", "not_disjoint", ...
    pieces: tuple = ()    # (genus, boundary_count) of the complementary pieces

    def __bool__(self):
        return self.marked


def check_marked_triple(a: NormalCurve, b: NormalCurve, c: NormalCurve,
                        disjoint: bool | None = None) -> TripleCheck:
    tri = (a, b, c)
    keys = {x.crossings for x in tri}
    if len(keys) < 3:
        return TripleCheck(False, "isotopic_members")
    pairs = ((a, b), (a, c), (b, c))
    if disjoint is None:
        disjoint = all(geometric_intersection(x, y) == 0 for x, y in pairs)
    if not disjoint:
        return TripleCheck(False, "not_disjoint")
    if any(is_separating(x) for x in tri):
        return TripleCheck(False, "separating_member")
    for x, y in pairs:
        if not is_bounding_pair(x, y, disjoint=True):
            return TripleCheck(False, "not_bounding_pair")
    comps = cut_curves(list(tri)).components
    pieces = tuple(sorted((k.genus, k.boundary_count) for k in comps))
    if len(pieces) != 3 or any(bc != 2 or gg < 1 for gg, bc in pieces):
        raise ClassificationMismatch(f"marked triple with pieces {pieces}")
    return TripleCheck(True, "marked", pieces)


def is_marked_triple(a: NormalCurve, b: NormalCurve, c: NormalCurve) -> bool:
    return check_marked_triple(a, b, c).marked


def is_jointly_nonseparating(curves) -> bool:
    curves = list(curves)
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            if geometric_intersection(curves[i], curves[j]) > 0:
                raise CurveError("family is not pairwise disjoint")
    return len(cut_curves(curves).components) == 1


# ----------------------------------------------------------------------
# bounded subsurfaces of the closed model

class Subsurface:
    """One component R of the closed model cut along ``system``.

    Curves of the closed model that miss the system and are not isotopic
    to any of its members descend to essential, non-peripheral curves of
    the component containing them.  The boundary circles of R are the
    sides (system index, +-1) recorded in ``boundary_sides``.
    """

    def __init__(self, system, component: int = 0):
        self.system = tuple(system)
        if not self.system:
            raise CurveError("empty cutting system")
        self.genus_parent = self.system[0].genus
        self.cut = cut_curves(self.system)
        if not 0 <= component < len(self.cut.components):
            raise SurfaceError(f"no component {component}")
        self.component = component
        comp = self.cut.components[component]
        self.surface = comp.surface
        self.genus = comp.genus
        self.boundary_count = comp.boundary_count
        self.boundary_sides = tuple(sorted(comp.boundary_sides))
        self._keys = {c.crossings for c in self.system}
        self._side_home = {}
        for ci, k in enumerate(self.cut.components):
            for s in k.boundary_sides:
                self._side_home[s] = ci

    def describe(self) -> dict:
        return {"genus": self.genus, "boundary": self.boundary_count,
                "parent_genus": self.genus_parent, "system_size": len(self.system),
                "component": self.component}

    def _cut_with(self, c: NormalCurve) -> CutResult:
        return cut_curves(self.system + (c,))

    def _home(self, cut: CutResult, comp: int):
        n = len(self.system)
        for ci, side in cut.components[comp].boundary_sides:
            if ci < n:
                return self._side_home[(ci, side)]
        return None

    def contains(self, c: NormalCurve, intersections=None) -> bool:
        """True iff c is disjoint from the system, not parallel to it and lies in R."""
        if c.crossings in self._keys:
            return False
        if intersections is None:
            intersections = [geometric_intersection(c, d) for d in self.system]
        if any(intersections):
            return False
        cut = self._cut_with(c)
        n = len(self.system)
        homes = {self._home(cut, cut.component_of_side(n, s)) for s in (1, -1)}
        homes.discard(None)
        if len(homes) != 1:
            raise AssertionError("curve sides lie over different components")
        if homes.pop() != self.component:
            return False
        # a curve cobounding an annulus with a boundary circle is peripheral
        for k in cut.components:
            if k.genus == 0 and k.boundary_count == 2 and any(ci == n for ci, _ in k.boundary_sides):
                return False
        return True

    def _sides(self, c: NormalCurve):
        cut = self._cut_with(c)
        n = len(self.system)
        return cut, cut.component_of_side(n, 1), cut.component_of_side(n, -1)

    def is_separating_in(self, c: NormalCurve) -> bool:
        cut, p, m = self._sides(c)
        return p != m

    def side_profile(self, c: NormalCurve) -> tuple:
        """(genus, boundary_count) of both sides of a separating curve of R."""
        cut, p, m = self._sides(c)
        if p == m:
            raise CurveError("curve does not separate the subsurface")
        return tuple(sorted((cut.components[x].genus, cut.components[x].boundary_count)
                            for x in (p, m)))

    def is_genus_one_in(self, c: NormalCurve) -> bool:
        """Separating in R and bounding a torus with one hole inside R."""
        cut, p, m = self._sides(c)
        if p == m:
            return False
        return any(cut.components[x].genus == 1 and cut.components[x].boundary_count == 1
                   for x in (p, m))

    def separates_boundary(self, c: NormalCurve) -> bool:
        """For R with two boundary circles: are they on different sides of c?"""
        if self.boundary_count != 2:
            raise SurfaceError("needs a subsurface with two boundary circles")
        cut = self._cut_with(c)
        s1, s2 = self.boundary_sides
        return cut.component_of_side(*s1) != cut.component_of_side(*s2)


def complement_of(c: NormalCurve) -> Subsurface:
    """The closed model cut along a single curve; the component holding its + side."""
    return Subsurface([c], component=cut_curves([c]).component_of_side(0, 1))
