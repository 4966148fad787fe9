"""Piecewise-linear maps given by rational point images on vertices.

A PartialPLMap assigns a Point of the target to every vertex of the
subcomplex it is defined on and extends affinely over each simplex.  The
validity condition is that the images of the vertices of any one simplex sit
inside a single closed simplex of the target, so the affine extension never
leaves the target polyhedron.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .complexes import (
    Complex,
    Point,
    Subcomplex,
    barycenter_point,
    barycentric_subdivision,
    beta_subcomplex,
    canon_vertex,
    convex_combination,
    simplex_sort_key,
    vertex_key,
    vertex_label,
    vertex_point,
    whole_subcomplex,
)
from .maps import QSMap, apply


@dataclass(frozen=True)
class PartialPLMap:
    domain: Complex
    defined_on: Subcomplex
    images: tuple  # sorted (vertex, Point) pairs
    target: Complex

    @staticmethod
    def build(domain: Complex, defined_on: Subcomplex, images: dict, target: Complex) -> "PartialPLMap":
        if defined_on.parent != domain:
            raise ValueError("defined_on must be a subcomplex of the domain")
        table = {}
        for v, point in images.items():
            cv = canon_vertex(v)
            if not isinstance(point, Point):
                raise TypeError("images must be Points")
            if point.complex != target:
                raise ValueError("image point lives on the wrong complex")
            table[cv] = point
        scales = {p.scale for p in table.values()}
        if len(scales) > 1:
            raise ValueError("image points disagree on scale")
        for v in defined_on.vertex_set():
            if v not in table:
                raise ValueError("no image for vertex %s" % vertex_label(v))
        pairs = tuple(sorted(table.items(), key=lambda kv: vertex_key(kv[0])))
        pl = PartialPLMap(domain, defined_on, pairs, target)
        bad = pl.first_invalid_simplex()
        if bad is not None:
            raise ValueError(
                "images of simplex %s span no target simplex"
                % (tuple(vertex_label(v) for v in bad),)
            )
        return pl

    @staticmethod
    def from_vertex_images(domain: Complex, images: dict, target: Complex, scale=Fraction(1)) -> "PartialPLMap":
        """Total PL map sending vertices to vertices of the target."""
        pts = {v: vertex_point(target, w, scale) for v, w in images.items()}
        return PartialPLMap.build(domain, whole_subcomplex(domain), pts, target)

    def as_dict(self) -> dict:
        return dict(self.images)

    def image_of(self, vertex) -> Point:
        v = canon_vertex(vertex)
        for a, p in self.images:
            if a == v:
                return p
        raise ValueError("map not defined at %s" % vertex_label(v))

    @property
    def scale(self) -> Fraction:
        return self.images[0][1].scale if self.images else Fraction(1)

    def is_total(self) -> bool:
        return self.defined_on.simplices == self.domain.simplices

    def first_invalid_simplex(self):
        table = self.as_dict()
        for s in sorted(self.defined_on.simplices, key=simplex_sort_key):
            union = set()
            for v in s:
                union.update(table[v].support)
            if tuple(sorted(union, key=vertex_key)) not in self.target.simplices:
                return s
        return None

    def image_points(self, simplex) -> list:
        return [self.image_of(v) for v in simplex]

    def hull_support(self, simplex) -> tuple:
        union = set()
        for v in simplex:
            union.update(self.image_of(v).support)
        return tuple(sorted(union, key=vertex_key))

    def evaluate(self, point: Point) -> Point:
        """Affine evaluation at a point carried by the defined-on part."""
        if point.complex != self.domain:
            raise ValueError("point is not on the domain")
        if point.support not in self.defined_on.simplices:
            raise ValueError("point is outside the defined-on subcomplex")
        pts = [self.image_of(v) for v in point.support]
        weights = [c for _, c in point.coords]
        return convex_combination(pts, weights)

    def restricted_to(self, sub: Subcomplex) -> "PartialPLMap":
        table = {v: p for v, p in self.images if v in sub.vertex_set()}
        return PartialPLMap.build(self.domain, sub, table, self.target)

    def subdivided(self) -> "PartialPLMap":
        """The same map presented on the barycentric subdivision of its
        domain: subdivision vertices take the evaluated barycenter images."""
        beta_dom = barycentric_subdivision(self.domain)
        beta_def = beta_subcomplex(self.defined_on, beta_dom)
        images = {}
        for name in beta_def.vertex_set():
            images[name] = self.evaluate(barycenter_point(self.domain, name, self.scale_of_domain()))
        return PartialPLMap.build(beta_dom, beta_def, images, self.target)

    def scale_of_domain(self) -> Fraction:
        return Fraction(1)

    def after(self, p: QSMap) -> "PartialPLMap":
        """Compose with a quasi-simplicial map applied to every image point."""
        if p.source != self.target:
            raise ValueError("composition mismatch")
        images = {v: apply(p, point) for v, point in self.images}
        return PartialPLMap.build(self.domain, self.defined_on, images, p.base_target)


def constant_pl_map(domain: Complex, target: Complex, point: Point) -> PartialPLMap:
    return PartialPLMap.build(
        domain, whole_subcomplex(domain), {v: point for v in domain.vertices}, target
    )


def equal_on(f: PartialPLMap, g: PartialPLMap, sub: Subcomplex) -> bool:
    """Exact agreement of two PL maps on a common subcomplex (both affine on
    its simplices, so vertex agreement is enough)."""
    for v in sub.vertex_set():
        if f.image_of(v).coords != g.image_of(v).coords:
            return False
    return True
