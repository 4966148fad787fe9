"""Shared oracles and generators for the test suite.

Everything here is deliberately independent of the implementation paths it
cross-checks: subdivision counts come from a DFS chain enumerator over the
face poset, homology cross-checks from rational and mod-2 Gaussian
elimination, closures from raw powerset enumeration.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from polytower.complexes import (
    Complex,
    make_point,
    vertex_key,
)


def brute_force_closure(simplices) -> set:
    out = set()
    for s in simplices:
        s = tuple(sorted(set(s), key=vertex_key))
        for k in range(1, len(s) + 1):
            out.update(combinations(s, k))
    return out


def enumerate_chains(complex_: Complex) -> list:
    """All strictly increasing chains of the face poset, via DFS."""
    simplices = sorted(complex_.simplices, key=lambda s: (len(s), s))
    chains = []

    def extend(chain, last):
        chains.append(tuple(chain))
        for s in simplices:
            if len(s) > len(last) and set(last) < set(s):
                chain.append(s)
                extend(chain, s)
                chain.pop()

    for s in simplices:
        extend([s], s)
    return chains


def chain_f_vector(complex_: Complex) -> tuple:
    chains = enumerate_chains(complex_)
    counts: dict = {}
    for c in chains:
        counts[len(c) - 1] = counts.get(len(c) - 1, 0) + 1
    return tuple(counts.get(k, 0) for k in range(max(counts) + 1)) if counts else ()


def rational_rank(matrix) -> int:
    """Row reduction over the rationals."""
    mat = [[Fraction(x) for x in row] for row in matrix]
    rank = 0
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    for col in range(cols):
        pivot = None
        for r in range(rank, rows):
            if mat[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pv = mat[rank][col]
        mat[rank] = [x / pv for x in mat[rank]]
        for r in range(rows):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def gf2_rank(matrix) -> int:
    rows = [int("".join(str(abs(x) % 2) for x in row), 2) if row else 0 for row in matrix]
    rank = 0
    for _ in range(len(rows)):
        pivot_row = None
        for i, r in enumerate(rows):
            if r:
                pivot_row = i
                break
        if pivot_row is None:
            break
        pivot = rows.pop(pivot_row)
        top_bit = 1 << (pivot.bit_length() - 1)
        rows = [r ^ pivot if r & top_bit else r for r in rows]
        rank += 1
    return rank


def betti_over_field(complex_, k, rank_fn) -> int:
    from polytower.connectivity import boundary_matrix, _chain_data

    bases, _ = _chain_data(complex_)
    n_k = len(bases.get(k, ()))
    if n_k == 0:
        return 0
    d_k = boundary_matrix(complex_, k)
    d_next = boundary_matrix(complex_, k + 1)
    rank_k = rank_fn(d_k) if d_k and d_k[0:] and len(d_k) else 0
    rank_next = rank_fn(d_next) if len(d_next) else 0
    return n_k - rank_k - rank_next


def random_point(complex_, rng: random.Random, scale=Fraction(1), max_num=20):
    """A random rational point supported on a random simplex."""
    simplices = sorted(complex_.simplices, key=lambda s: (len(s), s))
    s = rng.choice(simplices)
    nums = [rng.randint(1, max_num) for _ in s]
    total = sum(nums)
    return make_point(complex_, {v: Fraction(n, total) for v, n in zip(s, nums)}, scale)


def random_complex(seed: int, max_vertices: int = 7, max_faces: int = 5, max_simplices: int = 30) -> Complex:
    """Seeded random complex with a bounded number of simplices."""
    rng = random.Random(seed)
    while True:
        nv = rng.randint(3, max_vertices)
        names = ["v%d" % i for i in range(nv)]
        n_faces = rng.randint(1, max_faces)
        maximal = []
        for _ in range(n_faces):
            size = rng.randint(1, min(4, nv))
            maximal.append(rng.sample(names, size))
        k = Complex.from_maximal(maximal)
        if len(k.simplices) <= max_simplices:
            return k


def random_surjective_vertex_map(base: Complex, seed: int):
    """A surjective simplicial map from the subdivision onto the base: send
    the vertex named by a simplex to its least vertex under a random total
    order of the base vertices."""
    from polytower.complexes import barycentric_subdivision
    from polytower.maps import VertexMap

    rng = random.Random(seed)
    order = list(base.vertices)
    rng.shuffle(order)
    position = {v: i for i, v in enumerate(order)}
    subdivided = barycentric_subdivision(base)
    images = {name: min(name, key=lambda v: position[v]) for name in subdivided.vertices}
    return VertexMap.build(subdivided, base, images)


def random_qsmap(base: Complex, seed: int):
    """A random quasi-simplicial self-map of the subdivision: each simplex
    name maps to a face of itself containing the faces chosen lower down, so
    chains map to chains."""
    from polytower.complexes import barycentric_subdivision, vertex_key as vk
    from polytower.maps import QSMap

    rng = random.Random(seed)
    subdivided = barycentric_subdivision(base)
    chosen: dict = {}
    for name in sorted(subdivided.vertices, key=lambda s: (len(s), vk(s))):
        forced = set()
        for k in range(1, len(name)):
            for face in combinations(name, k):
                if face in chosen:
                    forced.update(chosen[face])
        candidates = [
            tuple(sorted(set(c) | forced, key=vk))
            for k in range(0, len(name) + 1)
            for c in combinations(name, k)
        ]
        candidates = sorted({c for c in candidates if c}, key=lambda s: (len(s), vk(s)))
        chosen[name] = rng.choice(candidates)
    return QSMap.build(subdivided, base, chosen)


def cylinder_complex() -> Complex:
    """Two stacked triangulated cylinder bands: circles b, m, t of three
    vertices each, twelve triangles."""
    tris = []
    for low, high in (("b", "m"), ("m", "t")):
        for i in range(3):
            j = (i + 1) % 3
            tris.append(["%s%d" % (low, i), "%s%d" % (low, j), "%s%d" % (high, i)])
            tris.append(["%s%d" % (low, j), "%s%d" % (high, i), "%s%d" % (high, j)])
    return Complex.from_maximal(tris)


def cylinder_map():
    """The stacked cylinder collapsing onto the edge [u, v]: bottom circle to
    u, middle circle to the edge midpoint, top circle to v."""
    from polytower.maps import QSMap

    base = Complex.from_maximal([["u", "v"]])
    cyl = cylinder_complex()
    images = {}
    for v in cyl.vertices:
        if v.startswith("b"):
            images[v] = ("u",)
        elif v.startswith("m"):
            images[v] = ("u", "v")
        else:
            images[v] = ("v",)
    return QSMap.build(cyl, base, images)


def simplex_complex(names) -> Complex:
    return Complex.from_maximal([list(names)])


def sphere_complex(dim: int) -> Complex:
    names = ["s%d" % i for i in range(dim + 2)]
    return Complex.from_maximal([list(c) for c in combinations(names, dim + 1)])


RP2_TRIANGLES = [
    ["p0", "p1", "p4"],
    ["p0", "p1", "p5"],
    ["p0", "p2", "p3"],
    ["p0", "p2", "p4"],
    ["p0", "p3", "p5"],
    ["p1", "p2", "p3"],
    ["p1", "p2", "p5"],
    ["p1", "p3", "p4"],
    ["p2", "p4", "p5"],
    ["p3", "p4", "p5"],
]


def rp2_complex() -> Complex:
    return Complex.from_maximal(RP2_TRIANGLES)
