import random
from fractions import Fraction

import pytest

from polytower.complexes import (
    barycentric_subdivision,
    distance,
    make_point,
    subcomplex_from,
    validate,
    vertex_point,
)
from polytower.maps import (
    NotSimplicialError,
    VertexMap,
    apply,
    apply_subdivision,
    check_quasi_simplicial,
    check_simplicial,
    chain_map_matrix,
    compose,
    identity_qsmap,
    induced_homology_map,
    is_surjective,
    lipschitz_constant,
    preimage_of_base_subcomplex,
    preimage_subcomplex,
    vertex_image_point,
)
from polytower import snf

from util import (
    cylinder_map,
    random_complex,
    random_point,
    random_qsmap,
    random_surjective_vertex_map,
    rp2_complex,
    simplex_complex,
    sphere_complex,
)


class TestCheckSimplicial:
    def test_identity_holds(self):
        k = simplex_complex(["a", "b", "c"])
        vm = VertexMap.build(k, k, {v: v for v in k.vertices})
        assert check_simplicial(vm).is_holds

    def test_edge_to_disjoint_vertices_fails(self):
        src = simplex_complex(["a", "b"])
        dst = validate([["u"], ["v"]])
        vm = VertexMap.build(src, dst, {"a": "u", "b": "v"})
        v = check_simplicial(vm)
        assert v.is_fails and v.witness == ("a", "b")

    def test_cylinder_map_all_twelve_triangles(self):
        p = cylinder_map()
        assert len(p.source.simplices_of_dim(2)) == 12
        assert check_simplicial(p.vertex_map).is_holds


class TestQuasiSimplicial:
    def test_identity_subdivision(self):
        base = simplex_complex(["u", "v"])
        p = identity_qsmap(base)
        assert p.source == barycentric_subdivision(base)

    def test_constant_map(self):
        k = simplex_complex(["a", "b", "c"])
        base = simplex_complex(["u", "v"])
        p = check_quasi_simplicial(k, base, {v: ("u",) for v in k.vertices})
        assert is_surjective(p).is_fails

    def test_non_adjacent_pair_rejected(self):
        src = simplex_complex(["a", "b"])
        base = simplex_complex(["u", "v"])
        with pytest.raises(NotSimplicialError):
            check_quasi_simplicial(src, base, {"a": ("u",), "b": ("v",)})


class TestSurjectivity:
    def test_identity_subdivision_surjective(self):
        assert is_surjective(identity_qsmap(simplex_complex(["u", "v"]))).is_holds

    def test_constant_map_witness(self):
        k = simplex_complex(["a", "b", "c"])
        base = simplex_complex(["u", "v"])
        p = check_quasi_simplicial(k, base, {v: ("u",) for v in k.vertices})
        v = is_surjective(p)
        assert v.is_fails
        # both maximal edges of the subdivided segment are uncovered; the
        # witness is the canonically first one
        assert v.witness in ((("u",), ("u", "v")), (("u", "v"), ("v",)))

    def test_cylinder_surjective(self):
        assert is_surjective(cylinder_map()).is_holds

    def test_random_least_vertex_maps_surjective(self):
        for seed in range(10):
            base = random_complex(seed)
            vm = random_surjective_vertex_map(base, seed + 100)
            assert check_simplicial(vm).is_holds
            assert is_surjective(vm).is_holds


class TestPreimage:
    def test_identity_gives_back_simplex(self):
        base = simplex_complex(["u", "v"])
        p = identity_qsmap(base)
        for delta in p.subdivided_target.sorted_simplices():
            sub = preimage_subcomplex(p, delta)
            assert set(delta) == set(sub.vertices)
            assert tuple(sorted(delta, key=lambda x: (len(x), x))) in {
                tuple(sorted(s, key=lambda x: (len(x), x))) for s in sub.simplices
            }

    def test_cylinder_middle_circle(self):
        p = cylinder_map()
        sub = preimage_subcomplex(p, [("u", "v")])
        assert sorted(sub.vertices) == ["m0", "m1", "m2"]
        assert sorted(len(s) for s in sub.simplices) == [1, 1, 1, 2, 2, 2]

    def test_cylinder_bottom_tube(self):
        p = cylinder_map()
        sub = preimage_subcomplex(p, [("u",), ("u", "v")])
        assert len(sub.vertices) == 6
        dims = [len([s for s in sub.simplices if len(s) == k]) for k in (1, 2, 3)]
        assert dims == [6, 12, 6]

    def test_membership_agreement_sampled(self):
        p = cylinder_map()
        rng = random.Random(0)
        deltas = p.subdivided_target.sorted_simplices()
        for _ in range(300):
            x = random_point(p.source, rng)
            pushed = apply_subdivision(p, x)
            for delta in deltas:
                in_sub = preimage_subcomplex(p, delta).contains_point(x)
                in_delta = set(pushed.support) <= set(delta)
                assert in_sub == in_delta

    def test_preimage_of_base_subcomplex_restriction(self):
        p = cylinder_map()
        edge = subcomplex_from(p.base_target, [["u", "v"]])
        total = preimage_of_base_subcomplex(p, edge)
        assert total.simplices == p.source.simplices
        u_only = subcomplex_from(p.base_target, [["u"]])
        bottom = preimage_of_base_subcomplex(p, u_only)
        assert sorted(bottom.vertices) == ["b0", "b1", "b2"]


class TestApply:
    def test_vertex_goes_to_vertex(self):
        p = cylinder_map()
        out = apply(p, vertex_point(p.source, "b0"))
        assert out.as_dict() == {"u": Fraction(1)}

    def test_midpoint_pushforward(self):
        p = cylinder_map()
        mid = make_point(p.source, {"b0": Fraction(1, 2), "m0": Fraction(1, 2)})
        out = apply(p, mid)
        assert out.as_dict() == {"u": Fraction(3, 4), "v": Fraction(1, 4)}

    def test_constant_map_sends_everything_to_vertex(self):
        k = simplex_complex(["a", "b", "c"])
        base = simplex_complex(["u", "v"])
        p = check_quasi_simplicial(k, base, {v: ("u",) for v in k.vertices})
        rng = random.Random(1)
        for _ in range(20):
            out = apply(p, random_point(k, rng))
            assert out.as_dict() == {"u": Fraction(1)}

    def test_apply_is_affine(self):
        p = cylinder_map()
        rng = random.Random(2)
        for _ in range(20):
            simplex = rng.choice(p.source.simplices_of_dim(2))
            w = [Fraction(rng.randint(1, 5)) for _ in simplex]
            total = sum(w)
            x = make_point(p.source, {v: c / total for v, c in zip(simplex, w)})
            direct = apply(p, x)
            combo: dict = {}
            for v, c in zip(simplex, w):
                for tv, tc in apply(p, vertex_point(p.source, v)).coords:
                    combo[tv] = combo.get(tv, Fraction(0)) + (c / total) * tc
            assert direct.as_dict() == {k2: v2 for k2, v2 in combo.items() if v2}


class TestLipschitz:
    def test_identity_subdivision_is_half(self):
        p = identity_qsmap(simplex_complex(["u", "v"]))
        assert lipschitz_constant(p, 1, 1) == Fraction(1, 2)

    def test_edge_onto_vertex_and_barycenter(self):
        base = simplex_complex(["a", "b", "c"])
        src = simplex_complex(["x", "y"])
        p = check_quasi_simplicial(src, base, {"x": ("a",), "y": ("a", "b", "c")})
        assert lipschitz_constant(p, 1, 1) == Fraction(2, 3)

    def test_constant_map_zero(self):
        k = simplex_complex(["a", "b"])
        base = simplex_complex(["u", "v"])
        p = check_quasi_simplicial(k, base, {v: ("u",) for v in k.vertices})
        assert lipschitz_constant(p, 1, 1) == 0

    def test_scale_dependence(self):
        p = identity_qsmap(simplex_complex(["u", "v"]))
        assert lipschitz_constant(p, Fraction(1, 4), Fraction(1, 2)) == Fraction(1, 2) * 2

    def test_sampled_ratios_within_constant(self):
        rng = random.Random(7)
        for seed in range(10):
            base = random_complex(seed)
            p = random_qsmap(base, seed)
            const = lipschitz_constant(p, 1, 1)
            simplices = sorted(p.source.simplices, key=lambda s: (len(s), s))
            for _ in range(100):
                s = rng.choice(simplices)
                x = _point_in(p.source, s, rng)
                y = _point_in(p.source, s, rng)
                if x.coords == y.coords:
                    continue
                assert distance(apply(p, x), apply(p, y)) <= const * distance(x, y)

    def test_constant_attained_at_vertex_pair(self):
        for seed in range(5):
            base = random_complex(seed)
            p = random_qsmap(base, seed + 50)
            const = lipschitz_constant(p, 1, 1)
            attained = Fraction(0)
            for edge in p.source.simplices_of_dim(1):
                u, v = edge
                d = distance(vertex_image_point(p, u), vertex_image_point(p, v))
                attained = max(attained, d / 2)
            assert attained == const


def _point_in(complex_, simplex, rng):
    nums = [rng.randint(0, 6) for _ in simplex]
    if sum(nums) == 0:
        nums[0] = 1
    total = sum(nums)
    return make_point(complex_, {v: Fraction(n, total) for v, n in zip(simplex, nums) if n}, 1)


class TestCompose:
    def test_identity_neutral(self):
        p = cylinder_map()
        left = compose(identity_qsmap(p.base_target).vertex_map, p)
        hmm = left  # composition with the subdivision identity keeps images
        assert hmm.as_dict() == p.as_dict()

    def test_plain_composition(self):
        a = simplex_complex(["a", "b"])
        b = simplex_complex(["u", "v"])
        c = simplex_complex(["x"])
        f = VertexMap.build(a, b, {"a": "u", "b": "v"})
        g = VertexMap.build(b, c, {"u": "x", "v": "x"})
        assert compose(g, f).as_dict() == {"a": "x", "b": "x"}

    def test_two_collapses_stack(self):
        # collapse the cylinder onto the edge, then the edge onto a vertex
        p = cylinder_map()
        edge = p.base_target
        point = simplex_complex(["z"])
        q = check_quasi_simplicial(edge, point, {"u": ("z",), "v": ("z",)})
        composed = compose(q, p)
        # every cylinder vertex ends on the single vertex after flattening
        images = set(composed.as_dict().values())
        assert images == {"z"}

    def test_subdivision_identity_after_cylinder(self):
        # quasi-simplicial after quasi-simplicial lands in a double subdivision
        base = simplex_complex(["u", "v"])
        p = identity_qsmap(base)  # beta(edge) -> edge
        q = cylinder_map()  # cylinder -> edge; need source match: compose p after relabel
        composed = compose(p, identity_qsmap(barycentric_subdivision(base)))
        # images are names one level deeper than the base complex
        depths = {max(_depth(v) for v in composed.as_dict().values())}
        assert depths == {2}

    def test_explicit_vertex_table_for_stacked_collapse(self):
        p = cylinder_map()
        point = simplex_complex(["z"])
        q = check_quasi_simplicial(p.base_target, point, {"u": ("z",), "v": ("z",)})
        composed = compose(q, p)
        expected = {v: "z" for v in p.source.vertices}
        assert composed.as_dict() == expected


def _depth(name):
    if isinstance(name, str):
        return 0
    return 1 + max(_depth(p) for p in name)


class TestInducedHomology:
    def test_identity_subdivision_iso_all_degrees(self):
        p = identity_qsmap(simplex_complex(["u", "v"]))
        for k in range(2):
            _, verdict = induced_homology_map(p, k)
            assert verdict.is_holds

    def test_cylinder_kills_h1(self):
        p = cylinder_map()
        _, verdict = induced_homology_map(p, 1)
        assert verdict.is_fails
        assert verdict.witness["source"] == {"betti": 1, "torsion": []}
        assert verdict.witness["target"] == {"betti": 0, "torsion": []}

    def test_cylinder_h0_iso(self):
        _, verdict = induced_homology_map(cylinder_map(), 0)
        assert verdict.is_holds

    def test_point_constant_map(self):
        k = simplex_complex(["p"])
        base = simplex_complex(["q"])
        p = check_quasi_simplicial(k, base, {"p": ("q",)})
        _, verdict = induced_homology_map(p, 0)
        assert verdict.is_holds

    def test_least_vertex_approximation_iso_on_rp2(self):
        base = rp2_complex()
        vm = random_surjective_vertex_map(base, 3)
        for k in range(3):
            _, verdict = induced_homology_map(vm, k)
            assert verdict.is_holds, (k, verdict)

    def test_least_vertex_approximation_iso_on_spheres(self):
        for dim in (1, 2):
            base = sphere_complex(dim)
            vm = random_surjective_vertex_map(base, dim)
            for k in range(dim + 1):
                _, verdict = induced_homology_map(vm, k)
                assert verdict.is_holds

    def test_functoriality_on_chains(self):
        base = sphere_complex(1)
        f = random_surjective_vertex_map(base, 11)  # beta(circle) -> circle
        g = random_surjective_vertex_map(barycentric_subdivision(base), 12)
        composed = compose(f, g)
        for k in range(2):
            lhs = chain_map_matrix(composed, k)
            rhs = snf.matmul(chain_map_matrix(f, k), chain_map_matrix(g, k))
            assert lhs == rhs
