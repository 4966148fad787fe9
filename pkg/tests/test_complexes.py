import pytest
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from polytower.complexes import (
    Complex,
    DuplicateVertexError,
    EmptySimplexError,
    ScaleMismatchError,
    UnknownVertexError,
    barycenter_point,
    barycentric_subdivision,
    canon_vertex,
    distance,
    flatten_point,
    induced_subcomplex,
    is_full_subcomplex,
    lift_to_subdivision,
    make_point,
    subcomplex_from,
    validate,
    vertex_key,
    vertex_point,
)

from util import (
    brute_force_closure,
    chain_f_vector,
    cylinder_complex,
    random_complex,
    random_point,
    simplex_complex,
    sphere_complex,
)


class TestValidate:
    def test_triangle_closure(self):
        k = validate([["a", "b", "c"]])
        assert k.dimension == 2
        assert len(k.simplices) == 7
        assert k.f_vector() == (3, 3, 1)

    def test_duplicate_vertex_rejected(self):
        with pytest.raises(DuplicateVertexError):
            validate([["a", "a"]])

    def test_empty_simplex_rejected(self):
        with pytest.raises(EmptySimplexError):
            validate([[]])

    def test_boundary_of_tetrahedron(self):
        k = sphere_complex(2)
        expected = brute_force_closure(k.maximal)
        assert k.simplices == frozenset(expected)
        assert len(k.simplices) == 14
        assert k.f_vector() == (4, 6, 4)

    def test_extra_vertices_become_isolated(self):
        k = Complex.from_maximal([["a", "b"]], extra_vertices=["z"])
        assert k.has_vertex("z")
        assert ("z",) in k.simplices

    def test_maximal_recomputed(self):
        k = validate([["a", "b"], ["a", "b", "c"]])
        assert k.maximal == (("a", "b", "c"),)

    @given(st.lists(st.lists(st.sampled_from("abcdef"), min_size=1, max_size=4, unique=True), min_size=1, max_size=5))
    @settings(max_examples=60, deadline=None)
    def test_face_closure_property(self, raw):
        k = validate(raw)
        for s in k.simplices:
            for drop in range(len(s)):
                face = s[:drop] + s[drop + 1 :]
                if face:
                    assert face in k.simplices


class TestVertexOrder:
    def test_atoms_before_tuples(self):
        assert vertex_key("z") < vertex_key(("a",))

    def test_canon_sorts_nested(self):
        assert canon_vertex(["b", "a"]) == ("a", "b")

    @given(st.recursive(st.text("abc", min_size=1, max_size=2), lambda inner: st.lists(inner, min_size=1, max_size=3).map(tuple), max_leaves=6))
    @settings(max_examples=80, deadline=None)
    def test_key_total_order(self, name):
        try:
            c = canon_vertex(name)
        except (DuplicateVertexError, EmptySimplexError):
            return
        key = vertex_key(c)
        assert key == vertex_key(canon_vertex(c))


class TestSubdivision:
    def test_edge(self):
        k = simplex_complex(["a", "b"])
        b = barycentric_subdivision(k)
        assert b.f_vector() == (3, 2)

    def test_triangle_against_chain_oracle(self):
        k = simplex_complex(["a", "b", "c"])
        b = barycentric_subdivision(k)
        assert b.f_vector() == (7, 12, 6)
        assert b.f_vector() == chain_f_vector(k)
        assert b.euler_characteristic() == 1

    def test_point_is_fixed(self):
        k = simplex_complex(["a"])
        b = barycentric_subdivision(k)
        assert b.f_vector() == (1,)
        assert b.vertices == (("a",),)

    def test_double_subdivision_of_edge(self):
        k = simplex_complex(["a", "b"])
        bb = barycentric_subdivision(barycentric_subdivision(k))
        assert bb.f_vector() == (5, 4)

    def test_vertex_count_is_simplex_count(self):
        for seed in range(5):
            k = random_complex(seed)
            b = barycentric_subdivision(k)
            assert len(b.vertices) == len(k.simplices)

    def test_chain_counts_on_random_complexes(self):
        for seed in range(5, 10):
            k = random_complex(seed, max_simplices=50)
            b = barycentric_subdivision(k)
            assert b.f_vector() == chain_f_vector(k)


class TestSubcomplexes:
    def test_induced_edge_in_triangle(self):
        k = simplex_complex(["a", "b", "c"])
        sub = induced_subcomplex(k, ["a", "b"])
        assert sub.simplices == frozenset({("a",), ("b",), ("a", "b")})

    def test_induced_in_boundary(self):
        k = sphere_complex(1)  # triangle boundary
        sub = induced_subcomplex(k, ["s0", "s1"])
        assert ("s0", "s1") in sub.simplices

    def test_unknown_vertex(self):
        k = simplex_complex(["a", "b"])
        with pytest.raises(UnknownVertexError):
            induced_subcomplex(k, ["q"])

    def test_cylinder_middle_circle(self):
        cyl = cylinder_complex()
        sub = induced_subcomplex(cyl, ["m0", "m1", "m2"])
        dims = sorted(len(s) for s in sub.simplices)
        assert dims == [1, 1, 1, 2, 2, 2]

    def test_full_edge_in_triangle(self):
        k = simplex_complex(["a", "b", "c"])
        sub = induced_subcomplex(k, ["a", "b"])
        assert is_full_subcomplex(sub, k)

    def test_two_vertices_not_full(self):
        k = simplex_complex(["a", "b", "c"])
        sub = subcomplex_from(k, [["a"], ["b"]])
        assert not is_full_subcomplex(sub, k)

    def test_boundary_not_full(self):
        k = simplex_complex(["a", "b", "c"])
        sub = subcomplex_from(k, [["a", "b"], ["b", "c"], ["a", "c"]])
        assert not is_full_subcomplex(sub, k)

    def test_induced_always_full(self):
        for seed in range(4):
            k = random_complex(seed)
            half = list(k.vertices)[: max(1, len(k.vertices) // 2)]
            assert is_full_subcomplex(induced_subcomplex(k, half), k)


class TestMetric:
    def test_vertex_distance(self):
        k = simplex_complex(["a", "b", "c"])
        assert distance(vertex_point(k, "a"), vertex_point(k, "b")) == 2

    def test_identity(self):
        k = simplex_complex(["a", "b"])
        x = make_point(k, {"a": Fraction(1, 3), "b": Fraction(2, 3)})
        assert distance(x, x) == 0

    def test_barycenter_to_vertex(self):
        k = simplex_complex(["a", "b", "c"])
        b = barycenter_point(k, ["a", "b", "c"])
        assert distance(b, vertex_point(k, "a")) == Fraction(4, 3)

    def test_barycenter_coordinates(self):
        k = simplex_complex(["a", "b"])
        b = barycenter_point(k, ["a", "b"])
        assert b.as_dict() == {"a": Fraction(1, 2), "b": Fraction(1, 2)}

    def test_nested_barycenter_distance_formula(self):
        # comparable barycenters at unit scale: 2 * (1 - small/large)
        k = simplex_complex(["a", "b", "c"])
        small = barycenter_point(k, ["a"])
        large = barycenter_point(k, ["a", "b", "c"])
        assert distance(small, large) == 2 * (1 - Fraction(1, 3))

    def test_scale_mismatch(self):
        k = simplex_complex(["a", "b"])
        with pytest.raises(ScaleMismatchError):
            distance(vertex_point(k, "a", 1), vertex_point(k, "b", Fraction(1, 2)))

    def test_scaling_is_linear(self):
        k = simplex_complex(["a", "b", "c"])
        half = Fraction(1, 2)
        d1 = distance(vertex_point(k, "a"), vertex_point(k, "b"))
        d2 = distance(vertex_point(k, "a", half), vertex_point(k, "b", half))
        assert d2 == half * d1

    @given(st.integers(0, 2**32))
    @settings(max_examples=40, deadline=None)
    def test_metric_axioms_on_sampled_triples(self, seed):
        import random as random_module

        rng = random_module.Random(seed)
        k = random_complex(seed % 7)
        x, y, z = (random_point(k, rng) for _ in range(3))
        assert distance(x, y) == distance(y, x)
        assert distance(x, x) == 0
        assert distance(x, z) <= distance(x, y) + distance(y, z)
        if x.coords != y.coords:
            assert distance(x, y) > 0


class TestSubdivisionGeometry:
    def test_flatten_barycenter_vertex(self):
        k = simplex_complex(["a", "b"])
        b = barycentric_subdivision(k)
        mid = vertex_point(b, ("a", "b"))
        flat = flatten_point(mid, k)
        assert flat.as_dict() == {"a": Fraction(1, 2), "b": Fraction(1, 2)}

    def test_lift_round_trip(self):
        import random as random_module

        for seed in range(8):
            rng = random_module.Random(seed)
            k = random_complex(seed)
            b = barycentric_subdivision(k)
            x = random_point(k, rng)
            lifted = lift_to_subdivision(x, b)
            assert flatten_point(lifted, k).coords == x.coords

    def test_flatten_is_one_lipschitz_at_equal_scale(self):
        import random as random_module

        k = simplex_complex(["a", "b", "c"])
        b = barycentric_subdivision(k)
        rng = random_module.Random(5)
        for _ in range(50):
            x, y = random_point(b, rng), random_point(b, rng)
            dk = distance(flatten_point(x, k), flatten_point(y, k))
            db = distance(x, y)
            assert dk <= db

    def test_lift_support_is_a_chain(self):
        import random as random_module

        k = simplex_complex(["a", "b", "c"])
        b = barycentric_subdivision(k)
        rng = random_module.Random(9)
        for _ in range(30):
            x = random_point(k, rng)
            lifted = lift_to_subdivision(x, b)
            support = sorted(lifted.support, key=len)
            for small, large in zip(support, support[1:]):
                assert set(small) < set(large)
