"""Embedded spaces, solving, products, and submersion checks."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from acmkin.errors import SolveDiverged, TargetMismatch
from acmkin.geom import (
    DimensionObstructed,
    RankDeficientWitness,
    SampledVerified,
    SmoothMap,
    Space,
    as_rng,
    check_surjective_submersion,
    circle,
    coordinate_restriction,
    differential_rank,
    euclidean,
    fd_jacobian,
    fiber_product,
    identity_map,
    local_dimension_estimate,
    plane,
    point_space,
    preimage_point,
    product,
    sample_points,
    se2_space,
    solve_feasible,
    tangent_basis,
    tuple_map,
)


# ---------------------------------------------------------------- spaces


def test_circle_contains_the_obvious_points():
    c = circle()
    assert c.ambient_dim == 2 and c.dim == 1
    assert c.contains([1.0, 0.0])
    assert c.contains([0.0, -1.0])
    assert not c.contains([1.0, 1.0])


def test_residual_norm_on_and_off_the_sphere():
    sphere = Space("S2", ("x", "y", "z"), ("x*x + y*y + z*z - 1",), dim=2)
    assert sphere.residual_norm([0.0, 0.0, 1.0]) == 0.0
    # at (2, 0, 0) the residual is 4 - 1 = 3
    assert sphere.residual_norm([2.0, 0.0, 0.0]) == 3.0


def test_guards_select_an_orientation():
    half = Space("upper", ("x", "y"), ("x*x + y*y - 1",), dim=1, guards=("y",))
    assert half.contains([0.0, 1.0])
    assert not half.contains([0.0, -1.0])  # residual fine, guard fails


def test_duplicate_coordinates_are_rejected():
    with pytest.raises(TargetMismatch):
        Space("bad", ("x", "x"), (), dim=2)


def test_residual_over_unknown_variable_is_rejected():
    with pytest.raises(TargetMismatch):
        Space("bad", ("x",), ("x + q",), dim=0)


def test_anchor_length_must_match_ambient():
    with pytest.raises(TargetMismatch):
        Space("bad", ("x", "y"), (), dim=2, anchor=(1.0,))


def test_space_equality_is_structural():
    a = Space("one", ("x",), ("x - 1",), dim=0)
    b = Space("two", ("x",), ("x - 1",), dim=0)
    assert a == b  # names do not participate
    assert hash(a) == hash(b)
    assert a != Space("one", ("x",), ("x - 2",), dim=0)


# ---------------------------------------------------------------- solving


def test_sampled_points_land_on_the_manifold(rng):
    c = circle()
    pts = sample_points(c, 20, rng)
    xs = np.array([fp.x for fp in pts])
    assert np.all(np.abs(np.hypot(xs[:, 0], xs[:, 1]) - 1.0) < 1e-9)


def test_solver_respects_the_anchor():
    # two feasible points x = +-2; the anchor pulls the solve to +2
    sp = Space("pair", ("x",), ("x*x - 4",), dim=0, anchor=(1.5,))
    fp = solve_feasible(sp, as_rng(0))
    assert abs(fp.x[0] - 2.0) < 1e-9


def test_preimage_point_inverts_a_chart():
    f = SmoothMap("angle", se2_space(), euclidean(2, prefix="q"), ("px + c", "py + s"))
    y = np.array([0.7, -0.3])
    x = preimage_point(f, y, 3).x
    assert np.linalg.norm(f(x) - y) < 1e-9
    assert f.source.contains(x)


def test_preimage_of_an_unreachable_target_diverges():
    # c ranges over [-1, 1] on the circle; 3.0 has no preimage
    f = coordinate_restriction(circle(), ("c",), euclidean(1))
    with pytest.raises(SolveDiverged):
        preimage_point(f, np.array([3.0]), 0, restarts=4)


def test_as_rng_accepts_seeds_and_generators():
    g = as_rng(7)
    assert isinstance(g, np.random.Generator)
    assert as_rng(g) is g


# ---------------------------------------------------------------- maps


def test_map_component_count_is_checked():
    with pytest.raises(TargetMismatch):
        SmoothMap("short", euclidean(2), euclidean(2), ("x1",))


def test_composition_substitutes_symbolically():
    shift = SmoothMap("shift", euclidean(1), euclidean(1), ("x1 + 1",))
    square = SmoothMap("sq", euclidean(1), euclidean(1), ("x1 * x1",))
    both = square.compose(shift)
    # (3 + 1)^2 = 16
    assert both(np.array([3.0]))[0] == 16.0


def test_composition_requires_matching_spaces():
    f = SmoothMap("f", euclidean(2), euclidean(1), ("x1",))
    g = SmoothMap("g", euclidean(1), euclidean(1), ("x1",))
    with pytest.raises(TargetMismatch):
        g.compose(SmoothMap("h", euclidean(3), euclidean(2, prefix="y"), ("x1", "x2")))
    both = g.compose(f)
    assert both.source.ambient_dim == 2


def test_jacobian_matches_central_differences(rng):
    f = SmoothMap(
        "mix", euclidean(3), euclidean(2, prefix="y"),
        ("x1 * sin(x2)", "exp(x3) - x1 * x2"),
    )
    for _ in range(10):
        x = rng.normal(size=3)
        _, J = f.jacobian(x)
        J_fd = fd_jacobian(f, x)
        assert np.max(np.abs(J - J_fd)) < 1e-8


def test_tuple_map_concatenates_components():
    e2 = euclidean(2)
    fx = coordinate_restriction(e2, ("x1",), euclidean(1, prefix="a"))
    fy = coordinate_restriction(e2, ("x2",), euclidean(1, prefix="b"))
    tgt, _ = product([(euclidean(1, prefix="a"), None, "a"), (euclidean(1, prefix="b"), None, "b")])
    both = tuple_map((fx, fy), tgt)
    assert np.allclose(both(np.array([2.0, 5.0])), [2.0, 5.0])


def test_tuple_map_demands_a_common_source():
    fx = coordinate_restriction(euclidean(2), ("x1",), euclidean(1, prefix="a"))
    fy = coordinate_restriction(euclidean(3, prefix="z"), ("z1",), euclidean(1, prefix="b"))
    with pytest.raises(TargetMismatch):
        tuple_map((fx, fy), euclidean(2, prefix="w"))


# ---------------------------------------------------------------- products


def test_product_concatenates_and_projects(rng):
    space, (pa, pb) = product([(euclidean(2), "a_", "a"), (circle(), "b_", "b")])
    assert space.ambient_dim == 4
    assert space.dim == 3
    assert space.coords == ("a_x1", "a_x2", "b_c", "b_s")
    fp = solve_feasible(space, rng)
    assert np.allclose(pa(fp.x), fp.x[:2])
    assert abs(np.hypot(*pb(fp.x)) - 1.0) < 1e-9


def test_empty_product_is_a_point():
    space, projs = product([])
    assert space.ambient_dim == 0 and space.dim == 0 and projs == []


def test_product_rejects_coordinate_collisions():
    with pytest.raises(TargetMismatch):
        product([(euclidean(2), None, "a"), (euclidean(2), None, "b")])


def test_product_rejects_block_key_collisions():
    with pytest.raises(TargetMismatch):
        product([(euclidean(2), "a_", "k"), (euclidean(2), "b_", "k")])


def test_fiber_product_dimension_and_glue(rng):
    # se2 -> plane by position, glued against the identity on the plane:
    # dim 3 + 2 - 2 = 3, and both legs agree with the cospan pointwise.
    f = SmoothMap("pos", se2_space(), plane(), ("px", "py"))
    g = identity_map(plane())
    fp = fiber_product(f, g, left_rename="a_", right_rename="b_")
    assert fp.space.dim == 3
    assert fp.space.ambient_dim == 6  # 4 se2 coords + 2 plane coords
    for p in sample_points(fp.space, 10, rng):
        left = f(fp.proj_left(p.x))
        right = g(fp.proj_right(p.x))
        assert np.linalg.norm(left - right) < 1e-9


def test_fiber_product_blocks_remember_the_factors():
    f = SmoothMap("pos", se2_space(), plane(), ("px", "py"))
    g = identity_map(plane())
    fp = fiber_product(f, g, left_rename="a_", right_rename="b_",
                       left_block="a", right_block="b")
    assert set(fp.space.blocks) == {"a", "b"}
    assert fp.space.blocks["a"] == ("a_px", "a_py", "a_c", "a_s")


def test_fiber_product_needs_one_cospan_target():
    f = SmoothMap("f", euclidean(2), euclidean(1), ("x1",))
    g = SmoothMap("g", euclidean(2, prefix="y"), euclidean(2, prefix="z"), ("y1", "y2"))
    with pytest.raises(TargetMismatch):
        fiber_product(f, g)


@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 2))
def test_fiber_product_dimension_formula_on_euclidean_cospans(na, nb, nc):
    # projections of euclidean spaces: dim law holds exactly by construction
    A, B = euclidean(na + nc, prefix="a"), euclidean(nb + nc, prefix="b")
    C = euclidean(nc, prefix="c")
    f = coordinate_restriction(A, A.coords[:nc], C)
    g = coordinate_restriction(B, B.coords[:nc], C)
    fp = fiber_product(f, g, left_block="a", right_block="b")
    assert fp.space.dim == A.dim + B.dim - C.dim


# ---------------------------------------------------------------- submersions


def test_tangent_basis_of_the_circle_is_the_rotation_direction():
    T = tangent_basis(circle(), np.array([1.0, 0.0]))
    assert T.shape == (2, 1)
    # tangent at (1, 0) is vertical
    assert abs(T[0, 0]) < 1e-12 and abs(abs(T[1, 0]) - 1.0) < 1e-12


def test_differential_rank_counts_tangent_directions():
    assert differential_rank(identity_map(circle()), np.array([1.0, 0.0])) == 1
    proj = coordinate_restriction(euclidean(2), ("x1",), euclidean(1, prefix="y"))
    assert differential_rank(proj, np.array([0.3, 0.8])) == 1


def test_projection_is_a_surjective_submersion():
    proj = coordinate_restriction(euclidean(2), ("x1",), euclidean(1, prefix="y"))
    verdict = check_surjective_submersion(proj)
    assert isinstance(verdict, SampledVerified)
    assert verdict.ok


def test_low_dimensional_source_is_obstructed():
    up = SmoothMap("up", euclidean(1), euclidean(2, prefix="y"), ("x1", "x1"))
    verdict = check_surjective_submersion(up)
    assert isinstance(verdict, DimensionObstructed)
    assert not verdict.ok
    assert "source dim 1 < target dim 2" in str(verdict)


def test_constant_map_yields_a_rank_witness():
    flat = SmoothMap("flat", euclidean(2), euclidean(1, prefix="y"), ("0.0",))
    verdict = check_surjective_submersion(flat)
    assert isinstance(verdict, RankDeficientWitness)
    assert verdict.rank == 0 and verdict.needed == 1


def test_map_onto_a_point_is_trivially_verified():
    to_pt = SmoothMap("collapse", euclidean(2), point_space(), ())
    assert check_surjective_submersion(to_pt).ok


def test_local_dimension_is_constant_on_honest_manifolds():
    est = local_dimension_estimate(circle(), n_samples=20)
    assert est.constant() and est.distinct == [1]
    est2 = local_dimension_estimate(euclidean(3), n_samples=5)
    assert est2.distinct == [3]
    assert est2.histogram == {3: 5}


def test_local_dimension_histogram_counts_samples():
    sphere = Space("S2", ("x", "y", "z"), ("x*x + y*y + z*z - 1",), dim=2)
    est = local_dimension_estimate(sphere, n_samples=15)
    assert est.histogram == {2: 15}
