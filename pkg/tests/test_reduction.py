"""Welding, reduction chains, limit strategies, and order invariance."""

import numpy as np
import pytest

from acmkin.diagram import ACMDiagram, build_shape
from acmkin.errors import (
    AcyclicityRequired,
    InvalidOrder,
    ShapeError,
    WeldObstruction,
)
from acmkin.geom import DimensionObstructed, SmoothMap, euclidean, sample_points
from acmkin.linkage import build_catalog
from acmkin.reduction import (
    ConfigurationSpace,
    ObstructionReport,
    PreimageLeg,
    enumerate_weld_orders,
    f_limit,
    raw_equalizer,
    reduce_acyclic,
    replay_order,
    weld,
    weld_order_invariance_check,
)


def chain():
    """a1 - c12 - a2 - c23 - a3, anchor z on a1; every actor decomposes into
    its constraints (a3 is one-dimensional so its single leg is an iso)."""
    spaces = {
        "a1": euclidean(2, name="A1", prefix="p"),
        "a2": euclidean(2, name="A2", prefix="q"),
        "a3": euclidean(1, name="A3", prefix="r"),
        "c12": euclidean(1, name="C12", prefix="u"),
        "c23": euclidean(1, name="C23", prefix="v"),
        "z": euclidean(1, name="Z", prefix="w"),
    }
    shape = build_shape({"a1": {"c12", "z"}, "a2": {"c12", "c23"}, "a3": {"c23"}})
    morphisms = {
        ("a1", "c12"): SmoothMap("m1", spaces["a1"], spaces["c12"], ("p1",)),
        ("a1", "z"): SmoothMap("m2", spaces["a1"], spaces["z"], ("p2",)),
        ("a2", "c12"): SmoothMap("m3", spaces["a2"], spaces["c12"], ("q1",)),
        ("a2", "c23"): SmoothMap("m4", spaces["a2"], spaces["c23"], ("q2",)),
        ("a3", "c23"): SmoothMap("m5", spaces["a3"], spaces["c23"], ("r1",)),
    }
    return ACMDiagram(shape, spaces, morphisms)


def pinched():
    """Welding a and b leaves a one-dimensional actor facing k's
    two-dimensional shared product, so the weld is obstructed by k."""
    spaces = {
        "a": euclidean(1, name="A"),
        "b": euclidean(1, name="B", prefix="y"),
        "k": euclidean(2, name="K", prefix="k"),
        "c": euclidean(1, name="C", prefix="u"),
        "d": euclidean(1, name="D", prefix="v"),
        "e": euclidean(1, name="E", prefix="w"),
    }
    shape = build_shape({"a": {"c", "d"}, "b": {"c", "e"}, "k": {"d", "e"}})
    morphisms = {
        ("a", "c"): SmoothMap("ac", spaces["a"], spaces["c"], ("x1",)),
        ("a", "d"): SmoothMap("ad", spaces["a"], spaces["d"], ("x1",)),
        ("b", "c"): SmoothMap("bc", spaces["b"], spaces["c"], ("y1",)),
        ("b", "e"): SmoothMap("be", spaces["b"], spaces["e"], ("y1",)),
        ("k", "d"): SmoothMap("kd", spaces["k"], spaces["d"], ("k1",)),
        ("k", "e"): SmoothMap("ke", spaces["k"], spaces["e"], ("k2",)),
    }
    return ACMDiagram(shape, spaces, morphisms)


# ---------------------------------------------------------------- welding


def test_weld_replaces_the_pair_by_its_apex():
    d = chain()
    step = weld(d, "a2", "a1")  # order is normalized
    assert step.pair == ("a1", "a2")
    assert step.new_actor_id == "a1a2"
    assert step.apex.dim == 2 + 2 - 1
    after = step.after
    assert after.shape.actors == ("a1a2", "a3")
    assert after.shape.constraints_of("a1a2") == ("c12", "c23", "z")
    assert after.validate().ok


def test_welded_constraint_maps_factor_through_the_projections(rng):
    d = chain()
    step = weld(d, "a1", "a2")
    after = step.after
    for fp in sample_points(step.apex, 10, rng):
        # c12 is carried by both parents; the first actor's branch wins
        via_new = after.morphisms[("a1a2", "c12")](fp.x)
        via_a1 = d.morphisms[("a1", "c12")](step.proj_first(fp.x))
        assert np.allclose(via_new, via_a1, atol=1e-12)
        via_a3_side = d.morphisms[("a2", "c23")](step.proj_second(fp.x))
        assert np.allclose(after.morphisms[("a1a2", "c23")](fp.x), via_a3_side,
                           atol=1e-12)


def test_weld_record_is_replayable_data():
    step = weld(chain(), "a1", "a2")
    assert step.record() == {
        "pair": ["a1", "a2"],
        "new_actor": "a1a2",
        "apex_dim": 3,
        "apex_ambient": 4,
    }


def test_weld_rejects_bad_actor_ids():
    d = chain()
    with pytest.raises(ShapeError):
        weld(d, "a1", "a1")
    with pytest.raises(ShapeError):
        weld(d, "a1", "ghost")


def test_obstructed_weld_names_the_witness():
    d = pinched()
    assert d.validate().ok  # the diagram itself is fine
    with pytest.raises(WeldObstruction) as info:
        weld(d, "a", "b")
    exc = info.value
    assert exc.pair == ("a", "b")
    assert exc.witness == "k"
    assert isinstance(exc.verdict, DimensionObstructed)
    assert "no product morphism" in str(exc)


# ---------------------------------------------------------------- chains


def test_replay_order_runs_welds_by_name():
    ch = replay_order(chain(), (("a1", "a2"), ("a1a2", "a3")))
    assert ch.complete
    assert ch.terminal_actor_id == "a1a2a3"
    assert ch.order() == (("a1", "a2"), ("a1a2", "a3"))
    assert [r["apex_dim"] for r in ch.transcript()] == [3, 3]


def test_replay_order_validates_its_input():
    with pytest.raises(InvalidOrder):
        replay_order(chain(), (("a1", "a2", "a3"),))
    with pytest.raises(InvalidOrder):
        replay_order(chain(), (("a1", "nope"),))
    # a2 was consumed by the first weld
    with pytest.raises(InvalidOrder):
        replay_order(chain(), (("a1", "a2"), ("a2", "a3")))


def test_incomplete_chain_has_no_terminal_actor():
    ch = replay_order(chain(), (("a1", "a2"),))
    assert not ch.complete
    with pytest.raises(ShapeError):
        ch.terminal_actor_id


def test_leaf_peeling_reduces_an_acyclic_diagram():
    ch = reduce_acyclic(chain())
    assert ch.complete
    # a1 is the smallest leaf, so it goes first
    assert ch.order()[0] == ("a1", "a2")
    assert ch.terminal.spaces[ch.terminal_actor_id].dim == 3


def test_leaf_peeling_requires_an_acyclic_skeleton():
    with pytest.raises(AcyclicityRequired):
        reduce_acyclic(build_catalog("three_bar"))


def test_disconnected_actors_are_welded_over_the_star():
    spaces = {
        "a": euclidean(1, name="A"),
        "b": euclidean(2, name="B", prefix="y"),
        "za": euclidean(1, name="ZA", prefix="u"),
    }
    shape = build_shape({"a": {"za"}, "b": set()})
    d = ACMDiagram(shape, spaces, {
        ("a", "za"): SmoothMap("m", spaces["a"], spaces["za"], ("x1",)),
    })
    ch = reduce_acyclic(d)
    assert ch.complete
    assert ch.terminal.spaces[ch.terminal_actor_id].dim == 3


# ---------------------------------------------------------------- limits


def test_limit_of_a_single_actor_is_the_actor():
    sp = euclidean(2, name="A")
    z = euclidean(1, name="Z", prefix="w")
    d = ACMDiagram(build_shape({"a": {"z"}}),
                   {"a": sp, "z": z},
                   {("a", "z"): SmoothMap("m", sp, z, ("x1",))})
    lim = f_limit(d)
    assert isinstance(lim, ConfigurationSpace)
    assert lim.apex.dim == 2
    assert lim.legs["a"](np.array([0.3, 0.7])).tolist() == [0.3, 0.7]


def test_auto_limit_picks_the_external_route():
    lim = f_limit(chain())
    assert isinstance(lim, ConfigurationSpace)
    assert lim.strategy == "decomposes-external"
    assert lim.apex.dim == 3
    worst, ok = lim.cone_check(n_samples=30)
    assert ok, worst


def test_forced_acyclic_route_agrees_on_dimension():
    lim = f_limit(chain(), strategy="acyclic")
    assert lim.strategy == "acyclic"
    assert lim.apex.dim == 3
    assert lim.cone_check(n_samples=30)[1]


def test_union_route_needs_a_declared_decomposition():
    rep = f_limit(chain(), strategy="union")
    assert isinstance(rep, ObstructionReport)
    assert rep.reasons == {"declared-union": "no decomposition declared"}
    assert rep.expected_dim == 3
    assert rep.local_dims.constant()


def test_union_route_glues_constraint_products():
    lim = f_limit(chain(), strategy="union",
                  declared_union=(("a1", "a2"), ("a2", "a3")))
    assert isinstance(lim, ConfigurationSpace)
    assert lim.strategy == "declared-union"
    assert lim.apex.dim == 3
    assert isinstance(lim.legs["a1"], PreimageLeg)
    worst, ok = lim.cone_check(n_samples=20)
    assert ok, worst


def test_union_route_demands_constraint_decomposition():
    d = chain()
    # fatten a3 so its single constraint map cannot be an isomorphism
    spaces = dict(d.spaces)
    spaces["a3"] = euclidean(2, name="A3", prefix="r")
    morphisms = dict(d.morphisms)
    morphisms[("a3", "c23")] = SmoothMap("m5", spaces["a3"], spaces["c23"], ("r1",))
    fat = ACMDiagram(d.shape, spaces, morphisms)
    rep = f_limit(fat, strategy="union", declared_union=(("a1", "a2"), ("a2", "a3")))
    assert isinstance(rep, ObstructionReport)
    assert "does not decompose into constraints" in rep.reasons["declared-union"]


def test_unknown_strategy_is_an_error():
    with pytest.raises(ValueError):
        f_limit(chain(), strategy="bogus")


def test_preimage_leg_handles_points_and_batches():
    lim = f_limit(chain(), strategy="union",
                  declared_union=(("a1", "a2"), ("a2", "a3")))
    leg = lim.legs["a2"]
    pts = sample_points(lim.apex, 3, 0)
    X = np.array([p.x for p in pts])
    batch = leg(X)
    assert batch.shape == (3, 2)
    single = leg(X[0])
    assert single.shape == (2,)
    assert np.allclose(single, batch[0], atol=1e-9)
    assert "leg:a2" in repr(leg)


def test_raw_equalizer_declares_the_counted_dimension():
    space, expected = raw_equalizer(chain())
    assert expected == 3  # 2 + 2 + 1 actors minus one row each for c12, c23
    assert space.dim == 3
    assert space.ambient_dim == 5
    assert len(space.residuals) == 2

    space2, expected2 = raw_equalizer(pinched())
    assert expected2 == 1  # 1 + 1 + 2 minus three shared one-dim constraints
    assert len(space2.residuals) == 3


def test_obstruction_report_carries_equalizer_evidence():
    rep = f_limit(build_catalog("three_bar"))
    assert isinstance(rep, ObstructionReport)
    assert not rep.ok
    assert set(rep.reasons) == {"decomposes-external", "acyclic", "declared-union"}
    assert rep.reasons["acyclic"] == "constraint skeleton has a cycle"
    assert rep.expected_dim == 3
    assert rep.local_dims.histogram == {3: 50}
    assert "no limit strategy applied" in rep.summary()


# ---------------------------------------------------------------- order invariance


def test_weld_orders_agree_on_the_chain():
    report = weld_order_invariance_check(
        chain(),
        (("a1", "a2"), ("a1a2", "a3")),
        (("a2", "a3"), ("a1", "a2a3")),
        n_samples=40,
    )
    assert report.ok
    assert report.dim_first == report.dim_second == 3
    assert report.max_leg_deviation <= 1e-9
    assert report.max_cross_residual <= 1e-7
    assert "agree" in str(report)


def test_order_invariance_rejects_incomplete_orders():
    with pytest.raises(InvalidOrder):
        weld_order_invariance_check(
            chain(), (("a1", "a2"),), (("a2", "a3"), ("a1", "a2a3")))


def test_every_weld_order_of_the_chain_completes():
    orders = enumerate_weld_orders(chain())
    assert len(orders) == 3
    firsts = {o[0] for o in orders}
    assert firsts == {("a1", "a2"), ("a1", "a3"), ("a2", "a3")}


def test_linked_revolutes_have_exactly_two_weld_orders():
    orders = enumerate_weld_orders(build_catalog("linked_revolutes"))
    assert len(orders) == 2
    # the middle actor must join first; welding the two ends is obstructed
    assert {o[0] for o in orders} == {("a1", "a2"), ("a2", "a3")}
