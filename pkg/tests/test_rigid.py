"""Rigid steps, their composition laws, and subsystem factorization."""

import pytest

from acmkin.diagram import ACMDiagram, build_shape, restrict_diagram
from acmkin.errors import NotDecomposing, ShapeError, TargetMismatch
from acmkin.geom import SmoothMap, euclidean
from acmkin.reduction import (
    AddActorStep,
    AddConstraintStep,
    IsoStep,
    apply_step,
    classify,
    compose_rigid,
    identity_rigid,
    include_subsystem,
    iso_witness,
    same_diagram,
)
from acmkin.reduction.rigid import ACMSystem, RigidInclusion


def chain():
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


def pair():
    A = euclidean(2, name="A")
    C = euclidean(1, name="C", prefix="u")
    return ACMDiagram(build_shape({"a": {"c"}}), {"a": A, "c": C},
                      {("a", "c"): SmoothMap("m", A, C, ("x1",))})


# ---------------------------------------------------------------- steps


def test_classify_knows_the_three_step_kinds():
    d = pair()
    assert classify(IsoStep.identity(d)) == "iso"
    assert classify(AddActorStep("b", euclidean(1, name="B", prefix="y"))) == "add-actor"
    step = AddConstraintStep("a", "z", d.spaces["c"], d.morphisms[("a", "c")])
    assert classify(step) == "add-constraint"
    with pytest.raises(TypeError):
        classify("weld")
    with pytest.raises(TypeError):
        apply_step(d, "weld")


def test_iso_step_renames_every_index():
    d = pair()
    iso = IsoStep((("a", "left"), ("c", "glue")))
    out = apply_step(d, iso)
    assert out.shape.actors == ("left",)
    assert out.shape.constraints == ("glue",)
    assert same_diagram(apply_step(out, IsoStep((("left", "a"), ("glue", "c")))), d)


def test_iso_step_must_cover_and_be_injective():
    d = pair()
    with pytest.raises(ShapeError):
        apply_step(d, IsoStep((("a", "left"),)))  # c missing
    with pytest.raises(ShapeError):
        apply_step(d, IsoStep((("a", "same"), ("c", "same"))))


def test_iso_steps_chain():
    one = IsoStep((("a", "b"), ("c", "d")))
    two = IsoStep((("b", "e"), ("d", "f")))
    assert one.then(two) == IsoStep((("a", "e"), ("c", "f")))
    with pytest.raises(ShapeError):
        two.then(one)


def test_add_actor_step_brings_a_free_actor():
    d = pair()
    out = apply_step(d, AddActorStep("b", euclidean(1, name="B", prefix="y")))
    assert out.shape.actors == ("a", "b")
    assert out.shape.constraints_of("b") == ()
    with pytest.raises(ShapeError):
        apply_step(out, AddActorStep("b", euclidean(1, name="B2", prefix="z")))


def test_add_constraint_step_extends_one_membership():
    d = pair()
    Z = euclidean(1, name="Z", prefix="w")
    m = SmoothMap("az", d.spaces["a"], Z, ("x2",))
    out = apply_step(d, AddConstraintStep("a", "z", Z, m))
    assert out.shape.constraints_of("a") == ("c", "z")
    assert out.validate().ok


def test_add_constraint_step_error_cases():
    d = pair()
    Z = euclidean(1, name="Z", prefix="w")
    m = SmoothMap("az", d.spaces["a"], Z, ("x2",))
    with pytest.raises(ShapeError):
        apply_step(d, AddConstraintStep("ghost", "z", Z, m))
    with pytest.raises(ShapeError):
        apply_step(d, AddConstraintStep("a", "a", Z, m))
    dup = AddConstraintStep("a", "c", d.spaces["c"], d.morphisms[("a", "c")])
    with pytest.raises(ShapeError):
        apply_step(d, dup)
    # constraint exists with a different space
    d2 = apply_step(d, AddActorStep("b", euclidean(1, name="B", prefix="y")))
    clash = AddConstraintStep("b", "c", Z, SmoothMap("bz", d2.spaces["b"], Z, ("y1",)))
    with pytest.raises(ShapeError):
        apply_step(d2, clash)


# ---------------------------------------------------------------- inclusions


def test_normalization_fuses_and_drops_isos():
    d = pair()
    ab = IsoStep((("a", "b"), ("c", "d")))
    back = IsoStep((("b", "a"), ("d", "c")))
    inc = RigidInclusion(d, d, (IsoStep.identity(d), ab, back))
    assert inc.normalized().steps == ()
    assert inc.is_identity()
    assert inc == identity_rigid(d)


def test_replay_checks_the_endpoint():
    d = pair()
    grown = apply_step(d, AddActorStep("b", euclidean(1, name="B", prefix="y")))
    good = RigidInclusion(d, grown, (AddActorStep("b", euclidean(1, name="B", prefix="y")),))
    assert same_diagram(good.replay(), grown)
    bad = RigidInclusion(d, grown, (IsoStep.identity(d),))
    with pytest.raises(ShapeError):
        bad.replay()


def test_composition_demands_matching_endpoints():
    d = pair()
    f = identity_rigid(d)
    grown = apply_step(d, AddActorStep("b", euclidean(1, name="B", prefix="y")))
    g = identity_rigid(grown)
    with pytest.raises(TargetMismatch):
        compose_rigid(g, f)


def test_category_laws_hold_exactly():
    d = chain()
    sub2, _ = restrict_diagram(d, ("a1", "a2"))
    f = include_subsystem(restrict_diagram(sub2, ("a2",))[1])
    g = include_subsystem(restrict_diagram(d, ("a1", "a2"))[1])
    # identities are two-sided units
    assert compose_rigid(g, identity_rigid(sub2)) == g
    assert compose_rigid(identity_rigid(d), g) == g
    # associativity on a composable triple, with the identity as h
    h = identity_rigid(d)
    assert compose_rigid(h, compose_rigid(g, f)) == compose_rigid(compose_rigid(h, g), f)


def test_include_subsystem_factors_into_simple_steps():
    d = chain()
    sub, inc = restrict_diagram(d, ("a2",))
    rigid = include_subsystem(inc)
    kinds = [classify(s) for s in rigid.steps]
    assert kinds == ["add-actor", "add-actor",
                     "add-constraint", "add-constraint", "add-constraint"]
    # actors enter sorted, then memberships sorted
    assert [s.actor for s in rigid.steps[:2]] == ["a1", "a3"]
    assert [(s.actor, s.constraint) for s in rigid.steps[2:]] == [
        ("a1", "c12"), ("a1", "z"), ("a3", "c23")]
    assert same_diagram(rigid.replay(), d)


def test_include_subsystem_requires_a_decomposing_target():
    # a one-dimensional actor facing two shared constraints cannot decompose
    spaces = {
        "a": euclidean(1, name="A"),
        "b": euclidean(2, name="B", prefix="y"),
        "c": euclidean(1, name="C", prefix="u"),
        "d": euclidean(1, name="D", prefix="v"),
    }
    shape = build_shape({"a": {"c", "d"}, "b": {"c", "d"}})
    d = ACMDiagram(shape, spaces, {
        ("a", "c"): SmoothMap("ac", spaces["a"], spaces["c"], ("x1",)),
        ("a", "d"): SmoothMap("ad", spaces["a"], spaces["d"], ("x1",)),
        ("b", "c"): SmoothMap("bc", spaces["b"], spaces["c"], ("y1",)),
        ("b", "d"): SmoothMap("bd", spaces["b"], spaces["d"], ("y2",)),
    })
    _, inc = restrict_diagram(d, ("b",))
    with pytest.raises(NotDecomposing):
        include_subsystem(inc)


# ---------------------------------------------------------------- witnesses


def test_iso_witness_accepts_a_renaming():
    d = chain()
    renamed = apply_step(d, IsoStep(tuple(
        (i, i.upper()) for i in d.shape.actors + d.shape.constraints)))
    index_map = {i: i.upper() for i in d.shape.actors + d.shape.constraints}
    w = iso_witness(d, renamed, index_map=index_map)
    assert w.ok
    assert w.max_deviation == 0.0
    assert "natural" in str(w)


def test_iso_witness_detects_a_broken_square():
    d = pair()
    twisted = ACMDiagram(d.shape, d.spaces, {
        ("a", "c"): SmoothMap("m", d.spaces["a"], d.spaces["c"], ("x1 + 1",)),
    })
    w = iso_witness(d, twisted)
    assert not w.ok
    assert w.max_deviation == pytest.approx(1.0)


def test_iso_witness_needs_matching_ambients():
    d = pair()
    fat = ACMDiagram(d.shape, {**d.spaces, "c": euclidean(2, name="C2", prefix="u")}, {
        ("a", "c"): SmoothMap("m", d.spaces["a"], euclidean(2, name="C2", prefix="u"),
                              ("x1", "x2")),
    })
    with pytest.raises(TargetMismatch):
        iso_witness(d, fat)


def test_system_repr_mentions_its_limit():
    from acmkin.reduction import f_limit

    d = chain()
    bare = ACMSystem(d)
    assert "apex" not in repr(bare)
    with_limit = ACMSystem(d, f_limit(d))
    assert "apex dim 3" in repr(with_limit)
