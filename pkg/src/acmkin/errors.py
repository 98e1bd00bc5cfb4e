"""Exception types shared across the package."""


class AcmkinError(Exception):
    """Base class for package errors."""


class ExprParseError(AcmkinError):
    """Raised when an expression string does not match the grammar."""


class DomainError(AcmkinError):
    """Expression (or its derivative) is undefined at the evaluation point."""


class TargetMismatch(AcmkinError):
    """A map was used where source/target spaces do not line up."""


class SolveDiverged(AcmkinError):
    """The nonlinear solver exhausted its restart budget without converging."""

    def __init__(self, message, best_norm=None):
        super().__init__(message)
        self.best_norm = best_norm


class ShapeError(AcmkinError):
    """Malformed actor/constraint shape (duplicate ids, unknown references...)."""


class ValidationFailure(AcmkinError):
    """A diagram failed one of the structural axioms."""

    def __init__(self, report):
        super().__init__(str(report))
        self.report = report


class WeldObstruction(AcmkinError):
    """Welding a pair would break the product-morphism axiom for some actor."""

    def __init__(self, i, j, witness, verdict):
        super().__init__(
            f"welding ({i},{j}) obstructed: actor {witness!r} has no product "
            f"morphism onto the shared constraints ({verdict})"
        )
        self.pair = (i, j)
        self.witness = witness
        self.verdict = verdict


class AcyclicityRequired(AcmkinError):
    """Leaf-peeling reduction was asked for on a cyclic constraint skeleton."""


class InvalidOrder(AcmkinError):
    """A weld order does not name actors of the evolving diagram."""


class NotDecomposing(AcmkinError):
    """An operation requires a decomposition property the diagram lacks."""


class NoLimitStrategy(AcmkinError):
    """Every limit strategy failed; carries the per-strategy report."""

    def __init__(self, report):
        super().__init__(report.summary())
        self.report = report


class ManifestError(AcmkinError):
    """Diagram manifest malformed (bad JSON shape, unknown keys, bad refs)."""


class NotEquivariant(AcmkinError):
    """Sampled equivariance check failed for a claimed equivariant map."""


class NotTransitive(AcmkinError):
    """Preimage solving found target points outside the image of the map."""


class EmptySlice(AcmkinError):
    """A daemon slice has no feasible point at the requested time."""


class SubmersionViolated(AcmkinError):
    """The legs selected for a daemon do not form a surjective submersion."""
