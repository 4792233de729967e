"""Exception hierarchy.

Every domain failure derives from :class:`SchurkitError`; the CLI maps those
to exit code 1.  :class:`BudgetExceeded` is kept separate because a search
that ran out of nodes is not evidence of anything (exit code 2).
"""


class SchurkitError(Exception):
    """Base class for domain errors."""


class BudgetExceeded(Exception):
    """A backtracking search hit its node budget."""

    def __init__(self, nodes, message="node budget exceeded"):
        super().__init__(f"{message} after {nodes} nodes")
        self.nodes = nodes


# groups
class InvalidFactor(SchurkitError):
    pass


class InvalidElement(SchurkitError):
    pass


class InvalidPrime(SchurkitError):
    pass


class NotAHomomorphism(SchurkitError):
    pass


class NotBijective(SchurkitError):
    pass


class EmptySet(SchurkitError):
    pass


# sring
class PartitionError(SchurkitError):
    pass


class MissingIdentityClass(SchurkitError):
    pass


class NotInverseClosed(SchurkitError):
    pass


class NotProductClosed(SchurkitError):
    def __init__(self, x, y, z1, z2, c1, c2):
        super().__init__(
            f"product of classes {x} and {y} gives coefficient {c1} at element "
            f"{z1} but {c2} at element {z2} of the same class"
        )
        self.classes = (x, y)
        self.elements = (z1, z2)
        self.coefficients = (c1, c2)


class NotContainingRegular(SchurkitError):
    pass


class NotASection(SchurkitError):
    pass


class HNotSubgroup(SchurkitError):
    pass


class NotClosed(SchurkitError):
    pass


# morphisms
class InvalidAlgebraicIso(SchurkitError):
    pass


class SizeMismatch(InvalidAlgebraicIso):
    pass


class ConstantMismatch(InvalidAlgebraicIso):
    def __init__(self, triple, source_value, target_value):
        x, y, z = triple
        super().__init__(
            f"c[{x},{y},{z}] = {source_value} but image constant is {target_value}"
        )
        self.triple = triple


class NotASchemeIsomorphism(SchurkitError):
    pass


# classify
class CyclicInput(SchurkitError):
    pass


class ElementaryAbelianInput(SchurkitError):
    pass


# witness
class PlanInvalid(SchurkitError):
    pass


class FormulaMismatch(SchurkitError):
    pass


class NotApplicable(SchurkitError):
    pass
