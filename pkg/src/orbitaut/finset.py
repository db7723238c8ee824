"""The finite-set backend: plain finite carriers, trivial symmetry.

Reference semantics for the generic algorithms and the target of the
forgetful functor from group actions.
"""

from dataclasses import dataclass

from . import contract
from .contract import FinitenessReport, graph_product, graph_quotient
from .errors import ValidationError


@dataclass(frozen=True)
class SetObject(contract.BackendObject):
    elements: tuple

    backend = "set"

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise ValidationError("duplicate elements in set object")

    def carrier(self):
        return self.elements

    def symmetry_actions(self):
        return {}


def _remake(template, elements, actions):
    return SetObject(tuple(elements))


contract.register_remake(SetObject, _remake)


@contract.product.register
def _(x: SetObject, y: contract.BackendObject):
    return graph_product(x, y, _remake)


@contract.quotient.register
def _(x: SetObject, c: contract.Congruence):
    return graph_quotient(x, c, _remake)


@contract.finiteness.register
def _(x: SetObject):
    return FinitenessReport(True, True, len(x.elements))


TRUTH = SetObject((False, True))
