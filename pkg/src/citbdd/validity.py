"""Validity checking: is a full or partial test case extendable to a test
case satisfying all constraints?

Three interchangeable handlers implement the same contract:

* ``OracleHandler``: exhaustive search over completions (the reference);
* ``ConjunctionHandler``: conjoins the cube of the fixed values with the
  compiled constraint BDD and tests the result for constant falsehood;
* ``TraversalHandler``: walks a precomputed BDD that accepts every valid
  full *and* partial test case, with unspecified values encoded as the
  all-ones codeword, so each check is a single root-to-terminal traversal.

All handlers agree on every assignment; the traversal handler trades a more
expensive setup (an existential-quantification pass per parameter) for the
cheapest possible per-check cost.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional, Sequence

from .bdd import BddManager, Op
from .encode import (
    CompiledConstraints, Encoding, EncodingMode,
    compile_constraints, constrained_params, encode_full, make_encoding,
)
from .model import SutModel, check_assignment


class ValidityHandler(ABC):
    """Decides validity of assignments for one model."""

    name: str
    dropped: frozenset[int]  # parameters that occur in no constraint

    @abstractmethod
    def is_valid(self, assignment: Sequence[Optional[int]]) -> bool:
        """True iff the assignment extends to a constraint-satisfying test case."""


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _oracle_tables(model: SutModel):
    """Per-model data for the oracle: constraint parameter sets and index."""
    param_sets = tuple(frozenset(_params_of(c)) for c in model.constraints)
    by_param: dict[int, tuple[int, ...]] = {}
    for ci, ps in enumerate(param_sets):
        for p in ps:
            by_param.setdefault(p, ())
            by_param[p] += (ci,)
    constrained = frozenset().union(*param_sets) if param_sets else frozenset()
    return param_sets, by_param, constrained


def _params_of(expr) -> frozenset[int]:
    from .model import referenced_params
    return frozenset(referenced_params(expr))


def oracle_check(model: SutModel, assignment: Sequence[Optional[int]]) -> bool:
    """Reference validity check by depth-first search over completions.

    Only parameters occurring in constraints are branched on (values of the
    others cannot influence any constraint), and a branch is abandoned as
    soon as some constraint has all of its parameters fixed and evaluates
    false.  Worst-case cost is exponential in the number of unspecified
    constrained parameters; intended for small models and as the reference
    the other handlers are tested against.
    """
    check_assignment(model, assignment)
    param_sets, by_param, constrained = _oracle_tables(model)
    values: list[Optional[int]] = list(assignment)
    remaining = [sum(1 for p in ps if values[p] is None) for ps in param_sets]
    for ci, rem in enumerate(remaining):
        if rem == 0 and not model.constraints[ci].evaluate(values):
            return False
    unfixed = sorted(p for p in constrained if values[p] is None)
    sizes = model.sizes

    def dfs(k: int) -> bool:
        if k == len(unfixed):
            return True
        p = unfixed[k]
        touched = by_param[p]
        for v in range(sizes[p]):
            values[p] = v
            ok = True
            for ci in touched:
                remaining[ci] -= 1
            for ci in touched:
                if remaining[ci] == 0 and not model.constraints[ci].evaluate(values):
                    ok = False
                    break
            if ok and dfs(k + 1):
                return True
            for ci in touched:
                remaining[ci] += 1
        values[p] = None
        return False

    return dfs(0)


class OracleHandler(ValidityHandler):
    name = "oracle"

    def __init__(self, model: SutModel):
        self.model = model
        self.dropped = frozenset(range(model.n)) - constrained_params(model)

    def is_valid(self, assignment: Sequence[Optional[int]]) -> bool:
        return oracle_check(self.model, assignment)


# ---------------------------------------------------------------------------
# Conjunction check against the compiled constraint BDD
# ---------------------------------------------------------------------------

def check_and(cc: CompiledConstraints, assignment: Sequence[Optional[int]]) -> bool:
    """Validity via conjunction: the cube of the fixed constrained values is
    ANDed with the compiled constraint function; the assignment is valid
    unless the conjunction is constant false."""
    check_assignment(cc.model, assignment)
    enc = cc.encoding
    mgr = cc.manager
    literals: list[tuple[int, int]] = []
    for param, width, offset in zip(enc.order, enc.widths, enc.offsets):
        v = assignment[param]
        if v is None:
            continue
        literals.extend((offset + j, (v >> j) & 1) for j in range(width))
    if not literals:
        # Nothing constrained is fixed: valid exactly when any valid test
        # case exists at all.
        return not mgr.is_false(cc.f)
    cube = mgr.make_assignment_cube(literals)
    return not mgr.is_false(mgr.apply(Op.AND, cube, cc.f))


class ConjunctionHandler(ValidityHandler):
    name = "bdd-and"

    def __init__(self, cc: CompiledConstraints):
        if cc.encoding.mode is not EncodingMode.FULL:
            raise ValueError("conjunction checking expects the FULL encoding")
        self.cc = cc
        self.dropped = cc.encoding.dropped

    def is_valid(self, assignment: Sequence[Optional[int]]) -> bool:
        return check_and(self.cc, assignment)


# ---------------------------------------------------------------------------
# Traversal of the partial-test-case BDD
# ---------------------------------------------------------------------------

class QuantOrder(Enum):
    DOWN = "down"  # parameters nearest the root first
    UP = "up"      # parameters nearest the terminals first


@dataclass
class PartialValidityBdd:
    manager: BddManager
    g: int  # accepts exactly the encodings of valid full and partial test cases
    encoding: Encoding
    quant_order: QuantOrder
    model: SutModel


def build_partial_bdd(cc: CompiledConstraints,
                      quant_order: QuantOrder = QuantOrder.UP) -> PartialValidityBdd:
    """Extend the constraint BDD to accept valid partial test cases too.

    One pass per parameter: existentially quantify the parameter's variables
    out of the function built so far, conjoin the all-ones cube of those
    variables (marking the parameter unspecified), and OR the result back
    in.  ``quant_order`` picks whether the pass runs from the root-most
    parameter down or from the terminal-most parameter up; both orders
    produce the same canonical function, but the cost of the quantification
    steps can differ.

    Raises ResourceLimitError if the manager's node limit is exceeded.
    """
    if cc.encoding.mode is not EncodingMode.WITH_DASH:
        raise ValueError("the partial-test-case BDD needs the WITH_DASH encoding")
    mgr = cc.manager
    enc = cc.encoding
    positions = range(len(enc.order))
    if quant_order is QuantOrder.UP:
        positions = reversed(positions)
    g = cc.f
    for pos in positions:
        offset, width = enc.offsets[pos], enc.widths[pos]
        cube = mgr.make_cube(range(offset, offset + width))
        quantified = mgr.exists(cube, g)
        h = mgr.apply(Op.AND, quantified, cube)
        g = mgr.apply(Op.OR, g, h)
    return PartialValidityBdd(manager=mgr, g=g, encoding=enc,
                              quant_order=quant_order, model=cc.model)


def check_traverse(pb: PartialValidityBdd, assignment: Sequence[Optional[int]]) -> bool:
    """Validity by one root-to-terminal walk; no BDD is constructed."""
    check_assignment(pb.model, assignment)
    bits = encode_full(pb.encoding, assignment)
    return pb.manager.eval(pb.g, bits)


class TraversalHandler(ValidityHandler):
    def __init__(self, pb: PartialValidityBdd):
        self.pb = pb
        self.dropped = pb.encoding.dropped
        self.name = ("bdd-partial-up" if pb.quant_order is QuantOrder.UP
                     else "bdd-partial-down")

    def is_valid(self, assignment: Sequence[Optional[int]]) -> bool:
        return check_traverse(self.pb, assignment)


# ---------------------------------------------------------------------------
# Handler factory
# ---------------------------------------------------------------------------

HANDLER_ORACLE = "oracle"
HANDLER_AND = "bdd-and"
HANDLER_PARTIAL_UP = "bdd-partial-up"
HANDLER_PARTIAL_DOWN = "bdd-partial-down"
HANDLER_KINDS = (HANDLER_AND, HANDLER_PARTIAL_UP, HANDLER_PARTIAL_DOWN, HANDLER_ORACLE)


def build_handler(model: SutModel, kind: str,
                  max_nodes: Optional[int] = None) -> ValidityHandler:
    """Construct a validity handler of the given kind for ``model``."""
    if kind == HANDLER_ORACLE:
        return OracleHandler(model)
    if kind == HANDLER_AND:
        enc = make_encoding(model, EncodingMode.FULL)
        mgr = BddManager(enc.total_bits, max_nodes=max_nodes)
        return ConjunctionHandler(compile_constraints(model, enc, mgr))
    if kind in (HANDLER_PARTIAL_UP, HANDLER_PARTIAL_DOWN):
        enc = make_encoding(model, EncodingMode.WITH_DASH)
        mgr = BddManager(enc.total_bits, max_nodes=max_nodes)
        cc = compile_constraints(model, enc, mgr)
        order = QuantOrder.UP if kind == HANDLER_PARTIAL_UP else QuantOrder.DOWN
        return TraversalHandler(build_partial_bdd(cc, order))
    raise ValueError(f"unknown handler kind {kind!r}; expected one of {HANDLER_KINDS}")
