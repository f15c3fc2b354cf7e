"""Boolean encodings of parameters and compilation of constraints to a BDD.

Each parameter that occurs in a constraint gets a contiguous range of
Boolean variables, least significant bit first.  Two encodings exist:

* ``FULL`` uses ceil(log2 |D|) bits per parameter and can represent only
  fixed values;
* ``WITH_DASH`` uses ceil(log2(|D|+1)) bits and reserves the all-ones
  codeword of each parameter for the unspecified marker.

Parameters not occurring in any constraint never influence validity and are
dropped from the encoding.  The encoded parameter order defaults to a static
heuristic that keeps parameters close when they appear close together in
the constraint parse trees, which tends to keep the compiled BDDs small.

``compile_constraints`` builds the function accepting exactly the encodings
of the constraint-satisfying full test cases: the conjunction of a per
parameter domain bound (encoded value <= |D|-1, derived from the binary
representation of |D|-1) with the bit-level translation of every
constraint.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Optional, Sequence

from .bdd import FALSE, TRUE, BddManager, Op
from .model import (
    And, Implies, Not, Or,
    ParamEqConst, ParamEqParam, ParamGeConst, ParamGtConst,
    ParamLeConst, ParamLtConst, ParamNeqConst, ParamNeqParam,
    ConstraintExpr, SutModel, referenced_params,
)


class EncodingMode(Enum):
    FULL = "full"            # every codeword is a parameter value
    WITH_DASH = "with-dash"  # all-ones codeword = unspecified


def _ceil_log2(k: int) -> int:
    return (k - 1).bit_length()


@dataclass
class Encoding:
    mode: EncodingMode
    order: tuple[int, ...]    # constrained parameter indices, root-most first
    sizes: tuple[int, ...]    # domain sizes, aligned with order
    widths: tuple[int, ...]   # bits per parameter, aligned with order
    offsets: tuple[int, ...]  # first bit index per parameter, aligned with order
    total_bits: int
    dropped: frozenset[int]   # parameters absent from every constraint
    n_params: int

    def bit_range(self, param: int) -> range:
        pos = self.order.index(param)
        return range(self.offsets[pos], self.offsets[pos] + self.widths[pos])


def constrained_params(model: SutModel) -> frozenset[int]:
    """Indices of the parameters occurring in at least one constraint."""
    out: set[int] = set()
    for c in model.constraints:
        out.update(referenced_params(c))
    return frozenset(out)


def _occurrences(model: SutModel) -> list[tuple[int, tuple[int, ...]]]:
    """Parameter occurrences as (param, path) over the virtual parse forest.

    A path is the sequence of child indices from the virtual root joining all
    constraint trees; relation operands count as leaves one step below their
    relation node.
    """
    occs: list[tuple[int, tuple[int, ...]]] = []

    def walk(expr: ConstraintExpr, path: tuple[int, ...]) -> None:
        if isinstance(expr, Not):
            walk(expr.child, path + (0,))
        elif isinstance(expr, (And, Or, Implies)):
            walk(expr.left, path + (0,))
            walk(expr.right, path + (1,))
        elif isinstance(expr, (ParamEqParam, ParamNeqParam)):
            occs.append((expr.left, path + (0,)))
            occs.append((expr.right, path + (1,)))
        else:
            occs.append((expr.param, path + (0,)))

    for k, c in enumerate(model.constraints):
        walk(c, (k,))
    return occs


def _path_distance(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    # Paths share the constraint index as their first step when the
    # occurrences are in the same tree; otherwise the route passes through
    # the virtual root, which the differing first steps account for.
    lcp = 0
    for x, y in zip(a, b):
        if x != y:
            break
        lcp += 1
    return len(a) + len(b) - 2 * lcp


def order_parameters(model: SutModel) -> tuple[int, ...]:
    """Order the constrained parameters by mutual parse-tree distance.

    The first parameter minimizes the sum of distances to all other
    constrained parameters; each following pick minimizes the sum of
    distances to those already selected.  Ties break toward the lower
    declaration index.  Parameters selected earlier receive lower variable
    indices (nearest the BDD root).
    """
    occs = _occurrences(model)
    params = sorted({p for p, _ in occs})
    if len(params) <= 1:
        return tuple(params)
    dist: dict[tuple[int, int], int] = {}
    for (p, pa), (q, qa) in combinations(occs, 2):
        if p == q:
            continue
        d = _path_distance(pa, qa)
        key = (p, q) if p < q else (q, p)
        if key not in dist or d < dist[key]:
            dist[key] = d

    def d(p: int, q: int) -> int:
        return dist[(p, q) if p < q else (q, p)]

    first = min(params, key=lambda p: (sum(d(p, q) for q in params if q != p), p))
    chosen = [first]
    remaining = [p for p in params if p != first]
    while remaining:
        nxt = min(remaining, key=lambda p: (sum(d(p, s) for s in chosen), p))
        chosen.append(nxt)
        remaining.remove(nxt)
    return tuple(chosen)


def make_encoding(model: SutModel, mode: EncodingMode,
                  order: Optional[Sequence[int]] = None) -> Encoding:
    """Lay out bit ranges for the constrained parameters of ``model``.

    ``order`` overrides the default distance-heuristic parameter order; it
    must be a permutation of the constrained parameters.
    """
    constrained = constrained_params(model)
    if order is None:
        order = order_parameters(model)
    else:
        order = tuple(order)
        if set(order) != set(constrained) or len(order) != len(constrained):
            raise ValueError("order must be a permutation of the constrained parameters")
    sizes = tuple(len(model.params[p].domain) for p in order)
    if mode is EncodingMode.FULL:
        widths = tuple(_ceil_log2(s) for s in sizes)
    else:
        widths = tuple(_ceil_log2(s + 1) for s in sizes)
    offsets = []
    total = 0
    for w in widths:
        offsets.append(total)
        total += w
    return Encoding(mode=mode, order=tuple(order), sizes=sizes, widths=widths,
                    offsets=tuple(offsets), total_bits=total,
                    dropped=frozenset(range(model.n)) - constrained,
                    n_params=model.n)


def encode_full(enc: Encoding, assignment: Sequence[Optional[int]]) -> list[int]:
    """Encode an assignment's constrained parameters as a bit vector.

    Each value is written least-significant-bit first into its parameter's
    bit range.  Unspecified positions become the all-ones codeword, which is
    only representable in WITH_DASH mode.
    """
    if len(assignment) != enc.n_params:
        raise ValueError(f"expected {enc.n_params} values, got {len(assignment)}")
    bits = [0] * enc.total_bits
    for param, size, width, offset in zip(enc.order, enc.sizes, enc.widths, enc.offsets):
        v = assignment[param]
        if v is None:
            if enc.mode is EncodingMode.FULL:
                raise ValueError(f"parameter #{param} is unspecified, which the "
                                 "FULL encoding cannot represent")
            codeword = (1 << width) - 1
        else:
            if not 0 <= v < size:
                raise ValueError(f"value {v} out of range for parameter #{param} "
                                 f"(domain size {size})")
            codeword = v
        for j in range(width):
            bits[offset + j] = (codeword >> j) & 1
    return bits


@dataclass
class CompiledConstraints:
    manager: BddManager
    f: int  # accepts exactly the encodings of valid full test cases
    encoding: Encoding
    model: SutModel


def compile_constraints(model: SutModel, enc: Encoding, mgr: BddManager) -> CompiledConstraints:
    """Build the BDD accepting exactly the valid full test cases."""
    if mgr.var_count != enc.total_bits:
        raise ValueError(f"manager has {mgr.var_count} variables, encoding needs "
                         f"{enc.total_bits}")
    f = TRUE
    for pos in range(len(enc.order)):
        f = mgr.apply(Op.AND, f, _value_le(mgr, enc, pos, enc.sizes[pos] - 1))
    for c in model.constraints:
        f = mgr.apply(Op.AND, f, _translate(mgr, enc, c))
    return CompiledConstraints(manager=mgr, f=f, encoding=enc, model=model)


def _value_le(mgr: BddManager, enc: Encoding, pos: int, const: int) -> int:
    """BDD for "encoded value of the parameter at ``pos`` <= const"."""
    width = enc.widths[pos]
    offset = enc.offsets[pos]
    acc = TRUE
    for j in range(width):  # LSB upward
        var = mgr.mk_var(offset + j)
        if (const >> j) & 1:
            acc = mgr.apply(Op.OR, mgr.negate(var), acc)
        else:
            acc = mgr.apply(Op.AND, mgr.negate(var), acc)
    return acc


def _value_eq(mgr: BddManager, enc: Encoding, pos: int, value: int) -> int:
    width = enc.widths[pos]
    offset = enc.offsets[pos]
    return mgr.make_assignment_cube(
        (offset + j, (value >> j) & 1) for j in range(width))


def _params_eq(mgr: BddManager, enc: Encoding, pos_a: int, pos_b: int) -> int:
    # Compare the overlapping low bits; any excess high bits of the wider
    # parameter must be zero for the values to be equal.
    wa, wb = enc.widths[pos_a], enc.widths[pos_b]
    oa, ob = enc.offsets[pos_a], enc.offsets[pos_b]
    res = TRUE
    for j in range(min(wa, wb)):
        same = mgr.negate(mgr.apply(Op.XOR, mgr.mk_var(oa + j), mgr.mk_var(ob + j)))
        res = mgr.apply(Op.AND, res, same)
    wide_off = oa if wa > wb else ob
    for j in range(min(wa, wb), max(wa, wb)):
        res = mgr.apply(Op.AND, res, mgr.negate(mgr.mk_var(wide_off + j)))
    return res


def _translate(mgr: BddManager, enc: Encoding, expr: ConstraintExpr) -> int:
    if isinstance(expr, Not):
        return mgr.negate(_translate(mgr, enc, expr.child))
    if isinstance(expr, And):
        return mgr.apply(Op.AND, _translate(mgr, enc, expr.left),
                         _translate(mgr, enc, expr.right))
    if isinstance(expr, Or):
        return mgr.apply(Op.OR, _translate(mgr, enc, expr.left),
                         _translate(mgr, enc, expr.right))
    if isinstance(expr, Implies):
        return mgr.apply(Op.IMPLIES, _translate(mgr, enc, expr.left),
                         _translate(mgr, enc, expr.right))
    if isinstance(expr, ParamEqParam):
        return _params_eq(mgr, enc, enc.order.index(expr.left),
                          enc.order.index(expr.right))
    if isinstance(expr, ParamNeqParam):
        return mgr.negate(_params_eq(mgr, enc, enc.order.index(expr.left),
                                     enc.order.index(expr.right)))
    pos = enc.order.index(expr.param)
    if isinstance(expr, ParamEqConst):
        return _value_eq(mgr, enc, pos, expr.value)
    if isinstance(expr, ParamNeqConst):
        return mgr.negate(_value_eq(mgr, enc, pos, expr.value))
    if isinstance(expr, ParamLeConst):
        return _value_le(mgr, enc, pos, expr.value)
    if isinstance(expr, ParamLtConst):
        if expr.value == 0:
            return FALSE
        return _value_le(mgr, enc, pos, expr.value - 1)
    if isinstance(expr, ParamGtConst):
        return mgr.negate(_value_le(mgr, enc, pos, expr.value))
    if isinstance(expr, ParamGeConst):
        if expr.value == 0:
            return TRUE
        return mgr.negate(_value_le(mgr, enc, pos, expr.value - 1))
    raise TypeError(f"unknown constraint node {expr!r}")
