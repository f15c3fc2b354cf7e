"""System-under-test models: parameters with finite domains plus constraints.

Models are loaded from a small line-oriented text format::

    # a comment
    [PARAMETERS]
    Paper size: B4, A4, B5
    Feed tray: Bypass, Tray 1, Tray 2
    Paper type: Thick, Normal, Thin

    [CONSTRAINTS]
    "Paper size" = B4 => "Feed tray" = Bypass
    "Feed tray" = Bypass => !("Paper type" = Thick)

Constraint expressions combine relations with ``!``, ``&&``, ``||`` and
``=>`` (binding in that order; ``=>`` is right associative).  A relation
compares a parameter against one of its values (``=``, ``!=``, ``<``,
``<=``, ``>``, ``>=``) or against another parameter (``=``, ``!=`` only).
Values may be written as labels, quoted labels, or 0-based indices; the
ordering comparators compare 0-based value indices.  Names and labels that
are not plain identifiers must be double quoted.

Internally every parameter value is its 0-based index into the declared
domain.  An assignment is a tuple with one entry per parameter, where
``None`` marks an unspecified ("dash") position; an assignment with no
``None`` entries is a full test case.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

# One value index per parameter; None = unspecified.
Assignment = tuple[Optional[int], ...]


class ModelError(ValueError):
    """Malformed model text or expression, with source position when known."""

    def __init__(self, message: str, line: Optional[int] = None, col: Optional[int] = None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {col}" if col is not None else "")
        super().__init__(message + where)


# ---------------------------------------------------------------------------
# Constraint expression trees
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Not:
    child: "ConstraintExpr"

    def evaluate(self, values: Sequence[Optional[int]]) -> bool:
        return not self.child.evaluate(values)


@dataclass(frozen=True)
class And:
    left: "ConstraintExpr"
    right: "ConstraintExpr"

    def evaluate(self, values: Sequence[Optional[int]]) -> bool:
        return self.left.evaluate(values) and self.right.evaluate(values)


@dataclass(frozen=True)
class Or:
    left: "ConstraintExpr"
    right: "ConstraintExpr"

    def evaluate(self, values: Sequence[Optional[int]]) -> bool:
        return self.left.evaluate(values) or self.right.evaluate(values)


@dataclass(frozen=True)
class Implies:
    left: "ConstraintExpr"
    right: "ConstraintExpr"

    def evaluate(self, values: Sequence[Optional[int]]) -> bool:
        return (not self.left.evaluate(values)) or self.right.evaluate(values)


@dataclass(frozen=True)
class ParamEqConst:
    param: int
    value: int

    def evaluate(self, values: Sequence[Optional[int]]) -> bool:
        return values[self.param] == self.value


@dataclass(frozen=True)
class ParamNeqConst:
    param: int
    value: int

    def evaluate(self, values: Sequence[Optional[int]]) -> bool:
        return values[self.param] != self.value


@dataclass(frozen=True)
class ParamLtConst:
    param: int
    value: int

    def evaluate(self, values: Sequence[Optional[int]]) -> bool:
        return values[self.param] < self.value


@dataclass(frozen=True)
class ParamLeConst:
    param: int
    value: int

    def evaluate(self, values: Sequence[Optional[int]]) -> bool:
        return values[self.param] <= self.value


@dataclass(frozen=True)
class ParamGtConst:
    param: int
    value: int

    def evaluate(self, values: Sequence[Optional[int]]) -> bool:
        return values[self.param] > self.value


@dataclass(frozen=True)
class ParamGeConst:
    param: int
    value: int

    def evaluate(self, values: Sequence[Optional[int]]) -> bool:
        return values[self.param] >= self.value


@dataclass(frozen=True)
class ParamEqParam:
    left: int
    right: int

    def evaluate(self, values: Sequence[Optional[int]]) -> bool:
        return values[self.left] == values[self.right]


@dataclass(frozen=True)
class ParamNeqParam:
    left: int
    right: int

    def evaluate(self, values: Sequence[Optional[int]]) -> bool:
        return values[self.left] != values[self.right]


ConstraintExpr = Union[
    Not, And, Or, Implies,
    ParamEqConst, ParamNeqConst,
    ParamLtConst, ParamLeConst, ParamGtConst, ParamGeConst,
    ParamEqParam, ParamNeqParam,
]

_CONST_RELATIONS = (ParamEqConst, ParamNeqConst, ParamLtConst, ParamLeConst,
                    ParamGtConst, ParamGeConst)
_PARAM_RELATIONS = (ParamEqParam, ParamNeqParam)


def referenced_params(expr: ConstraintExpr) -> Iterator[int]:
    """Yield the parameter indices occurring in ``expr`` (with repeats)."""
    if isinstance(expr, Not):
        yield from referenced_params(expr.child)
    elif isinstance(expr, (And, Or, Implies)):
        yield from referenced_params(expr.left)
        yield from referenced_params(expr.right)
    elif isinstance(expr, _CONST_RELATIONS):
        yield expr.param
    else:
        yield expr.left
        yield expr.right


# ---------------------------------------------------------------------------
# Model types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Parameter:
    name: str
    domain: tuple[str, ...]

    def __post_init__(self):
        if not self.name:
            raise ModelError("parameter name cannot be empty")
        if len(self.domain) < 1:
            raise ModelError(f"parameter {self.name!r} has an empty domain")
        if len(set(self.domain)) != len(self.domain):
            raise ModelError(f"parameter {self.name!r} has duplicate value labels")


@dataclass(frozen=True)
class SutModel:
    params: tuple[Parameter, ...]
    constraints: tuple[ConstraintExpr, ...]

    def __post_init__(self):
        names = [p.name for p in self.params]
        if len(set(names)) != len(names):
            raise ModelError("duplicate parameter names")
        for c in self.constraints:
            self._check_expr(c)

    def _check_expr(self, expr: ConstraintExpr) -> None:
        if isinstance(expr, Not):
            self._check_expr(expr.child)
        elif isinstance(expr, (And, Or, Implies)):
            self._check_expr(expr.left)
            self._check_expr(expr.right)
        elif isinstance(expr, _CONST_RELATIONS):
            if not 0 <= expr.param < len(self.params):
                raise ModelError(f"constraint references parameter #{expr.param}, "
                                 f"model has {len(self.params)}")
            if not 0 <= expr.value < len(self.params[expr.param].domain):
                raise ModelError(f"constraint references value {expr.value} outside the "
                                 f"domain of {self.params[expr.param].name!r}")
        else:
            for p in (expr.left, expr.right):
                if not 0 <= p < len(self.params):
                    raise ModelError(f"constraint references parameter #{p}, "
                                     f"model has {len(self.params)}")

    @property
    def n(self) -> int:
        return len(self.params)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(p.domain) for p in self.params)

    def param_index(self, name: str) -> int:
        for i, p in enumerate(self.params):
            if p.name == name:
                return i
        raise KeyError(name)


def eval_constraints(model: SutModel, t: Sequence[Optional[int]]) -> bool:
    """Decide whether the full test case ``t`` satisfies every constraint."""
    if len(t) != model.n:
        raise ValueError(f"expected {model.n} values, got {len(t)}")
    for i, v in enumerate(t):
        if v is None:
            raise ValueError(f"test case is not full: parameter {model.params[i].name!r} "
                             "is unspecified")
        if not 0 <= v < len(model.params[i].domain):
            raise ValueError(f"value {v} out of range for {model.params[i].name!r}")
    return all(c.evaluate(t) for c in model.constraints)


def check_assignment(model: SutModel, t: Sequence[Optional[int]]) -> None:
    """Raise ValueError unless ``t`` is a well-formed (possibly partial) assignment."""
    if len(t) != model.n:
        raise ValueError(f"expected {model.n} values, got {len(t)}")
    for i, v in enumerate(t):
        if v is not None and not 0 <= v < len(model.params[i].domain):
            raise ValueError(f"value {v} out of range for {model.params[i].name!r}")


# ---------------------------------------------------------------------------
# Expression formatting
# ---------------------------------------------------------------------------

_BARE_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

# Binding strength; higher binds tighter.  Relations count as atoms.
_PREC_IMPLIES, _PREC_OR, _PREC_AND, _PREC_NOT, _PREC_ATOM = range(5)


def _quote(name: str) -> str:
    if _BARE_RE.fullmatch(name):
        return name
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


_REL_SYMBOL = {
    ParamEqConst: "=", ParamNeqConst: "!=",
    ParamLtConst: "<", ParamLeConst: "<=",
    ParamGtConst: ">", ParamGeConst: ">=",
    ParamEqParam: "=", ParamNeqParam: "!=",
}


def format_constraint(expr: ConstraintExpr, model: SutModel) -> str:
    """Render ``expr`` so that re-parsing it yields a structurally equal tree."""

    def rec(e: ConstraintExpr, min_prec: int) -> str:
        if isinstance(e, Not):
            text = "!" + rec(e.child, _PREC_NOT)
            prec = _PREC_NOT
        elif isinstance(e, And):
            text = rec(e.left, _PREC_AND) + " && " + rec(e.right, _PREC_AND + 1)
            prec = _PREC_AND
        elif isinstance(e, Or):
            text = rec(e.left, _PREC_OR) + " || " + rec(e.right, _PREC_OR + 1)
            prec = _PREC_OR
        elif isinstance(e, Implies):
            text = rec(e.left, _PREC_IMPLIES + 1) + " => " + rec(e.right, _PREC_IMPLIES)
            prec = _PREC_IMPLIES
        elif isinstance(e, _PARAM_RELATIONS):
            text = (_quote(model.params[e.left].name) + " " + _REL_SYMBOL[type(e)]
                    + " " + _quote(model.params[e.right].name))
            prec = _PREC_ATOM
        else:
            param = model.params[e.param]
            text = (_quote(param.name) + " " + _REL_SYMBOL[type(e)]
                    + " " + _quote(param.domain[e.value]))
            prec = _PREC_ATOM
        if prec < min_prec:
            return "(" + text + ")"
        return text

    return rec(expr, _PREC_IMPLIES)


# ---------------------------------------------------------------------------
# Tokenizer and parser
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str  # "ident" | "string" | "number" | "op" | "end"
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<string>"(?:[^"\\\n]|\\.)*")
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<number>\d+)
      | (?P<op>=>|!=|<=|>=|&&|\|\||[!=<>()])
    """,
    re.VERBOSE,
)


def _tokenize(text: str, line: int) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ModelError(f"unexpected character {text[pos]!r}", line, pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if kind == "string":
                value = re.sub(r'\\(.)', r'\1', value[1:-1])
            tokens.append(_Token(kind, value, line, pos + 1))
        pos = m.end()
    tokens.append(_Token("end", "", line, len(text) + 1))
    return tokens


_COMPARATORS = {"=", "!=", "<", "<=", ">", ">="}


class _ExprParser:
    """Recursive-descent parser for one constraint expression."""

    def __init__(self, tokens: list[_Token], model_params: Sequence[Parameter]):
        self.tokens = tokens
        self.pos = 0
        self.params = model_params
        self.by_name = {p.name: i for i, p in enumerate(model_params)}

    def parse(self) -> ConstraintExpr:
        expr = self._implies()
        tok = self._peek()
        if tok.kind != "end":
            raise ModelError(f"unexpected {tok.text!r} after expression", tok.line, tok.col)
        return expr

    def _peek(self) -> _Token:
        return self.tokens[self.pos]

    def _next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _accept_op(self, text: str) -> bool:
        tok = self._peek()
        if tok.kind == "op" and tok.text == text:
            self.pos += 1
            return True
        return False

    def _implies(self) -> ConstraintExpr:
        left = self._or()
        if self._accept_op("=>"):
            return Implies(left, self._implies())
        return left

    def _or(self) -> ConstraintExpr:
        expr = self._and()
        while self._accept_op("||"):
            expr = Or(expr, self._and())
        return expr

    def _and(self) -> ConstraintExpr:
        expr = self._unary()
        while self._accept_op("&&"):
            expr = And(expr, self._unary())
        return expr

    def _unary(self) -> ConstraintExpr:
        if self._accept_op("!"):
            return Not(self._unary())
        if self._accept_op("("):
            expr = self._implies()
            tok = self._peek()
            if not self._accept_op(")"):
                raise ModelError("expected ')'", tok.line, tok.col)
            return expr
        return self._relation()

    def _relation(self) -> ConstraintExpr:
        left = self._operand("parameter name")
        param = self.by_name.get(left.text)
        if param is None:
            raise ModelError(f"unknown parameter {left.text!r}", left.line, left.col)
        op = self._peek()
        if op.kind != "op" or op.text not in _COMPARATORS:
            raise ModelError(f"expected a comparison operator, got {op.text!r}",
                             op.line, op.col)
        self._next()
        right = self._operand("value or parameter name")
        return self._resolve(param, op, right)

    def _operand(self, what: str) -> _Token:
        tok = self._peek()
        if tok.kind in ("ident", "string", "number"):
            return self._next()
        raise ModelError(f"expected {what}, got {tok.text or 'end of line'!r}",
                         tok.line, tok.col)

    def _resolve(self, param: int, op: _Token, right: _Token) -> ConstraintExpr:
        domain = self.params[param].domain
        # A label of the left-hand parameter wins over a parameter name,
        # which wins over a bare 0-based index.
        if right.text in domain:
            return self._const_relation(param, domain.index(right.text), op)
        other = self.by_name.get(right.text)
        if other is not None:
            if op.text == "=":
                return ParamEqParam(param, other)
            if op.text == "!=":
                return ParamNeqParam(param, other)
            raise ModelError(f"ordering comparison {op.text!r} is not allowed "
                             "between two parameters", op.line, op.col)
        if right.kind == "number":
            value = int(right.text)
            if not 0 <= value < len(domain):
                raise ModelError(f"value index {value} out of range for "
                                 f"{self.params[param].name!r} "
                                 f"(domain size {len(domain)})", right.line, right.col)
            return self._const_relation(param, value, op)
        raise ModelError(f"unknown value {right.text!r} for parameter "
                         f"{self.params[param].name!r}", right.line, right.col)

    @staticmethod
    def _const_relation(param: int, value: int, op: _Token) -> ConstraintExpr:
        cls = {
            "=": ParamEqConst, "!=": ParamNeqConst,
            "<": ParamLtConst, "<=": ParamLeConst,
            ">": ParamGtConst, ">=": ParamGeConst,
        }[op.text]
        return cls(param, value)


def parse_constraint(text: str, model: SutModel, line: int = 1) -> ConstraintExpr:
    """Parse a single constraint expression against an existing model."""
    return _ExprParser(_tokenize(text, line), model.params).parse()


def _strip_comment(line: str) -> str:
    # '#' starts a comment unless it appears inside a quoted string.
    in_string = False
    i = 0
    while i < len(line):
        c = line[i]
        if in_string:
            if c == "\\":
                i += 1
            elif c == '"':
                in_string = False
        elif c == '"':
            in_string = True
        elif c == "#":
            return line[:i]
        i += 1
    return line


def parse_model(text: str) -> SutModel:
    """Parse model-file text into a SutModel.

    Raises ModelError with a source position for syntax problems, references
    to undeclared parameters or values, empty domains, and duplicate names.
    """
    params: list[Parameter] = []
    names: set[str] = set()
    constraint_lines: list[tuple[int, str]] = []
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        header = re.fullmatch(r"\[(.+)\]", line)
        if header:
            name = header.group(1).strip().upper()
            if name not in ("PARAMETERS", "CONSTRAINTS"):
                raise ModelError(f"unknown section [{header.group(1)}]", lineno)
            section = name
            continue
        if section == "PARAMETERS":
            if ":" not in line:
                raise ModelError("expected 'name: value, value, ...'", lineno)
            name, _, rest = line.partition(":")
            name = name.strip()
            if not name:
                raise ModelError("parameter name cannot be empty", lineno)
            if name in names:
                raise ModelError(f"duplicate parameter {name!r}", lineno)
            labels = tuple(v.strip() for v in rest.split(","))
            if labels == ("",):
                raise ModelError(f"parameter {name!r} has an empty domain", lineno)
            if any(not v for v in labels):
                raise ModelError(f"parameter {name!r} has an empty value label", lineno)
            if len(set(labels)) != len(labels):
                raise ModelError(f"parameter {name!r} has duplicate value labels", lineno)
            params.append(Parameter(name, labels))
            names.add(name)
        elif section == "CONSTRAINTS":
            constraint_lines.append((lineno, line))
        else:
            raise ModelError("content before any [PARAMETERS]/[CONSTRAINTS] section", lineno)

    base = SutModel(tuple(params), ())
    constraints = tuple(
        _ExprParser(_tokenize(src, lineno), base.params).parse()
        for lineno, src in constraint_lines
    )
    return SutModel(base.params, constraints)
