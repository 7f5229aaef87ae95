"""Reading moment-graph files.

A graph file is a JSON document with keys torus_rank, vertices, edges, and
optionally betti and classes.  Class restrictions are small polynomial
expressions in u1..um; chi(a1,...,am) names the Euler class of a character,
which keeps the files meaningful across theories, and v (resp. b) names the
periodicity generator when the theory has one.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .fgl import FormalGroupLaw
from .classifying import character_class
from .gkm import EquivariantClass, GKMEdge, GKMGraph
from .series import TruncatedSeries


class GraphFileError(ValueError):
    """A graph file failed to parse or validate; message carries location."""


@dataclass
class GraphDocument:
    graph: GKMGraph
    betti: list[tuple[int, int]] | None
    classes: dict[str, tuple[int | None, list[str]]]


def _require(cond, msg):
    if not cond:
        raise GraphFileError(msg)


def load_graph_document(path: str) -> GraphDocument:
    try:
        with open(path) as fh:
            raw = fh.read()
    except OSError as exc:
        raise GraphFileError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise GraphFileError(
            f"{path}: parse error at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_graph_document(doc, origin=path)


def parse_graph_document(doc, origin: str = "<graph>") -> GraphDocument:
    _require(isinstance(doc, dict), f"{origin}: top level must be an object")
    _require("torus_rank" in doc, f"{origin}: missing key torus_rank")
    m = doc["torus_rank"]
    _require(isinstance(m, int) and m >= 1, f"{origin}: torus_rank must be a positive integer")
    _require("vertices" in doc, f"{origin}: missing key vertices")
    vertices = doc["vertices"]
    _require(
        isinstance(vertices, list) and all(isinstance(v, str) for v in vertices),
        f"{origin}: vertices must be a list of names",
    )
    index = {name: i for i, name in enumerate(vertices)}
    _require(len(index) == len(vertices), f"{origin}: vertex names are not distinct")
    _require("edges" in doc, f"{origin}: missing key edges")
    edges = []
    for pos, e in enumerate(doc["edges"]):
        where = f"{origin}: edges[{pos}]"
        _require(isinstance(e, dict), f"{where}: must be an object")
        for key in ("tail", "head", "weight"):
            _require(key in e, f"{where}: missing key {key}")
        _require(e["tail"] in index, f"{where}: unknown tail vertex {e['tail']!r}")
        _require(e["head"] in index, f"{where}: unknown head vertex {e['head']!r}")
        w = e["weight"]
        _require(
            isinstance(w, list) and all(isinstance(x, int) for x in w),
            f"{where}: weight must be a list of integers",
        )
        _require(
            len(w) == m,
            f"{where}: weight length {len(w)} != torus_rank {m}",
        )
        edges.append(GKMEdge(index[e["tail"]], index[e["head"]], tuple(w)))
    graph = GKMGraph(m, list(vertices), edges)

    betti = None
    if "betti" in doc:
        betti = []
        for pos, row in enumerate(doc["betti"]):
            where = f"{origin}: betti[{pos}]"
            _require(
                isinstance(row, dict) and "degree" in row and "rank" in row,
                f"{where}: must be an object with degree and rank",
            )
            _require(
                isinstance(row["degree"], int) and isinstance(row["rank"], int),
                f"{where}: degree and rank must be integers",
            )
            betti.append((row["degree"], row["rank"]))

    classes = {}
    if "classes" in doc:
        _require(isinstance(doc["classes"], dict), f"{origin}: classes must be an object")
        for name, spec in doc["classes"].items():
            where = f"{origin}: classes[{name!r}]"
            if isinstance(spec, list):
                degree, exprs = None, spec
            elif isinstance(spec, dict):
                _require("restrictions" in spec, f"{where}: missing key restrictions")
                degree = spec.get("degree")
                _require(
                    degree is None or isinstance(degree, int),
                    f"{where}: degree must be an integer",
                )
                exprs = spec["restrictions"]
            else:
                raise GraphFileError(f"{where}: must be a list or an object")
            _require(
                isinstance(exprs, list) and all(isinstance(x, str) for x in exprs),
                f"{where}: restrictions must be a list of expression strings",
            )
            _require(
                len(exprs) == len(vertices),
                f"{where}: {len(exprs)} restrictions for {len(vertices)} vertices",
            )
            classes[name] = (degree, exprs)
    return GraphDocument(graph, betti, classes)


def build_class(doc: GraphDocument, name: str, fgl: FormalGroupLaw) -> EquivariantClass:
    if name not in doc.classes:
        raise GraphFileError(f"class {name!r} is not defined in the graph file")
    degree, exprs = doc.classes[name]
    m = doc.graph.rank
    parts = []
    for vertex, expr in zip(doc.graph.vertices, exprs):
        series = parse_expression(expr, fgl, m)
        if degree is not None and not series.is_zero():
            got = series.homogeneous_degree()
            if got != degree:
                raise GraphFileError(
                    f"class {name!r} at vertex {vertex}: expression has degree "
                    f"{got}, tagged {degree}"
                )
        parts.append(series)
    return EquivariantClass(tuple(parts), degree)


# ---------------------------------------------------------------------------
# expression parser

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z]\w*)|(?P<op>[-+*^(),]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None or mt.end() == pos:
            raise GraphFileError(f"bad character at position {pos} in {text!r}")
        if mt.group("int") is not None:
            out.append(("int", int(mt.group("int"))))
        elif mt.group("name") is not None:
            out.append(("name", mt.group("name")))
        else:
            out.append(("op", mt.group("op")))
        pos = mt.end()
    out.append(("end", None))
    return out


class _Parser:
    def __init__(self, tokens, fgl: FormalGroupLaw, nvars: int):
        self.tokens = tokens
        self.pos = 0
        self.fgl = fgl
        self.nvars = nvars
        self.theory = fgl.theory

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise GraphFileError(f"expected {op!r}, found {val!r}")

    def parse(self) -> TruncatedSeries:
        out = self.expr()
        if self.peek()[0] != "end":
            raise GraphFileError(f"unexpected trailing token {self.peek()[1]!r}")
        return out

    def expr(self) -> TruncatedSeries:
        negate = False
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            negate = val == "-"
        acc = self.term()
        if negate:
            acc = -acc
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                acc = acc - rhs if val == "-" else acc + rhs
            else:
                return acc

    def term(self) -> TruncatedSeries:
        acc = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> TruncatedSeries:
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            e = self.signed_int()
            if e >= 0:
                return base ** e
            inv = base
            # negative powers only make sense for unit scalars
            ct = base.constant_term()
            if base.coeffs != ({(0,) * base.nvars: ct} if not ct.is_zero() else {}):
                raise GraphFileError("negative exponents need a scalar base")
            scalar = ct.inverse()
            out = TruncatedSeries.constant(scalar, base.nvars)
            return out ** (-e) if -e > 1 else out
        return base

    def signed_int(self) -> int:
        kind, val = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
            kind, val = self.peek()
        if kind != "int":
            raise GraphFileError("expected an integer exponent")
        self.take()
        return sign * val

    def atom(self) -> TruncatedSeries:
        kind, val = self.take()
        if kind == "int":
            return TruncatedSeries.constant(self.theory.scalar(val), self.nvars)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "name":
            if val == "chi":
                self.expect_op("(")
                weight = [self.signed_int()]
                while self.peek() == ("op", ","):
                    self.take()
                    weight.append(self.signed_int())
                self.expect_op(")")
                if len(weight) != self.nvars:
                    raise GraphFileError(
                        f"chi takes {self.nvars} components, found {len(weight)}"
                    )
                return character_class(self.fgl, tuple(weight), self.nvars)
            mu = re.fullmatch(r"u(\d+)", val)
            if mu:
                i = int(mu.group(1))
                if not 1 <= i <= self.nvars:
                    raise GraphFileError(f"variable {val} out of range 1..{self.nvars}")
                return TruncatedSeries.variable(self.theory, self.nvars, i - 1)
            unit = self.theory.unit_name
            if val == unit or (val == "v" and unit and unit.startswith("v")):
                return TruncatedSeries.constant(self.theory.periodicity, self.nvars)
            if val in ("v", "b"):
                raise GraphFileError(
                    f"theory {self.theory.kind} has no periodicity generator {val!r}"
                )
            raise GraphFileError(f"unknown symbol {val!r}")
        raise GraphFileError(f"unexpected token {val!r}")


def parse_expression(text: str, fgl: FormalGroupLaw, nvars: int) -> TruncatedSeries:
    return _Parser(_tokenize(text), fgl, nvars).parse()
