"""Type-checked serialization over explicit value graphs.

Values serialize via an intermediate graph of wire nodes: immediates,
tagged blocks of node references, byte strings, floats, and named
extensible constructors. The graph layer makes sharing and cycles
first class: shared subvalues map to shared nodes, and a node may
reference itself.

Deserialization never trusts its input. Decoded graphs are checked
against the expected type by walking nodes with type patterns,
generalizing a node's recorded pattern by anti-unification whenever it
is reached again at a different type. A node is re-examined only when
its pattern strictly generalized, which bounds work per node by the
size of the first pattern it was seen at, so checking terminates even
on cyclic graphs presenting a node at ever-changing types.
"""

from __future__ import annotations

import struct
from collections import Counter
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Any, Callable, Optional

from . import desc as d
from .errors import (
    CyclicValue,
    DepthLimitExceeded,
    Incompatible,
    MalformedBytes,
    MalformedValue,
    NoDescriptor,
    ReflectixError,
    RepresentationRejected,
)
from .typerep import ANY, TypePattern, TypeRep, anti_unify, pattern_size, render

# ---------------------------------------------------------------------------
# Graph model


@dataclass(frozen=True)
class Imm:
    """A 64-bit signed immediate."""

    value: int


@dataclass(frozen=True)
class Block:
    """A constructor application: tag plus node references."""

    tag: int
    fields: tuple[int, ...]


@dataclass(frozen=True)
class Bytes:
    """An uninterpreted byte string."""

    data: bytes


@dataclass(frozen=True)
class Float:
    """A 64-bit IEEE-754 value."""

    value: float


@dataclass(frozen=True)
class ExtCon:
    """An extensible constructor by name, plus node references."""

    name: str
    fields: tuple[int, ...]


ValueNode = Any  # Imm | Block | Bytes | Float | ExtCon


@dataclass
class ValueGraph:
    """Wire nodes indexed densely from zero, with a root index."""

    nodes: list
    root: int


def node_refs(node: ValueNode) -> tuple[int, ...]:
    if isinstance(node, (Block, ExtCon)):
        return node.fields
    return ()


def node_kind(node: ValueNode) -> str:
    return type(node).__name__


# ---------------------------------------------------------------------------
# Wire format
#
# magic "GVG1", u32 root, u32 node count, then each node as a kind byte
# and payload. All integers little-endian, no padding:
#   0 Imm    i64
#   1 Block  u32 tag, u32 arity, arity x u32 refs
#   2 Bytes  u32 length, raw bytes
#   3 Float  8-byte IEEE-754
#   4 ExtCon u16 name length, UTF-8 name, u32 arity, arity x u32 refs

MAGIC = b"GVG1"
_I64_MIN = -(2**63)
_I64_MAX = 2**63 - 1
_U32_MAX = 2**32 - 1


def encode_graph(g: ValueGraph) -> bytes:
    """Serialize a graph; the layout is canonical for a given graph."""
    n = len(g.nodes)
    if not 0 <= g.root < n:
        raise MalformedValue(f"root {g.root} outside graph of {n} nodes")
    out = bytearray(MAGIC)
    out += struct.pack("<II", g.root, n)
    for node in g.nodes:
        if isinstance(node, Imm):
            if not _I64_MIN <= node.value <= _I64_MAX:
                raise MalformedValue(f"immediate {node.value} exceeds 64 bits")
            out += b"\x00" + struct.pack("<q", node.value)
        elif isinstance(node, Block):
            _check_refs(node.fields, n)
            if node.tag > _U32_MAX:
                raise MalformedValue(f"block tag {node.tag} exceeds 32 bits")
            out += b"\x01" + struct.pack("<II", node.tag, len(node.fields))
            out += struct.pack(f"<{len(node.fields)}I", *node.fields)
        elif isinstance(node, Bytes):
            if len(node.data) > _U32_MAX:
                raise MalformedValue("byte string exceeds 32-bit length")
            out += b"\x02" + struct.pack("<I", len(node.data)) + node.data
        elif isinstance(node, Float):
            out += b"\x03" + struct.pack("<d", node.value)
        elif isinstance(node, ExtCon):
            _check_refs(node.fields, n)
            name = node.name.encode("utf-8")
            if len(name) > 0xFFFF:
                raise MalformedValue("constructor name exceeds 16-bit length")
            out += b"\x04" + struct.pack("<H", len(name)) + name
            out += struct.pack("<I", len(node.fields))
            out += struct.pack(f"<{len(node.fields)}I", *node.fields)
        else:
            raise MalformedValue(f"not a graph node: {node!r}")
    return bytes(out)


def _check_refs(refs: tuple[int, ...], n: int) -> None:
    for r in refs:
        if not 0 <= r < n:
            raise MalformedValue(f"node reference {r} outside graph of {n} nodes")


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def fail(self, reason: str) -> MalformedBytes:
        return MalformedBytes(self.pos, reason)

    def take(self, n: int, what: str) -> bytes:
        if self.pos + n > len(self.data):
            raise self.fail(f"truncated {what}")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def u8(self, what: str) -> int:
        return self.take(1, what)[0]

    def u16(self, what: str) -> int:
        return struct.unpack("<H", self.take(2, what))[0]

    def u32(self, what: str) -> int:
        return struct.unpack("<I", self.take(4, what))[0]

    def i64(self, what: str) -> int:
        return struct.unpack("<q", self.take(8, what))[0]

    def f64(self, what: str) -> float:
        return struct.unpack("<d", self.take(8, what))[0]


def decode_graph(data: bytes) -> ValueGraph:
    """Parse wire bytes into a graph, validating every structural claim.

    Magic, node kinds, lengths, reference ranges, and the root index
    are all checked; any violation raises MalformedBytes carrying the
    byte offset. Trailing bytes are rejected so that re-encoding a
    decoded graph reproduces the input exactly.
    """
    r = _Reader(data)
    if r.take(4, "magic") != MAGIC:
        r.pos = 0
        raise r.fail("bad magic")
    root = r.u32("root index")
    count = r.u32("node count")
    if count == 0:
        raise r.fail("empty graph")
    # Every node occupies at least one byte; reject absurd counts
    # before allocating anything.
    if count > len(data) - r.pos:
        raise r.fail("node count exceeds payload size")
    if root >= count:
        raise r.fail(f"root {root} outside graph of {count} nodes")
    nodes: list = []
    for _ in range(count):
        kind = r.u8("node kind")
        if kind == 0:
            nodes.append(Imm(r.i64("immediate")))
        elif kind == 1:
            tag = r.u32("block tag")
            arity = r.u32("block arity")
            if arity * 4 > len(data) - r.pos:
                raise r.fail("block arity exceeds payload size")
            refs = struct.unpack(f"<{arity}I", r.take(arity * 4, "block fields"))
            nodes.append(Block(tag, refs))
        elif kind == 2:
            length = r.u32("byte length")
            nodes.append(Bytes(r.take(length, "byte string")))
        elif kind == 3:
            nodes.append(Float(r.f64("float")))
        elif kind == 4:
            name_len = r.u16("name length")
            raw = r.take(name_len, "constructor name")
            try:
                name = raw.decode("utf-8")
            except UnicodeDecodeError:
                raise r.fail("constructor name is not UTF-8") from None
            arity = r.u32("constructor arity")
            if arity * 4 > len(data) - r.pos:
                raise r.fail("constructor arity exceeds payload size")
            refs = struct.unpack(
                f"<{arity}I", r.take(arity * 4, "constructor fields")
            )
            nodes.append(ExtCon(name, refs))
        else:
            r.pos -= 1
            raise r.fail(f"unknown node kind {kind}")
    if r.pos != len(data):
        raise r.fail("trailing bytes after graph")
    for node in nodes:
        for ref in node_refs(node):
            if ref >= count:
                raise MalformedBytes(
                    r.pos, f"node reference {ref} outside graph of {count} nodes"
                )
    return ValueGraph(nodes, root)


# ---------------------------------------------------------------------------
# Building graphs from values


class _Builder:
    """Walks a value by its descriptors, emitting graph nodes.

    Sharing is preserved by memoizing on object identity and type, and
    the slot for a value is reserved before its fields are walked, so
    cyclic values (built by mutation) become cyclic graphs instead of
    infinite recursion.
    """

    def __init__(self) -> None:
        self.nodes: list = []
        self._memo: dict[tuple[int, TypeRep], int] = {}
        self._pins: list = []  # keep ids alive while building

    def build(self, t: TypeRep, v: Any, path: str) -> int:
        dd = d.view_desc(t)
        if isinstance(dd, d.SynonymDesc):
            return self.build(dd.target, v, path)
        if isinstance(dd, (d.AbstractDesc, d.OpaqueDesc)):
            rep = d.try_repr(t)
            if rep is None:
                raise NoDescriptor(
                    f"at {path}: {render(t)} has no public representation"
                )
            key = (id(v), t)
            hit = self._memo.get(key)
            if hit is not None:
                return hit
            self._pins.append(v)
            idx = self.build(rep.repr_ty, rep.to_repr(v), path)
            self._memo[key] = idx
            return idx
        if dd is d.NO_DESC:
            raise NoDescriptor(f"at {path}: no descriptor for {render(t)}")
        key = (id(v), t)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        self._pins.append(v)
        idx = len(self.nodes)
        self.nodes.append(None)
        self._memo[key] = idx
        self.nodes[idx] = self._node_for(dd, t, v, path, idx)
        return idx

    def _node_for(
        self, dd: d.Desc, t: TypeRep, v: Any, path: str, idx: int
    ) -> ValueNode:
        if isinstance(dd, d.ScalarDesc):
            if dd.kind == "int":
                if not isinstance(v, int) or isinstance(v, bool):
                    raise MalformedValue(f"at {path}: not an Int value: {v!r}")
                if not _I64_MIN <= v <= _I64_MAX:
                    raise Incompatible(path, "64-bit integer", f"integer {v}")
                return Imm(v)
            if dd.kind == "char":
                if not isinstance(v, str) or len(v) != 1:
                    raise MalformedValue(f"at {path}: not a Char value: {v!r}")
                return Imm(ord(v))
            if dd.kind == "float":
                if not isinstance(v, float):
                    raise MalformedValue(f"at {path}: not a Float value: {v!r}")
                return Float(v)
            raise MalformedValue(f"at {path}: unknown scalar kind {dd.kind}")
        if isinstance(dd, d.ArrayLikeDesc):
            if dd.bytes_like:
                if not isinstance(v, str):
                    raise MalformedValue(f"at {path}: not a text value: {v!r}")
                return Bytes(v.encode("utf-8"))
            n = dd.ops.length(v)
            refs = tuple(
                self.build(dd.elem, dd.ops.get(v, i), f"{path}.{i}")
                for i in range(n)
            )
            return Block(0, refs)
        if isinstance(dd, d.VariantDesc):
            ca = d.conap(dd, v)
            kind, tag = dd.classify(v)
            if kind == "cst":
                return Imm(tag)
            flat = ca.con.shape.flat(ca.args)
            refs = tuple(
                self.build(f.ty, fv, f"{path}.{i}")
                for i, (f, fv) in enumerate(zip(ca.con.fields, flat))
            )
            return Block(tag, refs)
        if isinstance(dd, (d.RecordDesc, d.ProductDesc)):
            shape = dd.shape
            flat = shape.flat(dd.iso.bck(v))
            refs = tuple(
                self.build(r, fv, f"{path}.{i}")
                for i, (r, fv) in enumerate(zip(shape.reps, flat))
            )
            return Block(0, refs)
        if isinstance(dd, d.ExtensibleDesc):
            ca = d.ext_conap(dd, v)
            flat = ca.con.shape.flat(ca.args)
            refs = tuple(
                self.build(f.ty, fv, f"{path}.{i}")
                for i, (f, fv) in enumerate(zip(ca.con.fields, flat))
            )
            return ExtCon(ca.con.name, refs)
        raise NoDescriptor(f"at {path}: no descriptor for {render(t)}")


def build_graph(t: TypeRep, v: Any) -> ValueGraph:
    """The value graph of v at type t, sharing preserved."""
    b = _Builder()
    try:
        root = b.build(t, v, "root")
    except RecursionError:
        raise DepthLimitExceeded("value nests too deeply to serialize") from None
    return ValueGraph(b.nodes, root)


# ---------------------------------------------------------------------------
# Compatibility checking and conversion


class Direction(Enum):
    TO = "to"
    FROM = "from"


@dataclass
class ConvertState:
    """Bookkeeping for one checking or converting walk."""

    graph: ValueGraph
    direction: Optional[Direction] = None
    out_nodes: Optional[list] = None
    visited: dict = dc_field(default_factory=dict)
    memo: dict = dc_field(default_factory=dict)
    pending: dict = dc_field(default_factory=dict)
    descents: Counter = dc_field(default_factory=Counter)
    updates: Counter = dc_field(default_factory=Counter)
    first_size: dict = dc_field(default_factory=dict)

    @property
    def emitting(self) -> bool:
        return self.out_nodes is not None


def _resolve_synonyms(p: TypeRep) -> TypeRep:
    for _ in range(64):
        dd = d.view_desc(p)
        if isinstance(dd, d.SynonymDesc):
            p = dd.target
            continue
        return p
    raise NoDescriptor(f"synonym chain too long at {render(p)}")


def _normalize_pattern(p: TypePattern) -> TypePattern:
    """Resolve synonyms and public representations, for pattern maps."""
    if p is ANY:
        return ANY
    for _ in range(64):
        p = _resolve_synonyms(p)
        dd = d.view_desc(p)
        if isinstance(dd, (d.AbstractDesc, d.OpaqueDesc)):
            rep = d.try_repr(p)
            if rep is not None:
                p = rep.repr_ty
                continue
        return p
    raise NoDescriptor(f"representation chain too long at {render(p)}")


def _ensure(st: ConvertState, n: int, p: TypePattern, path: str) -> Optional[int]:
    if p is ANY:
        return _copy_verbatim(st, n) if st.emitting else None
    key = (n, p)
    if key in st.memo:
        return st.memo[key]
    if key in st.pending:
        return st.pending[key]
    p2 = _resolve_synonyms(p)
    dd = d.view_desc(p2)
    if isinstance(dd, (d.AbstractDesc, d.OpaqueDesc)):
        rep = d.try_repr(p2)
        if rep is None:
            raise NoDescriptor(
                f"at {path}: {render(p2)} has no public representation"
            )
        out = _ensure(st, n, rep.repr_ty, path)
        if st.emitting and st.direction is Direction.FROM:
            # Rebuild the representation value and let the abstract
            # type's validator pass judgement on it.
            value = materialize(
                rep.repr_ty, ValueGraph(st.out_nodes, out), out, path=path
            )
            if rep.from_repr(value) is None:
                raise RepresentationRejected(path)
        st.memo[key] = out
        return out
    if p2 is not p:
        out = _ensure(st, n, p2, path)
        st.memo[key] = out
        return out

    q = st.visited.get(n)
    if q is not None:
        g = anti_unify(q, p)
        if g == q:
            if st.emitting:
                kq = (n, q)
                if kq in st.memo:
                    out = st.memo[kq]
                elif kq in st.pending:
                    out = st.pending[kq]
                else:  # pragma: no cover - every visited entry has a slot
                    out = _examine(st, n, q, path)
                st.memo[key] = out
                return out
            return None
        st.visited[n] = g
        st.updates[n] += 1
        if g is ANY:
            # The join of the patterns this node is used at constrains
            # nothing; any well-formed node passes.
            return _copy_verbatim(st, n) if st.emitting else None
        return _examine(st, n, g, path)
    st.visited[n] = p
    st.first_size[n] = pattern_size(p)
    return _examine(st, n, p, path)


def _examine(st: ConvertState, n: int, p: TypePattern, path: str) -> Optional[int]:
    """Structurally check node n against concrete pattern p."""
    st.descents[n] += 1
    out_idx: Optional[int] = None
    if st.emitting:
        out_idx = len(st.out_nodes)
        st.out_nodes.append(None)
        st.pending[(n, p)] = out_idx
    refs: list[int] = []

    def on_field(m: int, fp: TypePattern, fpath: str) -> None:
        refs.append(_ensure(st, n=m, p=fp, path=fpath))

    template = _match_node(st.graph, n, p, path, on_field)
    if st.emitting:
        st.out_nodes[out_idx] = _fill_template(template, refs)
        del st.pending[(n, p)]
        st.memo[(n, p)] = out_idx
    return out_idx


def _fill_template(template: tuple, refs: list) -> ValueNode:
    kind = template[0]
    if kind == "imm":
        return Imm(template[1])
    if kind == "float":
        return Float(template[1])
    if kind == "bytes":
        return Bytes(template[1])
    if kind == "block":
        return Block(template[1], tuple(refs))
    if kind == "extcon":
        return ExtCon(template[1], tuple(refs))
    raise MalformedValue(f"unknown template {template!r}")  # pragma: no cover


def _copy_verbatim(st: ConvertState, n: int) -> int:
    """Copy the subgraph at n unchanged, preserving sharing and cycles."""
    key = (n, ANY)
    if key in st.memo:
        return st.memo[key]
    if key in st.pending:
        return st.pending[key]
    out_idx = len(st.out_nodes)
    st.out_nodes.append(None)
    st.pending[key] = out_idx
    node = st.graph.nodes[n]
    if isinstance(node, (Imm, Bytes, Float)):
        st.out_nodes[out_idx] = node
    elif isinstance(node, Block):
        st.out_nodes[out_idx] = Block(
            node.tag, tuple(_copy_verbatim(st, m) for m in node.fields)
        )
    else:
        st.out_nodes[out_idx] = ExtCon(
            node.name, tuple(_copy_verbatim(st, m) for m in node.fields)
        )
    del st.pending[key]
    st.memo[key] = out_idx
    return out_idx


def _match_node(
    graph: ValueGraph,
    n: int,
    p: TypeRep,
    path: str,
    on_field: Callable[[int, TypePattern, str], None],
) -> tuple:
    """Check one node against one concrete pattern.

    Field constraints are reported through on_field rather than by
    direct recursion, so the same rules drive the recursive checker and
    the topological one. Returns a template describing the node for
    conversion output.
    """
    node = graph.nodes[n]
    found = node_kind(node)
    dd = d.view_desc(p)
    if dd is d.NO_DESC:
        raise NoDescriptor(f"at {path}: no descriptor for {render(p)}")
    if isinstance(dd, d.ScalarDesc):
        if dd.kind in ("int", "char"):
            if not isinstance(node, Imm):
                raise Incompatible(path, render(p), found)
            if dd.kind == "char" and not 0 <= node.value <= 0x10FFFF:
                raise Incompatible(path, "character code", f"Imm {node.value}")
            return ("imm", node.value)
        if not isinstance(node, Float):
            raise Incompatible(path, render(p), found)
        return ("float", node.value)
    if isinstance(dd, d.ArrayLikeDesc):
        if dd.bytes_like:
            if not isinstance(node, Bytes):
                raise Incompatible(path, render(p), found)
            return ("bytes", node.data)
        if not isinstance(node, Block) or node.tag != 0:
            raise Incompatible(path, render(p), found)
        for i, m in enumerate(node.fields):
            on_field(m, dd.elem, f"{path}.{i}")
        return ("block", 0)
    if isinstance(dd, d.VariantDesc):
        if isinstance(node, Imm):
            if not 0 <= node.value < dd.cst_len:
                raise Incompatible(
                    path,
                    f"{render(p)} constant tag below {dd.cst_len}",
                    f"Imm {node.value}",
                )
            return ("imm", node.value)
        if isinstance(node, Block):
            if node.tag >= dd.ncst_len:
                raise Incompatible(
                    path,
                    f"{render(p)} block tag below {dd.ncst_len}",
                    f"Block tag {node.tag}",
                )
            con = dd.ncst_get(node.tag)
            if len(node.fields) != con.arity:
                raise Incompatible(
                    path,
                    f"{con.name} with {con.arity} fields",
                    f"Block arity {len(node.fields)}",
                )
            for i, (m, f) in enumerate(zip(node.fields, con.fields)):
                on_field(m, f.ty, f"{path}.{i}")
            return ("block", node.tag)
        raise Incompatible(path, render(p), found)
    if isinstance(dd, (d.RecordDesc, d.ProductDesc)):
        shape = dd.shape
        if not isinstance(node, Block) or node.tag != 0:
            raise Incompatible(path, render(p), found)
        if len(node.fields) != len(shape.reps):
            raise Incompatible(
                path,
                f"{render(p)} with {len(shape.reps)} fields",
                f"Block arity {len(node.fields)}",
            )
        for i, (m, r) in enumerate(zip(node.fields, shape.reps)):
            on_field(m, r, f"{path}.{i}")
        return ("block", 0)
    if isinstance(dd, d.ExtensibleDesc):
        if not isinstance(node, ExtCon):
            raise Incompatible(path, render(p), found)
        con = d.ext_find(dd, node.name)
        if len(node.fields) != con.arity:
            raise Incompatible(
                path,
                f"{con.name} with {con.arity} fields",
                f"constructor arity {len(node.fields)}",
            )
        for i, (m, f) in enumerate(zip(node.fields, con.fields)):
            on_field(m, f.ty, f"{path}.{i}")
        return ("extcon", node.name)
    raise NoDescriptor(f"at {path}: no descriptor for {render(p)}")


def check_compat(t: TypeRep, g: ValueGraph, root: Optional[int] = None) -> ConvertState:
    """Check that the subgraph at root fits type t.

    Raises Incompatible, NoDescriptor, or UnknownConstructor on
    failure; returns the walk state, whose counters record descents
    and pattern updates per node.
    """
    st = ConvertState(graph=g)
    try:
        _ensure(st, g.root if root is None else root, t, "root")
    except RecursionError:
        raise DepthLimitExceeded("graph nests too deeply to check") from None
    return st


def convert(
    direction: Direction, t: TypeRep, g: ValueGraph, root: Optional[int] = None
) -> tuple[ValueGraph, int, ConvertState]:
    """Check and rebuild the subgraph at root against type t.

    The output graph mirrors the input's sharing; cycles come out as
    references to slots reserved before their fields were walked. In
    the From direction every abstract value's representation is
    validated with from_repr, raising RepresentationRejected.
    """
    st = ConvertState(graph=g, direction=direction, out_nodes=[])
    try:
        out_root = _ensure(st, g.root if root is None else root, t, "root")
    except RecursionError:
        raise DepthLimitExceeded("graph nests too deeply to convert") from None
    return ValueGraph(st.out_nodes, out_root), out_root, st


# ---------------------------------------------------------------------------
# Materializing values from graphs

_IN_PROGRESS = object()


class _Materializer:
    def __init__(self, g: ValueGraph):
        self.graph = g
        self.memo: dict[tuple[int, TypeRep], Any] = {}

    def go(self, p: TypeRep, n: int, path: str) -> Any:
        key = (n, p)
        if key in self.memo:
            v = self.memo[key]
            if v is _IN_PROGRESS:
                raise CyclicValue(f"at {path}: cyclic graph has no value form")
            return v
        self.memo[key] = _IN_PROGRESS
        v = self._node(p, n, path)
        self.memo[key] = v
        return v

    def _node(self, p: TypeRep, n: int, path: str) -> Any:
        # Resolution mirrors the checker: synonyms are transparent,
        # abstract types rebuild their representation and validate it.
        p2 = _resolve_synonyms(p)
        dd = d.view_desc(p2)
        if isinstance(dd, (d.AbstractDesc, d.OpaqueDesc)):
            rep = d.try_repr(p2)
            if rep is None:
                raise NoDescriptor(
                    f"at {path}: {render(p2)} has no public representation"
                )
            raw = self.go(rep.repr_ty, n, path)
            v = rep.from_repr(raw)
            if v is None:
                raise RepresentationRejected(path)
            return v
        node = self.graph.nodes[n]
        if node is None:
            # A conversion in progress reserved this slot; the cycle it
            # belongs to has no finished value to validate against.
            raise CyclicValue(f"at {path}: cyclic graph has no value form")
        found = node_kind(node)
        if isinstance(dd, d.ScalarDesc):
            if dd.kind == "int":
                if not isinstance(node, Imm):
                    raise Incompatible(path, render(p2), found)
                return node.value
            if dd.kind == "char":
                if not isinstance(node, Imm) or not 0 <= node.value <= 0x10FFFF:
                    raise Incompatible(path, render(p2), found)
                return chr(node.value)
            if not isinstance(node, Float):
                raise Incompatible(path, render(p2), found)
            return node.value
        if isinstance(dd, d.ArrayLikeDesc):
            if dd.bytes_like:
                if not isinstance(node, Bytes):
                    raise Incompatible(path, render(p2), found)
                try:
                    return node.data.decode("utf-8")
                except UnicodeDecodeError:
                    raise Incompatible(
                        path, "UTF-8 text", "undecodable bytes"
                    ) from None
            if not isinstance(node, Block) or node.tag != 0:
                raise Incompatible(path, render(p2), found)
            fields = node.fields
            elems = [
                self.go(dd.elem, m, f"{path}.{i}") for i, m in enumerate(fields)
            ]
            if len(elems) > dd.ops.max_length:
                raise Incompatible(
                    path,
                    f"at most {dd.ops.max_length} elements",
                    f"{len(elems)} elements",
                )
            return dd.ops.init(len(elems), lambda i: elems[i])
        if isinstance(dd, d.VariantDesc):
            if isinstance(node, Imm):
                if not 0 <= node.value < dd.cst_len:
                    raise Incompatible(
                        path, render(p2), f"Imm {node.value}"
                    )
                return dd.cst_get(node.value).embed(())
            if isinstance(node, Block) and node.tag < dd.ncst_len:
                con = dd.ncst_get(node.tag)
                if len(node.fields) != con.arity:
                    raise Incompatible(
                        path,
                        f"{con.name} with {con.arity} fields",
                        f"Block arity {len(node.fields)}",
                    )
                flat = [
                    self.go(f.ty, m, f"{path}.{i}")
                    for i, (m, f) in enumerate(zip(node.fields, con.fields))
                ]
                return con.embed(con.shape.nest(flat))
            raise Incompatible(path, render(p2), found)
        if isinstance(dd, (d.RecordDesc, d.ProductDesc)):
            shape = dd.shape
            if not isinstance(node, Block) or node.tag != 0:
                raise Incompatible(path, render(p2), found)
            if len(node.fields) != len(shape.reps):
                raise Incompatible(
                    path,
                    f"{render(p2)} with {len(shape.reps)} fields",
                    f"Block arity {len(node.fields)}",
                )
            flat = [
                self.go(r, m, f"{path}.{i}")
                for i, (m, r) in enumerate(zip(node.fields, shape.reps))
            ]
            return dd.iso.fwd(shape.nest(flat))
        if isinstance(dd, d.ExtensibleDesc):
            if not isinstance(node, ExtCon):
                raise Incompatible(path, render(p2), found)
            con = d.ext_find(dd, node.name)
            if len(node.fields) != con.arity:
                raise Incompatible(
                    path,
                    f"{con.name} with {con.arity} fields",
                    f"constructor arity {len(node.fields)}",
                )
            flat = [
                self.go(f.ty, m, f"{path}.{i}")
                for i, (m, f) in enumerate(zip(node.fields, con.fields))
            ]
            return con.embed(con.shape.nest(flat))
        raise NoDescriptor(f"at {path}: no descriptor for {render(p2)}")


def materialize(
    t: TypeRep, g: ValueGraph, root: Optional[int] = None, path: str = "root"
) -> Any:
    """Rebuild the library value the subgraph at root denotes.

    Shared nodes come back as shared objects. Cyclic graphs raise
    CyclicValue: the value layer is immutable and cannot tie knots.
    """
    m = _Materializer(g)
    try:
        return m.go(t, g.root if root is None else root, path)
    except RecursionError:
        raise DepthLimitExceeded("graph nests too deeply to materialize") from None


# ---------------------------------------------------------------------------
# End-to-end serialization


def serialize(t: TypeRep, v: Any) -> bytes:
    """Encode v at type t; the graph is checked before encoding."""
    g = build_graph(t, v)
    check_compat(t, g)
    return encode_graph(g)


def deserialize(t: TypeRep, data: bytes) -> Any:
    """Decode, check against t, and rebuild a value.

    Malformed bytes raise MalformedBytes with an offset; structurally
    valid graphs of the wrong shape raise Incompatible with a path; a
    representation an abstract type refuses raises
    RepresentationRejected. No input crashes the process.
    """
    g = decode_graph(data)
    out, out_root, _ = convert(Direction.FROM, t, g)
    return materialize(t, out, out_root)


# ---------------------------------------------------------------------------
# Alternative checking strategies
#
# The recursive checker above visits nodes in value order, revisiting a
# node whenever its pattern generalizes. When the graph is acyclic it
# can instead be checked in topological order, parents first, so every
# node is examined exactly once at its final anti-unified pattern.


def _reachable(g: ValueGraph, root: int) -> list[int]:
    seen = {root}
    stack = [root]
    order = []
    while stack:
        n = stack.pop()
        order.append(n)
        for m in node_refs(g.nodes[n]):
            if m not in seen:
                seen.add(m)
                stack.append(m)
    return order


def _topo_order(g: ValueGraph, root: int) -> list[int]:
    """Parents-first order of the subgraph at root; cycles refused."""
    reach = _reachable(g, root)
    indeg: Counter = Counter()
    for n in reach:
        for m in node_refs(g.nodes[n]):
            indeg[m] += 1
    queue = [n for n in reach if indeg[n] == 0]
    order = []
    while queue:
        n = queue.pop()
        order.append(n)
        for m in node_refs(g.nodes[n]):
            indeg[m] -= 1
            if indeg[m] == 0:
                queue.append(m)
    if len(order) != len(reach):
        raise CyclicValue("topological checking requires an acyclic graph")
    return order


def check_compat_topo(
    t: TypeRep, g: ValueGraph, root: Optional[int] = None
) -> Counter:
    """Check an acyclic graph parents-first, one examination per node.

    Patterns flow from parents to children and are anti-unified before
    a child is examined, so no node is ever re-checked. Returns the
    per-node visit counts (all ones, by construction). May accept
    graphs the value-order checker rejects: when one parent constrains
    a shared node more tightly than another, value order can fail on
    the tight pattern before the generalizing parent is reached, while
    this order always examines the node at the join.
    """
    start = g.root if root is None else root
    order = _topo_order(g, start)
    patterns: dict[int, TypePattern] = {start: _normalize_pattern(t)}
    visits: Counter = Counter()

    def collect(m: int, fp: TypePattern, _fpath: str) -> None:
        fp = _normalize_pattern(fp)
        old = patterns.get(m)
        patterns[m] = fp if old is None else anti_unify(old, fp)

    for n in order:
        p = patterns.get(n, ANY)
        visits[n] += 1
        if p is ANY:
            continue
        _match_node(g, n, p, f"node {n}", collect)
    return visits


def check_compat_scc(
    t: TypeRep, g: ValueGraph, root: Optional[int] = None
) -> ConvertState:
    """Check any graph with patterns pre-joined per strongly connected
    component, so each node is examined once, at its final pattern.

    A first pass propagates patterns through the condensation of the
    graph (tolerating mismatches, which the second pass will report)
    until each node's anti-unifier stabilizes. The second pass runs the
    structural rules once per node at that pattern. Verdicts agree with
    check_compat on graphs built from values.
    """
    start = g.root if root is None else root
    sccs = _tarjan(g, start)
    comp_of: dict[int, int] = {}
    for ci, comp in enumerate(sccs):
        for n in comp:
            comp_of[n] = ci

    patterns: dict[int, TypePattern] = {}

    def join(m: int, fp: TypePattern) -> bool:
        fp = _normalize_pattern(fp)
        old = patterns.get(m)
        new = fp if old is None else anti_unify(old, fp)
        if new != old:
            patterns[m] = new
            return True
        return False

    join(start, t)
    # Tarjan emits components children-first; walk them parents-first.
    for comp in reversed(sccs):
        work = [n for n in comp if n in patterns]
        while work:
            n = work.pop()
            p = patterns.get(n, ANY)
            if p is ANY:
                continue
            sends: list[tuple[int, TypePattern]] = []

            def collect(m: int, fp: TypePattern, _fpath: str) -> None:
                sends.append((m, fp))

            try:
                _match_node(g, n, p, f"node {n}", collect)
            except ReflectixError:
                continue  # pass two reports it
            for m, fp in sends:
                if join(m, fp) and comp_of.get(m) == comp_of[n]:
                    work.append(m)

    st = ConvertState(graph=g)
    st.visited = dict(patterns)
    examined = set()

    def check_field(m: int, fp: TypePattern, fpath: str) -> None:
        # Pass one already joined this pattern into the node's own
        # entry; nothing to do here.
        return None

    try:
        for n in _reachable(g, start):
            p = patterns.get(n, ANY)
            if p is ANY or n in examined:
                continue
            examined.add(n)
            st.descents[n] += 1
            _match_node(g, n, p, f"node {n}", check_field)
    except RecursionError:
        raise DepthLimitExceeded("graph nests too deeply to check") from None
    return st


def _tarjan(g: ValueGraph, root: int) -> list[list[int]]:
    """Strongly connected components reachable from root, emitted in
    reverse topological order (children before parents). Iterative."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    out: list[list[int]] = []
    counter = [0]

    work: list[tuple[int, int]] = [(root, 0)]
    call: list[int] = []

    def push(n: int) -> None:
        index[n] = low[n] = counter[0]
        counter[0] += 1
        stack.append(n)
        on_stack.add(n)

    while work:
        n, pi = work.pop()
        if pi == 0:
            if n in index:
                continue
            push(n)
            call.append(n)
        refs = node_refs(g.nodes[n])
        advanced = False
        for j in range(pi, len(refs)):
            m = refs[j]
            if m not in index:
                work.append((n, j + 1))
                work.append((m, 0))
                advanced = True
                break
            if m in on_stack:
                low[n] = min(low[n], index[m])
        if advanced:
            continue
        if low[n] == index[n]:
            comp = []
            while True:
                m = stack.pop()
                on_stack.discard(m)
                comp.append(m)
                if m == n:
                    break
            out.append(comp)
        if call and call[-1] == n:
            call.pop()
        if call:
            parent = call[-1]
            low[parent] = min(low[parent], low[n])
    return out
