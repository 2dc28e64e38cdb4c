"""Runtime representations of types.

A TypeRep is a first-class value standing for a type: a nominal head
(name, module path, fixed arity) applied to argument representations.
Representations support structural equality with evidence (ty_equal),
wildcard patterns (ANY) for dispatch, a specificity order on patterns,
and anti-unification (least general generalization of two patterns).

>>> matches(Pair(Int, ANY), Pair(Int, String))
True
>>> render(anti_unify(Pair(Int, Int), Pair(String, Int)))
'Pair(_, Int)'
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Optional, Union

from .errors import ArityMismatch, ParseError, UnknownType


@dataclass(frozen=True)
class Head:
    """Nominal identity of a type constructor."""

    name: str
    module_path: tuple[str, ...]
    arity: int


class _AnyPattern:
    """The wildcard pattern; matches every type. Singleton."""

    _instance: Optional["_AnyPattern"] = None

    def __new__(cls) -> "_AnyPattern":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "_"


ANY = _AnyPattern()


@dataclass(frozen=True)
class TypeRep:
    """A type constructor applied to argument representations.

    Ground representations contain no ANY; patterns may. Structural
    equality and hashing come from the dataclass machinery.
    """

    head: Head
    args: tuple["TypePattern", ...] = ()

    def __post_init__(self) -> None:
        if len(self.args) != self.head.arity:
            raise ArityMismatch(
                f"{self.head.name} expects {self.head.arity} arguments, "
                f"got {len(self.args)}"
            )

    def __repr__(self) -> str:
        return render(self)


TypePattern = Union[TypeRep, _AnyPattern]

# Global constructor table. Appends take the lock; lookups do not.
_table_lock = threading.Lock()
_heads: dict[tuple[tuple[str, ...], str], Head] = {}
_by_name: dict[str, list[Head]] = {}


class TyCon:
    """A declared type constructor awaiting arguments."""

    def __init__(self, head: Head):
        self.head = head

    def __call__(self, *args: TypePattern) -> TypeRep:
        return TypeRep(self.head, tuple(args))

    def __repr__(self) -> str:
        return f"{self.head.name}/{self.head.arity}"


def declare(name: str, arity: int = 0, module_path: tuple[str, ...] = ()):
    """Register a type constructor and return its witness.

    Arity 0 yields the TypeRep itself; higher arities yield a callable
    that builds representations. Redeclaring the same (module path,
    name, arity) triple is idempotent; changing the arity of an
    existing name is an error.
    """
    key = (module_path, name)
    with _table_lock:
        existing = _heads.get(key)
        if existing is not None:
            if existing.arity != arity:
                raise ArityMismatch(
                    f"{name} already declared with arity {existing.arity}"
                )
            head = existing
        else:
            head = Head(name, module_path, arity)
            _heads[key] = head
            _by_name.setdefault(name, []).append(head)
    if arity == 0:
        return TypeRep(head)
    return TyCon(head)


def lookup_head(name: str) -> Head:
    """Resolve a bare constructor name against the table."""
    heads = _by_name.get(name)
    if not heads:
        raise UnknownType(f"unknown type constructor: {name}")
    if len(heads) > 1:
        raise UnknownType(f"ambiguous type constructor: {name}")
    return heads[0]


def is_ground(p: TypePattern) -> bool:
    """True when the pattern contains no wildcard."""
    if p is ANY:
        return False
    return all(is_ground(a) for a in p.args)


def pattern_size(p: TypePattern) -> int:
    """Number of nodes in the pattern term, counting wildcards."""
    if p is ANY:
        return 1
    return 1 + sum(pattern_size(a) for a in p.args)


def render(p: TypePattern) -> str:
    """Print a pattern as Head(arg1, arg2); the wildcard prints as _."""
    if p is ANY:
        return "_"
    if not p.args:
        return p.head.name
    return f"{p.head.name}({', '.join(render(a) for a in p.args)})"


def matches(p: TypePattern, t: TypeRep) -> bool:
    """Does pattern p cover the ground representation t?

    >>> matches(ANY, Int)
    True
    >>> matches(Pair(ANY, Int), Pair(String, String))
    False
    """
    if p is ANY:
        return True
    if t is ANY:
        # Lenient queries: a wildcard argument is covered only by a wildcard.
        return False
    if p.head != t.head:
        return False
    return all(matches(a, b) for a, b in zip(p.args, t.args))


class Specificity(Enum):
    MORE_SPECIFIC = "more_specific"
    MORE_GENERAL = "more_general"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def compare_specificity(p: TypePattern, q: TypePattern) -> Specificity:
    """Order patterns by how narrowly they match.

    The wildcard is the most general pattern; distinct concrete heads
    are incomparable (at most one of them can match any given type);
    equal heads compare lexicographically over their arguments, so
    Pair(Int, _) is more specific than Pair(_, Int).
    """
    if p is ANY and q is ANY:
        return Specificity.EQUAL
    if p is ANY:
        return Specificity.MORE_GENERAL
    if q is ANY:
        return Specificity.MORE_SPECIFIC
    if p.head != q.head:
        return Specificity.INCOMPARABLE
    for a, b in zip(p.args, q.args):
        c = compare_specificity(a, b)
        if c is not Specificity.EQUAL:
            return c
    return Specificity.EQUAL


def pattern_key(p: TypePattern) -> tuple:
    """Total sort key refining the specificity order.

    Keys compare lexicographically over a preorder walk in which every
    concrete head sorts before the wildcard, so a bucket sorted by this
    key always tries more specific patterns first, independently of
    registration order. Incomparable patterns tie-break by head name.
    """
    out: list[tuple] = []

    def walk(q: TypePattern) -> None:
        if q is ANY:
            out.append((1,))
        else:
            out.append((0, q.head.name, q.head.module_path, q.head.arity))
            for a in q.args:
                walk(a)

    walk(p)
    return tuple(out)


def anti_unify(p: TypePattern, q: TypePattern) -> TypePattern:
    """Least general pattern covering both p and q.

    Equal heads recurse over arguments; any mismatch of head or arity,
    or a wildcard on either side, generalizes to the wildcard at that
    position.

    >>> anti_unify(Int, String) is ANY
    True
    >>> render(anti_unify(List(Int), List(String)))
    'List(_)'
    """
    if p is ANY or q is ANY:
        return ANY
    if p.head != q.head:
        return ANY
    return TypeRep(p.head, tuple(anti_unify(a, b) for a, b in zip(p.args, q.args)))


@dataclass(frozen=True)
class EqualityWitness:
    """Evidence that two representations denote the same type.

    Obtain witnesses from ty_equal; constructing one by hand asserts an
    equality nobody checked.
    """

    left: TypeRep
    right: TypeRep


def ty_equal(a: TypeRep, b: TypeRep) -> Optional[EqualityWitness]:
    """Structural equality with evidence; None when the types differ."""
    if a is ANY or b is ANY:
        return None
    if a == b:
        return EqualityWitness(a, b)
    return None


def coerce(from_rep: TypeRep, to_rep: TypeRep, value: Any) -> Optional[Any]:
    """Retag value from one representation to an equal one.

    Returns the value unchanged when the representations are equal and
    None otherwise; the payload is never converted.
    """
    if ty_equal(from_rep, to_rep) is None:
        return None
    return value


@dataclass(frozen=True)
class Dyn:
    """A value paired with the representation of its type."""

    rep: TypeRep
    value: Any


# ---------------------------------------------------------------------------
# Textual type syntax: Head or Head(arg, ...), wildcard _.


def parse_type(text: str) -> TypePattern:
    """Parse the rendered type syntax back into a pattern.

    Unknown names and arity violations raise UnknownType; syntax errors
    raise ParseError with a line and column.
    """
    pos = 0
    n = len(text)

    def err(reason: str) -> ParseError:
        line = text.count("\n", 0, pos) + 1
        column = pos - (text.rfind("\n", 0, pos) + 1) + 1
        return ParseError(line, column, reason)

    def skip_ws() -> None:
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def ident() -> str:
        nonlocal pos
        start = pos
        if pos >= n or not (text[pos].isalpha() or text[pos] == "_"):
            raise err("expected a type name")
        if text[pos] == "_":
            pos += 1
            return "_"
        while pos < n and (text[pos].isalnum() or text[pos] == "_"):
            pos += 1
        return text[start:pos]

    def ty() -> TypePattern:
        nonlocal pos
        skip_ws()
        name = ident()
        if name == "_":
            return ANY
        head = lookup_head(name)
        args: list[TypePattern] = []
        skip_ws()
        if pos < n and text[pos] == "(":
            pos += 1
            while True:
                args.append(ty())
                skip_ws()
                if pos < n and text[pos] == ",":
                    pos += 1
                    continue
                if pos < n and text[pos] == ")":
                    pos += 1
                    break
                raise err("expected ',' or ')'")
        if len(args) != head.arity:
            raise UnknownType(
                f"{name} expects {head.arity} arguments, got {len(args)}"
            )
        if head.arity == 0:
            return TypeRep(head)
        return TypeRep(head, tuple(args))

    result = ty()
    skip_ws()
    if pos != n:
        raise err("trailing input after type")
    return result


# Core witnesses. Their descriptors live in the prelude.
Int = declare("Int")
Float = declare("Float")
Char = declare("Char")
String = declare("String")
Bool = declare("Bool")
Unit = declare("Unit")
List = declare("List", 1)
Pair = declare("Pair", 2)
Fun = declare("Fun", 2)
Array = declare("Array", 1)
