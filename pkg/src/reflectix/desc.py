"""Low-level structural descriptors.

Every serializable or traversable type is registered here under its
head, as a builder from argument representations to a descriptor that
says what the type is made of: a variant with tagged constructors, a
record, a bare product, an array, an open (extensible) constructor set,
a synonym, a scalar, or an abstract/opaque name.

Constructors carry an embed/proj pair between values and right-nested
argument products, so generic code can take values apart and rebuild
them without knowing the concrete Python classes involved.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from . import extfun
from .errors import (
    ArityMismatch,
    DuplicateConstructor,
    DuplicateDescriptor,
    IndexOutOfRange,
    MalformedValue,
    NoRepresentation,
    UnknownConstructor,
)
from .typerep import (
    ANY,
    EqualityWitness,
    Head,
    TyCon,
    TypePattern,
    TypeRep,
)


# ---------------------------------------------------------------------------
# Products


@dataclass(frozen=True)
class ProductShape:
    """An ordered tuple of component types.

    The canonical value form is a right-nested chain of pairs ending in
    the empty tuple: nest((a, b, c)) == (a, (b, (c, ()))). Nesting and
    flattening are inverse bijections.
    """

    reps: tuple[TypePattern, ...]

    def __len__(self) -> int:
        return len(self.reps)

    def nest(self, values: Sequence[Any]) -> Any:
        if len(values) != len(self.reps):
            raise ArityMismatch(
                f"product expects {len(self.reps)} components, got {len(values)}"
            )
        out: Any = ()
        for v in reversed(values):
            out = (v, out)
        return out

    def flat(self, nested: Any) -> tuple:
        values = []
        for _ in self.reps:
            values.append(nested[0])
            nested = nested[1]
        return tuple(values)


@dataclass(frozen=True)
class Iso:
    """An isomorphism between a user-facing value and its generic form."""

    fwd: Callable[[Any], Any]
    bck: Callable[[Any], Any]


# ---------------------------------------------------------------------------
# Fields and constructors


@dataclass(frozen=True)
class Field:
    """One constructor argument; name is empty for positional fields."""

    name: str
    ty: TypePattern
    # In-place setter for mutable fields; None for immutable ones.
    set: Optional[Callable[[Any, Any], None]] = None


FieldList = tuple[Field, ...]


def fields_shape(fields: FieldList) -> ProductShape:
    return ProductShape(tuple(f.ty for f in fields))


@dataclass(frozen=True)
class Constructor:
    """A data constructor with its argument fields and value conversions.

    proj is a partial inverse of embed: proj(embed(x)) == x for every
    argument product x, and proj returns None on values built by a
    different constructor.
    """

    name: str
    fields: FieldList
    embed: Callable[[Any], Any]
    proj: Callable[[Any], Optional[Any]]

    @property
    def arity(self) -> int:
        return len(self.fields)

    @property
    def shape(self) -> ProductShape:
        return fields_shape(self.fields)

    def __repr__(self) -> str:
        return f"<constructor {self.name}/{self.arity}>"


@dataclass(frozen=True)
class ConApp:
    """A value split into its constructor and nested argument product."""

    con: Constructor
    args: Any


# ---------------------------------------------------------------------------
# Descriptor categories


class Desc:
    """Base class for structural descriptors."""


@dataclass(frozen=True)
class ScalarDesc(Desc):
    """A primitive with no substructure; kind is int, float, or char."""

    name: str
    kind: str


@dataclass(frozen=True)
class VariantDesc(Desc):
    """A closed sum of constructors.

    Constant (arity 0) and non-constant constructors are indexed by
    separate dense tag tables in declaration order. classify maps a
    value to its (kind, tag) in constant time, which keeps conap free
    of projection scans.
    """

    name: str
    module_path: tuple[str, ...]
    cons: tuple[Constructor, ...]
    classify: Callable[[Any], tuple[str, int]]
    cst: tuple[Constructor, ...] = field(init=False)
    ncst: tuple[Constructor, ...] = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "cst", tuple(c for c in self.cons if c.arity == 0)
        )
        object.__setattr__(
            self, "ncst", tuple(c for c in self.cons if c.arity > 0)
        )

    @property
    def cst_len(self) -> int:
        return len(self.cst)

    @property
    def ncst_len(self) -> int:
        return len(self.ncst)

    def cst_get(self, tag: int) -> Constructor:
        if not 0 <= tag < len(self.cst):
            raise IndexOutOfRange(f"constant tag {tag} of {self.name}")
        return self.cst[tag]

    def ncst_get(self, tag: int) -> Constructor:
        if not 0 <= tag < len(self.ncst):
            raise IndexOutOfRange(f"non-constant tag {tag} of {self.name}")
        return self.ncst[tag]


@dataclass(frozen=True)
class RecordDesc(Desc):
    """Named fields plus an isomorphism to the nested field product."""

    name: str
    module_path: tuple[str, ...]
    fields: FieldList
    iso: Iso

    @property
    def shape(self) -> ProductShape:
        return fields_shape(self.fields)


@dataclass(frozen=True)
class ProductDesc(Desc):
    """A bare tuple type; iso maps the user value to the nested form."""

    shape: ProductShape
    iso: Iso


@dataclass(frozen=True)
class ArrayOps:
    """Primitive operations of an array-like type."""

    length: Callable[[Any], int]
    get: Callable[[Any, int], Any]
    set: Optional[Callable[[Any, int, Any], None]]
    init: Callable[[int, Callable[[int], Any]], Any]
    max_length: int


@dataclass(frozen=True)
class ArrayLikeDesc(Desc):
    """Homogeneous indexed elements; bytes_like types serialize as raw bytes."""

    elem: TypePattern
    ops: ArrayOps
    bytes_like: bool = False


class ExtensibleDesc(Desc):
    """An open constructor set that grows at runtime.

    The registry is keyed by constructor name; registration order is
    preserved for listing. Extension takes a lock so concurrent readers
    always see a consistent snapshot.
    """

    def __init__(self, name: str, module_path: tuple[str, ...] = ()):
        self.name = name
        self.module_path = module_path
        self._cons: dict[str, Constructor] = {}
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"<extensible {self.name}: {len(self._cons)} constructors>"


@dataclass(frozen=True)
class ExtValue:
    """A value of an extensible type: a constructor plus flat arguments."""

    con: Constructor
    args: tuple


@dataclass(frozen=True)
class SynonymDesc(Desc):
    """This type is another type under a different name."""

    target: TypeRep
    eq: EqualityWitness


@dataclass(frozen=True)
class AbstractDesc(Desc):
    """A named type whose structure is hidden; only its name is known."""

    name: str
    module_path: tuple[str, ...]


@dataclass(frozen=True)
class OpaqueDesc(Desc):
    """Like abstract, but identified by an explicit identifier string."""

    name: str
    module_path: tuple[str, ...]
    identifier: str


class _NoDesc(Desc):
    _instance: Optional["_NoDesc"] = None

    def __new__(cls) -> "_NoDesc":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NoDesc"


NO_DESC = _NoDesc()


@dataclass(frozen=True)
class Representation:
    """Public view of an abstract type.

    to_repr is total; from_repr validates and returns None on values
    outside the abstract type's range, making it a retraction:
    from_repr(to_repr(x)) == x.
    """

    repr_ty: TypeRep
    to_repr: Callable[[Any], Any]
    from_repr: Callable[[Any], Optional[Any]]


# ---------------------------------------------------------------------------
# Registration and lookup

_desc_fun = extfun.create("desc")
_repr_fun = extfun.create("representation")
_registered: set[Head] = set()
_registered_repr: set[Head] = set()
_register_lock = threading.Lock()

DescBuilder = Callable[..., Desc]


def _head_of(witness: Any) -> Head:
    if isinstance(witness, TyCon):
        return witness.head
    if isinstance(witness, TypeRep):
        return witness.head
    if isinstance(witness, Head):
        return witness
    raise ArityMismatch(f"not a type witness: {witness!r}")


def _wildcard_rep(head: Head) -> TypeRep:
    return TypeRep(head, tuple(ANY for _ in range(head.arity)))


def register(witness: Any, builder: DescBuilder) -> None:
    """Register a descriptor builder for a type head.

    The builder receives one argument representation per head parameter
    and returns the descriptor. Registering a head twice is an error.
    """
    head = _head_of(witness)
    with _register_lock:
        if head in _registered:
            raise DuplicateDescriptor(f"descriptor for {head.name} already registered")
        _registered.add(head)
    _desc_fun.extend(_wildcard_rep(head), lambda t: builder(*t.args))


# The category-specific registrars only document intent; they all store
# a builder the same way.
register_scalar = register
register_variant = register
register_record = register
register_product = register
register_arraylike = register
register_synonym = register
register_abstract = register
register_opaque = register
register_extensible = register


def view_desc(t: TypePattern) -> Desc:
    """The registered descriptor of t; NO_DESC when none exists."""
    if t is ANY or not _desc_fun.supports(t):
        return NO_DESC
    return _desc_fun.apply(t)


def register_repr(witness: Any, builder: Callable[..., Representation]) -> None:
    """Attach a public representation to an abstract or opaque head."""
    head = _head_of(witness)
    with _register_lock:
        if head in _registered_repr:
            raise DuplicateDescriptor(
                f"representation for {head.name} already registered"
            )
        _registered_repr.add(head)
    _repr_fun.extend(_wildcard_rep(head), lambda t: builder(*t.args))


def repr_of(t: TypeRep) -> Representation:
    """The public representation of t; raises NoRepresentation."""
    r = try_repr(t)
    if r is None:
        raise NoRepresentation(f"no representation registered for {t!r}")
    return r


def try_repr(t: TypeRep) -> Optional[Representation]:
    if t is ANY or not _repr_fun.supports(t):
        return None
    return _repr_fun.apply(t)


# ---------------------------------------------------------------------------
# Taking values apart


def conap(v: VariantDesc, x: Any) -> ConApp:
    """Split x into its constructor and nested argument product.

    Runs in constant time: classify yields the tag, the tag indexes the
    constructor table, and that constructor's proj extracts arguments.
    """
    kind, tag = v.classify(x)
    con = v.cst_get(tag) if kind == "cst" else v.ncst_get(tag)
    args = con.proj(x)
    if args is None:
        raise MalformedValue(f"{v.name} value does not project as {con.name}")
    return ConApp(con, args)


# ---------------------------------------------------------------------------
# Extensible constructor sets


def ext_create(name: str, module_path: tuple[str, ...] = ()) -> ExtensibleDesc:
    """A fresh, empty extensible constructor registry."""
    return ExtensibleDesc(name, module_path)


def add_con(e: ExtensibleDesc, c: Constructor) -> None:
    """Register a constructor; duplicate names are an error."""
    with e._lock:
        if c.name in e._cons:
            raise DuplicateConstructor(f"{e.name} already has constructor {c.name}")
        e._cons[c.name] = c


def ext_con_list(e: ExtensibleDesc) -> list[Constructor]:
    """Snapshot of the registered constructors, oldest first."""
    return list(e._cons.values())


def ext_find(e: ExtensibleDesc, name: str) -> Constructor:
    con = e._cons.get(name)
    if con is None:
        raise UnknownConstructor(f"{e.name} has no constructor {name}")
    return con


def ext_conap(e: ExtensibleDesc, x: ExtValue) -> ConApp:
    """Split an extensible value using the registered constructor."""
    con = ext_find(e, x.con.name)
    args = con.proj(x)
    if args is None:
        raise MalformedValue(
            f"{e.name} value does not project as {con.name}"
        )
    return ConApp(con, args)


def reinstate(e: ExtensibleDesc, x: ExtValue) -> ExtValue:
    """Swap x's constructor for the one registered under the same name.

    Values that crossed a serialization boundary carry structurally
    correct but foreign constructor identities; reinstating restores
    the canonical one so identity-sensitive comparisons succeed.
    """
    return ExtValue(ext_find(e, x.con.name), x.args)


def ext_constructor(name: str, field_tys: Sequence[TypePattern]) -> Constructor:
    """A constructor over ExtValue with positional fields."""
    fields = tuple(Field("", ty) for ty in field_tys)
    shape = fields_shape(fields)
    holder: list[Constructor] = []

    def embed(nested: Any) -> ExtValue:
        return ExtValue(holder[0], shape.flat(nested))

    def proj(v: Any) -> Optional[Any]:
        if isinstance(v, ExtValue) and v.con.name == name:
            return shape.nest(v.args)
        return None

    con = Constructor(name, fields, embed, proj)
    holder.append(con)
    return con


# ---------------------------------------------------------------------------
# Helpers for registering concrete Python classes


def class_constructor(
    cls: type,
    field_specs: Sequence[tuple[str, TypePattern]],
    name: Optional[str] = None,
    mutable: frozenset[str] = frozenset(),
    named: bool = False,
) -> Constructor:
    """Constructor backed by a Python class with named attributes.

    Attribute names drive extraction either way; they only become field
    names (visible to record-style rendering) when named is set.
    """
    fields = tuple(
        Field(
            fname if named else "",
            ty,
            (lambda fn: lambda obj, v: setattr(obj, fn, v))(fname)
            if fname in mutable
            else None,
        )
        for fname, ty in field_specs
    )
    shape = fields_shape(fields)
    names = [fname for fname, _ in field_specs]

    def embed(nested: Any) -> Any:
        return cls(*shape.flat(nested))

    def proj(v: Any) -> Optional[Any]:
        if type(v) is cls:
            return shape.nest(tuple(getattr(v, fname) for fname in names))
        return None

    return Constructor(name or cls.__name__, fields, embed, proj)


def constant_constructor(name: str, value: Any) -> Constructor:
    """An argumentless constructor denoting a single value."""

    def embed(nested: Any) -> Any:
        return value

    def proj(v: Any) -> Optional[Any]:
        return () if v == value and type(v) is type(value) else None

    return Constructor(name, (), embed, proj)


def classify_by_class(
    variant_name: str, mapping: dict[type, tuple[str, int]]
) -> Callable[[Any], tuple[str, int]]:
    """Constant-time classification keyed on the value's class."""

    def classify(x: Any) -> tuple[str, int]:
        entry = mapping.get(type(x))
        if entry is None:
            raise MalformedValue(f"not a {variant_name} value: {x!r}")
        return entry

    return classify
