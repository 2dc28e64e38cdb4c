"""First-class effect interpreters for generic traversals.

Effectful values are tagged with a brand naming their interpreter;
functorial, applicative, and monadic operation records run them. The
stock interpreters are identity (plain values), const (accumulate a
monoid, ignore results), reader, state, and a deferred-thunk io.
Combining values of different brands raises BrandMismatch instead of
producing nonsense.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from .errors import BrandMismatch


class Brand:
    """Identity token of an effect interpreter."""


@dataclass(frozen=True)
class _NamedBrand(Brand):
    name: str

    def __repr__(self) -> str:
        return f"<brand {self.name}>"


IDENTITY = _NamedBrand("identity")
READER = _NamedBrand("reader")
STATE = _NamedBrand("state")
IO = _NamedBrand("io")


@dataclass(frozen=True)
class MonoidDict:
    """An associative combine with a neutral element."""

    empty: Any
    combine: Callable[[Any, Any], Any]


@dataclass(frozen=True)
class ConstBrand(Brand):
    """Const effects are branded by their monoid."""

    monoid: MonoidDict

    def __repr__(self) -> str:
        return "<brand const>"


@dataclass(frozen=True)
class Effectful:
    """A computation under some brand's interpreter."""

    brand: Brand
    payload: Any


def _expect(brand: Brand, v: Any) -> Any:
    if not isinstance(v, Effectful) or v.brand != brand:
        got = v.brand if isinstance(v, Effectful) else type(v).__name__
        raise BrandMismatch(f"expected {brand!r}, got {got!r}")
    return v.payload


@dataclass(frozen=True)
class FunctorialDict:
    brand: Brand
    fmap: Callable[[Callable, Any], Any]


@dataclass(frozen=True)
class ApplicativeDict:
    brand: Brand
    pure: Callable[[Any], Any]
    apply: Callable[[Any, Any], Any]


@dataclass(frozen=True)
class MonadDict:
    brand: Brand
    pure: Callable[[Any], Any]
    bind: Callable[[Any, Callable], Any]


def fun_of_app(a: ApplicativeDict) -> FunctorialDict:
    """Every applicative maps: fmap f = apply (pure f)."""
    return FunctorialDict(a.brand, lambda f, x: a.apply(a.pure(f), x))


def app_of_mon(m: MonadDict) -> ApplicativeDict:
    """Every monad applies, running the function's effect first."""

    def apply(ff: Any, xx: Any) -> Any:
        return m.bind(ff, lambda f: m.bind(xx, lambda x: m.pure(f(x))))

    return ApplicativeDict(m.brand, m.pure, apply)


def fun_of_mon(m: MonadDict) -> FunctorialDict:
    return fun_of_app(app_of_mon(m))


def fmap(a: ApplicativeDict, f: Callable, x: Any) -> Any:
    return a.apply(a.pure(f), x)


def liftA2(a: ApplicativeDict, f: Callable[[Any, Any], Any], x: Any, y: Any) -> Any:
    """Combine two effectful values left to right."""
    return a.apply(a.apply(a.pure(lambda u: lambda v: f(u, v)), x), y)


def traverse_list(a: ApplicativeDict, f: Callable[[Any], Any], xs: list) -> Any:
    """Run f across a list, collecting results, effects left to right."""

    def go(i: int) -> Any:
        if i == len(xs):
            return a.pure([])
        return liftA2(a, lambda h, t: [h] + t, f(xs[i]), go(i + 1))

    return go(0)


def sequence_list(a: ApplicativeDict, xs: list) -> Any:
    return traverse_list(a, lambda v: v, xs)


def traverseM(m: MonadDict, f: Callable[[Any], Any], xs: list) -> Any:
    return traverse_list(app_of_mon(m), f, xs)


def sequenceM(m: MonadDict, xs: list) -> Any:
    return sequence_list(app_of_mon(m), xs)


# ---------------------------------------------------------------------------
# Identity


def identity_monad() -> MonadDict:
    return MonadDict(
        IDENTITY,
        pure=lambda x: Effectful(IDENTITY, x),
        bind=lambda v, f: f(_expect(IDENTITY, v)),
    )


def identity_applicative() -> ApplicativeDict:
    return app_of_mon(identity_monad())


def run_identity(v: Any) -> Any:
    return _expect(IDENTITY, v)


# ---------------------------------------------------------------------------
# Const


def const_applicative(monoid: MonoidDict) -> ApplicativeDict:
    """Discard results, accumulate monoid values left to right."""
    brand = ConstBrand(monoid)
    return ApplicativeDict(
        brand,
        pure=lambda _x: Effectful(brand, monoid.empty),
        apply=lambda f, x: Effectful(
            brand, monoid.combine(_expect(brand, f), _expect(brand, x))
        ),
    )


def get_const(v: Any) -> Any:
    if not isinstance(v, Effectful) or not isinstance(v.brand, ConstBrand):
        raise BrandMismatch(f"expected a const value, got {v!r}")
    return v.payload


list_monoid = MonoidDict(empty=[], combine=lambda a, b: a + b)
sum_monoid = MonoidDict(empty=0, combine=lambda a, b: a + b)

# ---------------------------------------------------------------------------
# Reader


def reader_monad() -> MonadDict:
    return MonadDict(
        READER,
        pure=lambda x: Effectful(READER, lambda env: x),
        bind=lambda v, f: Effectful(
            READER, lambda env: run_reader(f(_expect(READER, v)(env)), env)
        ),
    )


def ask() -> Effectful:
    """The current environment."""
    return Effectful(READER, lambda env: env)


def local(modify: Callable[[Any], Any], r: Any) -> Effectful:
    """Run r under a modified environment."""
    return Effectful(READER, lambda env: run_reader(r, modify(env)))


def run_reader(r: Any, env: Any) -> Any:
    return _expect(READER, r)(env)


# ---------------------------------------------------------------------------
# State


def state_monad() -> MonadDict:
    def bind(v: Any, f: Callable) -> Effectful:
        def step(s: Any) -> tuple:
            a, s1 = _expect(STATE, v)(s)
            return run_state(f(a), s1)

        return Effectful(STATE, step)

    return MonadDict(
        STATE,
        pure=lambda x: Effectful(STATE, lambda s: (x, s)),
        bind=bind,
    )


def get_state() -> Effectful:
    return Effectful(STATE, lambda s: (s, s))


def put_state(s1: Any) -> Effectful:
    return Effectful(STATE, lambda _s: ((), s1))


def incr() -> Effectful:
    """Return the counter and bump it by one."""
    m = state_monad()
    return m.bind(
        get_state(), lambda i: m.bind(put_state(i + 1), lambda _: m.pure(i))
    )


def run_state(v: Any, s0: Any) -> tuple:
    """Run a state computation, yielding (result, final state)."""
    return _expect(STATE, v)(s0)


get = get_state
put = put_state


# ---------------------------------------------------------------------------
# Io: thunks forced only by run_io, in bind order.


def io_monad() -> MonadDict:
    return MonadDict(
        IO,
        pure=lambda x: Effectful(IO, lambda: x),
        bind=lambda v, f: Effectful(IO, lambda: run_io(f(_expect(IO, v)()))),
    )


def embed_io(thunk: Callable[[], Any]) -> Effectful:
    """Wrap a host side effect as a deferred io computation."""
    return Effectful(IO, thunk)


def run_io(v: Any) -> Any:
    return _expect(IO, v)()
