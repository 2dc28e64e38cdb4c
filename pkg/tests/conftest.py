"""Shared value generators.

The generators are plain seeded-random recursions rather than
hypothesis strategies: several suites need the same shaped values at
controlled depths across five types, and need to count them.
"""

from __future__ import annotations

import random
from typing import Any

from reflectix import exprlang as ex
from reflectix import prelude as pl
from reflectix.typerep import (
    Array,
    Bool,
    Char,
    Float,
    Int,
    List,
    Pair,
    String,
    TypeRep,
)


def gen_int(rng: random.Random) -> int:
    return rng.randint(-100, 100)


def gen_name(rng: random.Random) -> str:
    return rng.choice(["x", "y", "z", "acc", "tmp"])


def gen_expr(rng: random.Random, depth: int) -> Any:
    if depth <= 0:
        return rng.choice(
            [ex.Cst(gen_int(rng)), ex.Var(gen_name(rng))]
        )
    k = rng.randrange(6)
    if k == 0:
        return ex.Cst(gen_int(rng))
    if k == 1:
        return ex.Var(gen_name(rng))
    if k == 2:
        return ex.Neg(gen_expr(rng, depth - 1))
    if k == 3:
        return ex.Add(gen_expr(rng, depth - 1), gen_expr(rng, depth - 1))
    if k == 4:
        return ex.Sub(gen_expr(rng, depth - 1), gen_expr(rng, depth - 1))
    return ex.Let(
        gen_name(rng), gen_expr(rng, depth - 1), gen_expr(rng, depth - 1)
    )


def gen_btree(rng: random.Random, depth: int) -> Any:
    if depth <= 0 or rng.random() < 0.3:
        return pl.EMPTY
    return pl.node(
        gen_btree(rng, depth - 1), gen_int(rng), gen_btree(rng, depth - 1)
    )


def gen_rtree(rng: random.Random, depth: int) -> pl.Rose:
    width = 0 if depth <= 0 else rng.randrange(3)
    return pl.Rose(
        gen_int(rng), [gen_rtree(rng, depth - 1) for _ in range(width)]
    )


def gen_list(rng: random.Random, depth: int) -> list:
    return [gen_int(rng) for _ in range(rng.randrange(depth + 2))]


def gen_pair(rng: random.Random, depth: int) -> tuple:
    return (gen_int(rng), gen_list(rng, depth))


# (type, generator) table used by the coherence and fuzz suites.
TYPED_GENERATORS: list[tuple[TypeRep, Any]] = [
    (List(Int), gen_list),
    (Pair(Int, List(Int)), gen_pair),
    (pl.Btree(Int), gen_btree),
    (pl.Rtree(Int), gen_rtree),
    (ex.Expr, gen_expr),
]


def gen_float(rng: random.Random, depth: int = 0) -> float:
    return rng.choice([0.0, -1.5, 3.25, rng.uniform(-1e6, 1e6)])


def gen_char(rng: random.Random, depth: int = 0) -> str:
    return chr(rng.choice([rng.randint(32, 126), rng.randint(0x3B1, 0x3C9)]))


def gen_string(rng: random.Random, depth: int = 0) -> str:
    return "".join(gen_char(rng) for _ in range(rng.randrange(6)))


def gen_bool(rng: random.Random, depth: int = 0) -> bool:
    return rng.random() < 0.5


def gen_nat(rng: random.Random, depth: int = 0) -> int:
    return rng.randint(0, 1000)


def gen_exn(rng: random.Random, depth: int = 0) -> Any:
    if rng.random() < 0.5:
        return pl.NOT_FOUND_VALUE
    return pl.failure(gen_string(rng))


def gen_int_array(rng: random.Random, depth: int = 0) -> list:
    return [gen_int(rng) for _ in range(rng.randrange(5))]


# Ten serializable types with generators, for roundtrip and fuzz work.
SERIALIZABLE_GENERATORS: list[tuple[TypeRep, Any]] = TYPED_GENERATORS + [
    (Float, gen_float),
    (Char, gen_char),
    (String, gen_string),
    (Bool, gen_bool),
    (pl.Nat, gen_nat),
    (pl.Exn, gen_exn),
    (Array(Int), gen_int_array),
]

FUZZ_TYPES: list[TypeRep] = [t for t, _ in SERIALIZABLE_GENERATORS[:10]]
