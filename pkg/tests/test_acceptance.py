"""End-to-end acceptance gate.

Each criterion below is one test that prints a single PASS or FAIL line
(visible under pytest -s) and enforces its own wall-clock budget.  The
nine checks deliberately reuse fixtures from the per-module suites so
that a regression caught here points at an already-tested seam.
"""

import random
import time
from contextlib import contextmanager

import pytest

from reflectix import cli
from reflectix import exprlang as ex
from reflectix import extfun
from reflectix import generics as g
from reflectix import prelude as pl
from reflectix import safeser as ss
from reflectix import uniplate as up
from reflectix.errors import RepresentationRejected, SafeserError
from reflectix.exprlang import Add, Cst, Expr, Neg, Sub, Var
from reflectix.typerep import Int, List

from conftest import FUZZ_TYPES, TYPED_GENERATORS, gen_expr
from effect_laws import run_all_law_suites
from test_extfun import PAIR_PATTERNS, PROBES, oracle_dispatch
from test_safeser import GOLDENS


@contextmanager
def criterion(num, name, budget_s):
    t0 = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"criterion {num} ({name}): FAIL "
              f"({time.monotonic() - t0:.2f}s)")
        raise
    elapsed = time.monotonic() - t0
    verdict = "PASS" if elapsed < budget_s else "FAIL"
    print(f"criterion {num} ({name}): {verdict} "
          f"({elapsed:.2f}s, budget {budget_s:g}s)")
    assert elapsed < budget_s


def test_criterion_1_view_coherence():
    """All three generic views report identical children."""
    rng = random.Random(101)
    with criterion(1, "view coherence", 10.0):
        checked = 0
        for t, gen in TYPED_GENERATORS:
            for _ in range(210):
                x = gen(rng, rng.randint(0, 5))
                a = g.children_sumprod(t, x)
                b = g.children_spine(t, x)
                c = g.children_conlist(t, x)
                assert a == b == c
                checked += 1
        assert checked >= 1000


def test_criterion_2_uniplate_laws():
    rng = random.Random(202)
    with criterion(2, "uniplate laws", 10.0):
        for t, gen in TYPED_GENERATORS:
            for _ in range(40):
                x = gen(rng, rng.randint(0, 5))
                ch = up.children(t, x)
                assert up.replace_children(t, x, ch) == x
                assert up.map_family(t, lambda y: y, x) == x
                assert len(up.family(t, x)) == 1 + sum(
                    len(up.family(t, c)) for c in ch
                )
        # literal unfold over a three element cons spine
        fs = [
            lambda l: [v * 2 for v in l],
            lambda l: l[::-1],
            lambda l: l + [99] if not l else [l[0] + 1] + l[1:],
        ]
        for _ in range(200):
            xs = [rng.randint(-50, 50) for _ in range(3)]
            x, y, z = xs
            for f in fs:
                expect = f([x] + f([y] + f([z] + f([]))))
                assert up.map_family(List(Int), f, xs) == expect


def test_criterion_3_pass_outputs():
    rng = random.Random(303)
    with criterion(3, "rewrite pass outputs", 1.0):
        assert ex.simplify(Neg(Neg(Var("x")))) == Var("x")
        assert ex.const_fold(Add(Cst(1), Cst(2))) == Cst(3)
        assert ex.simplify_more(Sub(Var("x"), Neg(Var("y")))) == Add(
            Var("x"), Var("y")
        )
        assert ex.abstract_constants(Add(Cst(1), Cst(2))) == (
            Add(Var("x0"), Var("x1")),
            2,
        )
        # no redex may survive a full simplify_more run
        for _ in range(60):
            out = ex.simplify_more(gen_expr(rng, rng.randint(0, 5)))
            for node in up.family(Expr, out):
                assert not isinstance(node, Sub)
                assert not (
                    isinstance(node, Neg) and isinstance(node.expr, Neg)
                )


def test_criterion_4_dispatch_precedence():
    rng = random.Random(404)
    with criterion(4, "dispatch precedence", 1.0):
        cases = [(p, i) for i, p in enumerate(PAIR_PATTERNS)]
        for _ in range(100):
            order = list(range(len(PAIR_PATTERNS)))
            rng.shuffle(order)
            f = extfun.create("probe")
            for i in order:
                f.extend(PAIR_PATTERNS[i], lambda t, i=i: i)
            got = [f.apply(p) for p in PROBES]
            assert got == [0, 1, 2, 3]
            assert got == [oracle_dispatch(cases, p) for p in PROBES]


def test_criterion_5_effect_laws():
    with criterion(5, "effect laws", 5.0):
        total = run_all_law_suites(n_per_law=200, seed=505)
        assert total >= 4 * 9 * 200


def test_criterion_6_serialization_safety():
    rng = random.Random(606)
    with criterion(6, "serialization safety", 30.0):
        rejected = 0
        for _ in range(10_000):
            n = rng.randrange(0, 60)
            blob = bytes(rng.randrange(256) for _ in range(n))
            if rng.random() < 0.5:
                blob = ss.MAGIC + blob
            t = rng.choice(FUZZ_TYPES)
            try:
                ss.deserialize(t, blob)
            except SafeserError:
                rejected += 1
        assert rejected > 0
        for _ in range(1000):
            e = gen_expr(rng, rng.randint(0, 5))
            assert ss.deserialize(Expr, ss.serialize(Expr, e)) == e
        negative = ss.encode_graph(ss.ValueGraph([ss.Imm(-1)], 0))
        with pytest.raises(RepresentationRejected):
            ss.deserialize(pl.Nat, negative)


def test_criterion_7_cyclic_termination():
    with criterion(7, "cyclic termination", 1.0):
        graph = ss.ValueGraph([ss.Block(1, (0, 0))], 0)
        st = ss.check_compat(pl.PolyTree(Int), graph, 0)
        for node, count in st.updates.items():
            assert count <= st.first_size[node]


def test_criterion_8_wire_goldens():
    with criterion(8, "wire format goldens", 1.0):
        for t, v, wire, frozen in GOLDENS:
            blob = ss.serialize(t, v)
            assert blob == wire
            assert blob == bytes.fromhex(frozen)
            assert ss.encode_graph(ss.decode_graph(blob)) == blob


def test_criterion_9_cli_contract(capsys, tmp_path):
    with criterion(9, "cli contract", 5.0):
        demos = [
            ("(add (cst 1) (cst 2))", "const-fold", "(cst 3)\n"),
            ("(neg (neg (var x)))", "simplify", "(var x)\n"),
            ("(let y (cst 1) (add (var y) (var z)))", "free-vars", "z\n"),
        ]
        for i, (src, name, want) in enumerate(demos):
            p = tmp_path / f"demo{i}.expr"
            p.write_text(src)
            assert cli.main(["demo-expr", "--pass", name, str(p)]) == 0
            assert capsys.readouterr().out == want
        blob = tmp_path / "list.bin"
        blob.write_bytes(ss.serialize(List(Int), [1, 2, 3]))
        assert cli.main(["validate", "--type", "List(Int)", str(blob)]) == 0
        assert cli.main(["validate", "--type", "List(String)", str(blob)]) == 3
        capsys.readouterr()
