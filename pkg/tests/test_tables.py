import random
from fractions import Fraction as F

import numpy as np
from hypothesis import given, settings, strategies as st

from goedelkit import syntax as sx
from goedelkit.generators import formulas_up_to_depth, random_structure
from goedelkit.semantics import tabulate
from goedelkit.tables import TableSpace, leaf_atoms, signature_of

VS = ("x", "y")
QUANTS = [lambda f, v=v, q=q: q(v, f) for v in VS for q in (sx.Forall, sx.Exists)]


def brute_tables(M, depth, use_delta):
    leaves = leaf_atoms(*signature_of(M)[:1], VS) + [sx.BOT]
    fs = formulas_up_to_depth(leaves, depth, use_delta, unary=QUANTS)
    return {tuple(tabulate(M, f, VS).values()) for f in fs}


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.booleans())
def test_tables_match_brute_force(seed, use_delta):
    rng = random.Random(seed)
    M = random_structure(rng, {"R": 1}, rng.randint(1, 3), [0, F(1, 3), F(2, 3), 1])
    S = TableSpace([M], VS, leaf_atoms({"R": 1}, VS)).close(2, use_delta)
    seg = S.segment(0)
    got = {tuple(S.value(c) for c in row) for row in seg}
    assert got == brute_tables(M, 2, use_delta)
    # rows are distinct and each representative evaluates to its own row
    assert len(np.unique(seg, axis=0)) == len(seg)
    for i in rng.sample(range(len(seg)), min(20, len(seg))):
        assert tuple(tabulate(M, S.formulas[i], VS).values()) == tuple(S.value(c) for c in seg[i])


def test_two_worlds_share_rows():
    rng = random.Random(1)
    A = random_structure(rng, {"R": 1}, 2, [0, F(1, 2), 1], prefix="a")
    B = random_structure(rng, {"R": 1}, 3, [0, F(1, 2), 1], prefix="b")
    S = TableSpace([A, B], VS, leaf_atoms({"R": 1}, VS)).close(2)
    assert S.segment(0).shape[1] == 4 and S.segment(1).shape[1] == 9
    for i in range(0, len(S.formulas), 7):
        f = S.formulas[i]
        assert tuple(tabulate(B, f, VS).values()) == tuple(S.value(c) for c in S.segment(1)[i])


def test_leaf_atoms_with_functions():
    leaves = leaf_atoms({"R": 1}, ("x",), {"f": 1}, ["c"])
    assert sx.atom("R", sx.Func("f", (sx.Const("c"),))) in leaves
    assert len(leaves) == 4
