import numpy as np
import pytest

from relfrag.normalforms import (NormalFormError, UnionBlowup, collapse_constants,
                                 complement_dual, complement_nf,
                                 decompose_sigma_n, elim_bot_top,
                                 expand_projections, projection_nf, union_nf)
from relfrag.semantics import exhaustive_check
from relfrag.terms import (Compl, Proj, PROJ_SWAP, Union, Var, dotdagger_level,
                           parse_term, print_term, substitute, subterms, vo)


def _equiv_small(t1, t2, sizes=(1, 2, 3)):
    return exhaustive_check(t1, t2, sizes) is None


def test_complement_nf_examples():
    assert complement_nf(parse_term("(a | b)~")) == parse_term("a~ & b~")
    assert complement_nf(parse_term("I~")) == parse_term("D")
    assert complement_nf(parse_term("a~~")) == Var("a")
    assert complement_nf(parse_term("(a & b~)~ ; D")) == parse_term("(a~ | b) ; D")


def test_complement_nf_output_shape():
    out = complement_nf(parse_term("((a | I)~ & (b^)~)~"))
    for s in subterms(out):
        if isinstance(s, Compl):
            assert isinstance(s.arg, Var)


def test_complement_nf_rejects_high_levels():
    with pytest.raises(NormalFormError):
        complement_nf(parse_term("(a ; b)~"))
    with pytest.raises(NormalFormError):
        complement_nf(parse_term("a ; (b $ c)"))


def _random_level0(rng, depth):
    # no composition or dagger anywhere; complements allowed
    from relfrag.terms import ALL_PROJECTIONS, BOT, DI, ID, TOP, Inter, Proj, Union
    if depth == 0 or rng.random() < 0.3:
        return [Var("a"), BOT, TOP, ID, DI][int(rng.integers(0, 5))]
    pick = int(rng.integers(0, 4))
    if pick == 0:
        return Compl(_random_level0(rng, depth - 1))
    if pick == 1:
        return Proj(_random_level0(rng, depth - 1), ALL_PROJECTIONS[int(rng.integers(0, 4))])
    build = Union if pick == 2 else __import__("relfrag.terms", fromlist=["Inter"]).Inter
    return build(_random_level0(rng, depth - 1), _random_level0(rng, depth - 1))


def _random_level1_term(rng, depth, allow_compl=True):
    # union/intersection/composition/projection over composition-free
    # cores; complements only inside the cores
    from relfrag.terms import ALL_PROJECTIONS, Comp, Inter, Proj, Union
    if depth == 0 or rng.random() < 0.25:
        core = _random_level0(rng, 2)
        return core if allow_compl else elim_compl(core)
    pick = int(rng.integers(0, 4))
    if pick == 0:
        return Proj(_random_level1_term(rng, depth - 1, allow_compl),
                    ALL_PROJECTIONS[int(rng.integers(0, 4))])
    build = [Union, Inter, Comp][pick - 1]
    return build(_random_level1_term(rng, depth - 1, allow_compl),
                 _random_level1_term(rng, depth - 1, allow_compl))


def elim_compl(t):
    from relfrag.terms import children
    if isinstance(t, Compl):
        return elim_compl(t.arg)
    if not children(t):
        return t
    if isinstance(t, Proj):
        return Proj(elim_compl(t.arg), t.proj)
    return type(t)(elim_compl(t.left), elim_compl(t.right))


def test_complement_nf_preserves_semantics():
    rng = np.random.default_rng(31)
    checked = 0
    for _ in range(500):
        t = _random_level1_term(rng, 4)
        out = complement_nf(t)
        assert _equiv_small(t, out)
        checked += 1
    assert checked == 500


def test_projection_nf_examples():
    assert projection_nf(parse_term("(a ; b)^")) == parse_term("b^ ; a^")
    assert projection_nf(parse_term("(a^)^")) == Var("a")
    assert projection_nf(parse_term("I[1,1]")) == parse_term("top")
    assert projection_nf(parse_term("(a ; b)[1,1]")) == parse_term("(a & b^) ; top")
    assert projection_nf(parse_term("(a $ b)[2,2]")) == parse_term("bot $ (a^ | b)")


def test_projection_nf_output_shape():
    rng = np.random.default_rng(77)
    for _ in range(200):
        t = _random_term(rng, 4)
        out = projection_nf(t)
        for s in subterms(out):
            if isinstance(s, Proj):
                assert isinstance(s.arg, Var)


def _random_term(rng, depth):
    from relfrag.terms import (ALL_PROJECTIONS, BOT, DI, ID, TOP, Comp, Dagger,
                               Inter, Union)
    if depth == 0:
        return [Var("a"), BOT, TOP, ID, DI][int(rng.integers(0, 5))]
    pick = int(rng.integers(0, 7))
    if pick == 0:
        return Compl(_random_term(rng, depth - 1))
    if pick == 1:
        return Proj(_random_term(rng, depth - 1), ALL_PROJECTIONS[int(rng.integers(0, 4))])
    build = [Union, Inter, Comp, Dagger, Union][pick - 2]
    return build(_random_term(rng, depth - 1), _random_term(rng, depth - 1))


def test_projection_nf_preserves_semantics():
    rng = np.random.default_rng(13)
    for _ in range(500):
        t = _random_term(rng, 4)
        assert _equiv_small(t, projection_nf(t))


def test_expand_projections():
    out = expand_projections(parse_term("a[1,1] & b[2,2]"))
    assert out == parse_term("((a & I) ; top) & (top ; (b & I))")
    assert _equiv_small(parse_term("a[1,1]"), expand_projections(parse_term("a[1,1]")))
    # converse is kept
    assert expand_projections(parse_term("a^")) == Proj(Var("a"), PROJ_SWAP)


def test_elim_bot_top_examples():
    assert elim_bot_top(parse_term("bot")) == parse_term("I & D")
    assert elim_bot_top(parse_term("top ; a")) == parse_term("(I | D) ; a")
    assert elim_bot_top(parse_term("I")) == parse_term("I")
    rng = np.random.default_rng(41)
    for _ in range(200):
        t = _random_term(rng, 4)
        assert _equiv_small(t, elim_bot_top(t))


def test_union_nf_examples():
    assert union_nf(parse_term("(I | D) ; a")) == [parse_term("I ; a"), parse_term("D ; a")]
    assert union_nf(parse_term("a & I")) == [parse_term("a & I")]
    four = union_nf(parse_term("(I | D) & (I | D)"))
    assert len(four) == 4
    rebuilt = four[0]
    for d in four[1:]:
        rebuilt = Union(rebuilt, d)
    assert _equiv_small(parse_term("(I | D) & (I | D)"), rebuilt)


def test_union_nf_disjuncts_are_union_free():
    rng = np.random.default_rng(59)
    from relfrag.terms import Union as U
    checked = 0
    for _ in range(400):
        t = elim_bot_top(_random_level1_term(rng, 3, allow_compl=False))
        t = projection_nf(t)
        t = complement_nf(t)
        t = expand_projections(t)
        t = elim_bot_top(t)
        disjuncts = union_nf(t)
        if len(disjuncts) > 64:  # keep the recombined term evaluable
            continue
        rebuilt = disjuncts[0]
        for d in disjuncts[1:]:
            assert not any(isinstance(s, U) for s in subterms(d))
            rebuilt = U(rebuilt, d)
        assert _equiv_small(t, rebuilt)
        checked += 1
    assert checked >= 300


def test_union_nf_ceiling():
    t = parse_term("I | D")
    for _ in range(6):
        t = parse_term(f"({print_term(t)}) & ({print_term(t)})")
    with pytest.raises(UnionBlowup):
        union_nf(t, ceiling=1000)


def test_union_nf_rejects_outside_signature():
    with pytest.raises(NormalFormError):
        union_nf(parse_term("a $ b"))


def test_collapse_constants():
    t = parse_term("(D $ D) ; (a & (D ; D))")
    out = collapse_constants(t)
    assert out == parse_term("D ; (a & top)")


def test_decompose_sigma_n_running_example():
    t = parse_term("(D $ D) ; (((D;D) $ (((D$D);a) $ (D;D))) ; (D;D))")
    outer, inner = decompose_sigma_n(t, 3, "h")
    assert outer == parse_term("D ; (h ; top)")
    assert inner == parse_term("top $ (D ; a $ top)")
    assert dotdagger_level(outer).sigma_level == 1
    assert dotdagger_level(inner).pi_level == 2
    assert vo(outer) == 1 and vo(inner) == 1
    rec = substitute(outer, "h", inner)
    assert exhaustive_check(t, rec, [3, 4]) is None


def test_decompose_sigma_n_pi_case():
    outer, inner = decompose_sigma_n(parse_term("a $ D"), 2, "h")
    assert outer == Var("h")
    assert inner == parse_term("a $ D")


def test_decompose_sigma_n_recursive_cases():
    rng = np.random.default_rng(101)
    checked = 0
    for _ in range(1200):
        t = _random_sigma_term(rng, 4)
        info = dotdagger_level(collapse_constants(t))
        if info.sigma_level is None or not (2 <= info.sigma_level <= 3) or vo(t) > 1:
            continue
        n = info.sigma_level
        outer, inner = decompose_sigma_n(t, n, "h")
        assert dotdagger_level(outer).sigma_level <= 1
        assert dotdagger_level(inner).pi_level <= n - 1
        assert vo(outer) <= 1 and vo(inner) <= 1
        assert exhaustive_check(t, substitute(outer, "h", inner), [3]) is None
        checked += 1
    assert checked >= 60


def _random_sigma_term(rng, depth):
    from relfrag.terms import (BOT, DI, ID, TOP, Comp, Dagger, Inter, Union)
    if depth == 0:
        return [Var("a"), BOT, TOP, ID, DI, DI][int(rng.integers(0, 6))]
    pick = int(rng.integers(0, 5))
    if pick == 0:
        other = _random_const(rng, depth - 1)
        mine = _random_sigma_term(rng, depth - 1)
        return Dagger(other, mine) if rng.random() < 0.5 else Dagger(mine, other)
    build = [Union, Inter, Comp, Comp][pick - 1]
    other = _random_const(rng, depth - 1)
    mine = _random_sigma_term(rng, depth - 1)
    return build(other, mine) if rng.random() < 0.5 else build(mine, other)


def _random_const(rng, depth):
    from relfrag.terms import BOT, DI, ID, TOP, Comp, Dagger, Inter, Union
    if depth == 0:
        return [BOT, TOP, ID, DI][int(rng.integers(0, 4))]
    pick = int(rng.integers(0, 4))
    build = [Union, Inter, Comp, Dagger][pick]
    return build(_random_const(rng, depth - 1), _random_const(rng, depth - 1))


def test_decompose_sigma_n_errors():
    with pytest.raises(NormalFormError):
        decompose_sigma_n(parse_term("a ; b"), 1, "h")
    with pytest.raises(NormalFormError):
        decompose_sigma_n(parse_term("a ; a"), 2, "h")
    with pytest.raises(NormalFormError):
        decompose_sigma_n(parse_term("a ; D"), 2, "a")


def test_complement_dual_examples():
    assert complement_dual(parse_term("a $ b")) == parse_term("a~ ; b~")
    assert complement_dual(parse_term("I")) == parse_term("D")
    assert complement_dual(parse_term("a~")) == Var("a")


def test_complement_dual_semantics():
    rng = np.random.default_rng(71)
    for _ in range(200):
        t = _random_term(rng, 3)
        info = dotdagger_level(t)
        if info.pi_level is None:
            continue
        rho = complement_dual(t)
        assert exhaustive_check(t, Compl(rho), [1, 2, 3]) is None
        rho_info = dotdagger_level(rho)
        assert rho_info.sigma_level <= max(info.pi_level, rho_info.sigma_level)
