import itertools
import random

import pytest

import nomre.automata as am
from nomre.automata import (
    Cda,
    CdaClass,
    Configuration,
    EPS,
    STAR,
    State,
    accept,
    accept_reference,
    cda_concat,
    cda_star,
    cda_union,
    class_of,
    enumerate_words,
    equiv_bounded,
    from_json,
    lab_close,
    lab_letter,
    lab_reg,
    lab_under,
    step,
    to_dot,
    to_json,
    validate,
    word_sort_key,
)
from nomre.compiler import compile_expr
from nomre.corpus import ALPHABET, lonet_automaton, lses_automaton
from nomre.errors import SchemaError, ValidationError
from nomre.expr import parse
from nomre.genexpr import random_nre
from nomre.nominal import Letter, chronicle, name, sys_name

r1, r2, r3 = name("r1"), name("r2"), name("r3")
A, B = Letter("a"), Letter("b")


def P(text):
    return parse(text, ALPHABET)


def test_validate_trivial():
    a = Cda((State("q0", 0),), "q0", ())
    assert validate(a).ok


def test_validate_star_delta():
    a = Cda((State("q0", 0), State("q1", 0)), "q0", (("q0", STAR, "q1"),))
    rep = validate(a)
    assert not rep.ok
    assert any("must be 1" in str(v) for v in rep.violations)


def test_validate_final_regcount():
    a = Cda((State("q0", 0), State("q1", 1, True)), "q0", (("q0", STAR, "q1"),))
    rep = validate(a)
    assert not rep.ok


def test_validate_index_range():
    a = Cda(
        (State("q0", 0), State("q1", 1), State("q2", 1)),
        "q0",
        (("q0", STAR, "q1"), ("q1", lab_reg(2), "q2")),
    )
    assert not validate(a).ok


def test_class_of_lses_is_ca():
    info = class_of(lses_automaton())
    assert info.tag is CdaClass.CA
    assert not info.deterministic


def test_class_of_non_top_close_is_not_ca():
    a = Cda(
        (
            State("q0", 0),
            State("q1", 1),
            State("q2", 2),
            State("q3", 1),
            State("q4", 0, True),
        ),
        "q0",
        (
            ("q0", STAR, "q1"),
            ("q1", STAR, "q2"),
            ("q2", lab_close(1), "q3"),
            ("q3", lab_close(1), "q4"),
        ),
    )
    assert class_of(a).tag is CdaClass.DA


def test_class_of_plain_automaton():
    a = Cda(
        (State("q0", 0), State("q1", 0, True)),
        "q0",
        (("q0", lab_letter("a"), "q1"),),
    )
    assert class_of(a).tag is CdaClass.A


def test_step_star_candidates():
    a = lses_automaton()
    w = (A, B, r1)
    c = Configuration("q2", 2, ())
    succs = step(a, c, w)
    # one branch per unread-suffix name plus one canonical fresh name
    assert {s.state for s in succs} == {"q3"}
    allocated = {s.extant[0].cv for s in succs}
    assert r1 in allocated
    assert any(x.kind == 1 for x in allocated)  # a reserved machine name
    for s in succs:
        assert len(s.extant) == 1
        assert s.extant[0].hist == (s.extant[0].cv,)


def test_step_under_blocks_history():
    a = lses_automaton()
    w = (r1,)
    c = Configuration("q3", 0, (chronicle([r2, r1], r2),))
    # the head name is already in the register's chronicle: no consuming move
    assert [s for s in step(a, c, w) if s.pos == 1] == []
    c2 = Configuration("q3", 0, (chronicle([r2], r2),))
    succs = [s for s in step(a, c2, w) if s.pos == 1]
    assert [s.state for s in succs] == ["q3"]
    s = succs[0]
    assert s.extant[0].cv is r1
    assert s.extant[0].hist == (r2, r1)


def test_step_close_moves_top_value():
    a = Cda(
        (State("q0", 0), State("p2", 2), State("p1", 1)),
        "q0",
        (("p2", lab_close(2), "p1"),),
    )
    na, nb = name("a"), name("b")
    # allocation order a then b, so b sits in both histories
    c = Configuration("p2", 0, (chronicle([na, nb], na), chronicle([nb], nb)))
    # close on the top register is a pure pop
    (s,) = step(a, c, ())
    assert s.state == "p1"
    assert [x.cv for x in s.extant] == [na]
    # close below the top moves the popped current value into that register
    a2 = Cda(
        (State("q0", 0), State("p2", 2), State("p1", 1)),
        "q0",
        (("p2", lab_close(1), "p1"),),
    )
    (s2,) = step(a2, c, ())
    assert [x.cv for x in s2.extant] == [nb]
    assert s2.extant[0].hist == (na, nb)


def test_accept_lses_words():
    a = lses_automaton()
    assert accept(a, (A, B, r1, r2, r3))
    assert not accept(a, (A, B, r1, r1))
    assert accept(a, (A, B))
    assert not accept(a, (A, r1))


def test_accept_lonet_reuse():
    a = lonet_automaton()
    p0, q0 = name("p0"), name("q0")
    w = (A, B, r1, p0, q0, r2, r2, q0)  # second p equals the current run name
    assert not accept(a, w)
    w2 = (A, B, r1, p0, q0, r2, p0, q0)  # reuse of p0 across runs is fine
    assert accept(a, w2)
    w3 = (A, B, r1, p0, q0, p0, p0, q0)  # run names must be globally fresh
    assert not accept(a, w3)


def test_enumerate_one_and_zero(pool3):
    assert enumerate_words(compile_expr(P("1")), pool3, 2) == {()}
    assert enumerate_words(compile_expr(P("0")), pool3, 2) == set()


def test_enumerate_successive_distinct_counts(pool3):
    a = compile_expr(P("<$m.(<$n.$n>$m)*>"))
    words = enumerate_words(a, pool3, 3)
    exact3 = {w for w in words if len(w) == 3}
    brute = {
        w
        for w in itertools.product(pool3, repeat=3)
        if all(w[i] is not w[i + 1] for i in range(2))
    }
    assert exact3 == brute
    assert len(exact3) == 12


def test_equiv_bounded_self_and_trivial(pool3):
    a = compile_expr(P("1"))
    z = compile_expr(P("0"))
    assert equiv_bounded(a, a, pool3, 3) is None
    assert equiv_bounded(a, z, pool3, 3) == ()


def test_equiv_bounded_reports_least_word(pool3):
    a = compile_expr(P("a b"))
    b = compile_expr(P("a b + a"))
    assert equiv_bounded(a, b, pool3, 3) == (A,)


def test_sum_against_union_construction(rng, pool3):
    from nomre.expr import Sum

    for _ in range(30):
        e1 = random_nre(rng, size=4)
        e2 = random_nre(rng, size=4)
        lhs = compile_expr(Sum(e1, e2))
        rhs = cda_union(compile_expr(e1), compile_expr(e2))
        assert equiv_bounded(lhs, rhs, pool3, 4) is None


def test_json_roundtrip_random(rng, hand_automata):
    autos = list(hand_automata.values())
    for _ in range(100):
        autos.append(compile_expr(random_nre(rng, size=5)))
    for a in autos:
        b = from_json(to_json(a))
        assert b == a


def test_from_json_schema_errors():
    with pytest.raises(SchemaError):
        from_json("{")
    with pytest.raises(SchemaError):
        from_json('{"states": [], "initial": "q", "transitions": []}')
    with pytest.raises(SchemaError):
        from_json(
            '{"states": [{"id": "q", "regs": 0, "final": false}],'
            ' "initial": "q",'
            ' "transitions": [{"from": "q", "label": {"kind": "warp"}, "to": "q"}]}'
        )


def test_dot_single_node():
    a = Cda((State("q0", 0),), "q0", ())
    dot = to_dot(a)
    assert sum(1 for line in dot.splitlines() if "shape=circle" in line or "doublecircle" in line) == 1


def test_dot_lses_layout():
    dot = to_dot(lses_automaton())
    nodes = [l for l in dot.splitlines() if "shape=" in l and "point" not in l]
    ranks = [l for l in dot.splitlines() if "rank=same" in l]
    assert len(nodes) == 5
    assert len(ranks) == 2
    assert 'label="u1"' in dot and 'label="close1"' in dot and 'label="*"' in dot


def test_register_count_discipline_and_close_positions():
    # every explored configuration keeps |extant| = regcount(state); on the
    # chronicle automata the only closes taken are top closes
    for auto in (lses_automaton(), lonet_automaton()):
        sm = auto.state_map()
        w = (A, B, r1, name("p"), name("q"), r2, name("p2"), name("q2"))
        frontier = [Configuration(auto.initial, 0, ())]
        seen = set()
        steps = 0
        while frontier and steps < 4000:
            c = frontier.pop()
            key = (c.state, c.pos, tuple((x.cv, frozenset(x.hist)) for x in c.extant))
            if key in seen:
                continue
            seen.add(key)
            assert len(c.extant) == sm[c.state].regs
            for s in step(auto, c, w):
                steps += 1
                frontier.append(s)


def test_engine_agrees_with_reference(rng, pool3):
    for _ in range(15):
        e = random_nre(rng, size=4)
        a = compile_expr(e)
        for w in sorted(enumerate_words(a, pool3, 3), key=word_sort_key):
            assert accept_reference(a, w)
        for w in (
            (),
            (r1,),
            (A, r1),
            (r1, r1),
            (A, B),
            (r1, r2, r1),
        ):
            assert accept(a, w) == accept_reference(a, w)


def test_accept_invariant_under_fresh_sequence_shift(monkeypatch, pool3, corpus_exprs):
    # replacing the canonical fresh sequence by a disjoint one changes nothing
    a = compile_expr(corpus_exprs["succ_distinct"])
    base = enumerate_words(a, pool3, 3)
    orig = am.canonical_fresh

    def shifted(avoid):
        return orig(avoid | {sys_name(i) for i in range(40)})

    monkeypatch.setattr(am, "canonical_fresh", shifted)
    assert enumerate_words(a, pool3, 3) == base


def test_permutation_closure_of_acceptance(rng, pool3, corpus_exprs):
    from nomre.nominal import apply_perm_word, perm_from_lists

    extra = [name("f%d" % i) for i in range(3)]
    universe = list(pool3) + extra
    for key in ("lses", "succ_distinct", "diamond"):
        a = compile_expr(corpus_exprs[key])
        for w in sorted(enumerate_words(a, pool3, 4), key=word_sort_key):
            for _ in range(5):
                tgt = universe[:]
                rng.shuffle(tgt)
                p = perm_from_lists(universe, tgt)
                assert accept(a, apply_perm_word(p, w))
