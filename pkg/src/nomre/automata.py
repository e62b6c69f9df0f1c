"""Chronicle deallocating automata: model, run semantics, and serialization.

States carry a register count (their layer). Transition labels are eps,
letters, register reads, ``*`` (allocate a locally fresh name on top),
underlined reads (relative global freshness against one register's
chronicle), and ``close i`` (pop the top chronicle, moving its current
value into register i).

Runs work on configurations (state, input position, extant chronicle).
Freshness tests only ever use membership, so the run engine keeps each
chronicle's history as a set and collapses machine-chosen fresh names when
deciding whether a configuration was already visited; the input word's own
names are never collapsed.
"""

from dataclasses import dataclass
import enum
import json

from .errors import ResourceLimitError, SchemaError, ValidationError
from .nominal import Chronicle, Letter, Name, canonical_fresh, hcv


@dataclass(frozen=True, slots=True)
class Label:
    kind: str
    letter: Letter | None = None
    index: int | None = None

    def __repr__(self):
        if self.kind == "eps":
            return "eps"
        if self.kind == "letter":
            return self.letter.sym
        if self.kind == "reg":
            return "r%d" % self.index
        if self.kind == "star":
            return "*"
        if self.kind == "under":
            return "u%d" % self.index
        return "close%d" % self.index


EPS = Label("eps")
STAR = Label("star")


def lab_letter(s):
    return Label("letter", letter=s if isinstance(s, Letter) else Letter(s))


def lab_reg(i):
    return Label("reg", index=i)


def lab_under(i):
    return Label("under", index=i)


def lab_close(i):
    return Label("close", index=i)


@dataclass(frozen=True, slots=True)
class State:
    id: str
    regs: int
    final: bool = False


@dataclass(frozen=True)
class Cda:
    """A chronicle deallocating automaton. Immutable once built."""

    states: tuple
    initial: str
    transitions: tuple  # (from_id, Label, to_id)

    def state_map(self):
        return {s.id: s for s in self.states}

    def finals(self):
        return frozenset(s.id for s in self.states if s.final)

    def letters(self):
        return frozenset(l.letter for _, l, _ in self.transitions if l.kind == "letter")

    def max_regs(self):
        return max((s.regs for s in self.states), default=0)


class CdaClass(enum.Enum):
    A = "A#"
    CA = "CA#"
    DA = "DA#"
    CDA = "CDA#"


@dataclass(frozen=True)
class ClassInfo:
    tag: CdaClass
    deterministic: bool


@dataclass(frozen=True)
class Violation:
    msg: str
    transition: tuple | None = None

    def __str__(self):
        if self.transition is None:
            return self.msg
        f, l, t = self.transition
        return "%s [%s -%r-> %s]" % (self.msg, f, l, t)


@dataclass(frozen=True)
class Report:
    violations: tuple

    @property
    def ok(self):
        return not self.violations


_DELTA = {"star": 1, "close": -1, "eps": 0, "letter": 0, "reg": 0, "under": 0}


def validate(a):
    """Structural contract: register discipline and index ranges."""
    out = []
    sm = a.state_map()
    if len(sm) != len(a.states):
        out.append(Violation("duplicate state ids"))
    if a.initial not in sm:
        out.append(Violation("initial state %r missing" % a.initial))
    elif sm[a.initial].regs != 0:
        out.append(Violation("|q| = 0 required for the initial state"))
    for s in a.states:
        if s.final and s.regs != 0:
            out.append(Violation("|q| = 0 required for final state %s" % s.id))
        if s.regs < 0:
            out.append(Violation("negative register count at %s" % s.id))
    for tr in a.transitions:
        f, lab, t = tr
        if f not in sm or t not in sm:
            out.append(Violation("dangling endpoint", tr))
            continue
        want = sm[f].regs + _DELTA[lab.kind]
        if sm[t].regs != want:
            out.append(Violation("|q'| must be %d, is %d" % (want, sm[t].regs), tr))
        if lab.kind in ("reg", "under", "close"):
            if not 1 <= lab.index <= sm[f].regs:
                out.append(Violation("register index out of range", tr))
    return Report(tuple(out))


def class_of(a):
    """Least automaton class, plus the determinism flag.

    Chronicle automata never close below the top register; deallocating
    automata have no underlined reads at all.
    """
    rep = validate(a)
    if not rep.ok:
        raise ValidationError("invalid automaton: %s" % "; ".join(map(str, rep.violations)))
    sm = a.state_map()
    ca = all(l.index == sm[f].regs for f, l, _ in a.transitions if l.kind == "close")
    da = not any(l.kind == "under" for _, l, _ in a.transitions)
    if ca and da:
        tag = CdaClass.A
    elif ca:
        tag = CdaClass.CA
    elif da:
        tag = CdaClass.DA
    else:
        tag = CdaClass.CDA
    det = _deterministic(a, sm)
    return ClassInfo(tag, det)


def _deterministic(a, sm):
    from collections import Counter

    counts = Counter((f, l) for f, l, _ in a.transitions)
    if any(l.kind == "eps" for _, l in counts):
        return False
    # every possible label of every state must have exactly one successor
    letters = a.letters()
    for s in a.states:
        want = [lab_letter(x) for x in sorted(letters, key=lambda l: l.sym)]
        want += [lab_reg(i) for i in range(1, s.regs + 1)]
        want += [STAR]
        want += [lab_under(i) for i in range(1, s.regs + 1)]
        want += [lab_close(i) for i in range(1, s.regs + 1)]
        for lab in want:
            if counts.get((s.id, lab), 0) != 1:
                return False
    return True


# ------------------------------------------------------------- run engine

@dataclass(frozen=True, slots=True)
class Configuration:
    state: str
    pos: int
    extant: tuple  # of Chronicle, register order


_ANON = ("#",)  # sentinel for machine-chosen names in visited keys


class _Engine:
    """Shared machinery for accept/enumerate over one automaton."""

    def __init__(self, a):
        rep = validate(a)
        if not rep.ok:
            raise ValidationError("invalid automaton: %s" % "; ".join(map(str, rep.violations)))
        self.a = a
        self.sm = a.state_map()
        self.finals = a.finals()
        self.by_state = {s.id: {"eps": [], "star": [], "close": [], "letter": {}, "reg": {}, "under": {}} for s in a.states}
        for f, lab, t in a.transitions:
            slot = self.by_state[f]
            if lab.kind in ("eps", "star"):
                slot[lab.kind].append((lab, t))
            elif lab.kind == "close":
                slot["close"].append((lab.index, t))
            elif lab.kind == "letter":
                slot["letter"].setdefault(lab.letter, []).append(t)
            else:
                slot[lab.kind].setdefault(lab.index, []).append(t)

    def cap(self, relevant):
        return 10 * max(1, len(self.a.states)) * (self.a.max_regs() + 1) * (len(relevant) + 2)

    def key(self, state, regs, relevant):
        return (
            state,
            tuple(
                (cv if cv in relevant else _ANON, hist & relevant)
                for cv, hist in regs
            ),
        )

    def closure(self, configs, relevant, star_names):
        """All configs reachable via non-consuming moves (eps, *, close).

        ``star_names`` are the data-dependent candidates for a fresh
        allocation; one canonical machine name is always added.
        """
        out = {}
        frontier = []
        for cfg in configs:
            k = self.key(cfg[0], cfg[1], relevant)
            if k not in out:
                out[k] = cfg
                frontier.append(cfg)
        depth = 0
        cap = self.cap(relevant)
        while frontier:
            depth += 1
            if depth > cap:
                raise ResourceLimitError("non-consuming move chain exceeded %d steps" % cap)
            nxt = []
            for state, regs in frontier:
                slot = self.by_state[state]
                for _, t in slot["eps"]:
                    self._push((t, regs), out, nxt, relevant)
                if slot["star"]:
                    cvs = frozenset(cv for cv, _ in regs)
                    pool = [n for n in star_names if n not in cvs]
                    seen_names = set(cvs)
                    for _, h in regs:
                        seen_names |= h
                    pool.append(canonical_fresh(seen_names))
                    for _, t in slot["star"]:
                        for n in pool:
                            nregs = tuple((cv, h | {n}) for cv, h in regs) + ((n, frozenset((n,))),)
                            self._push((t, nregs), out, nxt, relevant)
                for i, t in slot["close"]:
                    if not regs or i > len(regs):
                        continue
                    top_cv = regs[-1][0]
                    nregs = regs[:-1]
                    if i <= len(nregs):
                        nregs = nregs[: i - 1] + ((top_cv, nregs[i - 1][1]),) + nregs[i:]
                    self._push((t, nregs), out, nxt, relevant)
            frontier = nxt
        return out

    def _push(self, cfg, out, frontier, relevant):
        k = self.key(cfg[0], cfg[1], relevant)
        if k not in out:
            out[k] = cfg
            frontier.append(cfg)

    def consume(self, configs, token):
        """One-symbol successors for every config in the macro state."""
        nxt = []
        if isinstance(token, Letter):
            for state, regs in configs:
                for t in self.by_state[state]["letter"].get(token, ()):
                    nxt.append((t, regs))
            return nxt
        for state, regs in configs:
            slot = self.by_state[state]
            for i, targets in slot["reg"].items():
                if i <= len(regs) and regs[i - 1][0] is token:
                    for t in targets:
                        nxt.append((t, regs))
            if slot["under"]:
                cvs = frozenset(cv for cv, _ in regs)
                if token not in cvs:
                    for i, targets in slot["under"].items():
                        if i <= len(regs) and token not in regs[i - 1][1]:
                            nregs = tuple(
                                (token if j == i - 1 else cv, h | {token})
                                for j, (cv, h) in enumerate(regs)
                            )
                            for t in targets:
                                nxt.append((t, nregs))
        return nxt

    def accepting(self, configs):
        return any(state in self.finals and not regs for state, regs in configs.values())


def accept(a, w):
    """Whether some run consumes all of w and ends final with no registers."""
    eng = _Engine(a)
    w = tuple(w)
    relevant = frozenset(t for t in w if isinstance(t, Name))
    macro = eng.closure([(a.initial, ())], relevant, _suffix_names(w, 0))
    for pos in range(len(w)):
        stepped = eng.consume(macro.values(), w[pos])
        if not stepped:
            return False
        macro = eng.closure(stepped, relevant, _suffix_names(w, pos + 1))
    return eng.accepting(macro)


def _suffix_names(w, pos):
    out = []
    seen = set()
    for t in w[pos:]:
        if isinstance(t, Name) and t not in seen:
            seen.add(t)
            out.append(t)
    return tuple(out)


def enumerate_words(a, pool, maxlen):
    """All accepted words over the letters of ``a`` plus ``pool``, length <= maxlen."""
    pool = tuple(pool)
    if len(set(pool)) != len(pool):
        raise ValueError("pool must be repetition-free")
    eng = _Engine(a)
    relevant = frozenset(pool)
    tokens = sorted(a.letters(), key=lambda l: l.sym) + list(pool)
    memo = {}

    def go(macro, remaining):
        mk = (frozenset(macro.keys()), remaining)
        got = memo.get(mk)
        if got is not None:
            return got
        out = set()
        if eng.accepting(macro):
            out.add(())
        if remaining > 0:
            for tok in tokens:
                stepped = eng.consume(macro.values(), tok)
                if not stepped:
                    continue
                nxt = eng.closure(stepped, relevant, pool)
                for suf in go(nxt, remaining - 1):
                    out.add((tok,) + suf)
        memo[mk] = frozenset(out)
        return memo[mk]

    start = eng.closure([(a.initial, ())], relevant, pool)
    return set(go(start, maxlen))


def word_sort_key(w):
    return (len(w), tuple((0, t.sym) if isinstance(t, Letter) else (1,) + t.sort_key() for t in w))


def equiv_bounded(a, b, pool, maxlen):
    """None when the bounded enumerations agree, else the least differing word."""
    wa = enumerate_words(a, pool, maxlen)
    wb = enumerate_words(b, pool, maxlen)
    diff = wa ^ wb
    if not diff:
        return None
    return min(diff, key=word_sort_key)


# ----------------------------------------------------- reference semantics

def step(a, c, w):
    """Single-move successors of a configuration, per the move relation.

    Fresh allocations branch over the names of the unread suffix plus one
    canonical machine name. Histories are kept in order (deduplicated),
    so results are directly comparable in tests.
    """
    sm = a.state_map()
    if c.state not in sm:
        raise ValidationError("unknown state %r" % c.state)
    if len(c.extant) != sm[c.state].regs:
        raise ValidationError("register count mismatch in configuration")
    w = tuple(w)
    out = []
    head = w[c.pos] if c.pos < len(w) else None
    vals = hcv(c.extant)
    for f, lab, t in a.transitions:
        if f != c.state:
            continue
        if lab.kind == "eps":
            out.append(Configuration(t, c.pos, c.extant))
        elif lab.kind == "letter":
            if head is lab.letter:
                out.append(Configuration(t, c.pos + 1, c.extant))
        elif lab.kind == "reg":
            if head is not None and head is vals[lab.index - 1]:
                out.append(Configuration(t, c.pos + 1, c.extant))
        elif lab.kind == "under":
            i = lab.index
            if (
                isinstance(head, Name)
                and head not in vals
                and head not in c.extant[i - 1].hist
            ):
                ext = tuple(
                    Chronicle(ch.hist + (head,), head if j == i - 1 else ch.cv).dedup()
                    for j, ch in enumerate(c.extant)
                )
                out.append(Configuration(t, c.pos + 1, ext))
        elif lab.kind == "star":
            cands = [n for n in _suffix_names(w, c.pos) if n not in vals]
            avoid = set(vals)
            for ch in c.extant:
                avoid.update(ch.hist)
            avoid.update(_suffix_names(w, 0))
            cands.append(canonical_fresh(avoid))
            for n in cands:
                ext = tuple(Chronicle(ch.hist + (n,), ch.cv).dedup() for ch in c.extant)
                ext += (Chronicle((n,), n),)
                out.append(Configuration(t, c.pos, ext))
        elif lab.kind == "close":
            i = lab.index
            if not c.extant or i > len(c.extant):
                continue
            top_cv = c.extant[-1].cv
            rest = c.extant[:-1]
            if i <= len(rest):
                rest = rest[: i - 1] + (Chronicle(rest[i - 1].hist, top_cv),) + rest[i:]
            out.append(Configuration(t, c.pos, rest))
    return out


def accept_reference(a, w):
    """accept() recomputed naively on top of step(); test oracle only."""
    rep = validate(a)
    if not rep.ok:
        raise ValidationError("invalid automaton")
    w = tuple(w)
    finals = a.finals()
    seen = set()
    stack = [Configuration(a.initial, 0, ())]
    budget = 200000
    while stack:
        budget -= 1
        if budget < 0:
            raise ResourceLimitError("reference search exceeded its budget")
        c = stack.pop()
        key = (c.state, c.pos, tuple((ch.cv, frozenset(ch.hist)) for ch in c.extant))
        if key in seen:
            continue
        seen.add(key)
        if c.state in finals and c.pos == len(w) and not c.extant:
            return True
        stack.extend(step(a, c, w))
    return False


# ------------------------------------------------------------ composition

def _relabel(a, prefix):
    states = tuple(State(prefix + s.id, s.regs, s.final) for s in a.states)
    trs = tuple((prefix + f, l, prefix + t) for f, l, t in a.transitions)
    return Cda(states, prefix + a.initial, trs)


def cda_union(a, b):
    """Closed-level sum construction: fresh initial with eps to both."""
    a = _relabel(a, "L.")
    b = _relabel(b, "R.")
    init = State("u0", 0)
    states = (init,) + a.states + b.states
    trs = (("u0", EPS, a.initial), ("u0", EPS, b.initial)) + a.transitions + b.transitions
    return Cda(states, "u0", trs)


def cda_concat(a, b):
    a = _relabel(a, "L.")
    b = _relabel(b, "R.")
    afin = a.finals()
    states = tuple(State(s.id, s.regs, False) for s in a.states) + b.states
    trs = a.transitions + tuple((f, EPS, b.initial) for f in sorted(afin)) + b.transitions
    return Cda(states, a.initial, trs)


def cda_star(a):
    a = _relabel(a, "S.")
    afin = a.finals()
    hub = State("s0", 0, True)
    states = (hub,) + tuple(State(s.id, s.regs, False) for s in a.states)
    trs = (("s0", EPS, a.initial),) + a.transitions + tuple(
        (f, EPS, "s0") for f in sorted(afin)
    )
    return Cda(states, "s0", trs)


# ----------------------------------------------------------- serialization

def to_json(a):
    doc = {
        "states": [{"id": s.id, "regs": s.regs, "final": s.final} for s in a.states],
        "initial": a.initial,
        "transitions": [
            {"from": f, "label": _label_doc(l), "to": t} for f, l, t in a.transitions
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def _label_doc(l):
    d = {"kind": l.kind}
    if l.letter is not None:
        d["letter"] = l.letter.sym
    if l.index is not None:
        d["index"] = l.index
    return d


def from_json(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError("not valid JSON: %s" % e) from e
    try:
        states = tuple(
            State(str(s["id"]), int(s["regs"]), bool(s.get("final", False)))
            for s in doc["states"]
        )
        initial = str(doc["initial"])
        trs = []
        for t in doc["transitions"]:
            lab = t["label"]
            kind = lab["kind"]
            if kind == "eps":
                l = EPS
            elif kind == "star":
                l = STAR
            elif kind == "letter":
                l = lab_letter(str(lab["letter"]))
            elif kind in ("reg", "under", "close"):
                l = Label(kind, index=int(lab["index"]))
            else:
                raise SchemaError("unknown label kind %r" % kind)
            trs.append((str(t["from"]), l, str(t["to"])))
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaError("malformed automaton document: %s" % e) from e
    a = Cda(states, initial, tuple(trs))
    rep = validate(a)
    if not rep.ok:
        raise SchemaError("document violates automaton contract: %s" % "; ".join(map(str, rep.violations)))
    return a


def to_dot(a):
    """Graphviz rendering; states of one layer share a rank."""
    lines = ["digraph cda {", "  rankdir=LR;", '  hidden [shape=point, style=invis];']
    layers = {}
    for s in a.states:
        layers.setdefault(s.regs, []).append(s)
    for k in sorted(layers):
        ids = " ".join('"%s";' % s.id for s in layers[k])
        lines.append("  { rank=same; %s }" % ids)
    for s in a.states:
        shape = "doublecircle" if s.final else "circle"
        lines.append('  "%s" [shape=%s, label="%s|%d"];' % (s.id, shape, s.id, s.regs))
    lines.append('  hidden -> "%s";' % a.initial)
    for f, l, t in a.transitions:
        lines.append('  "%s" -> "%s" [label="%r"];' % (f, t, l))
    lines.append("}")
    return "\n".join(lines)
