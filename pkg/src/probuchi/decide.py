"""Decision procedures: NBA emptiness/complementation/universality, monitor
subset/monoid procedures, almost-sure decisions, bounded witness search.

Every nonempty or non-universal answer ships a certificate that is
re-verified by an independent engine (exact lasso acceptance or NBA lasso
membership) before being returned; a failed re-verification raises
:class:`CertificationError` instead of silently answering.

Long searches accept a cooperative ``cancel`` callback (return True to stop,
raises :class:`SearchCancelled`) and an optional ``progress`` callback that
receives short status strings.  All functions are pure; deterministic
tie-breaking (shortest first, then symbol declaration order) makes outputs
reproducible.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .core import (
    Automaton,
    AutomatonError,
    BuchiAcceptance,
    LassoWord,
    ResourceLimitError,
    all_words,
    require_valid,
)
from .construct import complement_to_fpm, hpba_to_nba
from .graphs import tarjan_sccs
from .markov import (
    Distribution,
    final_passage_matrix,
    lasso_acceptance,
    word_matrix,
)

__all__ = [
    "SubsetWitness",
    "AsymptoticWitness",
    "BooleanMatrix",
    "LassoLowerBound",
    "CertificationError",
    "SearchCancelled",
    "nba_lasso_member",
    "nba_emptiness",
    "nba_complement",
    "nba_universality",
    "hpba_probable_empty",
    "hpba_probable_universal",
    "fpm_positive_empty",
    "fpm_positive_universal",
    "almost_sure_empty",
    "almost_sure_universal",
    "pba_positive_nonempty_bounded",
    "verify_subset_witness",
    "verify_asymptotic_witness",
    "acceptance_lower_bound",
    "containment_refute",
    "transition_monoid",
]

Cancel = Callable[[], bool] | None
Progress = Callable[[str], None] | None

MONOID_CAP_ENV = "PROBUCHI_MONOID_CAP"
COMPLEMENT_CAP_ENV = "PROBUCHI_COMPLEMENT_CAP"


class CertificationError(AutomatonError):
    """A witness failed its independent re-verification (internal error)."""


class SearchCancelled(AutomatonError):
    """A cooperative cancellation callback stopped a long search."""


def _monoid_cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    return int(os.environ.get(MONOID_CAP_ENV, 10**6))


def _complement_cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    return int(os.environ.get(COMPLEMENT_CAP_ENV, 10))


def _check_cancel(cancel: Cancel) -> None:
    if cancel is not None and cancel():
        raise SearchCancelled("search cancelled by caller")


@dataclass(frozen=True)
class SubsetWitness:
    """Certificate for nonempty positive monitor semantics.

    ``u`` reaches the state set with positive probability and ``v`` keeps
    every state of the set inside the set with probability one, so the word
    u v^omega survives forever with probability at least delta_u(qs, C).
    """

    states: frozenset[str]
    u: tuple[str, ...]
    v: tuple[str, ...]

    def lasso(self) -> LassoWord:
        return LassoWord(self.u, self.v).normalized()


@dataclass(frozen=True)
class AsymptoticWitness:
    """Bounded certificate that a PBA accepts some word with probability > x.

    Segment j keeps the set ``states`` inside itself with probability
    > 1 - 2^-j while touching a final state, endpoints included; chaining u
    with the segments yields a word accepted with positive probability.
    """

    states: frozenset[str]
    u: tuple[str, ...]
    segments: tuple[tuple[str, ...], ...]
    start_index: int = 1


@dataclass(frozen=True)
class BooleanMatrix:
    """Support relation over Q x Q; element of the finite transition monoid."""

    states: tuple[str, ...]
    rows: tuple[int, ...]  # bitmask of successors per state, by declaration index

    def entry(self, q: str, q2: str) -> bool:
        i, j = self.states.index(q), self.states.index(q2)
        return bool(self.rows[i] >> j & 1)

    def successors(self, q: str) -> frozenset[str]:
        row = self.rows[self.states.index(q)]
        return frozenset(t for j, t in enumerate(self.states) if row >> j & 1)


@dataclass(frozen=True)
class LassoLowerBound:
    """Certified lower bound extracted from an asymptotic witness.

    ``asymptotic`` is True when the last segment returns to the witness set
    with probability exactly one, in which case ``value`` really bounds the
    acceptance probability of ``lasso``; otherwise ``value`` only bounds the
    finite-prefix event of touching finals during every listed segment.
    """

    value: Fraction
    asymptotic: bool
    lasso: LassoWord


# ---------------------------------------------------------------------------
# Shared search helpers


def _sym_key(aut: Automaton) -> dict[str, int]:
    return {a: i for i, a in enumerate(aut.alphabet)}


def _word_key(aut: Automaton, word: Sequence[str]) -> tuple:
    sk = _sym_key(aut)
    return (len(word), tuple(sk[a] for a in word))


def _lex_reach_words(
    aut: Automaton, start: str, at_least_one: bool
) -> dict[str, tuple[str, ...]]:
    """Shortest, then lexicographically smallest, word reaching each state.

    Words are compared by symbol declaration order.  With ``at_least_one``
    the empty word does not count, so the start state itself needs a cycle
    to appear in the result.
    """
    words: dict[str, tuple[str, ...]] = {}
    if at_least_one:
        layer: list[tuple[str, tuple[str, ...]]] = []
        for a in aut.alphabet:
            for t in aut.successors(start, a):
                if t not in words:
                    words[t] = (a,)
                    layer.append((t, (a,)))
    else:
        words[start] = ()
        layer = [(start, ())]
    while layer:
        nxt: list[tuple[str, tuple[str, ...]]] = []
        for q, w in layer:
            for a in aut.alphabet:
                for t in aut.successors(q, a):
                    if t not in words:
                        words[t] = w + (a,)
                        nxt.append((t, w + (a,)))
        layer = nxt
    return words


def _lex_cycle_word(aut: Automaton, f: str) -> tuple[str, ...] | None:
    """Shortest lex-smallest nonempty word labelling a path from f back to f."""
    words: dict[str, tuple[str, ...]] = {}
    layer: list[tuple[str, tuple[str, ...]]] = []
    for a in aut.alphabet:
        for t in aut.successors(f, a):
            if t == f:
                return (a,)
            if t not in words:
                words[t] = (a,)
                layer.append((t, (a,)))
    while layer:
        nxt: list[tuple[str, tuple[str, ...]]] = []
        for q, w in layer:
            for a in aut.alphabet:
                for t in aut.successors(q, a):
                    if t == f:
                        return w + (a,)
                    if t not in words:
                        words[t] = w + (a,)
                        nxt.append((t, w + (a,)))
        layer = nxt
    return None


def _lassos(
    alphabet: tuple[str, ...], stem_bound: int, cycle_bound: int
) -> Iterator[LassoWord]:
    """All lassos with |stem| <= stem_bound, 1 <= |cycle| <= cycle_bound."""
    for u in all_words(alphabet, 0, stem_bound):
        for v in all_words(alphabet, 1, cycle_bound):
            yield LassoWord(u, v)


# ---------------------------------------------------------------------------
# NBA procedures


def nba_lasso_member(a: Automaton, w: LassoWord) -> bool:
    """Does some run on ``w`` visit a final state infinitely often?

    Decided on the graph over (state, cycle position): membership holds iff
    a final-state node inside a cycle of that graph is reachable from the
    stem's successor set.
    """
    if a.role not in ("nba", "dra"):
        raise AutomatonError("lasso membership needs a nondeterministic automaton")
    require_valid(a)
    a.check_symbols(w.stem + w.cycle)
    current = {a.initial}
    for s in w.stem:
        current = {t for q in current for t in a.successors(q, s)}
    if not current:
        return False
    length = len(w.cycle)
    start = [(q, 0) for q in current]
    seen = set(start)
    stack = list(start)
    edges: dict[tuple[str, int], list[tuple[str, int]]] = {}
    while stack:
        q, i = stack.pop()
        outs = []
        for t in a.successors(q, w.cycle[i]):
            node = (t, (i + 1) % length)
            outs.append(node)
            if node not in seen:
                seen.add(node)
                stack.append(node)
        edges[(q, i)] = outs
    finals = a.final_states
    nodes = sorted(seen, key=lambda n: (n[1], a.index[n[0]]))
    for comp in tarjan_sccs(nodes, edges):
        comp_set = set(comp)
        nontrivial = len(comp) > 1 or any(
            n in edges[n] for n in comp
        )
        if nontrivial and any(q in finals for q, _ in comp):
            return True
    return False


def nba_emptiness(a: Automaton) -> LassoWord | None:
    """None when the language is empty, else a witness lasso.

    The witness reaches some final state on the stem and loops on the cycle;
    among all finals the (stem length + cycle length, stem, cycle) minimum
    under symbol declaration order is returned, re-verified by
    :func:`nba_lasso_member`.
    """
    if a.role != "nba":
        raise AutomatonError("emptiness needs an nba")
    require_valid(a)
    reach = _lex_reach_words(a, a.initial, at_least_one=False)
    best: tuple | None = None
    best_w: LassoWord | None = None
    for f in a.states:
        if f not in a.final_states or f not in reach:
            continue
        cyc = _lex_cycle_word(a, f)
        if cyc is None:
            continue
        u = reach[f]
        key = (
            len(u) + len(cyc),
            len(u),
            _word_key(a, u),
            _word_key(a, cyc),
        )
        if best is None or key < best:
            best = key
            best_w = LassoWord(u, cyc)
    if best_w is None:
        return None
    if not nba_lasso_member(a, best_w):
        raise CertificationError(f"emptiness witness {best_w} failed membership")
    return best_w


# -- rank-based complementation


def nba_complement(
    a: Automaton,
    cap: int | None = None,
    state_cap: int = 50_000,
    branch_cap: int = 50_000,
) -> Automaton:
    """Complement NBA via level rankings bounded by 2(|Q| - |F|).

    Classical rank-based construction: states pair a level ranking of the
    reachable subset with an obligation set tracking which even-ranked runs
    still owe a visit to an odd rank; acceptance is an empty obligation set.
    The result is trimmed and quotiented by forward bisimulation.  Inputs
    larger than the cap, or explorations exceeding the state or branching
    caps, raise :class:`ResourceLimitError` naming the cap to raise.
    """
    if a.role != "nba":
        raise AutomatonError("complementation needs an nba")
    require_valid(a)
    the_cap = _complement_cap(cap)
    n = len(a.states)
    if n > the_cap:
        raise ResourceLimitError(
            f"{n} states exceed the complementation cap {the_cap}; raise it via "
            f"--complement-cap or {COMPLEMENT_CAP_ENV}",
            cap_name=COMPLEMENT_CAP_ENV,
            cap_value=the_cap,
        )
    finals = a.final_states
    r_max = 2 * (n - len(finals))

    StateT = tuple[tuple[tuple[str, int], ...], frozenset[str]]
    init: StateT = (((a.initial, r_max),), frozenset())
    names: dict[StateT, str] = {init: "kv0"}
    order: list[StateT] = [init]
    transitions: dict[tuple[str, str], list[str]] = {}
    queue = [init]
    while queue:
        state = queue.pop(0)
        ranking, owing = state
        g = dict(ranking)
        for sym in a.alphabet:
            succ_bound: dict[str, int] = {}
            for q, r in g.items():
                for t in a.successors(q, sym):
                    succ_bound[t] = min(succ_bound.get(t, r_max), r)
            dom = sorted(succ_bound, key=a.index.__getitem__)
            choices: list[list[int]] = []
            count = 1
            for t in dom:
                allowed = [
                    r
                    for r in range(succ_bound[t] + 1)
                    if t not in finals or r % 2 == 0
                ]
                choices.append(allowed)
                count *= len(allowed)
                if count > branch_cap:
                    raise ResourceLimitError(
                        f"rank branching exceeds {branch_cap} at one transition; "
                        f"raise branch_cap (input likely too large for the "
                        f"rank-based method)",
                        cap_name="branch_cap",
                        cap_value=branch_cap,
                    )
            owing_succ = {
                t for q in owing for t in a.successors(q, sym) if t in succ_bound
            }
            targets = []
            for combo in itertools.product(*choices):
                g2 = tuple(zip(dom, combo))
                even = {t for t, r in g2 if r % 2 == 0}
                if owing:
                    o2 = frozenset(owing_succ & even)
                else:
                    o2 = frozenset(even)
                nxt: StateT = (g2, o2)
                if nxt not in names:
                    if len(names) >= state_cap:
                        raise ResourceLimitError(
                            f"complement exploration exceeds {state_cap} states; "
                            f"raise state_cap",
                            cap_name="state_cap",
                            cap_value=state_cap,
                        )
                    names[nxt] = f"kv{len(names)}"
                    order.append(nxt)
                    queue.append(nxt)
                targets.append(names[nxt])
            transitions[(names[state], sym)] = targets
    out = Automaton(
        name=f"compl({a.name})",
        role="nba",
        alphabet=a.alphabet,
        states=tuple(names[s] for s in order),
        initial="kv0",
        acceptance=BuchiAcceptance(
            frozenset(names[s] for s in order if not s[1])
        ),
        transitions={k: tuple(v) for k, v in transitions.items()},
    )
    return _reduce_nba(out)


def _reduce_nba(a: Automaton) -> Automaton:
    """Trim to states on some accepting run and quotient by forward bisimulation."""
    adjacency = a.support_adjacency()
    comps = tarjan_sccs(a.states, adjacency)
    comp_of = {q: i for i, comp in enumerate(comps) for q in comp}
    finals = a.final_states
    good = set()
    for i, comp in enumerate(comps):
        nontrivial = len(comp) > 1 or comp[0] in adjacency.get(comp[0], ())
        if nontrivial and any(q in finals for q in comp):
            good.add(i)
    live: set[str] = set()
    changed = True
    while changed:
        changed = False
        for q in a.states:
            if q in live:
                continue
            if comp_of[q] in good or any(t in live for t in adjacency[q]):
                live.add(q)
                changed = True
    # forward reachability within live states
    keep: set[str] = set()
    if a.initial in live:
        stack = [a.initial]
        keep.add(a.initial)
        while stack:
            q = stack.pop()
            for sym in a.alphabet:
                for t in a.successors(q, sym):
                    if t in live and t not in keep:
                        keep.add(t)
                        stack.append(t)
    if not keep:
        return Automaton(
            name=a.name,
            role="nba",
            alphabet=a.alphabet,
            states=("kv0",),
            initial="kv0",
            acceptance=BuchiAcceptance(frozenset()),
            transitions={},
        )
    kept = [q for q in a.states if q in keep]
    # partition refinement: blocks must stay acceptance-pure
    block_of = {q: (q in finals) for q in kept}
    while True:
        sig = {
            q: (
                block_of[q],
                tuple(
                    frozenset(block_of[t] for t in a.successors(q, sym) if t in keep)
                    for sym in a.alphabet
                ),
            )
            for q in kept
        }
        new_ids: dict = {}
        new_block = {}
        for q in kept:
            new_block[q] = new_ids.setdefault(sig[q], len(new_ids))
        if len(new_ids) == len(set(block_of.values())):
            block_of = new_block
            break
        block_of = new_block
    # name blocks in BFS discovery order from the initial block
    rep: dict[int, str] = {}
    for q in kept:
        rep.setdefault(block_of[q], q)
    naming: dict[int, str] = {}
    bfs = [block_of[a.initial]]
    naming[block_of[a.initial]] = "kv0"
    i = 0
    while bfs:
        b = bfs.pop(0)
        q = rep[b]
        for sym in a.alphabet:
            for t in a.successors(q, sym):
                if t in keep and block_of[t] not in naming:
                    i += 1
                    naming[block_of[t]] = f"kv{i}"
                    bfs.append(block_of[t])
    # unreachable blocks cannot occur (kept set is reachable)
    transitions: dict[tuple[str, str], tuple[str, ...]] = {}
    for q in kept:
        src = naming[block_of[q]]
        for sym in a.alphabet:
            targets = {
                naming[block_of[t]] for t in a.successors(q, sym) if t in keep
            }
            if targets:
                prev = set(transitions.get((src, sym), ()))
                transitions[(src, sym)] = tuple(sorted(prev | targets))
    final_blocks = frozenset(
        naming[block_of[q]] for q in kept if q in finals
    )
    states = tuple(sorted(naming.values(), key=lambda s: int(s[2:])))
    return Automaton(
        name=a.name,
        role="nba",
        alphabet=a.alphabet,
        states=states,
        initial="kv0",
        acceptance=BuchiAcceptance(final_blocks),
        transitions=transitions,
    )


# -- transition profiles (Ramsey universality)


@dataclass(frozen=True)
class _Profile:
    reach: tuple[int, ...]  # bitmask rows: path exists
    fin: tuple[int, ...]  # bitmask rows: path exists through a final state


def _profile_compose(p: _Profile, q: _Profile) -> _Profile:
    n = len(p.reach)
    reach = []
    fin = []
    for i in range(n):
        r = 0
        f = 0
        m = p.reach[i]
        while m:
            j = (m & -m).bit_length() - 1
            m &= m - 1
            r |= q.reach[j]
            f |= q.fin[j]
        m = p.fin[i]
        while m:
            j = (m & -m).bit_length() - 1
            m &= m - 1
            f |= q.reach[j]
        reach.append(r)
        fin.append(f)
    return _Profile(tuple(reach), tuple(fin))


def _symbol_profiles(a: Automaton) -> dict[str, _Profile]:
    idx = a.index
    finals = a.final_states
    out = {}
    for sym in a.alphabet:
        reach = []
        fin = []
        for q in a.states:
            r = 0
            f = 0
            for t in a.successors(q, sym):
                bit = 1 << idx[t]
                r |= bit
                if q in finals or t in finals:
                    f |= bit
            reach.append(r)
            fin.append(f)
        out[sym] = _Profile(tuple(reach), tuple(fin))
    return out


def nba_universality(
    a: Automaton,
    probe_bound: int = 3,
    monoid_cap: int | None = None,
    cancel: Cancel = None,
    progress: Progress = None,
) -> LassoWord | None:
    """None when the NBA accepts every word, else a rejected counterexample.

    A bounded lasso search runs first as a fast path.  The complete decision
    enumerates the finite monoid of transition profiles (reachability with
    and without touching a final state) and checks every linked pair
    (U, V idempotent, UV = U): the language is universal iff each such pair
    admits a final-touching loop, and a failing pair yields the rejected
    lasso word(U) word(V)^omega.  The profile monoid is capped by the shared
    monoid cap.
    """
    if a.role != "nba":
        raise AutomatonError("universality needs an nba")
    require_valid(a)
    for w in _lassos(a.alphabet, probe_bound, probe_bound):
        _check_cancel(cancel)
        if not nba_lasso_member(a, w):
            return w
    cap = _monoid_cap(monoid_cap)
    gens = _symbol_profiles(a)
    elements: dict[tuple, tuple[str, ...]] = {}
    order: list[_Profile] = []
    queue: list[tuple[_Profile, tuple[str, ...]]] = []
    for sym in a.alphabet:
        p = gens[sym]
        key = (p.reach, p.fin)
        if key not in elements:
            elements[key] = (sym,)
            order.append(p)
            queue.append((p, (sym,)))
    while queue:
        _check_cancel(cancel)
        p, word = queue.pop(0)
        for sym in a.alphabet:
            q = _profile_compose(p, gens[sym])
            key = (q.reach, q.fin)
            if key not in elements:
                if len(elements) >= cap:
                    raise ResourceLimitError(
                        f"profile monoid exceeds {cap} elements; raise it via "
                        f"--monoid-cap or {MONOID_CAP_ENV}",
                        cap_name=MONOID_CAP_ENV,
                        cap_value=cap,
                    )
                elements[key] = word + (sym,)
                order.append(q)
                queue.append((q, word + (sym,)))
    if progress is not None:
        progress(f"profile monoid has {len(order)} elements")
    n = len(a.states)
    idx0 = a.index[a.initial]
    ident = _Profile(
        tuple(1 << i for i in range(n)),
        tuple((1 << i) if a.states[i] in a.final_states else 0 for i in range(n)),
    )

    def accepting(u: _Profile, v: _Profile) -> bool:
        m = u.reach[idx0]
        while m:
            q = (m & -m).bit_length() - 1
            m &= m - 1
            targets = v.reach[q]
            t = targets
            while t:
                s = (t & -t).bit_length() - 1
                t &= t - 1
                if v.fin[s] >> s & 1:
                    return True
        return False

    for v in order:
        _check_cancel(cancel)
        if _profile_compose(v, v) != v:
            continue
        vw = elements[(v.reach, v.fin)]
        for u, uw in itertools.chain(
            [(ident, ())], ((p, elements[(p.reach, p.fin)]) for p in order)
        ):
            if _profile_compose(u, v) != u:
                continue
            if not accepting(u, v):
                witness = LassoWord(uw, vw)
                if nba_lasso_member(a, witness):
                    raise CertificationError(
                        f"universality counterexample {witness} is accepted"
                    )
                return witness
    return None


# ---------------------------------------------------------------------------
# HPBA decisions (delegate through the two-copy NBA)


def hpba_probable_empty(h: Automaton) -> LassoWord | None:
    """None when L_>0(h) is empty, else a witness with exact acceptance > 0."""
    w = nba_emptiness(hpba_to_nba(h))
    if w is not None and lasso_acceptance(h, w) <= 0:
        raise CertificationError(f"witness {w} has zero acceptance")
    return w


def hpba_probable_universal(h: Automaton, **kw) -> LassoWord | None:
    """None when L_>0(h) is universal, else a lasso with exact acceptance 0."""
    w = nba_universality(hpba_to_nba(h), **kw)
    if w is not None and lasso_acceptance(h, w) != 0:
        raise CertificationError(f"counterexample {w} has positive acceptance")
    return w


# ---------------------------------------------------------------------------
# FPM subset/monoid procedures


def transition_monoid(
    aut: Automaton,
    cap: int | None = None,
    cancel: Cancel = None,
    progress: Progress = None,
) -> list[tuple[tuple[str, ...], BooleanMatrix]]:
    """Boolean transition monoid, each element with its shortest realizing word.

    Elements are the support matrices of nonempty words, generated
    breadth-first from the single-letter supports, so discovery order is
    (word length, symbol order) and the stored word is the smallest
    realizing one.  Exceeding the cap raises :class:`ResourceLimitError`;
    completeness never silently degrades.
    """
    the_cap = _monoid_cap(cap)
    idx = aut.index
    n = len(aut.states)
    gen: dict[str, tuple[int, ...]] = {}
    for a in aut.alphabet:
        rows = []
        for q in aut.states:
            m = 0
            for t in aut.successors(q, a):
                m |= 1 << idx[t]
            rows.append(m)
        gen[a] = tuple(rows)

    def compose(x: tuple[int, ...], sym: str) -> tuple[int, ...]:
        g = gen[sym]
        out = []
        for i in range(n):
            m = x[i]
            r = 0
            while m:
                j = (m & -m).bit_length() - 1
                m &= m - 1
                r |= g[j]
            out.append(r)
        return tuple(out)

    elements: dict[tuple[int, ...], tuple[str, ...]] = {}
    out: list[tuple[tuple[str, ...], BooleanMatrix]] = []
    queue: list[tuple[int, ...]] = []
    for a in aut.alphabet:
        if gen[a] not in elements:
            elements[gen[a]] = (a,)
            out.append(((a,), BooleanMatrix(aut.states, gen[a])))
            queue.append(gen[a])
    while queue:
        _check_cancel(cancel)
        x = queue.pop(0)
        w = elements[x]
        for a in aut.alphabet:
            y = compose(x, a)
            if y not in elements:
                if len(elements) >= the_cap:
                    raise ResourceLimitError(
                        f"transition monoid exceeds {the_cap} elements; raise it "
                        f"via --monoid-cap or {MONOID_CAP_ENV}",
                        cap_name=MONOID_CAP_ENV,
                        cap_value=the_cap,
                    )
                elements[y] = w + (a,)
                out.append((w + (a,), BooleanMatrix(aut.states, y)))
                queue.append(y)
    if progress is not None:
        progress(f"transition monoid has {len(out)} elements")
    return out


def _require_fpm(m: Automaton, op: str) -> None:
    if m.role != "fpm":
        raise AutomatonError(f"{op} needs an fpm")
    require_valid(m)


def verify_subset_witness(m: Automaton, w: SubsetWitness) -> bool:
    """Exact re-check of the subset witness invariants."""
    if not w.states or not w.u or not w.v:
        return False
    mat = word_matrix(m, w.u)
    if mat.row_sum(m.initial, w.states) <= 0:
        return False
    matv = word_matrix(m, w.v)
    return all(matv.support(q) <= w.states for q in w.states)


def fpm_positive_empty(
    m: Automaton,
    monoid_cap: int | None = None,
    cancel: Cancel = None,
    progress: Progress = None,
) -> SubsetWitness | None:
    """None when L_>0(m) is empty, else a subset witness (C, u, v).

    The positive semantics of a monitor is nonempty iff some nonempty
    reject-free state set C is reachable with positive probability and some
    word's support matrix keeps C inside itself; both conditions only depend
    on supports, so enumerating the boolean transition monoid is a complete
    decision.  The witness is the first hit scanning monoid elements in
    discovery order and start states by their shortest reaching word.
    """
    _require_fpm(m, "fpm_positive_empty")
    assert m.reject is not None
    idx = m.index
    reach = _lex_reach_words(m, m.initial, at_least_one=True)
    candidates = [
        q
        for q in reach
        if q != m.reject
    ]
    candidates.sort(key=lambda q: (_word_key(m, reach[q]), idx[q]))
    reject_bit = 1 << idx[m.reject]
    for vword, element in transition_monoid(m, monoid_cap, cancel, progress):
        _check_cancel(cancel)
        rows = element.rows
        for q in candidates:
            closure = 1 << idx[q]
            frontier = closure
            dead = False
            while frontier:
                j = (frontier & -frontier).bit_length() - 1
                frontier &= frontier - 1
                new = rows[j] & ~closure
                if rows[j] & reject_bit:
                    dead = True
                    break
                closure |= new
                frontier |= new
            if dead:
                continue
            states = frozenset(
                m.states[j] for j in range(len(m.states)) if closure >> j & 1
            )
            witness = SubsetWitness(states, reach[q], vword)
            if not verify_subset_witness(m, witness):
                raise CertificationError(f"subset witness {witness} failed re-check")
            return witness
    return None


def _safe_start_mask(
    m: Automaton, rows: tuple[int, ...], reject_index: int
) -> int:
    """States from which repeating the macro-step surely hits only the reject.

    On the support graph of one macro-step matrix, absorption is almost sure
    into bottom SCCs; a start state is "doomed" iff every bottom SCC it can
    reach is the reject singleton.  Returns the bitmask of doomed states.
    """
    n = len(rows)
    nodes = list(range(n))
    adjacency = {
        i: [j for j in range(n) if rows[i] >> j & 1] for i in range(n)
    }
    comps = tarjan_sccs(nodes, adjacency)
    comp_of = {q: i for i, comp in enumerate(comps) for q in comp}
    bad = set()  # nodes of bottom SCCs other than the reject singleton
    for i, comp in enumerate(comps):
        if all(comp_of[t] == i for q in comp for t in adjacency[q]):
            if comp != [reject_index]:
                bad.update(comp)
    doomed = 0
    reach_bad = set(bad)
    changed = True
    while changed:
        changed = False
        for q in nodes:
            if q not in reach_bad and any(t in reach_bad for t in adjacency[q]):
                reach_bad.add(q)
                changed = True
    for q in nodes:
        if q not in reach_bad:
            doomed |= 1 << q
    return doomed


def fpm_positive_universal(
    m: Automaton,
    monoid_cap: int | None = None,
    cancel: Cancel = None,
    progress: Progress = None,
) -> LassoWord | None:
    """None when L_>0(m) is universal, else a lasso rejected almost surely.

    Non-universality always has an ultimately periodic witness; whether a
    lasso u v^omega is rejected almost surely depends only on the support S
    reached on u and the support matrix of v (absorption into the reject is
    a bottom-SCC condition on the macro-step graph).  Scanning the reachable
    supports of the deterministic subset automaton against the transition
    monoid is therefore a complete decision.
    """
    _require_fpm(m, "fpm_positive_universal")
    assert m.reject is not None
    idx = m.index
    reject_index = idx[m.reject]
    # reachable supports with shortest realizing stems (empty stem allowed)
    start = 1 << idx[m.initial]
    supports: dict[int, tuple[str, ...]] = {start: ()}
    sym_step: dict[str, tuple[int, ...]] = {}
    n = len(m.states)
    for a in m.alphabet:
        rows = []
        for q in m.states:
            mask = 0
            for t in m.successors(q, a):
                mask |= 1 << idx[t]
            rows.append(mask)
        sym_step[a] = tuple(rows)
    layer = [(start, ())]
    while layer:
        nxt = []
        for s, w in layer:
            for a in m.alphabet:
                rows = sym_step[a]
                s2 = 0
                t = s
                while t:
                    j = (t & -t).bit_length() - 1
                    t &= t - 1
                    s2 |= rows[j]
                if s2 not in supports:
                    supports[s2] = w + (a,)
                    nxt.append((s2, w + (a,)))
        layer = nxt
    monoid = transition_monoid(m, monoid_cap, cancel, progress)
    doomed_of: list[int] = [
        _safe_start_mask(m, element.rows, reject_index) for _, element in monoid
    ]
    for s, stem in sorted(
        supports.items(), key=lambda kv: _word_key(m, kv[1])
    ):
        _check_cancel(cancel)
        for (vword, _element), doomed in zip(monoid, doomed_of):
            if s & ~doomed:
                continue
            w = LassoWord(stem, vword).normalized()
            if lasso_acceptance(m, w) != 0:
                raise CertificationError(
                    f"rejected-lasso counterexample {w} has positive acceptance"
                )
            return w
    return None


# ---------------------------------------------------------------------------
# Almost-sure decisions (dual through the complementation monitor)


def almost_sure_empty(b: Automaton, **kw) -> LassoWord | None:
    """None when L_=1(b) is empty, else a lasso accepted with probability 1.

    L_=1(b) is empty iff the positive semantics of the complementation
    monitor is universal.
    """
    ce = fpm_positive_universal(complement_to_fpm(b), **kw)
    if ce is None:
        return None
    if lasso_acceptance(b, ce) != 1:
        raise CertificationError(f"almost-sure witness {ce} not accepted surely")
    return ce


def almost_sure_universal(b: Automaton, **kw) -> LassoWord | None:
    """None when L_=1(b) is universal, else a lasso with acceptance < 1.

    L_=1(b) is universal iff the positive semantics of the complementation
    monitor is empty; a subset witness there turns into the rejected lasso.
    """
    sw = fpm_positive_empty(complement_to_fpm(b), **kw)
    if sw is None:
        return None
    w = sw.lasso()
    if lasso_acceptance(b, w) >= 1:
        raise CertificationError(f"counterexample {w} is accepted almost surely")
    return w


# ---------------------------------------------------------------------------
# Bounded asymptotic witness search


def verify_asymptotic_witness(
    b: Automaton, w: AsymptoticWitness, x: Fraction = Fraction(0)
) -> bool:
    """Exact re-check of every matrix inequality behind the witness."""
    if not w.states or not w.u or not w.segments:
        return False
    if word_matrix(b, w.u).row_sum(b.initial, w.states) <= x:
        return False
    for off, seg in enumerate(w.segments):
        j = w.start_index + off
        if not seg:
            return False
        fp = final_passage_matrix(b, seg)
        bound = 1 - Fraction(1, 2**j)
        if any(fp.row_sum(q, w.states) <= bound for q in w.states):
            return False
    return True


def pba_positive_nonempty_bounded(
    b: Automaton,
    max_len: int,
    max_j: int,
    x: Fraction = Fraction(0),
    cancel: Cancel = None,
    progress: Progress = None,
) -> AsymptoticWitness | None:
    """Bounded search for an asymptotic nonemptiness witness of L_>x(b).

    Scans state sets C (by size, then position), reach words u and segment
    words u_j of length up to ``max_len``, with segment thresholds
    1 - 2^-j for j = 1..max_j.  Returns a re-verified witness, or None
    meaning "no witness within these bounds"; emptiness is never asserted
    (the problem is only semi-answerable in this direction).
    """
    if not (b.is_probabilistic and b.is_buchi):
        raise AutomatonError("bounded witness search needs a probabilistic Buchi automaton")
    require_valid(b)
    if max_len < 1 or max_j < 1:
        raise AutomatonError("bounds must be at least 1")
    words = list(all_words(b.alphabet, 1, max_len))
    dists: list[Distribution] = []
    fps = []
    for u in words:
        d = Distribution.dirac(b.initial)
        for a in u:
            d = d.step(b, a)
        dists.append(d)
        fps.append(final_passage_matrix(b, u))
    state_list = list(b.states)
    for size in range(1, len(state_list) + 1):
        for combo in itertools.combinations(range(len(state_list)), size):
            _check_cancel(cancel)
            c = frozenset(state_list[i] for i in combo)
            u = next(
                (w for w, d in zip(words, dists) if d.mass(c) > x), None
            )
            if u is None:
                continue
            segments = []
            ok = True
            for j in range(1, max_j + 1):
                bound = 1 - Fraction(1, 2**j)
                seg = next(
                    (
                        w
                        for w, fp in zip(words, fps)
                        if all(fp.row_sum(q, c) > bound for q in c)
                    ),
                    None,
                )
                if seg is None:
                    ok = False
                    break
                segments.append(seg)
            if not ok:
                continue
            witness = AsymptoticWitness(c, u, tuple(segments), 1)
            if not verify_asymptotic_witness(b, witness, x):
                raise CertificationError("asymptotic witness failed re-verification")
            return witness
    return None


def acceptance_lower_bound(b: Automaton, w: AsymptoticWitness) -> LassoLowerBound:
    """Certified lower bound on acceptance of the witness's assembled lasso.

    The bound multiplies the exact reach mass z = delta_u(qs, C) with each
    segment's worst-case final-passage return min over C (each exceeds
    1 - 2^-j by the witness invariants).  When the last segment returns with
    probability exactly one, repeating it forever contributes factor one per
    copy and the value bounds the acceptance probability of
    u u_{j0} ... u_J (u_J)^omega; otherwise the value only bounds the
    finite-prefix event and the result is tagged non-asymptotic.
    """
    require_valid(b)
    if not verify_asymptotic_witness(b, w):
        raise AutomatonError("invalid asymptotic witness")
    z = word_matrix(b, w.u).row_sum(b.initial, w.states)
    value = z
    last_min = Fraction(1)
    for seg in w.segments:
        fp = final_passage_matrix(b, seg)
        last_min = min(fp.row_sum(q, w.states) for q in w.states)
        value *= last_min
    stem = w.u + tuple(itertools.chain.from_iterable(w.segments[:-1]))
    assembled = LassoWord(stem, w.segments[-1])
    return LassoLowerBound(value=value, asymptotic=last_min == 1, lasso=assembled)


# ---------------------------------------------------------------------------
# Containment refutation


def containment_refute(
    b1: Automaton,
    b2: Automaton,
    semantics: str,
    bound: int,
    cancel: Cancel = None,
    progress: Progress = None,
) -> LassoWord | None:
    """Bounded search for a lasso separating two PBAs under one semantics.

    Containment is undecidable in both semantics, so only refutation is
    offered: the first lasso (stem and cycle up to ``bound``) in L(b1) but
    not L(b2), certified by exact acceptance probabilities, or None for
    "unknown".
    """
    if semantics not in ("positive", "almost-sure"):
        raise AutomatonError("semantics must be positive or almost-sure")
    if b1.alphabet != b2.alphabet:
        raise AutomatonError("containment needs a shared alphabet")
    for aut in (b1, b2):
        require_valid(aut)
    for w in _lassos(b1.alphabet, bound, bound):
        _check_cancel(cancel)
        p1 = lasso_acceptance(b1, w)
        if semantics == "positive":
            if p1 > 0 and lasso_acceptance(b2, w) == 0:
                return w
        else:
            if p1 == 1 and lasso_acceptance(b2, w) < 1:
                return w
    return None
