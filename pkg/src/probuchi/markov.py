"""Exact rational linear algebra and lasso-word acceptance probabilities.

Acceptance of an ultimately periodic word ``u v^omega`` is computed on the
finite chain over (state, cycle position): the chain is absorbed into its
bottom SCCs almost surely, a bottom SCC is classified accepting or rejecting
from the acceptance condition alone, and the absorption probabilities solve
an exact linear system.  Everything is a pure function over immutable
inputs; floating point never appears here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

from .core import (
    Automaton,
    AutomatonError,
    BuchiAcceptance,
    LassoWord,
    RabinAcceptance,
    require_valid,
)
from .graphs import tarjan_sccs

__all__ = [
    "RationalMatrix",
    "Distribution",
    "word_matrix",
    "final_passage_matrix",
    "lasso_acceptance",
    "binary_value_lasso",
    "solve_linear",
]


@dataclass(frozen=True)
class RationalMatrix:
    """Dense square matrix of exact rationals indexed by state names.

    Rows are the current state, columns the next state.  Stochastic matrices
    have rows summing to one; sub-stochastic rows appear in final-passage
    blocks.
    """

    states: tuple[str, ...]
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(
            self, "rows", tuple(tuple(Fraction(x) for x in row) for row in self.rows)
        )
        n = len(self.states)
        if len(self.rows) != n or any(len(r) != n for r in self.rows):
            raise ValueError("matrix shape does not match state count")

    @property
    def order(self) -> int:
        return len(self.states)

    def _i(self, q: str) -> int:
        try:
            return self.states.index(q)
        except ValueError:
            raise AutomatonError(f"unknown state {q!r}") from None

    def entry(self, q: str, q2: str) -> Fraction:
        return self.rows[self._i(q)][self._i(q2)]

    def row(self, q: str) -> dict[str, Fraction]:
        r = self.rows[self._i(q)]
        return {t: p for t, p in zip(self.states, r) if p}

    def row_sum(self, q: str, targets: Iterable[str]) -> Fraction:
        idx = [self._i(t) for t in targets]
        r = self.rows[self._i(q)]
        return sum((r[i] for i in idx), Fraction(0))

    def support(self, q: str) -> frozenset[str]:
        r = self.rows[self._i(q)]
        return frozenset(t for t, p in zip(self.states, r) if p > 0)

    def matmul(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.states != other.states:
            raise ValueError("state spaces differ")
        n = self.order
        brows = other.rows
        out = []
        for i in range(n):
            arow = self.rows[i]
            acc = [Fraction(0)] * n
            for k in range(n):
                aik = arow[k]
                if not aik:
                    continue
                brow = brows[k]
                for j in range(n):
                    if brow[j]:
                        acc[j] += aik * brow[j]
            out.append(tuple(acc))
        return RationalMatrix(self.states, tuple(out))

    __matmul__ = matmul

    @staticmethod
    def identity(states: Sequence[str]) -> "RationalMatrix":
        n = len(states)
        rows = tuple(
            tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
        )
        return RationalMatrix(tuple(states), rows)


@dataclass(frozen=True)
class Distribution:
    """Sub-distribution over states: nonnegative entries, total mass <= 1."""

    entries: Mapping[str, Fraction]

    def __post_init__(self) -> None:
        clean = {q: Fraction(p) for q, p in self.entries.items() if p != 0}
        if any(p < 0 for p in clean.values()):
            raise ValueError("negative probability mass")
        if sum(clean.values(), Fraction(0)) > 1:
            raise ValueError("total mass exceeds 1")
        object.__setattr__(self, "entries", clean)

    @staticmethod
    def dirac(q: str) -> "Distribution":
        return Distribution({q: Fraction(1)})

    def mass(self, states: Iterable[str] | None = None) -> Fraction:
        if states is None:
            return sum(self.entries.values(), Fraction(0))
        keep = set(states)
        return sum((p for q, p in self.entries.items() if q in keep), Fraction(0))

    def __getitem__(self, q: str) -> Fraction:
        return self.entries.get(q, Fraction(0))

    def support(self) -> frozenset[str]:
        return frozenset(self.entries)

    def step(self, aut: Automaton, symbol: str) -> "Distribution":
        """One transition step of a probabilistic automaton."""
        if symbol not in set(aut.alphabet):
            from .core import UnknownSymbolError

            raise UnknownSymbolError(symbol)
        out: dict[str, Fraction] = {}
        for q, p in self.entries.items():
            for t, w in aut.prob_row(q, symbol):
                out[t] = out.get(t, Fraction(0)) + p * w
        return Distribution(out)


def _symbol_matrix(aut: Automaton, a: str) -> RationalMatrix:
    n = len(aut.states)
    idx = aut.index
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i, q in enumerate(aut.states):
        for t, p in aut.prob_row(q, a):
            rows[i][idx[t]] += p
    return RationalMatrix(aut.states, tuple(tuple(r) for r in rows))


def word_matrix(aut: Automaton, u: Iterable[str]) -> RationalMatrix:
    """Product of the per-symbol transition matrices along ``u``.

    The empty word yields the identity matrix.
    """
    if not aut.is_probabilistic:
        raise AutomatonError("word matrices need a probabilistic automaton")
    aut.check_symbols(u)
    result = RationalMatrix.identity(aut.states)
    for a in u:
        result = result @ _symbol_matrix(aut, a)
    return result


def final_passage_matrix(aut: Automaton, u: Sequence[str]) -> RationalMatrix:
    """Entrywise probability of traversing ``u`` while touching a final state.

    Entry (q, q') sums the weights of the u-labelled paths from q to q' whose
    state sequence, endpoints included, meets the final set.  Büchi-specific;
    Rabin automata are rejected.
    """
    if not aut.is_probabilistic:
        raise AutomatonError("final-passage matrices need a probabilistic automaton")
    if not isinstance(aut.acceptance, BuchiAcceptance):
        raise AutomatonError("final-passage matrices need Buchi acceptance")
    if not u:
        raise AutomatonError("final-passage matrices need a nonempty word")
    aut.check_symbols(u)
    finals = aut.acceptance.final
    n = len(aut.states)
    idx = aut.index
    # Track (state, seen-final flag); entry q of the outer list is the
    # flag-split row started from q with the flag preset by q itself.
    rows = []
    for q in aut.states:
        flagged: dict[tuple[str, bool], Fraction] = {(q, q in finals): Fraction(1)}
        for a in u:
            nxt: dict[tuple[str, bool], Fraction] = {}
            for (s, f), p in flagged.items():
                for t, w in aut.prob_row(s, a):
                    key = (t, f or t in finals)
                    nxt[key] = nxt.get(key, Fraction(0)) + p * w
            flagged = nxt
        row = [Fraction(0)] * n
        for (s, f), p in flagged.items():
            if f:
                row[idx[s]] += p
        rows.append(tuple(row))
    return RationalMatrix(aut.states, tuple(rows))


def solve_linear(
    matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> list[Fraction]:
    """Solve A x = b exactly by fraction-free Gaussian elimination.

    Rows are first scaled to integers, then eliminated Bareiss-style so all
    intermediate values stay integral; the result is exact rationals.
    Raises on singular systems.
    """
    n = len(rhs)
    rows: list[list[int]] = []
    for i in range(n):
        ents = [Fraction(x) for x in matrix[i]] + [Fraction(rhs[i])]
        scale = lcm(*(e.denominator for e in ents)) if ents else 1
        rows.append([int(e * scale) for e in ents])
    prev = 1
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot_row is None:
            raise ArithmeticError("singular linear system")
        if pivot_row != col:
            rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
        pivot = rows[col][col]
        for r in range(col + 1, n):
            factor = rows[r][col]
            for c in range(col, n + 1):
                rows[r][c] = (rows[r][c] * pivot - factor * rows[col][c]) // prev
        prev = pivot
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(rows[i][n])
        for j in range(i + 1, n):
            acc -= rows[i][j] * x[j]
        x[i] = acc / rows[i][i]
    return x


@dataclass(frozen=True)
class LassoChain:
    """Finite chain of a probabilistic automaton running u v^omega.

    Nodes are (state, cycle position) pairs restricted to what the initial
    distribution can reach; each node knows its exact successor distribution,
    and nodes inside a bottom SCC carry the acceptance classification of
    that component.
    """

    nodes: tuple[tuple[str, int], ...]
    edges: dict[tuple[str, int], tuple[tuple[tuple[str, int], Fraction], ...]]
    initial: dict[tuple[str, int], Fraction]
    value_of: dict[tuple[str, int], Fraction | None]  # None = needs solving
    bscc_nodes: frozenset[tuple[str, int]]
    accepting_bsccs: int
    rejecting_bsccs: int


def _bscc_accepting(aut: Automaton, comp: list[tuple[str, int]]) -> bool:
    comp_states = {q for q, _ in comp}
    if isinstance(aut.acceptance, BuchiAcceptance):
        return bool(comp_states & aut.acceptance.final)
    assert isinstance(aut.acceptance, RabinAcceptance)
    # Inside a bottom SCC every node recurs almost surely, so "B finitely
    # often" forces the component to avoid B entirely.
    for b, g in aut.acceptance.pairs:
        if not (comp_states & b) and (comp_states & g):
            return True
    return False


def build_lasso_chain(aut: Automaton, w: LassoWord) -> LassoChain:
    """Reachable product chain of ``aut`` on ``w`` with BSCCs classified."""
    dist = Distribution.dirac(aut.initial)
    for a in w.stem:
        dist = dist.step(aut, a)
    length = len(w.cycle)
    aut.check_symbols(w.cycle)

    start = [(q, 0) for q in sorted(dist.support(), key=aut.index.__getitem__)]
    edges: dict[tuple[str, int], tuple[tuple[tuple[str, int], Fraction], ...]] = {}
    frontier = list(start)
    seen = set(start)
    while frontier:
        node = frontier.pop()
        q, i = node
        nxt = []
        for t, p in aut.prob_row(q, w.cycle[i]):
            target = (t, (i + 1) % length)
            nxt.append((target, p))
            if target not in seen:
                seen.add(target)
                frontier.append(target)
        edges[node] = tuple(nxt)

    nodes = sorted(seen, key=lambda n: (n[1], aut.index[n[0]]))
    adjacency = {n: [t for t, _ in edges[n]] for n in nodes}
    comps = tarjan_sccs(nodes, adjacency)
    comp_of = {n: i for i, comp in enumerate(comps) for n in comp}

    value_of: dict[tuple[str, int], Fraction | None] = {}
    n_acc = n_rej = 0
    bscc_value: dict[int, Fraction] = {}
    bscc_nodes: set[tuple[str, int]] = set()
    for i, comp in enumerate(comps):
        if all(comp_of[t] == i for n in comp for t in adjacency[n]):
            accepting = _bscc_accepting(aut, comp)
            bscc_value[i] = Fraction(1 if accepting else 0)
            bscc_nodes.update(comp)
            if accepting:
                n_acc += 1
            else:
                n_rej += 1
    # A transient node that can only reach accepting (or only rejecting)
    # bottom components already has value 1 (or 0); only mixed nodes need
    # the linear system.  Fixpoint over edges; sizes are desk scale.
    reach_acc = {
        n for n in nodes if comp_of[n] in bscc_value and bscc_value[comp_of[n]] == 1
    }
    reach_rej = {
        n for n in nodes if comp_of[n] in bscc_value and bscc_value[comp_of[n]] == 0
    }
    changed = True
    while changed:
        changed = False
        for n in nodes:
            if n not in reach_acc and any(t in reach_acc for t in adjacency[n]):
                reach_acc.add(n)
                changed = True
            if n not in reach_rej and any(t in reach_rej for t in adjacency[n]):
                reach_rej.add(n)
                changed = True

    for n in nodes:
        ci = comp_of[n]
        if ci in bscc_value:
            value_of[n] = bscc_value[ci]
        elif n in reach_acc and n in reach_rej:
            value_of[n] = None
        else:
            value_of[n] = Fraction(1) if n in reach_acc else Fraction(0)

    return LassoChain(
        nodes=tuple(nodes),
        edges=edges,
        initial={(q, 0): p for q, p in dist.entries.items()},
        value_of=value_of,
        bscc_nodes=frozenset(bscc_nodes),
        accepting_bsccs=n_acc,
        rejecting_bsccs=n_rej,
    )


def lasso_acceptance(aut: Automaton, w: LassoWord) -> Fraction:
    """Exact probability that ``aut`` accepts the word ``w.stem w.cycle^omega``.

    Works for Büchi and Rabin acceptance.  The automaton must validate.
    """
    if not aut.is_probabilistic:
        raise AutomatonError("lasso acceptance needs a probabilistic automaton")
    require_valid(aut)
    aut.check_symbols(w.stem)
    chain = build_lasso_chain(aut, w)

    unknown = [n for n in chain.nodes if chain.value_of[n] is None]
    solved: dict[tuple[str, int], Fraction] = {}
    if unknown:
        pos = {n: i for i, n in enumerate(unknown)}
        m = len(unknown)
        a = [[Fraction(0)] * m for _ in range(m)]
        b = [Fraction(0)] * m
        for n in unknown:
            i = pos[n]
            a[i][i] += 1
            for t, p in chain.edges[n]:
                v = chain.value_of[t]
                if v is None:
                    a[i][pos[t]] -= p
                else:
                    b[i] += p * v
        xs = solve_linear(a, b)
        solved = {n: xs[pos[n]] for n in unknown}

    total = Fraction(0)
    for node, mass in chain.initial.items():
        v = chain.value_of[node]
        total += mass * (solved[node] if v is None else v)
    return total


def binary_value_lasso(w: LassoWord) -> Fraction:
    """Binary expansion value sum_i bit_i / 2^(i+1) of an ultimately periodic word.

    Closed form over the alphabet {0, 1}; serves as the independent oracle
    for the three-state value-monitor examples.
    """
    for s in w.stem + w.cycle:
        if s not in ("0", "1"):
            raise AutomatonError(f"non-binary symbol {s!r}")
    head = sum(
        (Fraction(int(b), 2 ** (i + 1)) for i, b in enumerate(w.stem)), Fraction(0)
    )
    cyc = sum(
        (Fraction(int(b), 2 ** (i + 1)) for i, b in enumerate(w.cycle)), Fraction(0)
    )
    tail = cyc / (1 - Fraction(1, 2 ** len(w.cycle)))
    return head + tail / (2 ** len(w.stem))
