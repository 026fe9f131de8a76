"""Monomial algebras: free algebras modulo forbidden words.

The words avoiding every forbidden subword (normal words) form a basis, so
dim kS^i is a count of normal words. Counting runs on the Ufnarovski graph:
vertices are the normal words of length L-1 (L the longest forbidden word),
with an edge v -> v' labelled a whenever v*a is normal and v' is v*a minus its
first letter. Normal words of length q >= L-1 correspond one-to-one with
walks of length q-(L-1), and the cycle structure of the graph decides
whether growth is finite, polynomial or exponential.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import networkx as nx

from .errors import InputError
from .growth import GrowthProfile
from .words import Word


def _contains(word: Word, sub: Word) -> bool:
    k = len(sub)
    return any(word[i:i + k] == sub for i in range(len(word) - k + 1))


def normalize_forbidden(forbidden) -> tuple[Word, ...]:
    """Drop duplicates and every relation that contains another as a subword."""
    words = sorted({tuple(w) for w in forbidden}, key=lambda w: (len(w), w))
    kept: list[Word] = []
    for w in words:
        if not any(_contains(w, v) for v in kept):
            kept.append(w)
    return tuple(kept)


@dataclass(frozen=True)
class MonomialPresentation:
    alphabet: tuple[str, ...]
    forbidden: tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        if not self.alphabet:
            raise InputError("alphabet must not be empty")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise InputError("alphabet letters must be distinct")
        t = len(self.alphabet)
        for w in self.forbidden:
            if not w:
                raise InputError("forbidden words must be nonempty")
            if any(not isinstance(a, int) or not 0 <= a < t for a in w):
                raise InputError(f"forbidden word {w!r} uses letters outside the alphabet")
        object.__setattr__(self, "forbidden", normalize_forbidden(self.forbidden))

    @classmethod
    def from_strings(cls, alphabet: Sequence[str], forbidden: Sequence) -> "MonomialPresentation":
        """Build from letter names; forbidden words are strings or lists of letters."""
        alphabet = tuple(alphabet)
        lookup = {a: i for i, a in enumerate(alphabet)}
        words = []
        for k, w in enumerate(forbidden):
            if isinstance(w, str):
                letters = list(w) if all(len(a) == 1 for a in alphabet) else w.split()
            else:
                letters = list(w)
            try:
                words.append(tuple(lookup[a] for a in letters))
            except (KeyError, TypeError):
                raise InputError(f"forbidden[{k}] = {w!r} is not a word over {list(alphabet)}") from None
        return cls(alphabet, tuple(words))

    @property
    def t(self) -> int:
        return len(self.alphabet)

    def is_normal(self, w: Word) -> bool:
        return not any(_contains(w, v) for v in self.forbidden)

    @cached_property
    def graph(self) -> "UfnarovskiGraph":
        return UfnarovskiGraph(self)


class UfnarovskiGraph:
    def __init__(self, mp: MonomialPresentation):
        self.mp = mp
        self.L = max((len(w) for w in mp.forbidden), default=1)
        forb = set(mp.forbidden)
        lengths = sorted({len(w) for w in forb})

        def ok_extension(w):
            # w's prefix is normal, so only suffixes can be forbidden
            return not any(k <= len(w) and w[-k:] in forb for k in lengths)

        # normal words of length < L, level by level (prefix closed)
        levels = [[()]]
        for _ in range(self.L - 1):
            levels.append([w + (a,) for w in levels[-1] for a in range(mp.t) if ok_extension(w + (a,))])
        self.short_counts = [len(lv) for lv in levels]
        self.vertices: list[Word] = levels[-1]
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.vertices)
        for v in self.vertices:
            for a in range(mp.t):
                if ok_extension(v + (a,)):
                    g.add_edge(v, (v + (a,))[1:], letter=a)
        self.graph = g

    def count(self, length: int) -> int:
        return self.counts_upto(length)[length]

    def counts_upto(self, horizon: int) -> list[int]:
        """Normal-word counts for every length 0..horizon."""
        out = self.short_counts[:horizon + 1]
        if horizon >= self.L - 1:
            index = {v: i for i, v in enumerate(self.vertices)}
            edges = [(index[u], index[v]) for u, v in self.graph.edges()]
            # walks of the current length ending at each vertex
            counts = [1] * len(self.vertices)
            out[self.L - 1:] = [len(counts)]
            for _ in range(horizon - (self.L - 1)):
                nxt = [0] * len(counts)
                for i, j in edges:
                    nxt[j] += counts[i]
                counts = nxt
                out.append(sum(counts))
        return out

    def cycle_structure(self) -> list[dict]:
        """One entry per strongly connected component that carries a cycle."""
        out = []
        for comp in nx.strongly_connected_components(self.graph):
            sub = self.graph.subgraph(comp)
            edges = sub.number_of_edges()
            if len(comp) > 1 or edges > 0:
                out.append({"vertices": len(comp), "edges": edges})
        return out


def count_normal_words(mp: MonomialPresentation, length: int) -> int:
    """Number of words of exactly this length avoiding all forbidden subwords."""
    if length < 0:
        raise InputError("length must be nonnegative")
    return mp.graph.count(length)


def growth_profile_monomial(mp: MonomialPresentation, horizon: int) -> GrowthProfile:
    """Cumulative normal-word counts d_i = 1 + sum_{q=1..i} count(q)."""
    if horizon < 1:
        raise InputError("horizon must be at least 1")
    counts = mp.graph.counts_upto(horizon)
    dims = []
    total = 0
    for c in counts:
        total += c
        dims.append(total)
    stab = next((i for i in range(1, horizon + 1) if dims[i] == dims[i - 1]), None)
    return GrowthProfile(dims, None, stab)


@dataclass(frozen=True)
class GrowthClass:
    kind: str               # "Finite", "Polynomial" or "Exponential"
    degree: int | None = None

    @property
    def is_linear(self) -> bool:
        return self.kind == "Polynomial" and self.degree == 1

    def __str__(self):
        return f"Polynomial({self.degree})" if self.kind == "Polynomial" else self.kind


def classify_growth(mp: MonomialPresentation) -> GrowthClass:
    """Finite, Polynomial(d) or Exponential from the graph's cycle structure.

    Exponential when some strongly connected component holds two distinct
    cycles (more edges than vertices); otherwise every cyclic component is a
    single cycle and d is the largest number of them on one path.
    """
    g = mp.graph.graph
    cond = nx.condensation(g)  # collapses parallel edges; loops handled below
    cyc = {c: 0 for c in cond.nodes}
    for comp in cond.nodes:
        verts = cond.nodes[comp]["members"]
        sub = g.subgraph(verts)
        edges = sub.number_of_edges()
        if edges > len(verts):
            return GrowthClass("Exponential")
        if len(verts) > 1 or edges > 0:
            cyc[comp] = 1
    if not any(cyc.values()):
        return GrowthClass("Finite")
    best = {}
    for comp in reversed(list(nx.topological_sort(cond))):
        best[comp] = cyc[comp] + max((best[s] for s in cond.successors(comp)), default=0)
    return GrowthClass("Polynomial", max(best.values()))
