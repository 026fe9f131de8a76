"""Matrix presentations and their growth filtrations.

For a finite generating set S of n x n matrices, ``span_filtration`` computes
d_i = dim kS^i, the dimension of the span of all words in S of length at most
i. Each level is built from the words that were new at the previous level,
multiplied on the right by every generator; the words that enlarge the span
are recorded, in length-lex order, as the level's basis words.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import (BudgetExceeded, FieldMismatch, GeneratorCountMismatch,
                     HorizonZero, InputError)
from .linalg import QQ, EchelonBasis, Field, Matrix
from .words import Word

DEFAULT_BUDGET = 10 ** 6


@dataclass(frozen=True)
class AlgebraPresentation:
    """A finite ordered generating set inside M_n(k).

    The order of ``generators`` fixes the letter order used by every word
    ordering downstream, so it is part of the presentation's identity.
    """

    field: Field
    n: int
    generators: tuple[Matrix, ...]
    include_unit: bool = True
    generator_names: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if self.generator_names is not None:
            object.__setattr__(self, "generator_names", tuple(self.generator_names))
        if self.n < 1:
            raise InputError("matrix size n must be positive")
        if not self.generators:
            raise InputError("a presentation needs at least one generator")
        for i, g in enumerate(self.generators):
            if g.field != self.field:
                raise FieldMismatch(f"generator {i} is over {g.field}, presentation over {self.field}")
            if (g.rows, g.cols) != (self.n, self.n):
                raise InputError(f"generator {i} is {g.rows}x{g.cols}, expected {self.n}x{self.n}")
        if self.generator_names is not None and len(self.generator_names) != len(self.generators):
            raise InputError("generator_names must name every generator")

    @classmethod
    def from_matrices(cls, generators: Sequence, field: Field = QQ, include_unit: bool = True,
                      names: Sequence[str] | None = None) -> "AlgebraPresentation":
        gens = tuple(g if isinstance(g, Matrix) else Matrix.from_rows(g, field) for g in generators)
        if not gens:
            raise InputError("a presentation needs at least one generator")
        return cls(field, gens[0].rows, gens, include_unit, tuple(names) if names else None)

    @property
    def t(self) -> int:
        return len(self.generators)

    def image(self, w: Word) -> Matrix:
        """The matrix of a word (the identity for the empty word)."""
        m = Matrix.identity(self.n, self.field)
        for a in w:
            m = m @ self.generators[a]
        return m

    def with_unit(self, include_unit: bool = True) -> "AlgebraPresentation":
        if include_unit == self.include_unit:
            return self
        return AlgebraPresentation(self.field, self.n, self.generators, include_unit, self.generator_names)


@dataclass
class GrowthProfile:
    """d_0, ..., d_H together with per-level basis words.

    ``basis_words`` is None for profiles not backed by explicit words (for
    example monomial algebras, where only counts are kept).
    """

    dims: list[int]
    basis_words: list[list[Word]] | None = None
    stabilized_at: int | None = None
    differences: list[int] = dc_field(init=False)

    def __post_init__(self):
        self.differences = [b - a for a, b in zip(self.dims, self.dims[1:])]

    @property
    def horizon(self) -> int:
        return len(self.dims) - 1

    def flat_basis(self) -> list[Word]:
        return [w for level in (self.basis_words or []) for w in level]

    def to_csv(self) -> str:
        lines = ["i,d_i,diff"]
        for i, d in enumerate(self.dims):
            diff = "" if i == 0 else str(self.differences[i - 1])
            lines.append(f"{i},{d},{diff}")
        return "\n".join(lines) + "\n"


class Filtration:
    """Growth filtration of a presentation together with its echelon basis.

    Keeps the images of the basis words and an :class:`EchelonBasis` holding
    them in discovery order, so vectors of kS^i can be written back in terms
    of the basis words of length at most i.
    """

    def __init__(self, pres: AlgebraPresentation, budget: int = DEFAULT_BUDGET):
        self.pres = pres
        self.budget = budget
        n = pres.n
        self.echelon = EchelonBasis(n * n, pres.field)
        self.words: list[Word] = []
        self.images: list[Matrix] = []
        self.index: dict[Word, int] = {}
        self._slot_word: dict[int, Word] = {}
        self.dims: list[int] = []
        self.level_words: list[list[Word]] = []
        self.stabilized_at: int | None = None
        ident = Matrix.identity(n, pres.field)
        if pres.include_unit:
            self._add((), ident)
            self.level_words.append([()])
        else:
            self.level_words.append([])
        self.dims.append(len(self.words))
        # frontier: (word, image) pairs new at the latest level; () seeds level 1
        self._frontier = [((), ident)]

    def _add(self, w, img):
        slot = self.echelon.count
        if self.echelon.insert(img.entries):
            self._slot_word[slot] = w
            self.index[w] = len(self.words)
            self.words.append(w)
            self.images.append(img)
            return True
        return False

    @property
    def height(self) -> int:
        return len(self.dims) - 1

    def extend(self, horizon: int) -> None:
        gens = self.pres.generators
        while self.height < horizon:
            if self.stabilized_at is not None:
                self.dims.append(self.dims[-1])
                self.level_words.append([])
                continue
            if len(self._frontier) * len(gens) > self.budget:
                raise BudgetExceeded(
                    f"level {self.height + 1} needs {len(self._frontier) * len(gens)} candidate words "
                    f"(budget {self.budget})")
            new = []
            for w, img in self._frontier:
                for a, g in enumerate(gens):
                    cand = w + (a,)
                    cimg = img @ g
                    if self._add(cand, cimg):
                        new.append((cand, cimg))
            self._frontier = new
            self.level_words.append([w for w, _ in new])
            self.dims.append(len(self.words))
            if self.dims[-1] == self.dims[-2] and self.height >= 1:
                self.stabilized_at = self.height

    def extend_to_stable(self, max_horizon: int | None = None) -> None:
        # the filtration of a subalgebra of M_n can grow at most n^2 times
        limit = max_horizon if max_horizon is not None else self.pres.n ** 2 + 1
        while self.stabilized_at is None and self.height < limit:
            self.extend(self.height + 1)

    def profile(self, horizon: int | None = None) -> GrowthProfile:
        horizon = self.height if horizon is None else horizon
        self.extend(horizon)
        stab = self.stabilized_at if self.stabilized_at is not None and self.stabilized_at <= horizon else None
        return GrowthProfile(list(self.dims[:horizon + 1]),
                             [list(ws) for ws in self.level_words[:horizon + 1]], stab)

    def span_limit(self, level: int) -> int:
        """Number of basis words of length at most ``level``."""
        self.extend(level)
        return self.dims[level]

    def express(self, m: Matrix, level: int) -> dict[Word, object] | None:
        """Coordinates of ``m`` over the basis words of length <= level."""
        combo = self.echelon.express(m.entries, self.span_limit(level))
        if combo is None:
            return None
        return {self._slot_word[k]: c for k, c in combo.items()}


def span_filtration(pres: AlgebraPresentation, horizon: int, budget: int = DEFAULT_BUDGET) -> GrowthProfile:
    """Exact dimensions d_i = dim kS^i for 0 <= i <= horizon."""
    if horizon < 1:
        raise HorizonZero("horizon must be at least 1")
    return Filtration(pres, budget).profile(horizon)


def measured_bergman_bound(profile: GrowthProfile) -> int:
    """Largest jump d_i - d_{i-1} seen in the profile's window.

    Exact when the profile has stabilized; otherwise only a lower estimate of
    the Bergman bound of the generating set.
    """
    if not profile.dims:
        raise InputError("empty profile")
    return max(profile.differences, default=0)


def is_irreducible(pres: AlgebraPresentation, budget: int = DEFAULT_BUDGET) -> tuple[bool, int]:
    """Whether S generates all of M_n, with the dimension of the unital algebra.

    Matrix rank does not change under field extension, so the span over the
    algebraic closure is all of M_n exactly when the k-span already has
    dimension n^2. No closure arithmetic is needed.
    """
    filt = Filtration(pres.with_unit(True), budget)
    filt.extend_to_stable()
    dim = filt.dims[-1]
    return dim == pres.n ** 2, dim


def block_diagonal(parts: Sequence[AlgebraPresentation]) -> AlgebraPresentation:
    """Stack presentations into block-diagonal generators (a subdirect product).

    The i-th generator of the result is diag(g_i of part 1, g_i of part 2, ...),
    so each part is the image of the result under a block projection.
    """
    parts = list(parts)
    if not parts:
        raise InputError("block_diagonal needs at least one part")
    f = parts[0].field
    t = parts[0].t
    for k, part in enumerate(parts):
        if part.field != f:
            raise FieldMismatch(f"part {k} is over {part.field}, expected {f}")
        if part.t != t:
            raise GeneratorCountMismatch(f"part {k} has {part.t} generators, expected {t}")
    size = sum(part.n for part in parts)
    gens = []
    for i in range(t):
        e = [f.zero] * (size * size)
        off = 0
        for part in parts:
            g = part.generators[i]
            for r in range(part.n):
                for c in range(part.n):
                    e[(off + r) * size + off + c] = g[r, c]
            off += part.n
        gens.append(Matrix(size, size, e, f, _trusted=True))
    names = parts[0].generator_names
    return AlgebraPresentation(f, size, tuple(gens), all(p.include_unit for p in parts), names)
