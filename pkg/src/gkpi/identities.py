"""Standard identities and the dimension / pi-degree bound.

``standard_polynomial_eval`` computes S_m(x_1, ..., x_m), the signed sum of
all m! ordered products. ``test_identity`` decides whether S_m vanishes on
the algebra generated by a presentation: S_m is multilinear and alternating,
so it vanishes on the whole algebra as soon as it vanishes on every set of m
distinct elements of a spanning basis. That basis test is a proof; the
random mode only gathers evidence.

The bound side turns a growth constant c into the largest n with
n^2 <= c^2 (n+1) - c + 1, the same quantity as the floor of
(c^2 + sqrt(c^4 + 4c^2 - 4c + 4)) / 2, computed in integer arithmetic only.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, InputError, InvalidBound, SizeMismatch
from .growth import (DEFAULT_BUDGET, AlgebraPresentation, Filtration, GrowthProfile,
                     measured_bergman_bound)
from .linalg import Field, Matrix

DEFAULT_DEGREE_CAP = 12
BOUND_SCHEMA = "bound-v1"
N_REAL_DIGITS = 12


# --------------------------------------------------------------------------
# standard polynomial
# --------------------------------------------------------------------------

def standard_polynomial_eval(args: Sequence[Matrix], cap: int = DEFAULT_DEGREE_CAP) -> Matrix:
    """S_m(x_1..x_m) = sum over permutations of sgn(s) x_s(1) ... x_s(m).

    Permutations are walked depth first, so every partial product is shared by
    all permutations that extend it; the sign is tracked from the position of
    each chosen argument among those still unused.
    """
    args = list(args)
    m = len(args)
    if m < 1:
        raise InputError("S_m needs at least one argument")
    if m > cap:
        raise BudgetExceeded(f"S_{m} has {math.factorial(m)} terms; degree cap is {cap}")
    first = args[0]
    for a in args:
        if not a.is_square or a.rows != first.rows or a.field != first.field:
            raise SizeMismatch("standard polynomial arguments must be square, of one size, over one field")
    f = first.field
    size = first.rows
    total = [f.zero] * (size * size)

    def walk(prefix: Matrix, remaining: list[int], sign: int):
        if not remaining:
            for i, x in enumerate(prefix.entries):
                total[i] = total[i] + x if sign > 0 else total[i] - x
            return
        for pos, k in enumerate(remaining):
            walk(prefix @ args[k], remaining[:pos] + remaining[pos + 1:], -sign if pos & 1 else sign)

    for pos in range(m):
        walk(args[pos], [k for k in range(m) if k != pos], -1 if pos & 1 else 1)
    return Matrix(size, size, (f.norm(x) for x in total), f, _trusted=True)


def _int_bound(batch: np.ndarray, m: int) -> int:
    size = batch.shape[-1]
    b = int(np.abs(batch).max()) if batch.size else 0
    return math.factorial(m) * size ** (m - 1) * b ** m


def standard_polynomial_batch(batch, p: int | None = None) -> np.ndarray:
    """Evaluate S_m on many tuples at once with integer numpy arithmetic.

    ``batch`` has shape (B, m, n, n). With ``p`` given, entries are residues
    mod p and the result is reduced mod p; without it the entries are
    integers (rational inputs with cleared denominators) and the result is the
    exact integer value. Object dtype is used whenever int64 could overflow.
    """
    batch = np.asarray(batch)
    if batch.ndim != 4 or batch.shape[2] != batch.shape[3]:
        raise SizeMismatch("batch must have shape (B, m, n, n)")
    B, m, n, _ = batch.shape
    if p is None:
        safe = _int_bound(batch, m) < 2 ** 62
    else:
        safe = n * (p - 1) ** 2 < 2 ** 62
    dtype = np.int64 if safe else object
    batch = batch.astype(dtype)
    total = np.zeros((B, n, n), dtype=dtype)

    def walk(prefix, remaining, sign):
        nonlocal total
        if not remaining:
            total = total + prefix if sign > 0 else total - prefix
            if p is not None:
                total %= p
            return
        for pos, k in enumerate(remaining):
            nxt = prefix @ batch[:, k]
            if p is not None:
                nxt %= p
            walk(nxt, remaining[:pos] + remaining[pos + 1:], -sign if pos & 1 else sign)

    for pos in range(m):
        walk(batch[:, pos], [k for k in range(m) if k != pos], -1 if pos & 1 else 1)
    if p is not None:
        total %= p
    return total


# --------------------------------------------------------------------------
# identity testing on a presented algebra
# --------------------------------------------------------------------------

@dataclass
class IdentityVerdict:
    degree: int
    mode: str
    vanishes: bool
    tuples_tested: int
    counterexample: tuple[Matrix, ...] | None = None
    counterexample_words: tuple | None = None
    value: Matrix | None = None
    seed: int | None = None
    trials: int | None = None
    basis_size: int | None = None


def algebra_basis(pres: AlgebraPresentation, budget: int = DEFAULT_BUDGET):
    """Basis words of the algebra and their matrices, unit word last."""
    filt = Filtration(pres, budget)
    filt.extend_to_stable()
    pairs = list(zip(filt.words, filt.images))
    pairs.sort(key=lambda wm: len(wm[0]) == 0)  # stable: empty word moves to the end
    return pairs


def test_identity(pres: AlgebraPresentation, m: int, mode: str = "basis", trials: int = 100,
                  seed: int = 0, budget: int = DEFAULT_BUDGET, cap: int = DEFAULT_DEGREE_CAP) -> IdentityVerdict:
    """Does S_m vanish on the algebra generated by ``pres``?

    Modes:
      ``basis``    all m-subsets of a spanning basis (a proof, by
                   multilinearity and alternation);
      ``elements`` every m-tuple of algebra elements (prime fields only);
      ``random``   ``trials`` tuples of random algebra elements, each trial
                   seeded from (seed, trial index).
    """
    if m < 1:
        raise InputError("degree m must be at least 1")
    if m > cap:
        raise BudgetExceeded(f"degree {m} exceeds the cap {cap}")
    f = pres.field
    basis = algebra_basis(pres, budget)
    mats = [b for _, b in basis]
    if mode == "basis":
        total = math.comb(len(mats), m)
        if total * math.factorial(m) > budget * 100:
            raise BudgetExceeded(f"{total} basis subsets of size {m} exceed the budget")
        tested = 0
        for combo in itertools.combinations(range(len(mats)), m):
            tested += 1
            value = standard_polynomial_eval([mats[k] for k in combo], cap)
            if not value.is_zero():
                return IdentityVerdict(m, mode, False, tested, tuple(mats[k] for k in combo),
                                       tuple(basis[k][0] for k in combo), value, basis_size=len(mats))
        return IdentityVerdict(m, mode, True, tested, basis_size=len(mats))
    if mode == "elements":
        if f.p is None:
            raise InputError("elements mode needs a prime field")
        elements = _all_elements(mats, f, budget)
        return _exhaustive_tuples(elements, m, f, budget, basis_size=len(mats))
    if mode == "random":
        if trials < 1:
            raise InputError("random mode needs at least one trial")
        for trial in range(trials):
            rng = random.Random(f"{seed}:{trial}")
            args = [_random_element(mats, f, rng) for _ in range(m)]
            value = standard_polynomial_eval(args, cap)
            if not value.is_zero():
                return IdentityVerdict(m, mode, False, trial + 1, tuple(args), None, value, seed, trials,
                                       len(mats))
        return IdentityVerdict(m, mode, True, trials, seed=seed, trials=trials, basis_size=len(mats))
    raise InputError(f"unknown mode {mode!r}")


def _random_element(mats, f: Field, rng: random.Random) -> Matrix:
    acc = Matrix.zeros(mats[0].rows, mats[0].cols, f)
    for b in mats:
        c = rng.randrange(f.p) if f.p is not None else Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        acc = acc + b.scale(c)
    return acc


def _all_elements(mats, f: Field, budget: int) -> np.ndarray:
    count = f.p ** len(mats)
    if count > budget:
        raise BudgetExceeded(f"the algebra has {count} elements (budget {budget})")
    basis = np.array([[int(x) for x in b.entries] for b in mats], dtype=np.int64)
    coeffs = np.array(list(itertools.product(range(f.p), repeat=len(mats))), dtype=np.int64)
    n = mats[0].rows
    return ((coeffs @ basis) % f.p).reshape(count, n, n)


def _exhaustive_tuples(elements: np.ndarray, m: int, f: Field, budget: int, basis_size=None,
                       chunk: int = 1 << 14) -> IdentityVerdict:
    count = len(elements)
    total = count ** m
    if total > budget * 10:
        raise BudgetExceeded(f"{total} tuples exceed the budget")
    n = elements.shape[-1]
    index_iter = itertools.product(range(count), repeat=m)
    tested = 0
    while True:
        idx = np.array(list(itertools.islice(index_iter, chunk)), dtype=np.int64)
        if idx.size == 0:
            break
        vals = standard_polynomial_batch(elements[idx], f.p)
        nonzero = np.flatnonzero(vals.reshape(len(idx), -1).any(axis=1))
        if nonzero.size:
            k = int(nonzero[0])
            args = tuple(Matrix(n, n, (int(x) for x in elements[j].ravel()), f) for j in idx[k])
            value = Matrix(n, n, (int(x) for x in vals[k].ravel()), f)
            return IdentityVerdict(m, "elements", False, tested + k + 1, args, None, value,
                                   basis_size=basis_size)
        tested += len(idx)
    return IdentityVerdict(m, "elements", True, tested, basis_size=basis_size)


def exhaustive_full_matrix_test(n: int, m: int, f: Field, budget: int = DEFAULT_BUDGET) -> IdentityVerdict:
    """S_m on every m-tuple of M_n(F_p)."""
    if f.p is None:
        raise InputError("exhaustive testing needs a prime field")
    units = [Matrix.unit(n, i, j, f) for i in range(1, n + 1) for j in range(1, n + 1)]
    return _exhaustive_tuples(_all_elements(units, f, budget), m, f, budget, basis_size=n * n)


# --------------------------------------------------------------------------
# bounds
# --------------------------------------------------------------------------

def _discriminant(c: int) -> int:
    return c ** 4 + 4 * c * c - 4 * c + 4


def max_irrep_dim(c: int) -> int:
    """Largest n >= 1 with n^2 <= c^2 (n+1) - c + 1, in exact integers."""
    if not isinstance(c, int) or c < 1:
        raise InvalidBound(f"growth constant must be an integer >= 1, got {c!r}")
    # positive root of n^2 - c^2 n - (c^2 - c + 1); floor((a + sqrt D)/2) = (a + isqrt D) // 2
    n = (c * c + math.isqrt(_discriminant(c))) // 2
    assert n * n <= c * c * (n + 1) - c + 1 < (n + 1) ** 2
    return n


def closed_form_digits(c: int, digits: int = N_REAL_DIGITS) -> str:
    """(c^2 + sqrt(c^4 + 4c^2 - 4c + 4)) / 2 truncated to ``digits`` decimals."""
    if c < 1:
        raise InvalidBound(f"growth constant must be >= 1, got {c}")
    scale = 10 ** digits
    scaled = (c * c * scale + math.isqrt(_discriminant(c) * scale * scale)) // 2
    whole, frac = divmod(scaled, scale)
    return f"{whole}.{frac:0{digits}d}"


def bracket_closed_form(c: int, tol: Fraction = Fraction(1, 10 ** 6)) -> tuple[Fraction, Fraction]:
    """Rationals lo <= N(c) <= hi with hi - lo <= tol.

    With 2^k >= 1/tol and s = isqrt(D * 4^k), s / 2^k <= sqrt(D) < (s + 1) / 2^k,
    so the bracket is certified by one exact integer square root.
    """
    if c < 1:
        raise InvalidBound(f"growth constant must be >= 1, got {c}")
    d = _discriminant(c)
    k = math.ceil(1 / tol).bit_length()
    scale = 1 << k
    s = math.isqrt(d * scale * scale)
    a = c * c * scale
    lo = Fraction(a + s, 2 * scale)
    hi = lo if s * s == d * scale * scale else Fraction(a + s + 1, 2 * scale)
    return lo, hi


@dataclass
class BoundReport:
    measured_c: int
    n: int | None
    N_int: int
    N_real: str
    remark_bound: int
    pi_degree_claim: int
    c_note: str | None = None
    stabilized: bool = True
    empirical: IdentityVerdict | None = None
    notes: list[str] = dc_field(default_factory=list)


REPORT_NOTES = [
    "c is the measured Bergman bound of the supplied generating set; the minimum over all "
    "generating sets can be smaller, so the bound may not be tight.",
    "pi degree at most N is tested through the standard identity S_2N.",
    "basis mode checks every set of distinct basis elements; by multilinearity and alternation "
    "this proves the identity on the whole algebra.",
]


def pi_degree_bound(profile: GrowthProfile, pres: AlgebraPresentation | None = None, mode: str = "basis",
                    degree: int | None = None, trials: int = 100, seed: int = 0,
                    budget: int = DEFAULT_BUDGET) -> BoundReport:
    """Assemble the bound report and, with a presentation, test S_2min(N,n)."""
    c = measured_bergman_bound(profile)
    note = None
    if c < 1:
        note = f"measured bound {c} clamped to 1"
        c = 1
    n_int = max_irrep_dim(c)
    report = BoundReport(
        measured_c=c, n=pres.n if pres is not None else None, N_int=n_int,
        N_real=closed_form_digits(c), remark_bound=c * c + 1, pi_degree_claim=n_int,
        c_note=note, stabilized=profile.stabilized_at is not None, notes=list(REPORT_NOTES),
    )
    if not report.stabilized:
        report.notes.append("profile did not stabilize inside the window; c is a lower estimate")
    if pres is not None:
        m = degree if degree is not None else 2 * min(n_int, pres.n)
        report.empirical = test_identity(pres, m, mode, trials, seed, budget)
    return report
