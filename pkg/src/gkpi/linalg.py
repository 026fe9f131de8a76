"""Exact field arithmetic and dense linear algebra.

Two kinds of base field are supported: the rationals (elements are
``fractions.Fraction``) and prime fields ``F_p`` (elements are canonical
residues ``0 <= x < p`` held as plain ints). Matrices are immutable and carry
their field; all arithmetic is exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import DimensionMismatch, FieldMismatch, InputError, NotSquare

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")
_INTEGER_RE = re.compile(r"^\s*[+-]?\d+\s*$")


def _is_prime(p: int) -> bool:
    from sympy import isprime

    return bool(isprime(p))


@dataclass(frozen=True)
class Field:
    """A base field: the rationals when ``p`` is None, else ``F_p``."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not isinstance(self.p, int) or isinstance(self.p, bool):
                raise InputError(f"field characteristic must be an integer, got {self.p!r}")
            if self.p < 2 or not _is_prime(self.p):
                raise InputError(f"{self.p} is not prime")

    @property
    def is_prime(self) -> bool:
        return self.p is not None

    @property
    def zero(self):
        return 0 if self.p is not None else Fraction(0)

    @property
    def one(self):
        return 1 if self.p is not None else Fraction(1)

    def __call__(self, x):
        """Coerce an int, Fraction or scalar string into this field."""
        if isinstance(x, str):
            return self.parse(x)
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def norm(self, x):
        # canonicalize the result of raw +, -, * on field elements
        if self.p is None:
            return x if isinstance(x, Fraction) else Fraction(x)
        return x % self.p

    def neg(self, x):
        return (-x) % self.p if self.p is not None else -x

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / x
        return pow(x, -1, self.p)

    def parse(self, text: str):
        if not isinstance(text, str):
            raise InputError(f"scalar must be a string, got {text!r}")
        if self.p is None:
            m = _RATIONAL_RE.match(text)
            if not m:
                raise InputError(f"malformed rational scalar {text!r}")
            den = int(m.group(2)) if m.group(2) is not None else 1
            if den == 0:
                raise InputError(f"zero denominator in scalar {text!r}")
            return Fraction(int(m.group(1)), den)
        if not _INTEGER_RE.match(text):
            raise InputError(f"malformed F_{self.p} scalar {text!r}")
        return int(text) % self.p

    def format(self, x) -> str:
        if self.p is None:
            x = Fraction(x)
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(int(x) % self.p)

    def to_json(self):
        return "Q" if self.p is None else {"Fp": self.p}

    def __str__(self):
        return "Q" if self.p is None else f"F_{self.p}"


QQ = Field()


def GF(p: int) -> Field:
    return Field(p)


class Matrix:
    """Immutable dense matrix over a :class:`Field`, stored row-major."""

    __slots__ = ("rows", "cols", "entries", "field", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable, field: Field = QQ, *, _trusted=False):
        entries = tuple(entries) if _trusted else tuple(field(x) for x in entries)
        if rows < 1 or cols < 1:
            raise DimensionMismatch(f"matrix shape must be positive, got {rows}x{cols}")
        if len(entries) != rows * cols:
            raise DimensionMismatch(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self.field = field
        self._hash = None

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field = QQ) -> "Matrix":
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise DimensionMismatch("empty matrix")
        width = len(rows[0])
        for i, r in enumerate(rows):
            if len(r) != width:
                raise DimensionMismatch(f"row {i} has {len(r)} entries, expected {width}")
        return cls(len(rows), width, (x for r in rows for x in r), field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "Matrix":
        one, zero = field.one, field.zero
        return cls(n, n, (one if i == j else zero for i in range(n) for j in range(n)), field, _trusted=True)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None, field: Field = QQ) -> "Matrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, [field.zero] * (rows * cols), field, _trusted=True)

    @classmethod
    def unit(cls, n: int, i: int, j: int, field: Field = QQ) -> "Matrix":
        """Matrix unit E_{ij} (1-based indices, as in the usual notation)."""
        e = [field.zero] * (n * n)
        e[(i - 1) * n + (j - 1)] = field.one
        return cls(n, n, e, field, _trusted=True)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolist(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not any(self.entries)

    def _check_compatible(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldMismatch(f"cannot combine matrices over {self.field} and {other.field}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_compatible(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in addition")
        f = self.field
        return Matrix(self.rows, self.cols, (f.norm(a + b) for a, b in zip(self.entries, other.entries)),
                      f, _trusted=True)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_compatible(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in subtraction")
        f = self.field
        return Matrix(self.rows, self.cols, (f.norm(a - b) for a, b in zip(self.entries, other.entries)),
                      f, _trusted=True)

    def __neg__(self) -> "Matrix":
        f = self.field
        return Matrix(self.rows, self.cols, (f.neg(a) for a in self.entries), f, _trusted=True)

    def scale(self, c) -> "Matrix":
        f = self.field
        c = f(c)
        return Matrix(self.rows, self.cols, (f.norm(c * a) for a in self.entries), f, _trusted=True)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_compatible(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        f = self.field
        a, b = self.entries, other.entries
        k, c = self.cols, other.cols
        out = []
        for i in range(self.rows):
            arow = a[i * k:(i + 1) * k]
            for j in range(c):
                out.append(f.norm(sum(arow[t] * b[t * c + j] for t in range(k))))
        return Matrix(self.rows, c, out, f, _trusted=True)

    def __pow__(self, e: int) -> "Matrix":
        if not self.is_square:
            raise NotSquare("power of a non-square matrix")
        result = Matrix.identity(self.rows, self.field)
        base = self
        while e > 0:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def trace(self):
        if not self.is_square:
            raise NotSquare("trace of a non-square matrix")
        return self.field.norm(sum(self.entries[i * self.cols + i] for i in range(self.rows)))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols, self.field, self.entries) == (other.rows, other.cols, other.field, other.entries)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.field, self.entries))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in self.row(i)) for i in range(self.rows))
        return f"Matrix[{self.field}]({body})"


# --------------------------------------------------------------------------
# row reduction
# --------------------------------------------------------------------------

class RrefResult(NamedTuple):
    reduced: Matrix
    rank: int
    pivot_cols: list[int]


def rref(m: Matrix) -> RrefResult:
    """Reduced row-echelon form by leftmost-pivot Gauss-Jordan elimination.

    The pivot row for each column is the first row at or below the current
    position with a nonzero entry; the pivot is scaled to one and the column is
    cleared above and below.
    """
    f = m.field
    rows = [list(m.row(i)) for i in range(m.rows)]
    pivots = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        pr = next((i for i in range(r, m.rows) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = f.inv(rows[r][c])
        rows[r] = [f.norm(x * inv) for x in rows[r]]
        for i in range(m.rows):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [f.norm(x - factor * y) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    reduced = Matrix(m.rows, m.cols, (x for row in rows for x in row), f, _trusted=True)
    return RrefResult(reduced, r, pivots)


def rank(vectors: Sequence[Sequence], field: Field = QQ) -> int:
    vectors = [list(v) for v in vectors]
    if not vectors:
        return 0
    return rref(Matrix.from_rows(vectors, field)).rank


class EchelonBasis:
    """Incrementally built echelon basis that remembers how rows were made.

    Every inserted vector is assigned an index. Independent insertions become
    stored rows, each kept with its expression as a combination of inserted
    vectors, so that any vector in the span can be written back in terms of
    the originals. Stored rows have zeros at the pivots of all earlier rows,
    which lets a prefix of the stored rows act as a basis for the span of the
    corresponding prefix of independent insertions.
    """

    def __init__(self, length: int, field: Field = QQ):
        self.length = length
        self.field = field
        self._rows: list[tuple[int, list, dict]] = []  # (pivot, normalized row, combo)
        self.count = 0  # number of insert() calls

    def __len__(self):
        return len(self._rows)

    def _reduce(self, v, limit=None):
        f = self.field
        v = list(v)
        if len(v) != self.length:
            raise DimensionMismatch(f"vector of length {len(v)} in a space of dimension {self.length}")
        used = []
        for pivot, row, combo in self._rows[:limit]:
            a = v[pivot]
            if a != 0:
                v = [f.norm(x - a * y) for x, y in zip(v, row)]
                used.append((a, combo))
        return v, used

    def insert(self, v) -> bool:
        """Insert a vector; return True when it enlarged the span."""
        f = self.field
        index = self.count
        self.count += 1
        residual, used = self._reduce(v)
        pivot = next((i for i, x in enumerate(residual) if x != 0), None)
        if pivot is None:
            return False
        inv = f.inv(residual[pivot])
        combo = {index: f.one}
        for a, c in used:
            for k, x in c.items():
                combo[k] = f.norm(combo.get(k, f.zero) - a * x)
        row = [f.norm(x * inv) for x in residual]
        combo = {k: f.norm(x * inv) for k, x in combo.items() if x != 0}
        self._rows.append((pivot, row, combo))
        return True

    def express(self, v, limit: int | None = None) -> dict | None:
        """Write ``v`` as {inserted index: coefficient}, or None if outside the span.

        ``limit`` restricts to the first ``limit`` stored rows.
        """
        f = self.field
        residual, used = self._reduce(v, limit)
        if any(residual):
            return None
        out: dict = {}
        for a, combo in used:
            for k, x in combo.items():
                out[k] = f.norm(out.get(k, f.zero) + a * x)
        return {k: x for k, x in sorted(out.items()) if x != 0}

    def contains(self, v, limit: int | None = None) -> bool:
        residual, _ = self._reduce(v, limit)
        return not any(residual)


class Dependence(NamedTuple):
    coefficients: list          # alpha_j, one per target, not all zero
    residual: list              # u, a vector in the span of ``modulo``
    modulo_coefficients: dict   # u written over the modulo vectors {index: coeff}


def solve_dependence(targets: Sequence[Sequence], modulo: Sequence[Sequence] = (),
                     field: Field = QQ) -> Dependence | None:
    """Find sum_j alpha_j v_j + u = 0 with u in span(modulo), alphas not all zero.

    Among all such relations the one returned has the largest possible index
    carrying a nonzero coefficient. It is scaled so the first nonzero
    coefficient equals one. Returns None when the targets are independent
    modulo the subspace.
    """
    targets = [list(t) for t in targets]
    modulo = [list(u) for u in modulo]
    vecs = targets + modulo
    if not vecs:
        return None
    length = len(vecs[0])
    for v in vecs:
        if len(v) != length:
            raise DimensionMismatch("all vectors must have equal length")
    f = field
    k = len(targets)
    for p in range(k - 1, -1, -1):
        basis = EchelonBasis(length, f)
        for u in modulo:
            basis.insert(u)
        others = [j for j in range(k) if j != p]
        for j in others:
            basis.insert(targets[j])
        combo = basis.express(targets[p])
        if combo is None:
            continue
        # v_p = sum combo, so v_p - sum_j beta_j v_j - u' = 0
        alphas = [f.zero] * k
        alphas[p] = f.one
        mod_coeffs = {}
        for idx, x in combo.items():
            if idx < len(modulo):
                mod_coeffs[idx] = f.neg(x)
            else:
                alphas[others[idx - len(modulo)]] = f.neg(x)
        lead = next(a for a in alphas if a != 0)
        scale = f.inv(lead)
        alphas = [f.norm(a * scale) for a in alphas]
        mod_coeffs = {i: f.norm(x * scale) for i, x in mod_coeffs.items()}
        residual = [f.zero] * length
        for i, x in mod_coeffs.items():
            residual = [f.norm(r + x * y) for r, y in zip(residual, modulo[i])]
        return Dependence(alphas, residual, mod_coeffs)
    return None


# --------------------------------------------------------------------------
# characteristic polynomial
# --------------------------------------------------------------------------

def charpoly(m: Matrix) -> list:
    """Monic characteristic polynomial coefficients [c_0, ..., c_{n-1}].

    Uses Berkowitz's algorithm, which needs only ring operations and is
    therefore valid in every characteristic.
    """
    if not m.is_square:
        raise NotSquare(f"charpoly needs a square matrix, got {m.rows}x{m.cols}")
    f = m.field
    n = m.rows
    a = m.tolist()
    # vec holds det(lambda I - A_r) coefficients, highest degree first
    vec = [f.one, f.norm(-a[0][0])]
    for r in range(1, n):
        # leading principal block A_r (r x r), column R, row S, corner a_rr
        R = [a[i][r] for i in range(r)]
        S = a[r][:r]
        A = [row[:r] for row in a[:r]]
        # Toeplitz column: 1, -a_rr, -S R, -S A R, -S A^2 R, ...
        col = [f.one, f.norm(-a[r][r])]
        x = R
        for _ in range(r):
            col.append(f.norm(-sum(s * y for s, y in zip(S, x))))
            x = [f.norm(sum(A[i][j] * x[j] for j in range(r))) for i in range(r)]
        new = []
        for i in range(r + 2):
            new.append(f.norm(sum(col[i - j] * vec[j] for j in range(min(i, r) + 1))))
        vec = new
    # vec = [1, c_{n-1}, ..., c_0]
    return list(reversed(vec[1:]))


def eval_poly_at_matrix(coeffs: Sequence, m: Matrix) -> Matrix:
    """Evaluate m^n + c_{n-1} m^{n-1} + ... + c_0 I with n = len(coeffs)."""
    if not m.is_square:
        raise NotSquare(f"cannot evaluate a polynomial at a {m.rows}x{m.cols} matrix")
    f = m.field
    ident = Matrix.identity(m.rows, f)
    acc = ident
    for c in reversed(list(coeffs)):
        acc = acc @ m + ident.scale(c)
    return acc
