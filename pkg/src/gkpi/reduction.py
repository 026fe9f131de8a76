"""Rewriting long words into strictly shorter ones, with certificates.

If the growth filtration of S in M_n(k) has every jump d_i - d_{i-1} at most
ell, then every word of length m = ell*(n+1) is a linear combination of
shorter words. :class:`LemmaEngine` makes this constructive. A single step
on a length-m word w looks at its ell+1 windows of length ell*n:

* two windows with the same matrix and the same letters force a power u^n
  inside w, which Cayley-Hamilton for the matrix of u removes;
* two windows with the same matrix but different letters let w be respelled
  with the lexicographically smaller window;
* otherwise the windows are ell+1 distinct elements of kS^{ell*n}, hence
  dependent modulo kS^{ell*n-1}; the window with the largest letter sequence
  among those with nonzero coefficient is solved for and substituted.

Every step produces only shorter words or same-length words that are
lexicographically smaller, so repeatedly rewriting the largest remaining
length-m word terminates. A final pass writes all surviving shorter words in
the basis words of the filtration, giving a canonical expression.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Any

from .errors import (BudgetExceeded, GrowthHypothesisViolated, InvalidEll,
                     StepBudgetExceeded, WrongLength)
from .growth import DEFAULT_BUDGET, AlgebraPresentation, Filtration, is_irreducible
from .linalg import Matrix, charpoly, solve_dependence
from .words import Word, consecutive_subwords, enumerate_words, lenlex_key, power_decompose

IN_SPAN = "InSpan"
DEPENDENCE = "DependenceSubstitution"
CAYLEY_HAMILTON = "CayleyHamilton"

CERT_SCHEMA = "cert-v1"


@dataclass
class RewriteStep:
    kind: str
    input_word: Word
    output_terms: list[tuple[Any, Word]]
    detail: dict = dc_field(default_factory=dict)


@dataclass
class ReductionCertificate:
    word: Word
    terms: list[tuple[Any, Word]]
    trace: list[RewriteStep]
    ell: int | None = None


@dataclass
class CertificateCheck:
    ok: bool
    reason: str | None = None

    def __bool__(self):
        return self.ok


def _linear_combination(pres: AlgebraPresentation, terms, image) -> Matrix:
    f = pres.field
    acc = Matrix.zeros(pres.n, pres.n, f)
    for c, w in terms:
        acc = acc + image(w).scale(c)
    return acc


class LemmaEngine:
    """Reduction machinery for one presentation and one value of ell."""

    def __init__(self, pres: AlgebraPresentation, ell: int, budget: int = DEFAULT_BUDGET,
                 step_budget: int = 100_000):
        if ell < 1:
            raise ValueError("ell must be a positive integer")
        self.pres = pres
        self.ell = ell
        self.n = pres.n
        self.m = ell * (pres.n + 1)
        self.window = ell * pres.n
        self.step_budget = step_budget
        self.filtration = Filtration(pres, budget)
        self.filtration.extend(self.m)
        dims = self.filtration.dims
        for i in range(1, self.m + 1):
            if dims[i] - dims[i - 1] > ell:
                raise GrowthHypothesisViolated(
                    f"d_{i} - d_{i - 1} = {dims[i] - dims[i - 1]} exceeds ell = {ell}")
        self._images: dict[Word, Matrix] = {(): Matrix.identity(pres.n, pres.field)}
        self._modulo = None

    def image(self, w: Word) -> Matrix:
        img = self._images.get(w)
        if img is None:
            img = self.image(w[:-1]) @ self.pres.generators[w[-1]]
            self._images[w] = img
        return img

    def _check(self, step: RewriteStep) -> RewriteStep:
        key = lenlex_key(step.input_word)
        for _, w in step.output_terms:
            if lenlex_key(w) >= key:
                raise AssertionError(f"{step.kind} step on {step.input_word} produced non-smaller word {w}")
        if _linear_combination(self.pres, step.output_terms, self.image) != self.image(step.input_word):
            raise AssertionError(f"{step.kind} step on {step.input_word} breaks the matrix identity")
        return step

    def _collect(self, pairs) -> list[tuple[Any, Word]]:
        f = self.pres.field
        acc: dict[Word, Any] = {}
        for c, w in pairs:
            acc[w] = f.norm(acc.get(w, f.zero) + c)
        return [(c, w) for w, c in sorted(acc.items(), key=lambda kv: lenlex_key(kv[0]), reverse=True) if c != 0]

    def in_span_step(self, w: Word) -> RewriteStep:
        """Coordinates of w over the basis words of length <= |w| (w itself excluded)."""
        level = len(w) - 1 if len(w) >= self.m else len(w)
        combo = self.filtration.express(self.image(w), max(level, 0))
        if combo is None:
            raise GrowthHypothesisViolated(f"word {w} is not in the span of shorter words")
        terms = self._collect((c, b) for b, c in combo.items())
        return self._check(RewriteStep(IN_SPAN, w, terms, {"level": level}))

    def step(self, w: Word) -> RewriteStep:
        w = tuple(w)
        if len(w) != self.m:
            raise WrongLength(f"word has length {len(w)}, expected ell*(n+1) = {self.m}")
        f = self.pres.field
        if self.image(w).is_zero():
            return self._check(RewriteStep(IN_SPAN, w, [], {"level": self.m - 1}))
        windows = consecutive_subwords(w, self.window)
        mats = [self.image(v) for _, v in windows]
        for i in range(len(windows)):
            for j in range(i + 1, len(windows)):
                if mats[i] != mats[j]:
                    continue
                vi, vj = windows[i][1], windows[j][1]
                if vi == vj:
                    return self._cayley_hamilton(w, i + 1, j + 1)
                # same matrix, different letters: respell with the smaller window
                if vj < vi:
                    start, small = i, vj
                else:
                    start, small = j, vi
                out = w[:start] + small + w[start + self.window:]
                detail = {"p": i + 1, "q": j + 1, "respelling": True}
                return self._check(RewriteStep(DEPENDENCE, w, [(f.one, out)], detail))
        return self._substitute(w, windows, mats)

    def _cayley_hamilton(self, w: Word, p: int, q: int) -> RewriteStep:
        f = self.pres.field
        dec = power_decompose(w, p, q, self.n, self.window)
        cp = charpoly(self.image(dec.base))
        # u^n = -(c_{n-1} u^{n-1} + ... + c_0)
        pairs = [(f.neg(c), dec.prefix + dec.base * k + dec.suffix) for k, c in enumerate(cp) if c != 0]
        detail = {"p": p, "q": q, "prefix": dec.prefix, "base": dec.base, "exponent": dec.exponent,
                  "suffix": dec.suffix, "charpoly": list(cp)}
        return self._check(RewriteStep(CAYLEY_HAMILTON, w, self._collect(pairs), detail))

    def _modulo_basis(self):
        if self._modulo is None:
            limit = self.filtration.span_limit(self.window - 1)
            words = self.filtration.words[:limit]
            self._modulo = (words, [self.filtration.images[k].entries for k in range(limit)])
        return self._modulo

    def _substitute(self, w: Word, windows, mats) -> RewriteStep:
        f = self.pres.field
        order = sorted(range(len(windows)), key=lambda k: windows[k][1])
        mod_words, mod_vecs = self._modulo_basis()
        dep = solve_dependence([mats[k].entries for k in order], mod_vecs, f)
        if dep is None:
            raise GrowthHypothesisViolated(
                f"windows of {w} are independent modulo kS^{self.window - 1}")
        top = max(k for k, a in enumerate(dep.coefficients) if a != 0)
        start = order[top]
        prefix, suffix = w[:start], w[start + self.window:]
        scale = f.neg(f.inv(dep.coefficients[top]))
        pairs = []
        for k, a in enumerate(dep.coefficients):
            if k != top and a != 0:
                pairs.append((f.norm(scale * a), prefix + windows[order[k]][1] + suffix))
        for idx, mu in dep.modulo_coefficients.items():
            pairs.append((f.norm(scale * mu), prefix + mod_words[idx] + suffix))
        detail = {
            "p": start + 1,
            "alphas": {order[k] + 1: a for k, a in enumerate(dep.coefficients) if a != 0},
            "u": [(mu, mod_words[idx]) for idx, mu in sorted(dep.modulo_coefficients.items())],
            "respelling": False,
        }
        return self._check(RewriteStep(DEPENDENCE, w, self._collect(pairs), detail))

    def reduce(self, w: Word) -> ReductionCertificate:
        w = tuple(w)
        if len(w) != self.m:
            raise WrongLength(f"word has length {len(w)}, expected ell*(n+1) = {self.m}")
        f = self.pres.field
        terms: dict[Word, Any] = {w: f.one}
        trace: list[RewriteStep] = []

        def apply(step, coeff):
            trace.append(step)
            for c, y in step.output_terms:
                val = f.norm(terms.get(y, f.zero) + coeff * c)
                if val == 0:
                    terms.pop(y, None)
                else:
                    terms[y] = val

        while True:
            top = [x for x in terms if len(x) == self.m]
            if not top:
                break
            if len(trace) >= self.step_budget:
                raise StepBudgetExceeded(f"reduction of {w} exceeded {self.step_budget} steps", trace)
            x = max(top)
            apply(self.step(x), terms.pop(x))
        basis = self.filtration.index
        for x in sorted((y for y in terms if y not in basis), key=lenlex_key, reverse=True):
            apply(self.in_span_step(x), terms.pop(x))
        final = [(c, y) for y, c in sorted(terms.items(), key=lambda kv: lenlex_key(kv[0]), reverse=True)]
        return ReductionCertificate(w, final, trace, self.ell)


_ENGINES: dict = {}


def _engine(pres, ell, budget=DEFAULT_BUDGET) -> LemmaEngine:
    key = (pres, ell, budget)
    eng = _ENGINES.get(key)
    if eng is None:
        if len(_ENGINES) > 64:
            _ENGINES.clear()
        eng = _ENGINES[key] = LemmaEngine(pres, ell, budget)
    return eng


def lemma_step(pres: AlgebraPresentation, w: Word, ell: int) -> RewriteStep:
    """One rewriting step on a word of length ell*(n+1)."""
    return _engine(pres, ell).step(tuple(w))


def reduce_word(pres: AlgebraPresentation, w: Word, ell: int) -> ReductionCertificate:
    """Write w, of length ell*(n+1), as a combination of strictly shorter words."""
    return _engine(pres, ell).reduce(tuple(w))


def verify_certificate(pres: AlgebraPresentation, cert: ReductionCertificate) -> CertificateCheck:
    """Independently re-check a certificate by exact matrix arithmetic.

    Checks, in order: every term is strictly shorter than the word; the
    matrix identity image(word) = sum c_i image(w_i); every trace step is
    itself an exact identity; replaying the trace reproduces the terms.
    """
    f = pres.field
    word = tuple(cert.word)
    if any(a >= pres.t for a in word):
        return CertificateCheck(False, "alphabet")
    for _, w in cert.terms:
        if len(w) >= len(word):
            return CertificateCheck(False, "length")
        if any(a >= pres.t for a in w):
            return CertificateCheck(False, "alphabet")
    if _linear_combination(pres, cert.terms, pres.image) != pres.image(word):
        return CertificateCheck(False, "matrix")
    current: dict[Word, Any] = {word: f.one}
    for step in cert.trace:
        if _linear_combination(pres, step.output_terms, pres.image) != pres.image(step.input_word):
            return CertificateCheck(False, "step-matrix")
        c = current.pop(tuple(step.input_word), f.zero)
        if c == 0:
            return CertificateCheck(False, "trace")
        for d, y in step.output_terms:
            y = tuple(y)
            val = f.norm(current.get(y, f.zero) + c * d)
            if val == 0:
                current.pop(y, None)
            else:
                current[y] = val
    expected = {tuple(w): f(c) for c, w in cert.terms if f(c) != 0}
    if current != expected:
        return CertificateCheck(False, "trace")
    return CertificateCheck(True)


@dataclass
class LemmaReport:
    n: int
    ell: int
    m: int
    measured_bound: int
    ell_note: str | None
    irreducible: bool
    algebra_dim: int
    dims: list[int]
    span_claim: bool | None          # d_{m-1} = n^2, checked only when irreducible
    all_reducible: bool              # d_m = d_{m-1}
    inequality_lhs: int              # n^2
    inequality_rhs: int              # ell^2 (n+1) - ell + 1
    seed: int
    certificates: list[ReductionCertificate] = dc_field(default_factory=list)
    certificate_checks: list[CertificateCheck] = dc_field(default_factory=list)

    @property
    def inequality_holds(self) -> bool:
        return self.inequality_lhs <= self.inequality_rhs

    @property
    def ok(self) -> bool:
        return (self.all_reducible and self.span_claim is not False
                and (not self.irreducible or self.inequality_holds)
                and all(self.certificate_checks))


def sample_words(t: int, m: int, k: int, seed: int) -> list[Word]:
    """Lex-first half of k words, then uniformly random distinct words."""
    if k <= 0:
        return []
    total = t ** m
    k = min(k, total)
    first = []
    for w in enumerate_words(t, m):
        if len(first) >= (k + 1) // 2:
            break
        first.append(w)
    chosen = list(first)
    seen = set(chosen)
    rng = random.Random(seed)
    while len(chosen) < k:
        w = tuple(rng.randrange(t) for _ in range(m))
        if w not in seen:
            seen.add(w)
            chosen.append(w)
    return chosen


def verify_comb_lemma(pres: AlgebraPresentation, ell: int | None = None, certificates: int = 0,
                      seed: int = 0, budget: int = DEFAULT_BUDGET) -> LemmaReport:
    """Check the reduction lemma and the resulting dimension count on ``pres``."""
    filt = Filtration(pres, budget)
    filt.extend_to_stable()
    measured = max((b - a for a, b in zip(filt.dims, filt.dims[1:])), default=0)
    note = None
    if ell is None:
        ell = measured
    elif ell < measured:
        raise InvalidEll(f"ell = {ell} is below the measured Bergman bound {measured}", measured)
    if ell < 1:
        note = f"ell = {ell} clamped to 1"
        ell = 1
    n = pres.n
    m = ell * (n + 1)
    filt.extend(m)
    dims = filt.dims[:m + 1]
    irreducible, algebra_dim = is_irreducible(pres, budget)
    report = LemmaReport(
        n=n, ell=ell, m=m, measured_bound=measured, ell_note=note,
        irreducible=irreducible, algebra_dim=algebra_dim, dims=list(dims),
        span_claim=(dims[m - 1] == n * n) if irreducible else None,
        all_reducible=dims[m] == dims[m - 1],
        inequality_lhs=n * n, inequality_rhs=ell * ell * (n + 1) - ell + 1,
        seed=seed,
    )
    if certificates:
        if pres.t ** m > budget and certificates > budget:
            raise BudgetExceeded("certificate sample exceeds the budget")
        for w in sample_words(pres.t, m, certificates, seed):
            cert = _engine(pres, ell, budget).reduce(w)
            report.certificates.append(cert)
            report.certificate_checks.append(verify_certificate(pres, cert))
    return report
