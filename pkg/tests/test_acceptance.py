"""Acceptance criteria, one test per criterion, each with its time limit.

Run alone with ``pytest tests/test_acceptance.py``; the terminal summary
prints one PASS/FAIL line per criterion.
"""

import io
import itertools
import math
import os
import random
import subprocess
import sys
import time
from contextlib import contextmanager

import pytest

from conftest import E, random_irreducible_corpus
from gkpi.cli import DEMO_RUNS, run
from gkpi.growth import (AlgebraPresentation, block_diagonal, is_irreducible, measured_bergman_bound,
                         span_filtration)
from gkpi.identities import (bracket_closed_form, exhaustive_full_matrix_test, max_irrep_dim,
                             standard_polynomial_eval)
from gkpi.identities import test_identity as identity_test
from gkpi.linalg import GF, QQ, Matrix, charpoly, eval_poly_at_matrix
from gkpi.monomial import MonomialPresentation, classify_growth, count_normal_words, growth_profile_monomial
from gkpi.reduction import ReductionCertificate, reduce_word, verify_certificate, verify_comb_lemma
from gkpi.words import enumerate_words

acceptance = pytest.mark.acceptance


@contextmanager
def within(seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.2f}s, limit {seconds}s"


@pytest.fixture(scope="module")
def corpus():
    return random_irreducible_corpus(60, seed=2024)


@acceptance("AC1: bound formula (1, 4, 9; floor agreement for c <= 10^4)")
def test_ac1_bound_formula():
    with within(1):
        assert [max_irrep_dim(c) for c in (1, 2, 3)] == [1, 4, 9]
        for c in range(1, 10 ** 4 + 1):
            n = max_irrep_dim(c)
            assert n * n <= c * c * (n + 1) - c + 1        # n qualifies
            assert (n + 1) ** 2 > c * c * (n + 2) - c + 1  # n + 1 does not
            lo, hi = bracket_closed_form(c)
            assert math.floor(lo) == math.floor(hi) == n


@acceptance("AC2: max_irrep_dim(c) <= c^2 + 1 for c <= 10^4")
def test_ac2_remark_bound():
    with within(1):
        assert all(max_irrep_dim(c) <= c * c + 1 for c in range(1, 10 ** 4 + 1))


@acceptance("AC3: reduction certificates (64 words of {E12,E21}; random F_5 corpus)")
def test_ac3_reduction_certificates(corpus):
    with within(30):
        pres = AlgebraPresentation.from_matrices([E(1, 2), E(2, 1)])
        rep = verify_comb_lemma(pres)
        assert (rep.n, rep.ell, rep.m) == (2, 2, 6)
        assert rep.dims[5] == 4
        words = list(enumerate_words(2, 6))
        assert len(words) == 64
        for w in words:
            assert verify_certificate(pres, reduce_word(pres, w, 2)), w
        assert len(corpus) >= 50
        for k, p in enumerate(corpus):
            assert p.field == GF(5) and p.n <= 3 and p.t <= 3
            r = verify_comb_lemma(p, certificates=6, seed=k)
            assert r.certificates and all(r.certificate_checks)
            assert r.all_reducible and r.span_claim


@acceptance("AC4: n <= max_irrep_dim(measured bound) on the corpus")
def test_ac4_proposition_consistency(corpus):
    with within(30):
        for p in corpus:
            prof = span_filtration(p, p.n ** 2 + 1)
            assert prof.stabilized_at is not None
            assert p.n <= max_irrep_dim(max(measured_bergman_bound(prof), 1))


@acceptance("AC5: S_4 on M_2(F_2) exhaustive, S_4 on {E12,E21}, S_3 witness")
def test_ac5_amitsur_levitzki():
    with within(60):
        v = exhaustive_full_matrix_test(2, 4, GF(2))
        assert v.vanishes and v.tuples_tested == 65536
        pres = AlgebraPresentation.from_matrices([E(1, 2), E(2, 1)])
        assert identity_test(pres, 4, mode="basis").vanishes
        witness = identity_test(pres, 3, mode="basis")
        assert not witness.vanishes
        assert sorted(witness.counterexample, key=lambda m: m.tolist()) == \
            sorted([E(1, 1), E(1, 2), E(2, 1)], key=lambda m: m.tolist())
        assert standard_polynomial_eval([E(1, 1), E(1, 2), E(2, 1)]) == Matrix.from_rows([[2, 0], [0, 1]])


@acceptance("AC6: block_diagonal(M_2, M_1) satisfies S_4")
def test_ac6_subdirect_product():
    with within(30):
        m2 = AlgebraPresentation.from_matrices([E(1, 2), E(2, 1)])
        m1 = AlgebraPresentation.from_matrices([[[1]], [[0]]])
        big = block_diagonal([m2, m1])
        assert big.n == 3
        assert identity_test(big, 4, mode="basis").vanishes


def _gf2_rank(vectors):
    pivots = {}
    for v in vectors:
        x = int("".join(str(int(b)) for b in v), 2)
        while x:
            top = x.bit_length() - 1
            if top not in pivots:
                pivots[top] = x
                break
            x ^= pivots[top]
    return len(pivots)


@acceptance("AC7: growth engine examples and F_2 brute-force agreement")
def test_ac7_growth_engine():
    with within(60):
        e = AlgebraPresentation.from_matrices([E(1, 2), E(2, 1)])
        u = AlgebraPresentation.from_matrices([E(1, 1), E(1, 2)])
        assert span_filtration(e, 4).dims == [1, 3, 4, 4, 4]
        assert span_filtration(u, 3).dims == [1, 3, 3, 3]
        assert is_irreducible(e) == (True, 4)
        assert is_irreducible(u) == (False, 3)
        f = GF(2)
        checked = 0
        for n in (1, 2):
            mats = [Matrix(n, n, x, f) for x in itertools.product(range(2), repeat=n * n)]
            for t in (1, 2):
                for gens in itertools.product(mats, repeat=t):
                    pres = AlgebraPresentation(f, n, gens)
                    vecs = [pres.image(()).entries]
                    brute = [_gf2_rank(vecs)]
                    for i in range(1, 7):
                        vecs += [pres.image(w).entries for w in itertools.product(range(t), repeat=i)]
                        brute.append(_gf2_rank(vecs))
                    assert span_filtration(pres, 6).dims == brute
                    checked += 1
        assert checked == 278


@acceptance("AC8: monomial growth ({yx,yy}, free algebra, automaton vs brute force)")
def test_ac8_monomial_growth():
    with within(30):
        mp = MonomialPresentation.from_strings("xy", ["yx", "yy"])
        assert all(count_normal_words(mp, q) == 2 for q in range(1, 21))
        assert growth_profile_monomial(mp, 20).differences == [2] * 20
        assert str(classify_growth(mp)) == "Polynomial(1)"
        assert str(classify_growth(MonomialPresentation.from_strings("xy", []))) == "Exponential"
        rng = random.Random(12)
        for k in range(24):
            t = 2 if k < 20 else 3
            forb = [tuple(rng.randrange(t) for _ in range(rng.randint(1, 4)))
                    for _ in range(rng.randint(1, 4))]
            p = MonomialPresentation(tuple("xyz"[:t]), tuple(forb))
            counts = p.graph.counts_upto(12)
            for q in range(13):
                words = itertools.product(range(t), repeat=q)
                assert counts[q] == sum(1 for w in words if p.is_normal(w)), (forb, q)


@acceptance("AC9: Cayley-Hamilton, S_m laws, certificate mutations")
def test_ac9_property_suites():
    with within(60):
        rng = random.Random(99)
        for i in range(1000):
            f = QQ if i % 2 else GF(rng.choice([2, 3, 5, 7]))
            n = rng.randint(1, 5)
            vals = [rng.randint(-9, 9) for _ in range(n * n)]
            m = Matrix(n, n, vals, f)
            assert eval_poly_at_matrix(charpoly(m), m).is_zero()
        for i in range(1000):
            f = QQ if i % 2 else GF(5)
            n, deg = rng.randint(1, 3), rng.randint(2, 4)
            args = [Matrix(n, n, [rng.randint(-3, 3) for _ in range(n * n)], f) for _ in range(deg)]
            base = standard_polynomial_eval(args)
            a, b = rng.sample(range(deg), 2)
            sw = list(args)
            sw[a], sw[b] = sw[b], sw[a]
            assert standard_polynomial_eval(sw) == -base
            k = rng.randrange(deg)
            y = Matrix(n, n, [rng.randint(-3, 3) for _ in range(n * n)], f)
            lam = f(rng.randint(-3, 3))
            mixed, other = list(args), list(args)
            mixed[k], other[k] = args[k].scale(lam) + y, y
            assert standard_polynomial_eval(mixed) == base.scale(lam) + standard_polynomial_eval(other)
        pres = AlgebraPresentation.from_matrices([E(1, 2), E(2, 1)])
        for w in enumerate_words(2, 6):
            cert = reduce_word(pres, w, 2)
            for j in range(len(cert.terms)):
                terms = list(cert.terms)
                c, y = terms[j]
                terms[j] = (c + 1, y)
                assert not verify_certificate(pres, ReductionCertificate(cert.word, terms, cert.trace, cert.ell))
            if not cert.terms and not pres.image(w).is_zero():
                pytest.fail(f"nonzero word {w} reduced to nothing")


@acceptance("AC10: demo commands produce byte-identical json for a fixed seed")
def test_ac10_determinism():
    with within(10):
        for argv in DEMO_RUNS:
            outs = []
            for _ in range(2):
                buf = io.StringIO()
                code = run(argv + ["--format", "json", "--seed", "3"], buf)
                outs.append((code, buf.getvalue()))
            assert outs[0] == outs[1], argv
        # separate processes with different hash seeds
        outputs = []
        for hash_seed in ("1", "2"):
            env = dict(os.environ, PYTHONHASHSEED=hash_seed)
            proc = subprocess.run([sys.executable, "-m", "gkpi", "demo", "--format", "json", "--seed", "3"],
                                  capture_output=True, env=env, check=True)
            outputs.append(proc.stdout)
        assert outputs[0] == outputs[1]
