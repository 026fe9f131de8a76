import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import E
from gkpi.errors import BudgetExceeded, InputError, InvalidBound, SizeMismatch
from gkpi.growth import AlgebraPresentation, block_diagonal, span_filtration
from gkpi.identities import (bracket_closed_form, closed_form_digits, exhaustive_full_matrix_test,
                             max_irrep_dim, pi_degree_bound, standard_polynomial_batch,
                             standard_polynomial_eval)
from gkpi.identities import test_identity as identity_test
from gkpi.linalg import GF, QQ, Matrix


def naive_standard(args):
    """Signed sum over itertools.permutations, sign from inversion count."""
    f = args[0].field
    n = args[0].rows
    total = Matrix.zeros(n, n, f)
    for perm in itertools.permutations(range(len(args))):
        inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
        prod = Matrix.identity(n, f)
        for k in perm:
            prod = prod @ args[k]
        total = total - prod if inv % 2 else total + prod
    return total


def random_matrix(rng, n, f):
    if f.p is None:
        return Matrix(n, n, [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n * n)], f)
    return Matrix(n, n, [rng.randrange(f.p) for _ in range(n * n)], f)


def test_s3_witness_value():
    value = standard_polynomial_eval([E(1, 1), E(1, 2), E(2, 1)])
    assert value == Matrix.from_rows([[2, 0], [0, 1]])
    assert value == naive_standard([E(1, 1), E(1, 2), E(2, 1)])


def test_small_degrees():
    x, y = E(1, 2), E(2, 1)
    assert standard_polynomial_eval([x]) == x
    assert standard_polynomial_eval([x, y]) == x @ y - y @ x
    one = Matrix.from_rows([[3]])
    assert standard_polynomial_eval([one, Matrix.from_rows([[5]])]).is_zero()


def test_eval_errors():
    with pytest.raises(InputError):
        standard_polynomial_eval([])
    with pytest.raises(SizeMismatch):
        standard_polynomial_eval([Matrix.identity(2), Matrix.identity(3)])
    with pytest.raises(BudgetExceeded):
        standard_polynomial_eval([Matrix.identity(1)] * 13)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 3), st.sampled_from([QQ, GF(2), GF(5)]), st.randoms(use_true_random=False))
def test_eval_matches_naive(m, n, f, rng):
    args = [random_matrix(rng, n, f) for _ in range(m)]
    assert standard_polynomial_eval(args) == naive_standard(args)


def test_alternation_and_multilinearity():
    rng = random.Random(1)
    for i in range(1000):
        f = (QQ, GF(5), GF(7))[i % 3]
        n = rng.randint(1, 3)
        m = rng.randint(2, 4)
        args = [random_matrix(rng, n, f) for _ in range(m)]
        base = standard_polynomial_eval(args)
        a, b = rng.sample(range(m), 2)
        swapped = list(args)
        swapped[a], swapped[b] = swapped[b], swapped[a]
        assert standard_polynomial_eval(swapped) == -base
        repeated = list(args)
        repeated[b] = repeated[a]
        assert standard_polynomial_eval(repeated).is_zero()
        k = rng.randrange(m)
        y = random_matrix(rng, n, f)
        lam = f(rng.randint(-3, 3))
        mixed = list(args)
        mixed[k] = args[k].scale(lam) + y
        other = list(args)
        other[k] = y
        assert standard_polynomial_eval(mixed) == base.scale(lam) + standard_polynomial_eval(other)


def test_batch_matches_pure():
    rng = random.Random(4)
    for p in (None, 5, 7):
        f = QQ if p is None else GF(p)
        for _ in range(20):
            n, m = rng.randint(1, 3), rng.randint(1, 5)
            args = [Matrix(n, n, [rng.randrange(-4, 5) if p is None else rng.randrange(p)
                                  for _ in range(n * n)], f) for _ in range(m)]
            arr = np.array([[[int(x) for x in a.row(r)] for r in range(n)] for a in args], dtype=np.int64)
            got = standard_polynomial_batch(arr[None], p)[0]
            want = standard_polynomial_eval(args)
            assert [int(x) for x in got.ravel()] == [int(x) for x in want.entries]


def test_amitsur_levitzki_three_by_three():
    rng = np.random.default_rng(0)
    batch = rng.integers(0, 5, size=(2000, 6, 3, 3))
    assert not standard_polynomial_batch(batch, 5).any()
    ints = rng.integers(-3, 4, size=(500, 6, 3, 3))
    assert not standard_polynomial_batch(ints, None).any()
    # S_5 is not an identity of M_3
    assert standard_polynomial_batch(batch[:200, :5], 5).any()


def test_amitsur_levitzki_rational_pure():
    rng = random.Random(8)
    args = [random_matrix(rng, 2, QQ) for _ in range(4)]
    assert standard_polynomial_eval(args).is_zero()


def test_exhaustive_two_by_two_over_f2():
    v = exhaustive_full_matrix_test(2, 4, GF(2))
    assert v.vanishes and v.tuples_tested == 65536
    v3 = exhaustive_full_matrix_test(2, 3, GF(2))
    assert not v3.vanishes and not v3.value.is_zero()


def test_identity_modes_on_full_algebra(e12_e21):
    v = identity_test(e12_e21, 4)
    assert v.vanishes and v.basis_size == 4 and v.tuples_tested == 1
    v3 = identity_test(e12_e21, 3)
    assert not v3.vanishes
    assert v3.value == standard_polynomial_eval(v3.counterexample)
    assert v3.value == naive_standard(list(v3.counterexample))
    assert identity_test(e12_e21, 4, mode="random", trials=10, seed=2).vanishes
    assert not identity_test(e12_e21, 3, mode="random", trials=10, seed=2).vanishes
    with pytest.raises(InputError):
        identity_test(e12_e21, 4, mode="random", trials=0)
    with pytest.raises(InputError):
        identity_test(e12_e21, 4, mode="elements")


def test_witness_without_unit():
    pres = AlgebraPresentation.from_matrices([E(1, 1), E(1, 2), E(2, 1)], include_unit=False)
    v = identity_test(pres, 3)
    assert not v.vanishes
    assert v.counterexample == (E(1, 1), E(1, 2), E(2, 1))
    assert v.value == Matrix.from_rows([[2, 0], [0, 1]])


def test_elements_mode_over_prime_field():
    pres = AlgebraPresentation.from_matrices([E(1, 1, 2, GF(2)), E(1, 2, 2, GF(2))], GF(2))
    v = identity_test(pres, 2, mode="elements")
    assert not v.vanishes
    comm = AlgebraPresentation.from_matrices([E(1, 1, 2, GF(3))], GF(3))
    assert identity_test(comm, 2, mode="elements").vanishes


def test_block_diagonal_identity(e12_e21):
    m1 = AlgebraPresentation.from_matrices([[[1]], [[0]]])
    big = block_diagonal([e12_e21, m1])
    assert identity_test(big, 4).vanishes
    assert not identity_test(big, 3).vanishes


# ---- bounds ----------------------------------------------------------------

def scan_max_dim(c):
    n = 1
    while (n + 1) ** 2 <= c * c * (n + 2) - c + 1:
        n += 1
    return n


def test_bound_examples():
    assert [max_irrep_dim(c) for c in (1, 2, 3)] == [1, 4, 9]
    assert closed_form_digits(2) == "4.645751311064"
    assert closed_form_digits(1) == "1.618033988749"  # golden ratio, floor 1
    with pytest.raises(InvalidBound):
        max_irrep_dim(0)


def test_bound_matches_integer_scan():
    for c in range(1, 60):
        assert max_irrep_dim(c) == scan_max_dim(c)


@given(st.integers(1, 10 ** 6))
def test_bound_properties(c):
    n = max_irrep_dim(c)
    assert n * n <= c * c * (n + 1) - c + 1
    assert (n + 1) ** 2 > c * c * (n + 2) - c + 1
    assert n <= c * c + 1
    assert max_irrep_dim(c + 1) >= n
    lo, hi = bracket_closed_form(c)
    assert lo <= hi and hi - lo <= Fraction(1, 10 ** 6)
    assert math.floor(lo) == math.floor(hi) == n
    # containment checked by squaring: 2N - c^2 = sqrt(D)
    d = c ** 4 + 4 * c * c - 4 * c + 4
    assert (2 * lo - c * c) ** 2 <= d <= (2 * hi - c * c) ** 2
    assert closed_form_digits(c).split(".")[0] == str(n)


def test_report_for_e12_e21(e12_e21):
    prof = span_filtration(e12_e21, 4)
    rep = pi_degree_bound(prof, e12_e21)
    assert (rep.measured_c, rep.N_int, rep.remark_bound, rep.pi_degree_claim) == (2, 4, 5, 4)
    assert rep.N_real == "4.645751311064"
    assert rep.empirical.degree == 4 and rep.empirical.vanishes


def test_report_clamps_zero_growth():
    pres = AlgebraPresentation.from_matrices([[[0]]])
    rep = pi_degree_bound(span_filtration(pres, 2), pres)
    assert rep.measured_c == 1 and rep.c_note
    assert rep.empirical.degree == 2 and rep.empirical.vanishes
