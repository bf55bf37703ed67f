import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from keyset_cipher import reference as ref
from keyset_cipher.modring import MatZ, Modulus
from keyset_cipher.rfamily import (
    CirculantSpec,
    EmptyRow,
    NoSolution,
    NotOrthogonal,
    ShiftOutOfRange,
    ZeroWeight,
    autocorrelation,
    circulant,
    enumerate3,
    make_family,
    scalar_family,
    search_rows,
    solve3,
    verify_orthogonal,
)

from conftest import P64


def gram_is_scalar(row, p):
    """Full-matrix oracle: R R^T == w I with w = sum of squares."""
    R = circulant(row, p)
    G = R @ R.T
    w = sum(a * a for a in row) % p
    return G == MatZ.identity(len(row), p).scale(w), w


def test_circulant_rows():
    assert circulant((1, 2, 3), 11).tolists() == [[1, 2, 3], [3, 1, 2], [2, 3, 1]]
    assert circulant((5,), 11).tolists() == [[5]]
    assert circulant((1, 0, 0), 11) == MatZ.identity(3, 11)
    with pytest.raises(EmptyRow):
        circulant((), 11)


def test_circulant_from_residues():
    p = Modulus(11)
    assert circulant([p(1), p(2), p(3)]) == circulant((1, 2, 3), 11)


def test_autocorrelation():
    assert autocorrelation((1, 2, 3), 1, 11) == 0
    assert autocorrelation((1, 1, 1), 1, 11) == 3
    for row in [(1, 2, 3), (4, 8, 1), (7, 7, 7)]:
        assert autocorrelation(row, 0, 11) == sum(a * a for a in row) % 11
    with pytest.raises(ShiftOutOfRange):
        autocorrelation((1, 2, 3), 3, 11)


def test_verify_orthogonal():
    assert verify_orthogonal((1, 2, 3), 11) == 3
    assert verify_orthogonal((1, 0, 0), 11) == 1
    with pytest.raises(NotOrthogonal) as exc:
        verify_orthogonal((1, 1, 1), 11)
    assert exc.value.lag == 1
    with pytest.raises(ZeroWeight):
        verify_orthogonal((1, 1, 1), 3)


@pytest.mark.parametrize("a, b, w", [(2, 3, 3), (1, 5, 5), (9, 9, 9), (0, 0, 1)])
def test_solve3(a, b, w):
    sol = solve3(a, 11)
    assert (sol.a, sol.b, sol.w) == (a, b, w)
    assert (a + sol.b + a * sol.b) % 11 == 0


def test_solve3_no_solution():
    with pytest.raises(NoSolution):
        solve3(10, 11)


def test_enumerate3_p11():
    sols = enumerate3(11)
    assert [(s.a, s.b) for s in sols] == [(0, 0)] + [(a, b) for a, b, _ in ref.SOLUTIONS_PRINTED]
    for s in sols:
        assert s.w == (1 + s.a ** 2 + s.b ** 2) % 11
        assert verify_orthogonal(s.row, 11) == s.w
    assert next(s for s in sols if s.a == 9).w == 9


def test_enumerate3_p3_exhaustive():
    # oracle: brute force over Z_3^2 with the full matrix check
    found = []
    for a, b in itertools.product(range(3), repeat=2):
        ok, w = gram_is_scalar((1, a, b), 3)
        if ok and w:
            found.append((a, b, w))
    assert found == [(0, 0, 1)]
    assert [(s.a, s.b, s.w) for s in enumerate3(3)] == found
    assert solve3(1, 3).w == 0


def test_scalar_family_examples():
    g1 = scalar_family(solve3(2, 11), 11)
    g2 = scalar_family((1, 1, 5), 11)
    assert g1 == ref.GROUP_1
    assert g2[:9] == ref.GROUP_2
    assert g1[3] == (4, 8, 1)
    assert g2[5] == (6, 6, 8)
    assert g1[0] == (1, 2, 3)
    # the t = 10 member absent from the printed second group is still valid
    assert verify_orthogonal(g2[9], 11) == 5


@pytest.mark.parametrize("base", [(1, 2, 3), (1, 1, 5)])
def test_weight_scaling(base):
    w = verify_orthogonal(base, 11).value
    for t, row in zip(range(1, 11), scalar_family(base, 11)):
        assert verify_orthogonal(row, 11) == t * t * w % 11


def test_emitted_rows_pass_full_check():
    rows = [s.row for s in enumerate3(11)]
    for s in enumerate3(11):
        rows += scalar_family(s, 11)
    for row in rows:
        ok, w = gram_is_scalar(row, 11)
        assert ok and w
        assert all(autocorrelation(row, k, 11) == 0 for k in (1, 2))


def test_condition_equivalence_bruteforce():
    for a, b in itertools.product(range(11), repeat=2):
        ok, w = gram_is_scalar((1, a, b), 11)
        algebraic = (a + b + a * b) % 11 == 0 and w != 0
        try:
            verify_orthogonal((1, a, b), 11)
            passed = True
        except (NotOrthogonal, ZeroWeight):
            passed = False
        assert passed == algebraic == (ok and w != 0), (a, b)


def test_search_rows_m3_matches_enumerate3():
    assert search_rows(3, 11) == [s.row for s in enumerate3(11)]


@pytest.mark.parametrize("m, p", [(1, 11), (2, 11), (4, 5), (5, 11)])
def test_search_rows_other_lengths(m, p):
    rows = search_rows(m, p)
    assert rows[0] == (1,) + (0,) * (m - 1)
    for row in rows:
        assert gram_is_scalar(row, p)[0]


@given(p=st.sampled_from([11, 101, P64]), size=st.integers(1, 6), seed=st.integers(0, 2**32))
def test_make_family(p, size, seed):
    fam = make_family(p, 3, size, seed)
    assert len(fam) == size
    assert fam[0].is_identity
    assert len({s.first_row for s in fam}) == size
    assert fam == make_family(p, 3, size, seed)
    for s in fam:
        assert s.weight == verify_orthogonal(s.first_row, p)
        assert s.weight != 0


def test_make_family_other_m():
    fam = make_family(7, 4, 5, 3)
    for s in fam:
        ok, w = gram_is_scalar(s.first_row, 7)
        assert ok and w == s.weight


def test_spec_validates():
    with pytest.raises(NotOrthogonal):
        CirculantSpec((1, 1, 1), Modulus(11))
    assert CirculantSpec((4, 8, 1), Modulus(11)).weight == 4
