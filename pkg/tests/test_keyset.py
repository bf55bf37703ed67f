import itertools
import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from keyset_cipher import reference as ref
from keyset_cipher.blom import shared_key, ta_generate, ta_load
from keyset_cipher.keyset import (
    FamilyError,
    SingularU,
    expand_keyset,
    inner_transform,
    outer_transform,
    rank_mod_p,
)
from keyset_cipher.modring import DimensionMismatch, MatZ, Modulus, is_symmetric
from keyset_cipher.rfamily import CirculantSpec, NotOrthogonal, circulant, make_family


def test_inner_transform_worked_example():
    X, Y = ref.example_matrices()
    Xn, Yn = inner_transform(X, Y, circulant((1, 2, 3), 11))
    assert Xn.tolists() == ref.X_NEW
    assert Yn.tolists() == ref.Y_NEW
    Kn = Xn @ Yn
    assert Kn.tolists() == ref.K_NEW
    assert Kn == (X @ Y).scale(3)


def test_inner_transform_identity():
    X, Y = ref.example_matrices()
    assert inner_transform(X, Y, MatZ.identity(3, 11)) == (X, Y)


def test_inner_transform_rejects():
    X, Y = ref.example_matrices()
    with pytest.raises(NotOrthogonal):
        inner_transform(X, Y, circulant((1, 1, 1), 11))
    with pytest.raises(DimensionMismatch):
        inner_transform(X, Y, MatZ.identity(2, 11))


@given(seed=st.integers(0, 2**32), p=st.sampled_from([11, 101]))
def test_inner_transform_keeps_symmetry(seed, p):
    b = ta_generate(p, 6, 3, seed)
    for spec in make_family(p, 3, 4, seed):
        Xn, Yn = inner_transform(b.X, b.Y, spec.matrix)
        assert is_symmetric(Xn @ Yn)
        assert Xn @ Yn == b.K.scale(spec.weight)


def swap_matrix(n, i, j, p):
    rows = MatZ.identity(n, p).tolists()
    rows[i], rows[j] = rows[j], rows[i]
    return MatZ.from_rows(rows, p)


def test_outer_transform_identity_and_swap():
    X, Y = ref.example_matrices()
    assert outer_transform(X, Y, MatZ.identity(5, 11)) == (X, Y)
    Xn, Yn = outer_transform(X, Y, swap_matrix(5, 1, 3, 11))
    K = [row[:] for row in ref.K_ROWS]
    # expected by hand: swap rows 2,4 then columns 2,4
    K[1], K[3] = K[3], K[1]
    for row in K:
        row[1], row[3] = row[3], row[1]
    assert (Xn @ Yn).tolists() == K


def test_outer_transform_random_invertible():
    X, Y = ref.example_matrices()
    rng = random.Random(5)
    done = 0
    while done < 20:
        rows = [[rng.randrange(11) for _ in range(5)] for _ in range(5)]
        det = sympy.Matrix(rows).det() % 11
        U = MatZ.from_rows(rows, 11)
        assert (rank_mod_p(U) == 5) == (det != 0)
        if det == 0:
            with pytest.raises(SingularU):
                outer_transform(X, Y, U)
            continue
        Xn, Yn = outer_transform(X, Y, U)
        Kn = Xn @ Yn
        assert is_symmetric(Kn)
        assert Kn == U @ (X @ Y) @ U.T
        done += 1


def test_outer_transform_singular():
    X, Y = ref.example_matrices()
    with pytest.raises(SingularU):
        outer_transform(X, Y, MatZ.zeros(5, 5, 11))


@pytest.mark.parametrize("user, table", [(ref.ALICE, ref.ALICE_TABLE), (ref.BOB, ref.BOB_TABLE)])
def test_expand_keyset_tables(bundle, user, table):
    ks = expand_keyset(bundle, user)
    assert len(ks) == 6
    for idx, (secret, public, scale) in table.items():
        e = ks.entry(idx)
        assert e.secret.entries == secret
        assert e.public_id.entries == public
        assert e.scale == scale
        assert e.transform == ref.FAMILY_ROWS[idx - 1]


def test_scale_columns(alice, bob):
    assert [e.scale for e in alice.entries] == [9, 5, 3, 4, 1, 4]
    assert [e.scale for e in bob.entries] == [1, 3, 4, 9, 5, 9]


def test_scale_recurrence(bundle):
    for i in range(1, 6):
        ks = expand_keyset(bundle, i)
        base = ks.scale(1)
        for e, spec in zip(ks.entries, ks.family):
            assert e.scale == (base * spec.weight).value


def test_cross_user_agreement_every_index(bundle):
    sets = {i: expand_keyset(bundle, i) for i in range(1, 6)}
    for (i, j), k in itertools.product(itertools.product(range(1, 6), repeat=2), range(1, 7)):
        w = sets[i].family[k - 1].weight
        a = shared_key(sets[i].entry(k).secret, sets[j].entry(k).public_id)
        b = shared_key(sets[j].entry(k).secret, sets[i].entry(k).public_id)
        assert a == b == w * bundle.K[i - 1, j - 1] % 11


def test_identity_only_family():
    X, Y = ref.example_matrices()
    b = ta_load(X, Y)
    ks = expand_keyset(b, 2)
    assert len(ks) == 1
    assert ks.entry(1).secret.entries == (1, 9, 2)
    assert ks.entry(1).scale == 9


def test_expand_is_pure(bundle):
    assert expand_keyset(bundle, 3) == expand_keyset(bundle, 3)


def test_family_must_start_with_identity(bundle):
    fam = [CirculantSpec((1, 2, 3), Modulus(11))]
    with pytest.raises(FamilyError):
        expand_keyset(bundle, 2, fam)


def test_non_orthogonal_family_rejected():
    X, Y = ref.example_matrices()
    with pytest.raises(NotOrthogonal):
        CirculantSpec((1, 1, 1), Modulus(11))
    b = ta_load(X, Y)
    bad = CirculantSpec.__new__(CirculantSpec)
    object.__setattr__(bad, "first_row", (1, 1, 1))
    object.__setattr__(bad, "modulus", Modulus(11))
    object.__setattr__(bad, "weight", 3)
    with pytest.raises(NotOrthogonal):
        expand_keyset(b, 2, [CirculantSpec.identity(3, 11), bad])
