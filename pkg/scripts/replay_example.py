"""Replay the worked mod-11 example and print every intermediate table."""

from keyset_cipher import reference as ref
from keyset_cipher.blom import shared_key, user_id, user_secret
from keyset_cipher.keyset import expand_keyset, inner_transform
from keyset_cipher.modring import mat_mul
from keyset_cipher.protocol import publish, randomized_agree
from keyset_cipher.rfamily import circulant, enumerate3


def show(title, rows):
    print(title)
    for r in rows:
        print("   " + " ".join(f"{v:2d}" for v in r))


def main():
    X, Y = ref.example_matrices()
    show("X", X.tolists())
    show("Y", Y.tolists())
    show("K = XY", mat_mul(X, Y).tolists())

    b = ref.example_bundle()
    ka = shared_key(user_secret(b, ref.ALICE), user_id(b, ref.BOB))
    kb = shared_key(user_secret(b, ref.BOB), user_id(b, ref.ALICE))
    print(f"base key {ref.ALICE}-{ref.BOB}: {ka.value} / {kb.value}")

    print("3x3 circulant rows (1, a, b):")
    for s in enumerate3(11):
        print(f"   a={s.a:2d} b={s.b:2d} w={s.w:2d}")

    Xn, Yn = inner_transform(X, Y, circulant((1, 2, 3), 11))
    show("X R", Xn.tolists())
    show("R^T Y", Yn.tolists())
    show("K_new", (Xn @ Yn).tolists())

    for user in (ref.ALICE, ref.BOB):
        ks = expand_keyset(b, user)
        print(f"key set of user {user}:")
        for e in ks.entries:
            print(f"   {e.index}  R={e.transform}  secret={e.secret.entries}  "
                  f"id={e.public_id.entries}  S={e.scale}")

    alice, bob = expand_keyset(b, ref.ALICE), expand_keyset(b, ref.BOB)
    a_pub, b_pub = publish(alice, [2, 4]), publish(bob, [3, 5])
    for c in (1, 2):
        ka = randomized_agree(alice, c, b_pub, clock=0, chosen_index=3)
        kb = randomized_agree(bob, c, a_pub, clock=0, chosen_index=4)
        print(f"c={c}: raw {ka.raw_key}/{kb.raw_key} -> final "
              f"{ka.final_key}/{kb.final_key}")


if __name__ == "__main__":
    main()
