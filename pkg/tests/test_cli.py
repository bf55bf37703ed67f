import json

import pytest

from keyset_cipher import formats
from keyset_cipher import reference as ref
from keyset_cipher.cli import main
from keyset_cipher.keyset import expand_keyset


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def example_files(tmp_path, capsys):
    (tmp_path / "x.json").write_text(json.dumps(ref.X_ROWS))
    (tmp_path / "y.txt").write_text("\n".join(" ".join(map(str, r)) for r in ref.Y_ROWS))
    rows = [",".join(map(str, r)) for r in ref.FAMILY_ROWS[1:]]
    args = ["setup", "--p", 11, "--load-x", tmp_path / "x.json", "--load-y", tmp_path / "y.txt",
            "--out", tmp_path / "ta.json"]
    for r in rows:
        args += ["--family-row", r]
    code, out, _ = run(capsys, *args)
    assert code == 0
    assert "scales: 3 9 5 1 4" in out
    for user, c in ((2, 1), (4, 1)):
        for cc in (1, 2):
            assert run(capsys, "provision", "--ta", tmp_path / "ta.json", "--user", user,
                       "--common", cc, "--out", tmp_path / f"u{user}c{cc}.json")[0] == 0
    assert run(capsys, "publish", "--user-file", tmp_path / "u2c1.json", "--indices", "2,4",
               "--out", tmp_path / "alice.bundle")[0] == 0
    assert run(capsys, "publish", "--user-file", tmp_path / "u4c1.json", "--indices", "3,5",
               "--valid-until", 100, "--out", tmp_path / "bob.bundle")[0] == 0
    return tmp_path


def test_setup_ta_file(example_files):
    doc = json.loads((example_files / "ta.json").read_text())
    assert doc["format"] == "keyset-ta-v1"
    assert list(doc) == ["format", "p", "n", "m", "X", "Y", "family"]
    b = formats.ta_from_dict(doc)
    assert b.K.tolists() == ref.K_ROWS
    assert [s.first_row for s in b.family] == ref.FAMILY_ROWS
    assert formats.ta_from_dict(formats.ta_to_dict(b)) == b
    assert all(isinstance(v, str) for row in doc["X"] for v in row)


def test_setup_generated(tmp_path, capsys):
    code, out, _ = run(capsys, "setup", "--p", 11, "--n", 5, "--m", 3, "--seed", 7,
                       "--family-size", 4, "--out", tmp_path / "ta.json")
    assert code == 0
    b = formats.ta_from_dict(formats.read_json(tmp_path / "ta.json"))
    assert b.n == 5 and len(b.family) == 4
    assert out.splitlines()[0] == "scales: " + " ".join(map(str, b.scales()))


def test_setup_not_prime(tmp_path, capsys):
    code, _, err = run(capsys, "setup", "--p", 4, "--n", 5, "--m", 3, "--out", tmp_path / "ta.json")
    assert code == 2 and "not prime" in err


def test_setup_asymmetric(tmp_path, capsys):
    (tmp_path / "x.json").write_text("[[1,2],[3,4]]")
    (tmp_path / "y.json").write_text("[[1,0],[0,1]]")
    code, _, err = run(capsys, "setup", "--p", 11, "--load-x", tmp_path / "x.json",
                       "--load-y", tmp_path / "y.json", "--out", tmp_path / "ta.json")
    assert code == 2 and "symmetric" in err


@pytest.mark.parametrize("user, table", [(2, ref.ALICE_TABLE), (4, ref.BOB_TABLE)])
def test_provision_tables(example_files, user, table):
    doc = formats.read_json(example_files / f"u{user}c1.json")
    assert doc["format"] == "keyset-user-v1"
    assert doc["common_index"] == "1"
    for e in doc["entries"]:
        sec, pid, scale = table[int(e["index"])]
        assert [int(v) for v in e["secret"]] == list(sec)
        assert [int(v) for v in e["public_id"]] == list(pid)
        assert int(e["scale"]) == scale
    ks, c = formats.user_from_dict(doc)
    assert ks == expand_keyset(ref.example_bundle(), user)
    assert formats.user_from_dict(formats.user_to_dict(ks, c)) == (ks, c)


def test_user_file_has_only_own_identifiers(example_files):
    doc = formats.read_json(example_files / "u2c1.json")
    others = {tuple(map(str, ref.BOB_TABLE[k][1])) for k in ref.BOB_TABLE}
    for e in doc["entries"]:
        assert tuple(e["public_id"]) not in others
    assert set(doc) == {"format", "p", "user", "common_index", "entries"}


def test_provision_out_of_range(example_files, capsys):
    code, _, err = run(capsys, "provision", "--ta", example_files / "ta.json", "--user", 99,
                       "--out", example_files / "u99.json")
    assert code == 2 and "out of range" in err


def test_publish_files(example_files, capsys):
    a = formats.read_json(example_files / "alice.bundle")
    assert a["format"] == "keyset-bundle-v1"
    assert a["items"] == [{"index": "2", "public_id": ["8", "10", "8"]},
                          {"index": "4", "public_id": ["4", "5", "4"]}]
    b = formats.bundle_from_dict(formats.read_json(example_files / "bob.bundle"))
    assert [(i, v.entries) for i, v in b.items] == [(3, (3, 1, 6)), (5, (5, 10, 9))]
    assert "secret" not in json.dumps(a) and "scale" not in json.dumps(a)
    assert formats.bundle_from_dict(formats.bundle_to_dict(b)) == b


def test_publish_duplicate(example_files, capsys):
    code, _, _ = run(capsys, "publish", "--user-file", example_files / "u2c1.json",
                     "--indices", "2,2", "--out", example_files / "x.bundle")
    assert code == 2
    code, _, _ = run(capsys, "publish", "--user-file", example_files / "u2c1.json",
                     "--indices", "", "--out", example_files / "x.bundle")
    assert code == 2


@pytest.mark.parametrize("c, expected", [(1, "9"), (2, "5")])
def test_agree_randomized(example_files, capsys, c, expected):
    code, out, _ = run(capsys, "agree", "--user-file", example_files / f"u2c{c}.json",
                       "--bundle", example_files / "bob.bundle", "--clock", 5)
    assert code == 0 and out.strip() == expected
    code, out, _ = run(capsys, "agree", "--user-file", example_files / f"u4c{c}.json",
                       "--bundle", example_files / "alice.bundle", "--seed", 3)
    assert code == 0 and out.strip() == expected


def test_agree_pinned_choice(example_files, capsys):
    code, out, _ = run(capsys, "agree", "--user-file", example_files / "u2c1.json",
                       "--bundle", example_files / "bob.bundle", "--index", 3)
    assert out.strip() == "9"


def test_agree_expired(example_files, capsys):
    code, _, err = run(capsys, "agree", "--user-file", example_files / "u2c1.json",
                       "--bundle", example_files / "bob.bundle", "--clock", 100)
    assert code == 2 and "clock" in err


def test_agree_aligned(example_files, capsys):
    code, out, _ = run(capsys, "agree", "--user-file", example_files / "u2c1.json",
                       "--bundle", example_files / "bob.bundle", "--mode", "aligned", "--index", 3)
    # w = 4 at index 3: 4 * 9 = 36 = 3 (mod 11)
    assert code == 0 and out.strip() == "3"
    code, _, _ = run(capsys, "agree", "--user-file", example_files / "u2c1.json",
                     "--bundle", example_files / "bob.bundle", "--mode", "aligned", "--index", 2)
    assert code == 2


def test_simulate(tmp_path, capsys):
    code, out1, _ = run(capsys, "simulate", "--p", 11, "--n", 5, "--m", 3, "--subset", 2, "--seed", 1,
                        "--transcript", tmp_path / "a.log")
    assert code == 0 and out1.startswith("10/10 agreements")
    code, out2, _ = run(capsys, "simulate", "--p", 11, "--n", 5, "--m", 3, "--subset", 2, "--seed", 1,
                        "--transcript", tmp_path / "b.log")
    assert out1 == out2
    assert (tmp_path / "a.log").read_bytes() == (tmp_path / "b.log").read_bytes()


def test_simulate_identity_family(capsys):
    code, out, _ = run(capsys, "simulate", "--family", 1, "--subset", 1, "--n", 3, "--seed", 2)
    assert code == 0 and out.startswith("3/3")


def test_simulate_provisioning_failed(capsys):
    code, _, err = run(capsys, "simulate", "--p", 3, "--n", 2, "--family", 6, "--subset", 1)
    assert code == 2


def test_verify_paper(capsys):
    code, out, _ = run(capsys, "verify-paper")
    assert code == 0
    assert out.count("[PASS]") == 6 and "[FAIL]" not in out
    assert "erratum" in out


def test_verify_paper_printed_erratum(capsys):
    code, out, _ = run(capsys, "verify-paper", "--printed-erratum")
    assert code == 1
    assert "w at a=9: expected 5, computed 9" in out


def test_verify_paper_list(capsys):
    code, out, _ = run(capsys, "verify-paper", "--list")
    assert code == 0
    assert len(out.splitlines()) == 6 and "PASS" not in out
