import pytest
from hypothesis import HealthCheck, settings

from keyset_cipher import reference as ref
from keyset_cipher.keyset import expand_keyset

settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("fast", max_examples=25, deadline=None)
settings.load_profile("ci")

# largest prime below 2**64
P64 = 2**64 - 59


@pytest.fixture
def bundle():
    return ref.example_bundle()


@pytest.fixture
def alice(bundle):
    return expand_keyset(bundle, ref.ALICE)


@pytest.fixture
def bob(bundle):
    return expand_keyset(bundle, ref.BOB)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: exit criteria")


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(rep, "user_properties", []))
            if rep.when == "call" or outcome == "error":
                if "criterion" in props:
                    lines.append((props["criterion"], "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, status in sorted(lines, key=lambda x: int(x[0].split()[0][2:])):
            terminalreporter.write_line(f"[{status}] {name}")
