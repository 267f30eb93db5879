import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from g2solv.liealg import AlmostAbelianSpec, LieBracket, derivations, mu_from_matrix

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


# ---------------------------------------------------------------------------
# random structures

def random_sl3c(rng, scale=1.0):
    A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    A -= np.trace(A) / 3 * np.eye(3)
    return scale * A


def random_normal_sl3c(rng):
    """U diag(l) U^* with sum(l) = 0 and U unitary."""
    l = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    l -= l.mean()
    Q, _ = np.linalg.qr(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    return Q @ np.diag(l) @ Q.conj().T


def random_gl7(rng, cond_max=20.0):
    """Well-conditioned element of GL+(7); det > 0 keeps the orientation."""
    while True:
        h = np.eye(7) + 0.5 * rng.standard_normal((7, 7))
        if np.linalg.cond(h) < cond_max:
            if np.linalg.det(h) < 0:
                h[0] *= -1
            return h


def random_almost_abelian(rng):
    """h . mu_A with random real 6x6 A and random h in GL(7)."""
    A = rng.standard_normal((6, 6))
    return mu_from_matrix(AlmostAbelianSpec.from_real(A)).act(random_gl7(rng))


def random_two_step(rng):
    """2-step nilpotent: brackets of e1..e5 land in span{e6, e7}."""
    c = np.zeros((7, 7, 7))
    for i in range(5):
        for j in range(i + 1, 5):
            c[i, j, 5:] = rng.standard_normal(2)
    return LieBracket(c)


def random_semidirect(rng):
    """R e7 acting by a random derivation on a 2-step nilpotent n = span{e1..e6}."""
    c = np.zeros((7, 7, 7))
    for i in range(4):
        for j in range(i + 1, 4):
            c[i, j, 4:6] = rng.standard_normal(2)
    n = LieBracket(c)
    der = derivations(n)
    D = np.tensordot(rng.standard_normal(der.dim), der.basis, axes=1)[:6, :6]
    c = n.c.copy()
    c[6, :6, :6] = D.T
    return LieBracket(c)


def random_solvable(rng):
    kind = rng.integers(3)
    return (random_almost_abelian, random_two_step, random_semidirect)[kind](rng)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        for line in mod.RESULTS[n]:
            terminalreporter.write_line(line)
