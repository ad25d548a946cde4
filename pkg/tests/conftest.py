"""Shared oracles for the test suite."""

import numpy as np
import pytest

from fhn_torus import LatticeParams, assemble_jacobian_origin


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)


def dense_spectrum(lp: LatticeParams) -> np.ndarray:
    """Eigenvalues of the assembled Jacobian via LAPACK."""
    return np.linalg.eigvals(assemble_jacobian_origin(lp))


def match_distance(computed, reference) -> float:
    """Largest pairing error under greedy nearest-neighbour matching.

    Sorting complex spectra pairs wrong entries when real parts tie at
    rounding level, so multisets are compared by matching instead.
    """
    ref = list(reference)
    worst = 0.0
    for lam in computed:
        j = min(range(len(ref)), key=lambda i: abs(ref[i] - lam))
        worst = max(worst, abs(ref[j] - lam))
        ref.pop(j)
    return worst


def random_lattice(rng, n: int = 3, c_zero: bool = False) -> LatticeParams:
    """Random nondegenerate parameter draw."""
    sign = lambda: float(rng.choice([-1.0, 1.0]))
    return LatticeParams(
        n=n,
        a=float(rng.uniform(-2.0, 3.0)),
        b=float(rng.uniform(0.1, 4.0)),
        c=0.0 if c_zero else float(rng.uniform(0.0, 1.0)),
        gamma=sign() * float(rng.uniform(0.2, 2.0)),
        delta=sign() * float(rng.uniform(0.2, 2.0)),
    )
