"""Shared expensive fixtures (session-scoped: built once per test run)."""

import pytest

from su3chain import ed
from su3chain.threesite import (
    G1Solver,
    ThreeSiteProblem,
    density_matrix_three_site,
    three_site_correlator,
)


@pytest.fixture(scope="session")
def g1_solver():
    """Comb-constructed G1 at a truncation good to ~1e-9 in the correlator."""
    return G1Solver(ThreeSiteProblem(comb_terms=10000))


@pytest.fixture(scope="session")
def d3(g1_solver):
    """Homogeneous three-site density operator from the chain + circle solve."""
    return density_matrix_three_site(g1_solver)


@pytest.fixture(scope="session")
def ed_results():
    """Ground-state results for the three tabulated chain lengths."""
    return {L: ed.ground_state(ed.ChainSpec(L)) for L in (3, 6, 9)}


@pytest.fixture(scope="session")
def three_site_pair():
    """Correlator at two comb truncations (J and 2J) for self-convergence.

    Returns ``(solutions, elapsed_seconds)`` so the acceptance suite can also
    check the runtime budget.
    """
    import time

    start = time.perf_counter()
    solutions = {
        J: three_site_correlator(
            ThreeSiteProblem(comb_terms=J, richardson_levels=2)
        )
        for J in (5000, 10000)
    }
    return solutions, time.perf_counter() - start
