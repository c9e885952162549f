import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pmodlab.cohomology import (
    CohomologyError, bar_cohomology_2, bar_differentials, chain_of_isos_check, cohomology_dim,
    extension_group, is_coboundary, is_cocycle,
)
from pmodlab.gmodule import free_module, regular_module, trivial_module
from pmodlab.heller import minimal_resolution, omega

from _util import group

COHOMOLOGY_GROUPS = ("C4", "C2xC2", "C3xC3")


def test_klein_four_trivial_coefficients():
    G = group("C2xC2")
    res = minimal_resolution(G, 5)
    F = trivial_module(G)
    assert [cohomology_dim(G, F, i, res).dimension for i in range(5)] == [1, 2, 3, 4, 5]


def test_cyclic_trivial_coefficients():
    G = group("C9")
    res = minimal_resolution(G, 4)
    F = trivial_module(G)
    assert [cohomology_dim(G, F, i, res).dimension for i in range(4)] == [1, 1, 1, 1]


@pytest.mark.parametrize("spec", COHOMOLOGY_GROUPS)
def test_free_coefficients_are_acyclic(spec):
    G = group(spec)
    res = minimal_resolution(G, 3)
    for P in (regular_module(G), free_module(G, 2)):
        assert cohomology_dim(G, P, 0, res).dimension == P.dim // G.order
        assert cohomology_dim(G, P, 1, res).dimension == 0
        assert cohomology_dim(G, P, 2, res).dimension == 0
    assert bar_cohomology_2(G, regular_module(G)).dimension == 0


@pytest.mark.parametrize("spec", COHOMOLOGY_GROUPS)
def test_dimension_shifting_chain(spec):
    rep = chain_of_isos_check(group(spec))
    assert rep["ok"], rep
    assert rep["H2(G,Omega2)"] == 1


@pytest.mark.parametrize("spec", COHOMOLOGY_GROUPS + ("C2", "C3", "C2xC4"))
@pytest.mark.parametrize("which", ["F", "Omega1", "Omega-1"])
def test_bar_and_resolution_agree(spec, which):
    G = group(spec)
    F = trivial_module(G)
    M = {"F": F, "Omega1": omega(F, 1), "Omega-1": omega(F, -1)}[which]
    assert bar_cohomology_2(G, M).dimension == cohomology_dim(G, M, 2).dimension


def test_bar_complex_is_a_complex():
    G = group("C2xC2")
    M = omega(trivial_module(G), 1)
    d1, d2 = bar_differentials(G, M)
    assert not np.any((d2 @ d1) % G.p)


def _coboundary(G, M, c):
    """``(dc)(g, h) = g.c(h) - c(gh) + c(g)`` for a normalized 1-cochain ``c``."""
    f = np.einsum("gab,hb->gha", M.rho, c) - c[G.table] + c[:, None, :]
    return f % G.p


@settings(max_examples=30)
@given(st.sampled_from(COHOMOLOGY_GROUPS), st.integers(0, 2**31))
def test_coboundaries_are_cocycles(spec, seed):
    G = group(spec)
    M = omega(trivial_module(G), 1)
    rng = np.random.default_rng(seed)
    c = rng.integers(0, G.p, (G.order, M.dim))
    c[0] = 0
    f = _coboundary(G, M, c)
    assert is_cocycle(G, M, f)
    assert is_coboundary(G, M, f)


@pytest.mark.parametrize("spec", COHOMOLOGY_GROUPS)
def test_class_representatives(spec):
    G = group(spec)
    M = omega(trivial_module(G), 2)
    res = bar_cohomology_2(G, M)
    assert res.dimension == len(res.cocycle_basis) == 1
    f = res.cocycle_basis[0]
    assert is_cocycle(G, M, f) and not is_coboundary(G, M, f)
    bad = f.copy()
    bad[0, 0, 0] = 1
    assert not is_cocycle(G, M, bad)


def test_cohomology_rejects_bad_input():
    G = group("C2xC2")
    with pytest.raises(CohomologyError):
        cohomology_dim(G, trivial_module(G), -1)
    with pytest.raises(CohomologyError):
        cohomology_dim(G, trivial_module(group("C4")), 1)
    with pytest.raises(CohomologyError):
        cohomology_dim(G, trivial_module(G), 3, minimal_resolution(G, 2))


def test_klein_four_extensions():
    G = group("C2xC2")
    M = omega(trivial_module(G), 2)
    split = extension_group(G, M, "zero")
    twisted = extension_group(G, M, bar_cohomology_2(G, M).cocycle_basis[0])
    for ext in (split, twisted):
        assert ext.result.order == 128
        assert ext.kernel_is_normal() and ext.quotient_matches_base() and ext.kernel_is_module_group()
    assert split.result.minimal_generator_count() == 5
    assert twisted.result.minimal_generator_count() == 2


def test_extension_rejects_non_cocycles():
    G = group("C2xC2")
    M = omega(trivial_module(G), 2)
    f = np.zeros((4, 4, M.dim), dtype=np.int64)
    f[1, 1, 0] = 1
    f[1, 2, 1] = 1
    assert not is_cocycle(G, M, f)
    with pytest.raises(CohomologyError):
        extension_group(G, M, f)
    with pytest.raises(CohomologyError):
        extension_group(G, M, "bogus")


def test_cyclic_extension_trivial_module():
    # C2 by F2: split gives C2xC2 (d = 2), the nonzero class gives C4 (d = 1)
    G = group("C2")
    F = trivial_module(G)
    f = bar_cohomology_2(G, F).cocycle_basis[0]
    assert extension_group(G, F, "zero").result.minimal_generator_count() == 2
    assert extension_group(G, F, f).result.minimal_generator_count() == 1


@pytest.mark.parametrize("spec", ("C2", "C4", "C8", "C2xC2", "C2xC2xC2", "C3", "C9", "C3xC3", "C5xC5"))
def test_h1_trivial_is_generator_count(spec):
    G = group(spec)
    res = minimal_resolution(G, 2)
    d = G.minimal_generator_count()
    assert cohomology_dim(G, trivial_module(G), 1, res).dimension == d == res.ranks[1]


@pytest.mark.parametrize("spec", ("C3", "C9"))
def test_scaled_cocycles_give_same_fingerprint(spec):
    G = group(spec)
    F = trivial_module(G)
    f = bar_cohomology_2(G, F).cocycle_basis[0]
    prints = set()
    for lam in range(1, G.p):
        E = extension_group(G, F, (lam * f) % G.p).result
        prints.add((E.minimal_generator_count(), tuple(sorted(E.order_profile().items()))))
    assert len(prints) == 1
