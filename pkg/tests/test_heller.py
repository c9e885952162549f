import pytest
import numpy as np
from hypothesis import given, settings, strategies as st

from pmodlab.gmodule import (
    direct_sum, fixed_submodule, free_module, invariant_profile, is_isomorphic, radical,
    regular_module, trivial_module,
)
from pmodlab.heller import (
    has_free_summand, minimal_resolution, omega, omega_dimension_formula, projective_cover,
)

from _util import SMALL_GROUPS, group

FORMULA_GROUPS = ("C2", "C4", "C8", "C2xC2", "C2xC2xC2", "C3", "C9", "C3xC3", "C5xC5")


@pytest.mark.parametrize("spec", FORMULA_GROUPS)
def test_omega2_dimension_formula(spec):
    G = group(spec)
    assert omega(trivial_module(G), 2).dim == omega_dimension_formula(G)


@pytest.mark.parametrize("spec", SMALL_GROUPS)
def test_omega_minus2_dimension(spec):
    G = group(spec)
    assert omega(trivial_module(G), -2).dim == omega_dimension_formula(G)
    assert omega(trivial_module(G), -1).dim == G.order - 1


@pytest.mark.parametrize("spec", ("C2", "C4", "C9", "C5"))
def test_cyclic_syzygies_are_periodic(spec):
    G = group(spec)
    F = trivial_module(G)
    assert omega(F, 1).dim == G.order - 1
    assert omega(F, 2).dim == 1
    assert is_isomorphic(omega(F, 2), F).status == "iso"


@pytest.mark.parametrize("spec", SMALL_GROUPS)
def test_projective_cover_is_minimal(spec):
    G = group(spec)
    M = direct_sum(omega(trivial_module(G), 1), trivial_module(G))
    cov = projective_cover(M)
    assert cov.rank == M.dim - radical(M).dim
    assert cov.cover.image().dim == M.dim
    assert cov.kernel.dim == cov.rank * G.order - M.dim
    assert cov.free.dim == cov.rank * G.order


@pytest.mark.parametrize("spec", SMALL_GROUPS)
def test_minimal_resolution_exact_and_minimal(spec):
    G = group(spec)
    res = minimal_resolution(G, 3)
    assert res.check_exact() and res.check_minimal()
    assert res.ranks[0] == 1
    assert res.ranks[1] == len(G.generators)


def test_resolution_ranks_elementary_abelian():
    # Poincare series 1/(1-t)^r for (C_p)^r
    assert minimal_resolution(group("C2xC2"), 4).ranks == (1, 2, 3, 4, 5)
    assert minimal_resolution(group("C3xC3"), 3).ranks == (1, 2, 3, 4)
    assert minimal_resolution(group("C4"), 4).ranks == (1, 1, 1, 1, 1)


def test_resolution_guard():
    with pytest.raises(ValueError):
        minimal_resolution(group("C2"), -1)
    with pytest.raises(ValueError):
        minimal_resolution(group("C2"), 50)


@pytest.mark.parametrize("spec", SMALL_GROUPS)
def test_free_summand_detection(spec):
    G = group(spec)
    F = trivial_module(G)
    assert has_free_summand(regular_module(G))
    assert has_free_summand(direct_sum(omega(F, 1), free_module(G, 1)))
    for n in (1, 2, -1, -2):
        assert not has_free_summand(omega(F, n))


@settings(max_examples=20)
@given(st.sampled_from(("C2xC2", "C3xC3", "C4")), st.integers(1, 2))
def test_omega_zero_strips_free_summands(spec, rank):
    G = group(spec)
    M = omega(trivial_module(G), 1)
    bulked = direct_sum(M, free_module(G, rank))
    stripped = omega(bulked, 0)
    assert stripped.dim == M.dim
    assert is_isomorphic(stripped, M).status == "iso"


@pytest.mark.parametrize("spec", SMALL_GROUPS)
def test_syzygy_socles(spec):
    G = group(spec)
    F = trivial_module(G)
    d = len(G.generators)
    # Omega^1 is the augmentation ideal (socle = norm line, head of dim d); Omega^-1 is its dual
    assert fixed_submodule(omega(F, 1)).dim == 1
    assert fixed_submodule(omega(F, -1)).dim == d


def _pool(G):
    F = trivial_module(G)
    return [F, omega(F, 1), omega(F, -1), regular_module(G), direct_sum(F, F)]


@settings(max_examples=30)
@given(st.sampled_from(("C2xC2", "C3xC3", "C4", "C2xC4")), st.integers(0, 2**31))
def test_omega_dimension_from_cover(spec, seed):
    G = group(spec)
    rng = np.random.default_rng(seed)
    pool = _pool(G)
    M = direct_sum(*[pool[i] for i in rng.integers(0, len(pool), 2)])
    head_dim = M.dim - radical(M).dim
    assert omega(M, 1).dim == G.order * head_dim - M.dim


@settings(max_examples=15)
@given(st.sampled_from(("C2xC2", "C3xC3", "C4")), st.integers(0, 2**31), st.integers(-2, 2))
def test_omega_is_additive(spec, seed, n):
    G = group(spec)
    rng = np.random.default_rng(seed)
    pool = _pool(G)[:3]
    A, B = (pool[i] for i in rng.integers(0, len(pool), 2))
    assert invariant_profile(omega(direct_sum(A, B), n)) == \
        invariant_profile(direct_sum(omega(A, n), omega(B, n)))


@pytest.mark.parametrize("spec", ("C2xC2", "C3xC3", "C4"))
@pytest.mark.parametrize("n,m", [(1, 1), (2, -1), (-1, -1), (-2, 1), (1, -2)])
def test_omega_composes(spec, n, m):
    G = group(spec)
    F = trivial_module(G)
    assert invariant_profile(omega(F, n + m)) == invariant_profile(omega(omega(F, m), n))


@pytest.mark.parametrize("spec", ("C2xC2", "C3xC3", "C4"))
def test_omega_zero_plus_free_recovers_profile(spec):
    G = group(spec)
    M = direct_sum(omega(trivial_module(G), 1), regular_module(G), trivial_module(G))
    core = omega(M, 0)
    rank, rest = divmod(M.dim - core.dim, G.order)
    assert rest == 0 and rank == 1
    rebuilt = direct_sum(core, free_module(G, rank))
    assert invariant_profile(rebuilt) == invariant_profile(M)
