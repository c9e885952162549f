import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pmodlab import fp_linalg as la
from pmodlab.decomp import (
    BookkeepingError, PresentationError, fitting_split, indecomposable, verify_presentation,
    verify_theorem1,
)
from pmodlab.gmodule import (
    GModuleMap, ModuleError, direct_sum, invariant_profile, regular_module, trivial_module, zero_module,
)
from pmodlab.heller import omega

from _util import STANDARD_GROUPS, group


def test_fitting_split_on_projection():
    G = group("C2xC2")
    F = trivial_module(G)
    M = direct_sum(omega(F, 1), F)
    proj = np.zeros((M.dim, M.dim), dtype=np.int64)
    proj[-1, -1] = 1
    ker, im = fitting_split(M, GModuleMap(M, M, proj))
    assert (ker.dim, im.dim) == (M.dim - 1, 1)


def test_fitting_split_none_for_identity_and_nilpotent():
    G = group("C3")
    R = regular_module(G)
    assert fitting_split(R, GModuleMap(R, R, la.identity(3))) is None
    a = (R.gen_action[0] - la.identity(3)) % 3
    assert fitting_split(R, GModuleMap(R, R, a)) is None


def test_fitting_split_rejects_non_equivariant():
    G = group("C2xC2")
    R = regular_module(G)
    e = np.zeros((4, 4), dtype=np.int64)
    e[0, 0] = 1
    with pytest.raises(ModuleError):
        fitting_split(R, e)


@pytest.mark.parametrize("spec", ("C2xC2", "C3xC3"))
@pytest.mark.parametrize("n", (1, 2, -1, -2))
def test_syzygies_certified_indecomposable(spec, n):
    rep = indecomposable(omega(trivial_module(group(spec)), n))
    assert rep.certificate == "indecomposable_certified"
    assert rep.check()


def test_full_scan_agrees_on_klein_four():
    G = group("C2xC2")
    for n in (1, 2, -1, -2):
        assert indecomposable(omega(trivial_module(G), n), method="full").certificate == \
            "indecomposable_certified"


def test_regular_and_trivial_are_indecomposable():
    for spec in ("C4", "C2xC2", "C3xC3"):
        G = group(spec)
        for M in (regular_module(G), trivial_module(G)):
            assert indecomposable(M).indecomposable


def test_zero_module():
    assert indecomposable(zero_module(group("C2"))).certificate == "zero"


def test_heuristic_label_beyond_budget():
    G = group("C3xC3")
    M = omega(trivial_module(G), 1)
    rep = indecomposable(M, budget=3, samples=200)
    assert rep.end_dim > 1
    assert rep.certificate == "indecomposable_heuristic"
    assert rep.scanned == 200 and rep.seed == 0


@settings(max_examples=25)
@given(st.sampled_from(("C2xC2", "C3", "C4", "C3xC3")), st.integers(0, 2**31))
def test_split_sums_are_found(spec, seed):
    G = group(spec)
    rng = np.random.default_rng(seed)
    F = trivial_module(G)
    pool = [F, omega(F, 1), omega(F, -1), regular_module(G)]
    a, b = (pool[i] for i in rng.integers(0, len(pool), 2))
    M = direct_sum(a, b)
    for method in ("head", "full"):
        rep = indecomposable(M, method=method)
        assert rep.certificate == "split"
        assert rep.check()
        assert sorted(s.dim for s in rep.summands) != [0, M.dim]


def test_unknown_method():
    G = group("C2xC2")
    with pytest.raises(ValueError):
        indecomposable(omega(trivial_module(G), 1), method="nope")


@pytest.mark.parametrize("spec", STANDARD_GROUPS)
def test_structure_bookkeeping(spec):
    G = group(spec)
    d = G.minimal_generator_count()
    for n in range(d, d + 4):
        rep = verify_theorem1(G, n)
        assert rep.consistent
        assert rep.dim_J_K == G.order * (n - 1) + 1
        assert not rep.X_has_free_summand
        assert rep.fixed_dim_Y == n - d


def test_bookkeeping_rejects_small_n():
    with pytest.raises(BookkeepingError):
        verify_theorem1(group("C2xC2"), 1)


@pytest.mark.parametrize("p", (2, 3, 5))
def test_presentation(p):
    pres = verify_presentation(p)
    assert pres.basis_size == p * p + 1
    assert all(pres.checks.values())
    assert pres.submodule.dim == p * p + 1


@pytest.mark.parametrize("p", (2, 3))
def test_presentation_module_profile(p):
    pres = verify_presentation(p)
    assert invariant_profile(pres.module) == invariant_profile(omega(trivial_module(pres.group), 2))


def test_presentation_guard():
    with pytest.raises(PresentationError):
        verify_presentation(7)
