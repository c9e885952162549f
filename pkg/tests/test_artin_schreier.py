from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pmodlab import fp_linalg as la
from pmodlab.artin_schreier import (
    FFField, FieldError, as_polynomial_irreducible, build_tower, find_irreducible,
    is_irreducible, j_module, norm_equation_applicability, pairing, pairing_sweep, poly_mod,
    trace_check, trace_map_rank, trace_sweep, trace_value, verify_theorem1_concrete,
)
from pmodlab.gmodule import is_isomorphic, trivial_module
from pmodlab.heller import omega

FIELDS = [(2, 1), (2, 4), (3, 3), (5, 2), (7, 2), (2, 8)]
TOWERS = [(2, 1), (2, 2), (2, 3), (3, 1)]


def _field(pk):
    return FFField(*pk)


@settings(max_examples=80)
@given(st.sampled_from(FIELDS), st.data())
def test_field_axioms(pk, data):
    K = _field(pk)
    a, b, c = (data.draw(st.integers(0, K.order - 1)) for _ in range(3))
    assert K.mul(K.mul(a, b), c) == K.mul(a, K.mul(b, c))
    assert K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c))
    assert K.add(a, K.neg(a)) == 0 and K.sub(K.add(a, b), b) == a
    assert K.mul(a, 1) == a
    if a:
        assert K.mul(a, K.inv(a)) == 1
        assert K.power(a, K.order - 1) == 1
    # Frobenius is a ring endomorphism of order k
    assert K.frobenius(K.mul(a, b)) == K.mul(K.frobenius(a), K.frobenius(b))
    assert K.frobenius(K.add(a, b)) == K.add(K.frobenius(a), K.frobenius(b))
    assert K.frobenius(a, K.k) == a


@pytest.mark.parametrize("pk", FIELDS)
def test_frobenius_fixes_exactly_prime_field(pk):
    K = _field(pk)
    elems = K.elements
    fixed = elems[K.frobenius(elems) == elems]
    assert sorted(fixed.tolist()) == list(range(K.p))
    wp = (K.frobenius_matrix - la.identity(K.k)) % K.p
    assert la.rank_mod(wp, K.p) == K.k - 1


@pytest.mark.parametrize("pk", FIELDS)
def test_exp_log_tables(pk):
    K = _field(pk)
    exp, log = K.exp_table, K.log_table
    assert len(set(exp[:K.order - 1].tolist())) == K.order - 1
    nz = np.arange(1, K.order)
    assert np.array_equal(exp[log[nz]], nz)


def test_modulus_search():
    assert find_irreducible(2, 2) == (1, 1, 1)
    assert is_irreducible([1, 1, 0, 0, 1], 2)
    assert not is_irreducible([1, 0, 1], 2)       # x^2 + 1 = (x + 1)^2
    assert poly_mod([1, 0, 1], [1, 1], 2) == []
    with pytest.raises(FieldError):
        FFField(2, 2, (1, 0, 1))
    with pytest.raises(FieldError):
        FFField(2, 30)


@pytest.mark.parametrize("p,m,k,order", [(2, 1, 2, 2), (2, 2, 4, 4), (3, 1, 3, 3)])
def test_tower_examples(p, m, k, order):
    t = build_tower(p, m)
    assert t.K.k == k and t.G.order == order
    assert t.module.dim == k


def test_tower_guard():
    with pytest.raises(FieldError):
        build_tower(3, 3)
    with pytest.raises(FieldError):
        build_tower(2, 0)


@pytest.mark.parametrize("pm", TOWERS + [(2, 4), (3, 2), (5, 1)])
def test_j_module(pm):
    t = build_tower(*pm)
    J = j_module(t)
    assert J.dim == 1 and J.action_trivial
    assert J.wp_kernel.shape[0] == 1
    assert J.F_classes.dim == 0
    assert trace_map_rank(t) == 1
    assert is_isomorphic(J.quotient, omega(trivial_module(t.G), -2)).status == "iso"


def test_one_is_a_wp_value_in_f4():
    t = build_tower(2, 1)
    K = t.K
    roots = [k for k in range(K.order) if K.sub(K.power(k, 2), k) == 1]
    assert roots
    assert not np.any(j_module(t).class_of(1))


def test_trace_examples():
    F3, F2 = FFField(3, 1), FFField(2, 1)
    assert int(trace_value(F3, 1, 1)) == 1
    assert int(trace_value(F2, 1, 1)) == 1
    assert int(trace_value(F2, 1, 0)) == 0
    assert trace_check(F3, 1, 2)
    with pytest.raises(FieldError):
        trace_value(F2, 0, 1)


@pytest.mark.parametrize("pm", TOWERS)
def test_trace_sweep_full(pm):
    t = build_tower(*pm)
    sw = trace_sweep(t, e_range="all")
    assert sw.ok and sw.failures == 0
    assert sw.valid_a == t.K.order // t.p * (t.p - 1)


def test_trace_sweep_f27_counts():
    sw = trace_sweep(build_tower(3, 1))
    assert (sw.valid_a, sw.invalid_a, sw.pairs) == (18, 9, 18 * 27)


def test_irreducibility_matches_classes():
    t = build_tower(2, 2)
    J = j_module(t)
    elems = t.K.elements
    assert np.array_equal(as_polynomial_irreducible(t.K, elems), np.any(J.class_of(elems), axis=1))


def test_pairing_examples():
    base = SimpleNamespace(K=FFField(2, 1), p=2)
    assert pairing(base, 1) == 1
    assert pairing(base, 1, tau_power=0) == 0
    assert pairing(base, 1, tau_power=2) == 0
    with pytest.raises(FieldError):
        pairing(base, 0)


@pytest.mark.parametrize("pm", TOWERS)
def test_pairing_sweep(pm):
    ps = pairing_sweep(build_tower(*pm))
    assert ps.ok and ps.nonzero_classes > 0


@pytest.mark.parametrize("p", (2, 3, 5))
def test_norm_equation_not_applicable_over_finite_fields(p):
    rep = norm_equation_applicability(p)
    assert not rep["applicable"] and rep["nonzero_classes_from_Fp"] == []


@pytest.mark.parametrize("pm", TOWERS)
def test_concrete_structure(pm):
    rep = verify_theorem1_concrete(*pm)
    assert rep.theorem1 == "pass"
    assert rep.to_json() == {"p": pm[0], "m": pm[1], "dimJK": 1, "action": "trivial",
                             "F_classes_dim": 0, "theorem1": "pass"}
