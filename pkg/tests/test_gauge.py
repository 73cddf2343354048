import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import pointed_z3
from fusioncat.catdata import BUNDLED, bundled, verify_pentagon
from fusioncat.dims import frobenius_perron_dims, paired_dimensions
from fusioncat.gauge import (GaugeError, GaugeTransform, apply_gauge, make_fair_basis, pairing_kit,
                             pivotal_indicators, random_gauge)
from fusioncat.pivotal import pivotal_report

CATS = {name: bundled(name) for name in BUNDLED}
CATS["z3_q1"] = pointed_z3(1)
REPORTS = {name: pivotal_report(d) for name, d in CATS.items()}


def spectra(report):
    return {t: np.sort_complex(np.round(np.linalg.eigvals(T), 10)) for t, T in report.T.items()}


@settings(max_examples=15, deadline=None)
@given(name=st.sampled_from(sorted(CATS)), seed=st.integers(0, 2**32 - 1), unitary=st.booleans())
def test_invariants_under_random_gauge(name, seed, unitary):
    data = CATS[name]
    ref = REPORTS[name]
    g = apply_gauge(data, random_gauge(data, np.random.default_rng(seed), unitary=unitary))
    assert verify_pentagon(g).max_residual < 1e-8
    assert np.abs(paired_dimensions(g)[2] - paired_dimensions(data)[2]).max() < 1e-8
    assert np.allclose(frobenius_perron_dims(g.ring), frobenius_perron_dims(data.ring))
    rep = pivotal_report(g)
    assert np.abs(rep.traces - ref.traces).max() < 1e-8
    assert np.array_equal(rep.p, ref.p)
    sp, sref = spectra(rep), spectra(ref)
    for t in sref:
        assert np.abs(sp[t] - sref[t]).max() < 1e-8
    for t, A in ref.A.items():
        assert np.abs(np.sort_complex(np.linalg.eigvals(rep.A[t])) - np.sort_complex(np.linalg.eigvals(A))).max() < 1e-8


def test_compose_matches_sequential(e6):
    rng = np.random.default_rng(11)
    g1, g2 = random_gauge(e6, rng), random_gauge(e6, rng)
    a = apply_gauge(apply_gauge(e6, g1), g2)
    b = apply_gauge(e6, g1.compose(g2))
    for key, blk in a.stored_blocks().items():
        assert np.abs(blk.matrix - b.stored_blocks()[key].matrix).max() < 1e-10


def test_inverse_gauge_restores(yl):
    rng = np.random.default_rng(5)
    g = random_gauge(yl, rng)
    inv = GaugeTransform({k: np.linalg.inv(m) for k, m in g.matrices.items()})
    back = apply_gauge(apply_gauge(yl, g), inv)
    for key, blk in yl.stored_blocks().items():
        assert np.abs(back.stored_blocks()[key].matrix - blk.matrix).max() < 1e-12


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_fair_basis_non_self_dual(seed):
    data = pointed_z3(1)
    g = apply_gauge(data, random_gauge(data, np.random.default_rng(seed)))
    fair, _ = make_fair_basis(g)
    a = paired_dimensions(fair)[0]
    assert abs(a[1] - a[2]) < 1e-9
    assert a[1].real > 0 and abs(a[1].imag) < 1e-9
    again, g2 = make_fair_basis(fair)
    assert g2.is_identity(1e-9)


@pytest.mark.parametrize("name", sorted(CATS))
def test_fair_basis_idempotent(name):
    fair, _ = make_fair_basis(CATS[name])
    _, g = make_fair_basis(fair)
    assert g.is_identity(1e-12)


def test_indicators(yl, e6):
    assert list(pivotal_indicators(make_fair_basis(yl)[0])) == [1, -1]
    assert list(pivotal_indicators(make_fair_basis(e6)[0])) == [1, 1, 1]


@pytest.mark.parametrize("name", sorted(CATS))
def test_pairing_snake_and_loops(name):
    data = make_fair_basis(CATS[name])[0]
    kit = pairing_kit(data)
    assert kit.max_snake_residual < 1e-12
    d = paired_dimensions(data)[3]
    for i in range(data.rank):
        # each closed loop evaluates to +-d_i, and the two loops pair to d_i^2
        e, f = kit.loops[(i, "e.eta")], kit.loops[(i, "eps.n")]
        assert abs(abs(e) - d[i]) < 1e-12
        assert abs(e * f - d[i] ** 2) < 1e-9 or abs(e * np.conj(f) - d[i] ** 2) < 1e-9


def test_gauge_rejects_unit_leg(yl):
    with pytest.raises(GaugeError):
        apply_gauge(yl, GaugeTransform({(1, 0, 1): np.array([[2.0]])}))


def test_gauge_rejects_singular(yl):
    with pytest.raises(GaugeError):
        apply_gauge(yl, GaugeTransform({(1, 1, 1): np.array([[0.0]])}))


def test_gauge_rejects_bad_shape(e6):
    with pytest.raises(GaugeError):
        apply_gauge(e6, GaugeTransform({(1, 1, 1): np.eye(3)}))
