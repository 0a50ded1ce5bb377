"""Alternative families, limit directions, local shifts, power, Bahadur."""

import json
import math

import numpy as np
import pytest

import wishfit as wf
from wishfit.alternatives import (
    AlternativeFamily,
    bahadur_b2,
    h_limit,
    matrix_f_sampler,
    power_row,
    power_sim,
    sample_alternative,
    shift_c,
)
from wishfit.goftest import GofConfig
from wishfit.specialfn import log_multigamma, multidigamma


def test_family_validation():
    with pytest.raises(wf.DomainError):
        AlternativeFamily(kind="bogus", alpha=3.0, m=2)
    with pytest.raises(wf.DomainError):
        AlternativeFamily(kind="scale", alpha=1.4, m=2)  # below hard bound
    with pytest.raises(wf.DomainError):
        AlternativeFamily(kind="fixed-custom", alpha=3.0, m=2)  # no sampler
    with pytest.raises(wf.DomainError):
        AlternativeFamily(kind="scale", alpha=3.0, m=2, n=0)


def test_drift_is_inverse_root_n():
    fam = AlternativeFamily(kind="scale", alpha=3.0, m=2, n=400)
    assert fam.delta == 0.05
    assert AlternativeFamily(kind="scale", alpha=3.0, m=2).delta == 0.0


def test_mgig_recognized_but_not_implemented():
    fam = AlternativeFamily(kind="mgig", alpha=3.0, m=2, n=100)
    with pytest.raises(NotImplementedError):
        sample_alternative(fam, wf.RngStream(1, 1), size=4)


def test_scale_family_mean():
    alpha, m, n = 3.0, 2, 100
    fam = AlternativeFamily(kind="scale", alpha=alpha, m=m, n=n)
    d = fam.delta
    x = sample_alternative(fam, wf.RngStream(5, 1), size=40000)
    traces = np.trace(x, axis1=1, axis2=2)
    # rate (1+d) I gives mean alpha/(1+d) I, so mean trace m*alpha/(1+d)
    want = m * alpha / (1.0 + d)
    se = traces.std(ddof=1) / math.sqrt(len(traces))
    assert abs(traces.mean() - want) < 5 * se


def test_shape_family_mean():
    alpha, m, n = 3.0, 2, 100
    fam = AlternativeFamily(kind="shape", alpha=alpha, m=m, n=n)
    x = sample_alternative(fam, wf.RngStream(6, 1), size=40000)
    traces = np.trace(x, axis1=1, axis2=2)
    want = m * (alpha + fam.delta)
    se = traces.std(ddof=1) / math.sqrt(len(traces))
    assert abs(traces.mean() - want) < 5 * se


def test_contamination_family_mean():
    alpha, m, n = 3.0, 2, 25  # large drift 0.2 to make the mixture visible
    fam = AlternativeFamily(kind="contamination", alpha=alpha, m=m, n=n)
    x = sample_alternative(fam, wf.RngStream(7, 1), size=40000)
    traces = np.trace(x, axis1=1, axis2=2)
    want = m * alpha * (1.0 + fam.delta)  # contaminant has double trace mean
    se = traces.std(ddof=1) / math.sqrt(len(traces))
    assert abs(traces.mean() - want) < 5 * se


def test_sample_alternative_single_matrix():
    fam = AlternativeFamily(kind="scale", alpha=3.0, m=2, n=50)
    x = sample_alternative(fam, wf.RngStream(8, 1))
    assert x.shape == (2, 2)
    assert np.allclose(x, x.T)
    assert np.all(np.linalg.eigvalsh(x) > 0)


def test_h_limit_scale_is_centered_trace():
    fam = AlternativeFamily(kind="scale", alpha=3.0, m=2, n=100)
    # exact zero on the mean-trace shell
    assert h_limit(fam, np.array([2.0, 4.0])) == 0.0
    assert h_limit(fam, np.array([1.0, 1.5])) == pytest.approx(3.5)
    # an (N, m) batch with N != m is unambiguously eigenvalue rows
    batch = np.array([[1.0, 2.0], [3.0, 3.5], [2.0, 4.0]])
    np.testing.assert_allclose(h_limit(fam, batch), [3.0, -0.5, 0.0])


def test_h_limit_shape_closed_form():
    fam = AlternativeFamily(kind="shape", alpha=3.0, m=2, n=100)
    row = np.array([0.8, 2.5])
    want = math.log(0.8) + math.log(2.5) - multidigamma(3.0, 2)
    assert h_limit(fam, row) == pytest.approx(want, rel=1e-12)


def test_h_limit_contamination_closed_form():
    alpha, m = 3.0, 2
    fam = AlternativeFamily(kind="contamination", alpha=alpha, m=m, n=100)
    row = np.array([0.9, 1.7])
    det = 0.9 * 1.7
    want = math.exp(
        log_multigamma(alpha, m) - log_multigamma(2 * alpha, m)
    ) * det**alpha - 1.0
    assert h_limit(fam, row) == pytest.approx(want, rel=1e-12)


def test_h_limit_accepts_matrix_input():
    fam = AlternativeFamily(kind="scale", alpha=3.0, m=2, n=100)
    q = np.array([[0.6, 0.8], [-0.8, 0.6]])
    mat = q @ np.diag([1.0, 1.5]) @ q.T
    assert h_limit(fam, mat) == pytest.approx(3.5, rel=1e-10)


@pytest.mark.parametrize("kind", ["scale", "shape", "contamination"])
def test_h_limit_integrates_to_zero_under_null(kind):
    alpha, m = 3.0, 2
    fam = AlternativeFamily(kind=kind, alpha=alpha, m=m, n=100)
    model = wf.WishartModel(alpha, np.eye(m))
    gen = wf.as_generator(wf.RngStream(11, 4))
    x = wf.wishart_sample(model, 40000, gen)
    # directions are centered under the identity-rate null (mean alpha*I): raw draws
    vals = np.asarray(h_limit(fam, np.linalg.eigvalsh(x)))
    se = vals.std(ddof=1) / math.sqrt(len(vals))
    assert abs(vals.mean()) < 4 * se


def test_shift_c_zero_when_h_is_zero():
    fam = AlternativeFamily(
        kind="fixed-custom", alpha=3.0, m=2,
        extra={"sampler": lambda size, gen: np.tile(np.eye(2), (size, 1, 1))},
    )
    val, se = shift_c(np.diag([0.4, 0.8]), fam, draws=2000, rng=3)
    assert val == 0.0 and se == 0.0


def test_shift_c_zero_at_zero_argument():
    fam = AlternativeFamily(kind="shape", alpha=3.0, m=2, n=100)
    val, se = shift_c(np.zeros((2, 2)), fam, draws=2000, rng=3)
    assert val == pytest.approx(0.0, abs=1e-14)


def test_shift_c_linear_in_h():
    alpha, m = 3.0, 2
    sampler = lambda size, gen: np.tile(np.eye(m), (size, 1, 1))
    base = {"sampler": sampler, "h": lambda row: row.sum() - m * alpha}
    double = {"sampler": sampler, "h": lambda row: 2.0 * (row.sum() - m * alpha)}
    t = np.diag([0.5, 1.0])
    v1, _ = shift_c(t, AlternativeFamily("fixed-custom", alpha, m, extra=base),
                    draws=4000, rng=9)
    v2, _ = shift_c(t, AlternativeFamily("fixed-custom", alpha, m, extra=double),
                    draws=4000, rng=9)
    assert v2 == pytest.approx(2.0 * v1, rel=1e-12)


def test_shift_c_vanishes_on_scale_direction():
    # the exact scale invariance of the statistic forces c = 0 on this family
    fam = AlternativeFamily(kind="scale", alpha=3.0, m=2, n=100)
    val, se = shift_c(np.diag([0.6, 1.1]), fam, draws=30000, rng=12)
    assert abs(val) < 4 * se


def test_shift_c_nonzero_on_shape_direction():
    fam = AlternativeFamily(kind="shape", alpha=3.0, m=2, n=100)
    val, se = shift_c(np.diag([0.3, 0.7]), fam, draws=30000, rng=12)
    assert abs(val) > 4 * se  # genuinely noncentral


def test_shift_c_deterministic():
    fam = AlternativeFamily(kind="shape", alpha=3.0, m=2, n=100)
    t = np.diag([0.4, 0.9])
    assert shift_c(t, fam, draws=3000, rng=5) == shift_c(t, fam, draws=3000, rng=5)


def test_matrix_f_sampler_draws_spd():
    sampler = matrix_f_sampler(4.0, 5.0, 2)
    gen = wf.as_generator(wf.RngStream(13, 1))
    x = sampler(50, gen)
    assert x.shape == (50, 2, 2)
    assert np.allclose(x, x.transpose(0, 2, 1))
    assert np.all(np.linalg.eigvalsh(x) > 0)
    with pytest.raises(wf.DomainError):
        matrix_f_sampler(0.2, 5.0, 2)


def test_fixed_custom_family_roundtrip():
    sampler = matrix_f_sampler(4.0, 5.0, 2)
    fam = AlternativeFamily(
        kind="fixed-custom", alpha=3.0, m=2,
        extra={"sampler": sampler, "h": lambda row: row.sum()},
    )
    x = sample_alternative(fam, wf.RngStream(14, 1), size=6)
    assert x.shape == (6, 2, 2)
    assert h_limit(fam, np.array([1.0, 2.0])) == 3.0

    bad = AlternativeFamily(
        kind="fixed-custom", alpha=3.0, m=2,
        extra={"sampler": lambda size, gen: np.zeros((size, 3, 3))},
    )
    with pytest.raises(wf.DomainError):
        sample_alternative(bad, wf.RngStream(14, 1), size=2)


def test_power_sim_smoke_and_validation():
    fam = AlternativeFamily(kind="contamination", alpha=3.0, m=2, n=20)
    cfg = GofConfig(alpha=3.0, mc_reps=500, seed=3)
    rate, se = power_sim(fam, 20, level=0.05, reps=100, seed=3, cfg=cfg)
    assert 0.0 <= rate <= 1.0
    assert se > 0.0
    with pytest.raises(wf.DomainError):
        power_sim(fam, 20, reps=10, seed=3, cfg=cfg)
    with pytest.raises(wf.DomainError):
        power_sim(fam, 1, reps=100, seed=3, cfg=cfg)


def test_power_row_json_keys():
    fam = AlternativeFamily(kind="shape", alpha=3.0, m=2, n=50)
    row = json.loads(power_row(fam, 50, 0.05, 200, 0.11, 0.02, seed=5))
    assert set(row) == {
        "family", "theta_or_n", "level", "reps", "reject_rate", "se",
        "seed", "version",
    }
    assert row["family"] == "shape"
    assert row["theta_or_n"] == 50
    assert row["reject_rate"] == 0.11


def test_bahadur_b2_theta_scaling_and_spectrum_link():
    alpha, m = 3.0, 2

    def h_scale(row):
        return m * alpha - row.sum()

    kw = dict(alpha=alpha, m=m, draws_T=400, draws_X=20000,
              rng=wf.RngStream(17, 2))
    r1 = bahadur_b2(0.2, h_scale, **kw)
    r2 = bahadur_b2(0.4, h_scale, **kw)
    assert r2.b2 == pytest.approx(4.0 * r1.b2, rel=1e-12)  # exact theta^2 law
    assert r1.b2 > 0 and r1.se > 0
    # the largest limit eigenvalue enters the slope ratio
    assert r1.delta_1 == pytest.approx(3.214448377062e-3, rel=1e-6)
    assert r1.slope_ratio == pytest.approx(r1.b2 / (0.04 * r1.delta_1), rel=1e-12)
