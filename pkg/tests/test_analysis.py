import json

import numpy as np
import pytest

from qkdnet import analysis
from qkdnet.adversary import AdversarySpec, ChannelSpec
from qkdnet.errors import InvalidArgumentError
from qkdnet.protocol import NetworkConfig, run_protocol1


def test_random_density_is_a_state():
    rng = np.random.default_rng(0)
    for dim in (2, 5):
        rho = analysis.random_density(dim, rng)
        assert np.allclose(rho, rho.conj().T)
        assert np.trace(rho).real == pytest.approx(1.0)
        assert np.linalg.eigvalsh(rho).min() > -1e-12


def test_fuchs_van_de_graaf_known_pair():
    # |0><0| vs |+><+|: F = 1/2, D = sqrt(1/2); both margins negative/zero
    z0 = np.diag([1.0, 0.0]).astype(complex)
    plus = np.full((2, 2), 0.5, dtype=complex)
    lo, hi = analysis.check_fuchs_van_de_graaf(z0, plus)
    assert lo == pytest.approx(1 - np.sqrt(0.5) - np.sqrt(0.5), abs=1e-9)
    assert hi == pytest.approx(0.0, abs=1e-9)


def test_suites_pass_at_default_tolerance():
    rng = np.random.default_rng(21)
    dims = [2, 3, 4]
    for rep in (analysis.fuchs_van_de_graaf_suite(150, dims, rng),
                analysis.pure_saturation_suite(150, dims, rng),
                analysis.double_concavity_suite(150, dims, rng),
                analysis.bures_triangle_suite(150, dims, rng)):
        assert rep.passed, rep.inequality_id


def test_double_concavity_requires_normalized_weights():
    rng = np.random.default_rng(1)
    a, b = analysis.random_density(2, rng), analysis.random_density(2, rng)
    with pytest.raises(InvalidArgumentError):
        analysis.check_double_concavity([(0.7, a, b), (0.7, a, b)])


def test_measured_epsilon_of_depolarizing_channel():
    rng = np.random.default_rng(2)
    ch = ChannelSpec(kind="depolarizing", p=0.2, targets=("a",))
    eps = analysis.measure_channel_epsilon(ch, 1, rng, samples=50)
    assert eps == pytest.approx(0.1, abs=1e-9)  # unitarily covariant: p/2


def test_entanglement_fidelity_bound_holds():
    rng = np.random.default_rng(3)
    ch = ChannelSpec(kind="depolarizing", p=0.15, targets=("a",))
    rep = analysis.check_entanglement_fidelity_bound(
        ch, 1, rng, purifications=50, epsilon_samples=50)
    assert rep.passed


def test_depolarizing_equality_closed_form():
    rep = analysis.depolarizing_equality_check(0.1)
    assert rep.max_violation <= 1e-9
    assert rep.witness["epsilon"] == pytest.approx(0.05)
    assert rep.witness["bound"] == pytest.approx(1 - 0.075)


def test_composed_channel_bound_holds():
    rng = np.random.default_rng(4)
    chans = [ChannelSpec(kind="depolarizing", p=0.1, targets=("m0",)),
             ChannelSpec(kind="depolarizing", p=0.05, targets=("m1",))]
    rep = analysis.check_composed_channel_bound(chans, 2, 2, rng,
                                                epsilon_samples=30)
    assert rep.passed
    with pytest.raises(InvalidArgumentError):
        analysis.check_composed_channel_bound(chans, 3, 2, rng)


def test_table_correlation_law_exact_and_sampled():
    rng = np.random.default_rng(5)
    res = analysis.table_correlation_check((1, 2), 2000, rng)
    assert res["violations"] == 0
    assert res["max_violating_mass"] < 1e-12
    res = analysis.table_correlation_check((1, 2, 1), 2000, rng)
    assert res["violations"] == 0
    with pytest.raises(InvalidArgumentError):
        analysis.cat_parity_distribution(["X", "Y"])  # odd Y count


def test_protocol_statistics_fields():
    cfg = NetworkConfig(n=2, m=1, t=1, rounds=300, auth_enabled=False)
    tr = run_protocol1(cfg, AdversarySpec(), 13)
    stats = analysis.protocol_statistics(tr)
    assert stats["verdict"] == "Pass" and not stats["detected"]
    assert stats["key_agreement_rate"] == 1.0
    lo, hi = stats["test_error_ci95"]
    assert lo <= stats["test_error_rate"] <= hi
    json.dumps(stats)  # plain types only


def test_report_emission_round_trip():
    rng = np.random.default_rng(6)
    reports = [analysis.fuchs_van_de_graaf_suite(20, [2], rng),
               analysis.bures_triangle_suite(20, [2], rng)]
    doc = json.loads(analysis.reports_to_json(reports))
    assert [d["inequality_id"] for d in doc] \
        == ["fuchs-van-de-graaf", "bures-triangle"]
    assert all(d["passed"] for d in doc)
    csv = analysis.reports_to_csv(reports)
    lines = csv.strip().splitlines()
    assert lines[0].startswith("inequality_id,")
    assert len(lines) == 3
