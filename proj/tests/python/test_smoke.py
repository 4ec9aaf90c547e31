import math

import pytest

import sitwork


def test_version():
    assert sitwork.__version__ == "0.1.0"


def test_sector_dimension():
    assert sitwork.sector_dimension(8, 4, 4) == 4900
    assert sitwork.sector_dimension(2, 1, 1) == 4


def test_dimer_spectrum():
    values = sitwork.eigenvalues(2, 1.0, -5.0, "open", 1, 1, [], 0.0)
    root = math.sqrt(2.5**2 + 4.0)
    expected = [-2.5 - root, -5.0, 0.0, -2.5 + root]
    assert values == pytest.approx(expected, abs=1e-12)


def test_zero_quench_moments():
    m = sitwork.work_moments(4, 1.0, -5.0, "open", 2, 2, [0, 2], -3.0,
                             [0, 2], -3.0, 0.0)
    assert m["mean"] == pytest.approx(0.0, abs=1e-12)
    assert m["variance"] == pytest.approx(0.0, abs=1e-12)
    assert m["mu3"] == pytest.approx(0.0, abs=1e-12)


def test_work_distribution_normalized():
    w, p = sitwork.work_distribution(3, 1.0, -4.0, "open", 1, 1, [0], -2.0,
                                     [2], -5.0, 2.0)
    assert len(w) == len(p)
    assert sum(p) == pytest.approx(1.0, abs=1e-10)
    assert all(b > a for a, b in zip(w, w[1:]))


def test_entanglement_bounds():
    per_site, average = sitwork.entanglement(4, 1.0, -5.0, "open", 2, 2,
                                             [0, 2], -10.0)
    assert len(per_site) == 4
    assert all(0.0 <= v <= 0.75 for v in per_site)
    assert average == pytest.approx(sum(per_site) / 4, abs=1e-12)


def test_sweep_rows():
    rows = sitwork.sweep_concentration(4, 1.0, -5.0, "open", 2, 2, [-4.0],
                                       [0, 1], [0.0])
    assert len(rows) == 2
    for row in rows:
        assert row["protocol"] == "A"
        assert row["N_pairs"] > 0
    assert rows[0]["C_initial"] == 0.0
    assert rows[0]["mean_W"] < 0.0  # work extracted from the clean chain


def test_sweep_potential_rows():
    rows = sitwork.sweep_potential(4, 1.0, -5.0, "open", 2, 2, -10.0, [-2.0],
                                   [1], [0.0, 2.0])
    assert len(rows) == 2
    assert all(row["protocol"] == "B" for row in rows)
    assert rows[0]["Vf"] == -10.0
