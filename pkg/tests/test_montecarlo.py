import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from longest_ap import theory as T
from longest_ap.errors import ResourceGuardError
from longest_ap.montecarlo import (
    CSV_HEADER,
    EmpiricalDistribution,
    TrialPlan,
    chunks,
    compare_to_theory,
    concentration_mass,
    dkw_band,
    fmt,
    run_trials,
    theory_window,
    trial_values,
)


def test_plan_validation():
    with pytest.raises(ValueError):
        TrialPlan(10, 0.5, 0)
    with pytest.raises(ValueError):
        TrialPlan(10, 1.0, 5)
    with pytest.raises(ValueError):
        TrialPlan(10, 0.5, 5, statistic="V")
    with pytest.raises(ValueError):
        TrialPlan(10, 0.5, 5, strategy="fast")
    assert TrialPlan(10, 0.5, 5, statistic="U").statistics == ("U",)


def test_near_all_ones():
    d = run_trials(TrialPlan(8, 0.999, 100, 1, "U"))["U"]
    assert d.counts.get(8, 0) >= 95


def test_determinism_and_thread_invariance():
    plan = TrialPlan(200, 0.4, 97, 21, "both")
    ref = run_trials(plan, threads=1)
    for threads in (1, 2, 3, 8, 200):
        got = run_trials(plan, threads=threads)
        for st_ in ("U", "W"):
            assert got[st_].counts == ref[st_].counts
            assert got[st_].to_csv() == ref[st_].to_csv()


def test_trial_values_follow_seed_spec():
    from longest_ap.scanner import scan_value
    from longest_ap.sequence import SeedSpec, generate

    plan = TrialPlan(64, 0.5, 10, 5, "both")
    vals = trial_values(plan, 3, 7)
    for k, t in enumerate(range(3, 7)):
        seq = generate(64, 0.5, SeedSpec(5, t))
        assert vals["U"][k] == scan_value(seq, "U")
        assert vals["W"][k] == scan_value(seq, "W")


def test_joint_run_domination():
    vals = trial_values(TrialPlan(300, 0.3, 400, 2, "both"), 0, 400)
    assert np.all(vals["W"] >= vals["U"])


def test_median_u_at_1024():
    d = run_trials(TrialPlan(1024, 0.5, 2000, 77, "U"))["U"]
    values = sorted(v for v, c in d.counts.items() for _ in range(c))
    assert values[len(values) // 2] in (14, 15)
    # theory CDF crosses 1/2 between r = 14 and r = 15
    assert T.cdf_approx("U", 1024, 14, 0.5) < 0.5 < T.cdf_approx("U", 1024, 15, 0.5)


def test_resource_guard():
    with pytest.raises(ResourceGuardError):
        run_trials(TrialPlan(10**9, 0.5, 1000))


@given(st.integers(1, 500), st.integers(1, 40))
def test_chunks_partition(trials, workers):
    parts = chunks(trials, workers)
    assert parts[0][0] == 0 and parts[-1][1] == trials
    assert all(a < b for a, b in parts)
    assert all(parts[k][1] == parts[k + 1][0] for k in range(len(parts) - 1))


def test_distribution_invariants():
    with pytest.raises(ValueError):
        EmpiricalDistribution("U", 10, 0.5, 5, {3: 4})
    with pytest.raises(ValueError):
        EmpiricalDistribution("U", 10, 0.5, 1, {11: 1})
    d = EmpiricalDistribution("U", 10, 0.5, 6, {5: 2, 3: 4, 7: 0})
    assert list(d.counts) == [3, 5]


def test_cdf_normalisation():
    d = EmpiricalDistribution("U", 10, 0.5, 6, {3: 4, 5: 2})
    assert d.cdf(0) == 0.0 and d.cdf(3) == 0.0
    assert d.cdf(4) == pytest.approx(4 / 6)
    assert d.cdf(6) == 1.0 and d.cdf(11) == 1.0


@given(st.lists(st.dictionaries(st.integers(0, 12), st.integers(1, 50), min_size=1), min_size=1, max_size=5))
def test_merge_associativity(parts):
    dists = [EmpiricalDistribution("W", 12, 0.5, sum(c.values()), c) for c in parts]
    forward = dists[0]
    for d in dists[1:]:
        forward = forward.merge(d)
    backward = dists[-1]
    for d in reversed(dists[:-1]):
        backward = d.merge(backward)
    assert forward.counts == backward.counts
    assert forward.to_csv() == backward.to_csv()


def test_merge_rejects_other_plans():
    a = EmpiricalDistribution("U", 10, 0.5, 1, {2: 1})
    with pytest.raises(ValueError):
        a.merge(EmpiricalDistribution("W", 10, 0.5, 1, {2: 1}))


def test_csv_roundtrip():
    d = EmpiricalDistribution("U", 100, 0.3, 7, {4: 3, 6: 4})
    assert d.to_csv() == "value,count\n4,3\n6,4\n"
    back = EmpiricalDistribution.from_csv(d.to_csv(), "U", 100, 0.3)
    assert back.counts == d.counts and back.trials == 7
    with pytest.raises(ValueError):
        EmpiricalDistribution.from_csv("v,c\n1,1\n", "U", 100, 0.3)
    assert json.loads(d.to_json())["counts"] == {"4": 3, "6": 4}


def test_dkw_examples():
    assert dkw_band(20000, 0.001) == pytest.approx(math.sqrt(math.log(2000) / 40000), rel=1e-14)
    assert dkw_band(20000, 0.001) == pytest.approx(0.01379, abs=1e-5)
    assert dkw_band(1000) > dkw_band(2000)
    for n in (1, 3, 10):
        assert dkw_band(n, 2 * math.exp(-2 * n)) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        dkw_band(0)
    with pytest.raises(ValueError):
        dkw_band(10, 1.0)


def synthetic(stat, n, p, trials):
    """Counts whose CDF is the theory CDF rounded to multiples of 1/trials."""
    top = n
    cum = [0] + [round(trials * T.cdf_approx(stat, n, r, p)) for r in range(2, top + 1)] + [trials]
    counts = {v: cum[v] - cum[v - 1] for v in range(1, top + 1)}
    return EmpiricalDistribution(stat, n, p, trials, counts)


@pytest.mark.parametrize("stat", ["U", "W"])
def test_perfect_agreement(stat):
    trials = 10000
    rep = compare_to_theory(synthetic(stat, 1024, 0.5, trials))
    assert rep.sup_abs_diff <= 1 / trials + 1e-12


def test_report_structure():
    d = run_trials(TrialPlan(512, 0.5, 500, 4, "U"))["U"]
    rep = compare_to_theory(d)
    rs = [row.r for row in rep.rows]
    assert rs == list(range(rs[0], rs[-1] + 1))
    assert rep.r_window == (rs[0], rs[-1])
    assert rs == theory_window("U", 512, 0.5)
    emp = [row.empirical_cdf for row in rep.rows]
    th = [row.theory_cdf for row in rep.rows]
    assert emp == sorted(emp) and th == sorted(th)
    assert all(1e-4 <= t <= 1 - 1e-4 for t in th)
    assert rep.sup_abs_diff == max(row.abs_diff for row in rep.rows)
    assert all(row.dkw_band == dkw_band(500, 0.001) for row in rep.rows)
    assert rep.rows[0].chen_stein_budget == T.chen_stein_budget("U", 512, rs[0], 0.5)


def test_report_serialisation():
    rep = compare_to_theory(synthetic("U", 256, 0.5, 1000))
    lines = rep.to_csv().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == len(rep.rows) + 1
    first = lines[1].split(",")
    assert first[0] == str(rep.rows[0].r)
    assert first[2] == fmt(rep.rows[0].theory_cdf)
    payload = json.loads(rep.to_json())
    assert payload["r_window"] == list(rep.r_window)
    assert [row["r"] for row in payload["rows"]] == [row.r for row in rep.rows]
    assert rep.to_json() == rep.to_json()


def test_fmt_is_twelve_significant_digits():
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(12356.923004148123) == "12356.9230041"
    assert fmt(1e-20 / 3) == "3.33333333333e-21"


def test_compare_preconditions():
    with pytest.raises(ValueError):
        compare_to_theory(EmpiricalDistribution("U", 100, 0.5, 99, {5: 99}))
    with pytest.raises(ValueError):
        compare_to_theory(EmpiricalDistribution("U", 3, 1e-6, 100, {0: 100}))


def test_concentration_mass():
    d = EmpiricalDistribution("U", 10, 0.5, 10, {2: 3, 3: 6, 4: 1})
    assert concentration_mass(d, {2, 3, 4}) == 1.0
    assert concentration_mass(d, {2, 3}) == pytest.approx(0.9)
    assert concentration_mass(d, {9}) == 0.0
    with pytest.raises(ValueError):
        concentration_mass(d, set())
