import itertools
import json
import math
from fractions import Fraction

import pytest

from charmoment.arith import is_prime, is_square, jacobi
from charmoment.errors import CapacityError, DomainError, UnsupportedModeError
from charmoment.prooflab import (
    ExperimentConfig,
    MomentReport,
    ProofTrace,
    burgess_scan,
    ceil_power,
    grh_scan,
    period_sums,
    proof_trace,
    random_configs,
    report_row,
    scan_csv,
    theorem_report,
    trace_many,
)
from charmoment.selberg import selberg_lambdas
from conftest import jacobi_by_factoring

F = Fraction

# Frozen after agreement with brute_trace below and between both
# non-square computations.
FROZEN_TRACES = [
    (
        dict(Q=100, u=20, h=4, s=1, z=3),
        dict(M_sharp=21, T_majorant=F(30), U_square=F(30), U_nonsquare=F(0), R=4,
             upper_count=F(1016, 25), R_bound_term=F(4064, 25)),
    ),
    (
        dict(Q=300, u=40, h=16, s=2, z=5, preset="rademacher", seed=7, sharp="minus"),
        dict(M_sharp=1696, T_majorant=F(468328, 121), U_square=F(383128, 121), U_nonsquare=F(85200, 121),
             R=832, upper_count=F(13264, 121), R_bound_term=F(11035648, 121)),
    ),
    (
        dict(Q=500, u=100, h=12, s=1, z=7, preset="rademacher", seed=3),
        dict(M_sharp=201, T_majorant=F(639461, 1681), U_square=F(646877, 1681), U_nonsquare=F(-7416, 1681),
             R=12, upper_count=F(244948, 1681), R_bound_term=F(2939376, 1681)),
    ),
]


def brute_trace(cfg):
    """Scalar re-derivation: Fraction weights, one symbol at a time."""
    lp = selberg_lambdas(cfg.level).lambda_plus
    w = cfg.weights()
    r = 1 if cfg.sharp == "plus" else 3
    terms = [(n, int(w[n])) for n in range(cfg.u + 1, cfg.u + cfg.h + 1) if n % 4 == r]
    t = 2 * cfg.s
    qs = range(cfg.Q | 1, 2 * cfg.Q + 1, 2)
    weight = {q: sum((c for e, c in lp.items() if q % e == 0), F(0)) for q in qs}

    def S(q):
        return sum(a * jacobi(n, q) for n, a in terms)

    T = sum(weight[q] * S(q) ** t for q in qs)
    M = sum(abs(S(p)) ** t for p in range(max(3, cfg.Q), 2 * cfg.Q + 1) if is_prime(p))
    sq = ns = flipped = F(0)
    for tup in itertools.product(terms, repeat=t):
        coeff = math.prod(a for _, a in tup)
        N = math.prod(n for n, _ in tup)
        if is_square(N):
            sq += coeff * sum(weight[q] * jacobi(N, q) for q in qs)
        else:
            ns += coeff * sum(weight[q] * jacobi(N, q) for q in qs)
            flipped += coeff * sum(weight[q] * jacobi(q, N) for q in qs)
    return M, T, sq, ns, flipped


@pytest.mark.parametrize("kwargs,expected", FROZEN_TRACES)
def test_frozen_traces(kwargs, expected):
    tr = proof_trace(ExperimentConfig(**kwargs))
    for name, value in expected.items():
        assert getattr(tr, name) == value, name
    assert tr.U_nonsquare_flipped == tr.U_nonsquare
    assert tr.ok


@pytest.mark.parametrize("kwargs,expected", FROZEN_TRACES)
def test_frozen_traces_match_scalar_oracle(kwargs, expected):
    M, T, sq, ns, flipped = brute_trace(ExperimentConfig(**kwargs))
    assert M == expected["M_sharp"]
    assert T == expected["T_majorant"]
    assert sq == expected["U_square"]
    assert ns == expected["U_nonsquare"] == flipped


def test_trace_zero_weights():
    tr = proof_trace(ExperimentConfig(Q=200, u=10, h=8, s=2, z=5, preset="file"))
    assert tr.M_sharp == tr.T_majorant == tr.U_square == tr.U_nonsquare == tr.U_nonsquare_flipped == 0
    # R_{2s} * upper count does not depend on the weights
    assert tr.R_bound_term == tr.R * tr.upper_count > 0


@pytest.mark.parametrize("u,sharp", [(20, "plus"), (22, "minus")])
def test_trace_single_element(u, sharp):
    cfg = ExperimentConfig(Q=150, u=u, h=1, s=1, z=5, sharp=sharp)
    tr = proof_trace(cfg)
    n = u + 1
    lp = selberg_lambdas(5).lambda_plus
    expected = sum(
        (c for q in range(151, 301, 2) if math.gcd(n, q) == 1 for e, c in lp.items() if q % e == 0), F(0)
    )
    assert tr.U_nonsquare == 0
    assert tr.U_square == tr.T_majorant == expected >= 0


def test_trace_other_class_is_empty():
    tr = proof_trace(ExperimentConfig(Q=150, u=20, h=1, s=1, z=5, sharp="minus"))
    assert tr.T_majorant == tr.M_sharp == 0


def test_trace_errors():
    with pytest.raises(UnsupportedModeError):
        proof_trace(ExperimentConfig(Q=100, u=20, h=4, z=3, preset="unimodular"))
    with pytest.raises(CapacityError):
        proof_trace(ExperimentConfig(Q=100, u=20, h=17, z=3))
    with pytest.raises(CapacityError):
        proof_trace(ExperimentConfig(Q=20_000, u=20, h=4, z=3))
    with pytest.raises(CapacityError):
        proof_trace(ExperimentConfig(Q=100, u=20, h=4, s=3, z=3))
    with pytest.raises(DomainError):
        proof_trace(ExperimentConfig(Q=100, u=20, h=4, z=100))


def test_config_validation_and_level():
    with pytest.raises(DomainError):
        ExperimentConfig(Q=100, u=20, h=4, epsilon=F(1, 3))
    with pytest.raises(DomainError):
        ExperimentConfig(Q=100, u=20, h=4, sharp="both")
    assert ExperimentConfig(Q=10**4, u=20, h=4).level == 10
    assert ExperimentConfig(Q=10**4 + 1, u=20, h=4).level == 11
    cfg = ExperimentConfig(Q=100, u=20, h=4, epsilon=F(1, 5), seed=3)
    assert ExperimentConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg
    assert not ExperimentConfig(Q=100, u=4, h=4).framing_ok


@pytest.mark.parametrize("Q,eps,expected", [(16, F(1, 4), 2), (17, F(1, 4), 3), (1000, F(1, 3) - F(1, 100), 10), (10**6, F(1, 4), 32)])
def test_ceil_power(Q, eps, expected):
    assert ceil_power(Q, eps) == expected
    assert expected ** eps.denominator >= Q**eps.numerator
    assert (expected - 1) ** eps.denominator < Q**eps.numerator


def test_random_configs_traceable_and_seeded():
    a = random_configs(20, seed=5)
    assert a == random_configs(20, seed=5)
    for c in a:
        assert c.Q <= 10**4 and 2 <= c.h <= 16 and c.framing_ok and c.z in (3, 5, 7)
    traces = trace_many(a[:8], threads=2)
    assert all(t.ok for t in traces)
    assert [t.config for t in traces] == a[:8]


def test_trace_json_round_trip():
    tr = proof_trace(ExperimentConfig(**FROZEN_TRACES[1][0]))
    again = ProofTrace.from_dict(json.loads(json.dumps(tr.to_dict())))
    assert again == tr


def test_period_sums_vanish_for_non_squares():
    sums = period_sums(range(3, 400, 2))
    for m, v in sums.items():
        assert (v == 0) != is_square(m)


def test_period_sums_match_factored_euler():
    for m in (3, 7, 15, 21, 25, 105, 243):
        assert period_sums([m])[m] == sum(jacobi_by_factoring(v, m) for v in range(1, m + 1))


def test_burgess_scan_rows():
    rows = {r.m: r for r in burgess_scan(3, 101, [4, 16, 64])}
    assert rows[9].square and rows[9].stat is None and rows[25].square
    assert all(r.self_check_ok for r in rows.values())
    full = burgess_scan(15, 15, [15])[0]
    assert full.period_sum == 0
    r = rows[101]
    S = abs(sum(jacobi(v, 101) for v in range(r.start, r.start + r.length + 1)))
    assert r.stat == pytest.approx(S / math.sqrt(r.length))
    assert burgess_scan(3, 101, [4, 16, 64], seed=1) == burgess_scan(3, 101, [4, 16, 64], seed=1)


def test_grh_scan_examples():
    (row,) = grh_scan([15], [3])
    assert row.stat == pytest.approx(2 / math.sqrt(3))
    for m in (3, 15, 35, 1001):
        assert grh_scan([m], [1])[0].stat == 1.0
    (sq,) = grh_scan([49], [5])
    assert sq.square and sq.stat is None
    (big,) = grh_scan([15], [15, 17, 100])
    assert big.stat == pytest.approx(max(abs(sum(jacobi(t, 15) for t in range(1, T + 1))) / math.sqrt(T) for T in (15, 17, 100)))
    with pytest.raises(DomainError):
        grh_scan([10], [3])


def test_scan_csv_shape():
    lines = scan_csv(grh_scan([9, 15], [3])).splitlines()
    assert lines[0] == "m,square,period_sum,stat,exponent,start,length"
    assert lines[1] == "9,1,,,,,"
    assert lines[2].startswith("15,0,0,")


def test_report_row_example():
    row = report_row(ExperimentConfig(Q=10, u=2, h=2))
    assert row.M == "8" and row.pi == 4
    assert row.ratios[0] == pytest.approx(8 / (2 * 4 * math.log(2)))
    assert row.bound_terms[1] == pytest.approx(4 * 10 ** (7 / 8))
    assert not row.framing_ok


def test_report_zero_weights_and_baseline():
    zero = report_row(ExperimentConfig(Q=50, u=10, h=4, preset="file"))
    assert zero.M == "0" and zero.ratios == [0.0, 0.0]
    base = report_row(ExperimentConfig(Q=50, u=0, h=4))
    assert base.baseline == (50 + 4) * 4
    s2 = report_row(ExperimentConfig(Q=50, u=10, h=4, s=2))
    assert s2.baseline is None and s2.bound_terms[0] == 16 * s2.pi


def test_report_json_round_trip_and_plot_data():
    cfgs = [ExperimentConfig(Q=100, u=50, h=h) for h in (4, 8)]
    rep = theorem_report(cfgs, threads=1, meta={"note": "x"})
    again = MomentReport.from_json(rep.to_json())
    assert again == rep
    assert again.to_json() == rep.to_json()
    plot = rep.plot_csv()
    assert plot.startswith("# Q=100 s=1")
    assert plot.splitlines()[1].startswith("4,")
