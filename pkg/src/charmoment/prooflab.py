"""Numerical walk through the sieve argument bounding the second and higher
moments, plus empirical scans of the Burgess- and GRH-type character sum
bounds and ratio reports against the headline moment bounds.

The tracing path (:func:`proof_trace`) resolves every tuple exactly and is
meant for small instances. The reporting path (:func:`theorem_report`) never
enumerates tuples and scales to ``Q ~ 10**6``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .arith import MAX_INT, dyadic_primes, is_square, jacobi, jacobi_array
from .charsum import WeightSequence, moment
from .errors import CapacityError, DomainError, UnsupportedModeError
from .parallel import ordered_map
from .selberg import SieveSystem, selberg_lambdas, sieve_upper_count
from .squareprod import r_count_kernel

SHARP_FILTERS = {"plus": "plus1mod4", "minus": "minus1mod4"}
TRACE_MAX_Q = 10**4
TRACE_MAX_H = 16


def _iroot(n: int, k: int) -> int:
    """Largest ``r`` with ``r**k <= n``."""
    if n < 2:
        return n
    r = int(round(n ** (1.0 / k)))
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def ceil_power(Q: int, epsilon: Fraction) -> int:
    """``ceil(Q**epsilon)`` exactly, for rational ``epsilon``."""
    a, b = epsilon.numerator, epsilon.denominator
    target = Q**a
    r = _iroot(target, b)
    return r if r**b == target else r + 1


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class ExperimentConfig:
    """One point of the experiment grid.

    ``z`` overrides the sieve level; otherwise it is ``ceil(Q**epsilon)``.
    ``sharp`` picks the residue class ``n = 1`` (plus) or ``n = 3`` (minus)
    mod 4 used by the traced sums.
    """

    Q: int
    u: int
    h: int
    s: int = 1
    epsilon: Fraction = Fraction(1, 4)
    z: int | None = None
    preset: str = "unit"
    seed: int = 0
    sharp: str = "plus"

    def __post_init__(self):
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if not 0 < self.epsilon < Fraction(1, 3):
            raise DomainError(f"epsilon must lie in (0, 1/3), got {self.epsilon}")
        if self.s < 1:
            raise DomainError(f"s must be >= 1, got {self.s}")
        if self.sharp not in SHARP_FILTERS:
            raise DomainError(f"sharp must be 'plus' or 'minus', got {self.sharp!r}")

    @property
    def level(self) -> int:
        return self.z if self.z is not None else ceil_power(self.Q, self.epsilon)

    @property
    def framing_ok(self) -> bool:
        return 2 <= self.h < self.u <= self.Q

    @property
    def class_filter(self) -> str:
        return SHARP_FILTERS[self.sharp]

    def weights(self) -> WeightSequence:
        return WeightSequence.from_preset(self.preset, self.u, self.h, self.seed)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["epsilon"] = _frac(self.epsilon)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        d = dict(d)
        d["epsilon"] = Fraction(d["epsilon"])
        return cls(**d)


@dataclass(frozen=True)
class ProofTrace:
    """Every intermediate quantity of the sieve majorisation on one config.

    ``T_majorant`` runs over odd ``q`` in ``[Q, 2Q]`` weighted by
    ``(sum_{d | q} Lambda_d)**2``; ``U_square`` and ``U_nonsquare`` split it
    by whether the tuple product is a square. ``U_nonsquare_flipped`` is the
    same quantity after swapping numerator and modulus in every symbol and
    summing over ``e`` first.
    """

    config: ExperimentConfig
    z: int
    M_sharp: int
    T_majorant: Fraction
    U_square: Fraction
    U_nonsquare: Fraction
    U_nonsquare_flipped: Fraction
    R: int
    upper_count: Fraction
    R_bound_term: Fraction

    def checks(self) -> dict[str, bool]:
        return {
            "majorant": self.M_sharp <= self.T_majorant,
            "split": self.T_majorant == self.U_square + self.U_nonsquare,
            "square_bound": self.U_square <= self.R_bound_term,
            "flip_agrees": self.U_nonsquare == self.U_nonsquare_flipped,
        }

    @property
    def ok(self) -> bool:
        return all(self.checks().values())

    def to_dict(self) -> dict:
        out = {"config": self.config.to_dict(), "z": self.z, "M_sharp": str(self.M_sharp), "R": self.R}
        for name in ("T_majorant", "U_square", "U_nonsquare", "U_nonsquare_flipped", "upper_count", "R_bound_term"):
            out[name] = _frac(getattr(self, name))
        out["checks"] = self.checks()
        return out

    @classmethod
    def from_dict(cls, d: dict) -> ProofTrace:
        return cls(
            config=ExperimentConfig.from_dict(d["config"]),
            z=d["z"],
            M_sharp=int(d["M_sharp"]),
            T_majorant=Fraction(d["T_majorant"]),
            U_square=Fraction(d["U_square"]),
            U_nonsquare=Fraction(d["U_nonsquare"]),
            U_nonsquare_flipped=Fraction(d["U_nonsquare_flipped"]),
            R=d["R"],
            upper_count=Fraction(d["upper_count"]),
            R_bound_term=Fraction(d["R_bound_term"]),
        )


def _flipped_nonsquare(system: SieveSystem, qs: np.ndarray, products: dict[int, int]) -> int:
    """Numerator over ``D**2`` of ``sum_N c_N sum_e lambda_plus[e] sum_{e | q} (q/N)``."""
    total = 0
    lp = system.lambda_plus_numerators
    for N, coeff in products.items():
        if not coeff:
            continue
        if N % 4 != 1:
            raise AssertionError(f"tuple product {N} is not 1 mod 4; reciprocity flip is invalid")
        if N < MAX_INT:
            sym = jacobi_array(qs, N).astype(np.int64)
        else:
            sym = np.array([jacobi(int(q), N) for q in qs], dtype=np.int64)
        inner = 0
        for e, lam in lp.items():
            inner += lam * int(sym[qs % e == 0].sum())
        total += coeff * inner
    return total


def proof_trace(cfg: ExperimentConfig, system: SieveSystem | None = None) -> ProofTrace:
    """Trace the sieve majorisation exactly on one small configuration.

    Raises:
        UnsupportedModeError: complex weights.
        CapacityError: ``s > 2``, ``Q > 10**4`` or ``h > 16``.
        DomainError: sieve level outside ``2 <= z < Q``.
    """
    w = cfg.weights()
    if w.mode != "exact-int":
        raise UnsupportedModeError("proof_trace needs exact-int weights")
    if cfg.s not in (1, 2) or cfg.Q > TRACE_MAX_Q or cfg.h > TRACE_MAX_H:
        raise CapacityError(
            f"proof_trace budget is s in {{1, 2}}, Q <= {TRACE_MAX_Q}, h <= {TRACE_MAX_H}; "
            f"got s={cfg.s}, Q={cfg.Q}, h={cfg.h}"
        )
    z = cfg.level
    if not 2 <= z < cfg.Q:
        raise DomainError(f"sieve level must satisfy 2 <= z < Q, got z={z}, Q={cfg.Q}")
    if system is None or system.z != z:
        system = selberg_lambdas(z)
    D2 = system.denominator**2
    t = 2 * cfg.s

    nums = w.numbers
    in_class = np.flatnonzero((nums & 3) == (1 if cfg.sharp == "plus" else 3))
    ns = [int(nums[j]) for j in in_class]
    alpha = [int(w.values[j]) for j in in_class]

    Q = cfg.Q
    qs = np.arange(Q | 1, 2 * Q + 1, 2, dtype=np.int64)
    wq = system.weight_numerators(qs)
    distinct = sorted(set(wq))
    group = np.array([distinct.index(x) for x in wq], dtype=np.int64)

    if ns:
        chi = jacobi_array(np.array(ns, dtype=np.int64)[:, None], qs[None, :]).astype(np.int64)
        S = np.array(alpha, dtype=np.int64) @ chi
        T_num = sum(int(wq[j]) * int(S[j]) ** t for j in range(len(qs)))
    else:
        chi = np.zeros((0, len(qs)), dtype=np.int64)
        T_num = 0

    U_sq = U_ns = 0
    products: dict[int, int] = {}
    for tup in itertools.product(range(len(ns)), repeat=t):
        coeff = math.prod(alpha[i] for i in tup)
        N = math.prod(ns[i] for i in tup)
        if N % 4 != 1:
            raise AssertionError(f"class {cfg.sharp}: tuple product {N} is not 1 mod 4")
        if not coeff:
            continue
        row = np.prod(chi[list(tup)], axis=0)
        by_group = np.zeros(len(distinct), dtype=np.int64)
        np.add.at(by_group, group, row)
        contrib = coeff * sum(int(c) * v for c, v in zip(by_group, distinct))
        if is_square(N):
            U_sq += contrib
        else:
            U_ns += contrib
            products[N] = products.get(N, 0) + coeff

    flipped = _flipped_nonsquare(system, qs, products)
    primes = dyadic_primes(Q)
    M = int(moment(primes, w, cfg.s, cfg.class_filter, threads=1).value)
    R = r_count_kernel(cfg.u, cfg.h, t)
    upper = sieve_upper_count(system, Q)
    return ProofTrace(
        config=cfg,
        z=z,
        M_sharp=M,
        T_majorant=Fraction(T_num, D2),
        U_square=Fraction(U_sq, D2),
        U_nonsquare=Fraction(U_ns, D2),
        U_nonsquare_flipped=Fraction(flipped, D2),
        R=R,
        upper_count=upper,
        R_bound_term=R * upper,
    )


def random_configs(n: int, seed: int = 0, levels=(3, 5, 7)) -> list[ExperimentConfig]:
    """Seeded traceable configs: ``Q <= 10**4``, ``2 <= h <= 16``, ``h < u <= Q``."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        Q = int(np.exp(rng.uniform(np.log(50), np.log(TRACE_MAX_Q))))
        h = int(rng.integers(2, TRACE_MAX_H + 1))
        u = int(rng.integers(h + 1, Q + 1))
        out.append(
            ExperimentConfig(
                Q=Q,
                u=u,
                h=h,
                s=int(rng.integers(1, 3)),
                z=int(rng.choice(levels)),
                preset=str(rng.choice(["unit", "rademacher"])),
                seed=int(rng.integers(0, 2**31)),
                sharp=str(rng.choice(["plus", "minus"])),
            )
        )
    return out


def trace_many(configs: list[ExperimentConfig], threads: int | None = None) -> list[ProofTrace]:
    systems = {z: selberg_lambdas(z) for z in sorted({c.level for c in configs if c.level >= 2})}
    return ordered_map(lambda c: proof_trace(c, systems.get(c.level)), configs, threads)


# Character tables, batched across moduli so the vectorised Jacobi routine
# sees long arrays.
_TABLE_LANES = 1 << 21


def _character_tables(ms: list[int]):
    batch: list[int] = []
    size = 0

    def flush(batch):
        a = np.concatenate([np.arange(m, dtype=np.int64) for m in batch])
        mod = np.concatenate([np.full(m, m, dtype=np.int64) for m in batch])
        chi = jacobi_array(a, mod)
        pos = 0
        for m in batch:
            yield m, chi[pos : pos + m]
            pos += m

    for m in ms:
        batch.append(m)
        size += m
        if size >= _TABLE_LANES:
            yield from flush(batch)
            batch, size = [], 0
    if batch:
        yield from flush(batch)


def period_sums(ms) -> dict[int, int]:
    """``sum_{v=1}^{m} (v/m)`` for each odd ``m``."""
    return {m: int(chi.sum(dtype=np.int64)) for m, chi in _character_tables(list(ms))}


@dataclass(frozen=True)
class ScanRow:
    """One modulus of a character-sum scan.

    ``stat`` is the largest observed ``|sum| / sqrt(length)``; ``exponent`` is
    ``log(stat) / log(m)``. Square moduli are flagged and carry no statistic.
    """

    m: int
    square: bool
    period_sum: int | None
    stat: float | None
    exponent: float | None
    start: int | None = None
    length: int | None = None

    @property
    def self_check_ok(self) -> bool:
        return self.square or self.period_sum == 0


def _odd_moduli(m_lo: int, m_hi: int) -> list[int]:
    return list(range(max(3, m_lo) | 1, m_hi + 1, 2))


def burgess_scan(m_lo: int, m_hi: int, V_grid, seed: int = 0, random_windows: int = 64) -> list[ScanRow]:
    """Largest normalised window sum over ``[A, A+V]`` for each odd ``m``.

    Window starts ``A`` run over a stride ``isqrt(m)`` grid plus
    ``random_windows`` seeded offsets; lengths ``V`` come from ``V_grid``
    (values above ``m`` are skipped, and ``V = m`` is used if none remain).
    """
    ms = _odd_moduli(m_lo, m_hi)
    rows = []
    plain = [m for m in ms if not is_square(m)]
    tables = dict(_character_tables(plain))
    for m in ms:
        if m not in tables:
            rows.append(ScanRow(m, True, None, None, None))
            continue
        chi = tables[m].astype(np.int64)
        prefix = np.concatenate([[0], np.cumsum(np.tile(chi, 2))])
        rng = np.random.default_rng([seed, m])
        starts = np.unique(
            np.concatenate([np.arange(0, m, math.isqrt(m)), rng.integers(0, m, size=random_windows)])
        )
        Vs = [V for V in V_grid if 1 <= V <= m] or [m]
        best, arg = -1.0, (0, Vs[0])
        for V in Vs:
            sums = np.abs(prefix[starts + V + 1] - prefix[starts])
            j = int(np.argmax(sums))
            val = sums[j] / math.sqrt(V)
            if val > best:
                best, arg = float(val), (int(starts[j]), V)
        exponent = math.log(best) / math.log(m) if best > 0 else None
        rows.append(ScanRow(m, False, int(chi.sum()), best, exponent, arg[0], arg[1]))
    return rows


def grh_scan(ms, T_grid) -> list[ScanRow]:
    """Largest ``|sum_{t <= T} (t/m)| / sqrt(T)`` over ``T`` in ``T_grid``."""
    ms = list(ms)
    for m in ms:
        if m < 3 or m % 2 == 0:
            raise DomainError(f"scan moduli must be odd and >= 3, got {m}")
    tables = dict(_character_tables([m for m in ms if not is_square(m)]))
    rows = []
    for m in ms:
        if m not in tables:
            rows.append(ScanRow(m, True, None, None, None))
            continue
        chi = tables[m].astype(np.int64)
        Ts = [T for T in T_grid if T >= 1]
        best, argT = 0.0, Ts[0] if Ts else None
        for T in Ts:
            full, part = divmod(T, m)
            # chi[0] = 0, so t = 1..T splits into full periods and a tail.
            total = full * int(chi.sum()) + int(chi[1 : part + 1].sum())
            val = abs(total) / math.sqrt(T)
            if val > best:
                best, argT = val, T
        exponent = math.log(best) / math.log(m) if best > 0 else None
        rows.append(ScanRow(m, False, int(chi.sum()), best, exponent, 1, argT))
    return rows


def scan_csv(rows: list[ScanRow]) -> str:
    lines = ["m,square,period_sum,stat,exponent,start,length"]
    for r in rows:
        cells = [r.m, int(r.square), r.period_sum, r.stat, r.exponent, r.start, r.length]
        lines.append(",".join("" if c is None else repr(c) for c in cells))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ReportRow:
    Q: int
    u: int
    h: int
    s: int
    M: str
    pi: int
    bound_terms: list[float]
    ratios: list[float | None]
    baseline: float | None
    baseline_ratio: float | None
    framing_ok: bool


@dataclass
class MomentReport:
    """Moments against the two terms of the moment bound, one row per config.

    ``bound_terms`` are ``h^s * pi * (ln h)^[s=1]`` and
    ``h^(2s) * Q^(7/8 if s == 1 else 1/2)``. ``baseline`` is
    ``(Q + h^s) h^s`` for ``u = 0`` rows and ``Q h`` for other ``s = 1`` rows.
    """

    config: dict
    rows: list[ReportRow] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"config": self.config, "rows": [asdict(r) for r in self.rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> MomentReport:
        obj = json.loads(text)
        return cls(obj["config"], [ReportRow(**r) for r in obj["rows"]])

    def plot_csv(self) -> str:
        """Gnuplot-ready blocks ``h,ratio`` per ``(Q, u-rule, s)`` series, blank-line separated."""
        series: dict[tuple, list[ReportRow]] = {}
        for r in self.rows:
            series.setdefault((r.Q, r.s), []).append(r)
        blocks = []
        for (Q, s), rows in series.items():
            lines = [f"# Q={Q} s={s}: h, M / first bound term"]
            for r in rows:
                ratio = r.ratios[0]
                lines.append(f"{r.h},{'nan' if ratio is None else repr(ratio)}")
            blocks.append("\n".join(lines))
        return "\n\n\n".join(blocks) + "\n"


def _ratio(M: float, term: float) -> float | None:
    return M / term if term > 0 else None


def report_row(cfg: ExperimentConfig, threads: int | None = None) -> ReportRow:
    w = cfg.weights()
    primes = dyadic_primes(cfg.Q)
    res = moment(primes, w, cfg.s, "all", threads=threads)
    M = res.value
    pi = len(res.primes)
    h, s, Q = cfg.h, cfg.s, cfg.Q
    t1 = float(h**s * pi * (math.log(h) if s == 1 else 1.0))
    t2 = float(h ** (2 * s)) * Q ** (7 / 8 if s == 1 else 1 / 2)
    Mf = float(M)
    if cfg.u == 0:
        baseline = float((Q + h**s) * h**s)
    elif s == 1:
        baseline = float(Q * h)
    else:
        baseline = None
    return ReportRow(
        Q=Q,
        u=cfg.u,
        h=h,
        s=s,
        M=str(M) if w.mode == "exact-int" else repr(float(M)),
        pi=pi,
        bound_terms=[t1, t2],
        ratios=[_ratio(Mf, t1), _ratio(Mf, t2)],
        baseline=baseline,
        baseline_ratio=None if baseline is None else _ratio(Mf, baseline),
        framing_ok=cfg.framing_ok,
    )


def theorem_report(configs: list[ExperimentConfig], threads: int | None = None, meta: dict | None = None) -> MomentReport:
    """Exact moments and bound ratios for each config, in input order.

    Rows that violate ``2 <= h < u <= Q`` are kept and flagged.
    """
    rows = [report_row(c, threads) for c in configs]
    return MomentReport(dict(meta or {}), rows)
