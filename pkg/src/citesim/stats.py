"""Overcitation metrics and the statistical tests used on simulation output.

The special functions needed for p-values (log-gamma, regularized
incomplete beta) are implemented here so the core package stays free of
heavyweight dependencies. Precision targets: the incomplete beta is good
to ~1e-12 relative over the arguments used by the t-test; p-values are
floored at 1e-300.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import StatsError
from .graph import Gender

P_FLOOR = 1e-300

# -- special functions -------------------------------------------------------

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def log_gamma(x: float) -> float:
    """Natural log of the gamma function (Lanczos approximation, g=7)."""
    if x <= 0 and x == math.floor(x):
        raise StatsError("log_gamma pole at non-positive integer")
    if x < 0.5:
        # reflection keeps the series argument in the well-conditioned range
        return math.log(math.pi / abs(math.sin(math.pi * x))) - log_gamma(1.0 - x)
    x -= 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return 0.5 * math.log(2.0 * math.pi) + (x + 0.5) * math.log(t) - t + math.log(acc)


def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 500):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            return h
    raise StatsError("incomplete beta continued fraction did not converge")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0 or b <= 0:
        raise StatsError("incomplete beta requires a, b > 0")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_bt = (log_gamma(a + b) - log_gamma(a) - log_gamma(b)
             + a * math.log(x) + b * math.log1p(-x))
    bt = math.exp(ln_bt)
    if x < (a + 1.0) / (a + b + 2.0):
        return bt * _beta_cf(a, b, x) / a
    return 1.0 - bt * _beta_cf(b, a, 1.0 - x) / b


def student_t_two_sided_p(t: float, df: float) -> float:
    """Two-sided tail probability of Student's t."""
    if df <= 0:
        raise StatsError("degrees of freedom must be positive")
    if math.isinf(t):
        return P_FLOOR
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    return max(regularized_incomplete_beta(0.5 * df, 0.5, x), P_FLOOR)


# -- test results ------------------------------------------------------------


@dataclass(frozen=True)
class TestResult:
    statistic: float
    df: float
    p_value: float
    estimate: float


def one_sample_t_test(values, null_mean: float = 0.0) -> TestResult:
    """Two-sided one-sample t-test of mean(values) against null_mean."""
    arr = np.asarray(list(values), dtype=float)
    n = len(arr)
    if n < 2:
        raise StatsError("t-test needs at least 2 observations")
    mean = float(arr.mean())
    sd = float(arr.std(ddof=1))
    if sd == 0.0:
        raise StatsError("t-test needs nonzero variance")
    t = (mean - null_mean) / (sd / math.sqrt(n))
    return TestResult(statistic=t, df=n - 1,
                      p_value=student_t_two_sided_p(t, n - 1), estimate=mean)


def ols_trend(pairs) -> TestResult:
    """Slope of overcitation ~ time with its t statistic and two-sided p.

    `pairs` is a sequence of (time, value). df = n - 2.
    """
    pts = list(pairs)
    if len(pts) < 3:
        raise StatsError("trend test needs at least 3 points")
    t = np.asarray([p[0] for p in pts], dtype=float)
    y = np.asarray([p[1] for p in pts], dtype=float)
    n = len(pts)
    tm = t.mean()
    ym = y.mean()
    sxx = float(((t - tm) ** 2).sum())
    if sxx == 0.0:
        raise StatsError("time variable has zero variance")
    sxy = float(((t - tm) * (y - ym)).sum())
    slope = sxy / sxx
    resid = y - ym - slope * (t - tm)
    rss = float((resid ** 2).sum())
    df = n - 2
    se = math.sqrt(max(rss, 0.0) / df / sxx)
    if se == 0.0:
        if slope == 0.0:
            return TestResult(statistic=0.0, df=df, p_value=1.0, estimate=0.0)
        return TestResult(statistic=math.copysign(math.inf, slope), df=df,
                          p_value=P_FLOOR, estimate=slope)
    stat = slope / se
    return TestResult(statistic=stat, df=df,
                      p_value=student_t_two_sided_p(stat, df), estimate=slope)


# -- overcitation metrics ----------------------------------------------------


def overcitation(obs: float, exp: float) -> float:
    """Relative deviation (obs - exp) / exp of an observed citation share."""
    if exp <= 0.0:
        raise StatsError("overcitation undefined for expected proportion 0")
    return (obs - exp) / exp


@dataclass(frozen=True)
class OvercitationRecord:
    agent_id: int
    agent_gender: Gender
    year: int
    cited_gender: Gender
    obs: float
    exp: float
    overcitation: float


def yearly_overcitation(records) -> list[OvercitationRecord]:
    """Per agent x year x cited-gender overcitation from yearly reference lists.

    The expected woman share is the agent population's woman fraction for
    that year; men use the complement.
    """
    out = []
    for rec in records:
        exp_w = rec.woman_agent_fraction
        exp_m = 1.0 - exp_w
        isw = rec.author_is_woman
        for agent_id in sorted(rec.reference_lists):
            lst = rec.reference_lists[agent_id]
            if not lst:
                raise StatsError("empty reference list for agent %d" % agent_id)
            obs_w = float(isw[np.asarray(lst)].sum()) / len(lst)
            obs_m = 1.0 - obs_w
            gender = rec.agent_genders[agent_id]
            out.append(OvercitationRecord(agent_id, gender, rec.year, Gender.WOMAN,
                                          obs_w, exp_w, overcitation(obs_w, exp_w)))
            out.append(OvercitationRecord(agent_id, gender, rec.year, Gender.MAN,
                                          obs_m, exp_m, overcitation(obs_m, exp_m)))
    return out


def per_agent_mean_overcitation(oc_records, cited_gender: Gender,
                                citer_gender: Gender | None = None) -> dict[int, float]:
    """Average each agent's overcitation of `cited_gender` across years."""
    sums: dict[int, float] = {}
    counts: dict[int, int] = {}
    for r in oc_records:
        if r.cited_gender is not cited_gender:
            continue
        if citer_gender is not None and r.agent_gender is not citer_gender:
            continue
        sums[r.agent_id] = sums.get(r.agent_id, 0.0) + r.overcitation
        counts[r.agent_id] = counts.get(r.agent_id, 0) + 1
    return {a: sums[a] / counts[a] for a in sorted(sums)}


def per_year_mean_overcitation(oc_records, cited_gender: Gender,
                               citer_gender: Gender | None = None) -> list[tuple[int, float]]:
    """Mean overcitation of `cited_gender` per year, optionally within a citer gender."""
    sums: dict[int, float] = {}
    counts: dict[int, int] = {}
    for r in oc_records:
        if r.cited_gender is not cited_gender:
            continue
        if citer_gender is not None and r.agent_gender is not citer_gender:
            continue
        sums[r.year] = sums.get(r.year, 0.0) + r.overcitation
        counts[r.year] = counts.get(r.year, 0) + 1
    return [(y, sums[y] / counts[y]) for y in sorted(sums)]


# -- citation diversity statement metric --------------------------------------

CDS_CATEGORIES = ("ww", "mw", "wm", "mm")


@dataclass(frozen=True)
class CdsBenchmark:
    """Expected citation rates for the four first/last author gender teams."""

    ww: float = 0.067
    mw: float = 0.094
    wm: float = 0.253
    mm: float = 0.586

    def __post_init__(self):
        total = self.ww + self.mw + self.wm + self.mm
        if abs(total - 1.0) > 1e-9:
            raise StatsError("benchmark rates must sum to 1, got %.12g" % total)

    def rate(self, category: str) -> float:
        return getattr(self, category)


def cds_overcitation(reported, benchmark: CdsBenchmark | None = None) -> dict[str, float]:
    """Per-category relative deviation of reported rates from benchmark rates.

    `reported` maps each of ww/mw/wm/mm to a nonnegative fraction.
    """
    bench = benchmark if benchmark is not None else CdsBenchmark()
    out = {}
    for cat in CDS_CATEGORIES:
        rep = float(reported[cat])
        if rep < 0:
            raise StatsError("reported rate for %s is negative" % cat)
        exp = bench.rate(cat)
        if exp == 0.0:
            raise StatsError("benchmark rate for %s is zero" % cat)
        out[cat] = (rep - exp) / exp
    return out
