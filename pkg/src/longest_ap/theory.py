"""Closed-form Poisson/Gumbel approximations for U and W and their error terms.

Intensities are evaluated through their logarithms so that regimes with
``p**r`` far below double-precision range still give finite answers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, NamedTuple, Optional

Statistic = Literal["U", "W"]

# exp(-x) underflows to 0.0 past this
_EXP_UNDERFLOW = 745.0
_LOG_MAX = 709.0


def _check_p(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie strictly between 0 and 1, got {p}")


def _check_r(r: int) -> None:
    if r < 2:
        raise ValueError(f"threshold r must be >= 2, got {r}")


def _check_stat(statistic: str) -> Statistic:
    s = statistic.upper()
    if s not in ("U", "W"):
        raise ValueError(f"unknown statistic {statistic!r}")
    return s  # type: ignore[return-value]


def constants(p: float) -> tuple[float, float]:
    """``(C, D) = (-2/ln p, 1/ln p)``."""
    _check_p(p)
    lp = math.log(p)
    return -2.0 / lp, 1.0 / lp


@dataclass(frozen=True)
class ApproxParams:
    """Bundle of the quantities the approximations are phrased in.

    ``h_n`` is only defined for ``n >= 3`` and is NaN below that. ``x`` is the
    offset of ``r`` from the centring ``h_n``.
    """

    n: int
    p: float
    r: int
    q: float = field(init=False)
    C: float = field(init=False)
    D: float = field(init=False)
    h_n: float = field(init=False)
    x: float = field(init=False)

    def __post_init__(self):
        _check_p(self.p)
        _check_r(self.r)
        if self.n < 1:
            raise ValueError("n must be >= 1")
        C, D = constants(self.p)
        h = C * math.log(self.n) + D * math.log(math.log(self.n)) if self.n >= 3 else math.nan
        object.__setattr__(self, "q", 1.0 - self.p)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "h_n", h)
        object.__setattr__(self, "x", self.r - h)


def log_poisson_mean_u(n: int, r: int, p: float) -> float:
    _check_p(p)
    _check_r(r)
    q = 1.0 - p
    return 2.0 * math.log(n) + r * math.log(p) + math.log(p + q * r) - math.log(2.0 * r * (r - 1))


def log_poisson_mean_w(n: int, r: int, p: float) -> float:
    _check_p(p)
    _check_r(r)
    return math.log1p(-p) + 2.0 * math.log(n) + r * math.log(p) - math.log(2.0)


def _from_log(lv: float) -> float:
    if lv > _LOG_MAX:
        return math.inf
    if lv < -_EXP_UNDERFLOW:
        return 0.0
    return math.exp(lv)


def poisson_mean_u(n: int, r: int, p: float) -> float:
    """lambda_{n,r} = n^2 p^r (p + q r) / (2 r (r - 1))."""
    return _from_log(log_poisson_mean_u(n, r, p))


def poisson_mean_w(n: int, r: int, p: float) -> float:
    """mu_{n,r} = q n^2 p^r / 2."""
    return _from_log(log_poisson_mean_w(n, r, p))


def poisson_mean(statistic: Statistic, n: int, r: int, p: float) -> float:
    if _check_stat(statistic) == "U":
        return poisson_mean_u(n, r, p)
    return poisson_mean_w(n, r, p)


def _exp_neg_from_log(lv: float) -> float:
    # exp(-exp(lv)), clamped
    if lv > math.log(_EXP_UNDERFLOW):
        return 0.0
    return min(1.0, max(0.0, math.exp(-math.exp(lv))))


def cdf_approx(statistic: Statistic, n: int, r: int, p: float) -> float:
    """Poisson approximation of ``P(statistic < r)``."""
    if _check_stat(statistic) == "U":
        return _exp_neg_from_log(log_poisson_mean_u(n, r, p))
    return _exp_neg_from_log(log_poisson_mean_w(n, r, p))


def gumbel_tail(statistic: Statistic, n: int, x: float, p: float) -> float:
    """Limiting ``P(statistic < centre + x)``; the caller keeps ``x`` on the grid.

    U is centred at ``h_n = C ln n + D ln ln n`` and W at ``C ln n``; neither
    centring enters the formula, only the offset ``x``.
    """
    _check_p(p)
    if n < 3:
        raise ValueError("the Gumbel centring needs n >= 3")
    q = 1.0 - p
    if _check_stat(statistic) == "U":
        coef = -q * math.log(p) / 4.0
    else:
        coef = q / 2.0
    lv = math.log(coef) + x * math.log(p)
    return _exp_neg_from_log(lv)


def centring(statistic: Statistic, n: int, p: float) -> float:
    C, D = constants(p)
    if _check_stat(statistic) == "U":
        return C * math.log(n) + D * math.log(math.log(n))
    return C * math.log(n)


def chen_stein_budget(statistic: Statistic, n: int, r: int, p: float) -> float:
    """Upper bound on the dependency-graph error sum for threshold ``r``."""
    _check_p(p)
    _check_r(r)
    lp = math.log(p)
    ln_n = math.log(n)
    if _check_stat(statistic) == "U":
        terms = (
            3 * ln_n + (2 * r - 1) * lp,
            2 * ln_n + 3 * math.log(r) + (5 * r / 3 - 1) * lp,
            2 * ln_n + (1.5 * r - 1) * lp,
        )
        scale = 9.0
    else:
        terms = (
            3 * ln_n + 2 * math.log(r) + (2 * r - 1) * lp,
            2 * ln_n + 5 * math.log(r) + (1.5 * r - 1) * lp,
            ln_n + 6 * math.log(r) + r * lp,
        )
        scale = 4.0
    return scale * math.fsum(_from_log(t) for t in terms)


class IntensityBounds(NamedTuple):
    lower: float
    upper: float
    a2_bound: Optional[float] = None


def intensity_bounds(statistic: Statistic, n: int, r: int, p: float) -> IntensityBounds:
    """Sandwich for the exact event intensity (I for U, I~ for W).

    For W the third field bounds the probability that some full cycle is
    all ones, ``n p^r / (q r)``.
    """
    _check_p(p)
    _check_r(r)
    q = 1.0 - p
    if _check_stat(statistic) == "U":
        if r > n:
            raise ValueError("U bounds need r <= n")
        pr = p**r
        lower = pr * (n - r) ** 2 / (2 * (r - 1)) - pr * p * n * n / (2 * r)
        upper = pr * n * n / (2 * (r - 1)) - pr * p * (n - r) ** 2 / (2 * r)
        return IntensityBounds(max(lower, 0.0), upper)
    upper = q * n * n * p**r / 2.0
    lower = (1.0 - (r + 1) ** 2 / (2.0 * n)) * upper
    return IntensityBounds(max(lower, 0.0), upper, n * p**r / (q * r))


def progression_pair_count(n: int, r: int) -> int:
    """Number of ``(a, s)`` with ``a + (r-1)s <= n``, in exact integer arithmetic."""
    if not 2 <= r <= n:
        raise ValueError(f"need 2 <= r <= n, got n={n}, r={r}")
    k = (n - 1) // (r - 1)
    num = k * (2 * n - r + 1 - (r - 1) * k)
    assert num % 2 == 0
    return num // 2


@dataclass(frozen=True)
class RegimePrediction:
    case_tag: Literal["b_infinite", "b_noninteger_or_two", "b_integer_ge3"]
    b: float
    u: Optional[float]
    candidate_set_u: frozenset
    candidate_set_w: frozenset
    limit_prob_u_low: Optional[float] = None
    limit_prob_w_low: Optional[float] = None

    def as_dict(self) -> dict:
        return {
            "case": self.case_tag,
            "b": self.b,
            "u": self.u,
            "candidate_set_u": sorted(self.candidate_set_u),
            "candidate_set_w": sorted(self.candidate_set_w),
            "limit_prob_u_low": self.limit_prob_u_low,
            "limit_prob_w_low": self.limit_prob_w_low,
        }


def sparse_regime_predict(n: int, p_n: float, b: float, u: Optional[float] = None) -> RegimePrediction:
    """Candidate values of U and W when ``p_n -> 0`` and ``n p_n -> inf``.

    ``b`` is the caller's limit of ``2 ln n / (-ln p_n)``; pass ``math.inf``
    for the unbounded case, in which the candidates are computed from the
    given ``(n, p_n)``. ``u`` is the limit of ``n^2 p_n^b`` and is only
    meaningful for integer ``b >= 3``.
    """
    _check_p(p_n)
    if n * p_n <= 1:
        raise ValueError("need n * p_n > 1")
    if math.isnan(b) or b < 2:
        raise ValueError(f"b must be >= 2 (or inf), got {b}")
    if u is not None and u < 0:
        raise ValueError("u must be nonnegative")
    if math.isinf(b):
        if u is not None:
            raise ValueError("u is not defined for b = inf")
        lp = math.log(p_n)
        ratio = 2.0 * math.log(n) / -lp
        k = math.floor(ratio + math.log(math.log(n)) / lp)
        m = math.floor(ratio)
        return RegimePrediction(
            "b_infinite", math.inf, None, frozenset({k, k + 1}), frozenset({m - 1, m, m + 1})
        )
    if b == 2 or b != math.floor(b):
        if u is not None:
            raise ValueError("u is only used for integer b >= 3")
        v = frozenset({math.floor(b)})
        return RegimePrediction("b_noninteger_or_two", float(b), None, v, v)
    bi = int(b)
    cands = frozenset({bi - 1, bi})
    if u is None:
        return RegimePrediction("b_integer_ge3", float(b), None, cands, cands)
    lu = math.exp(-u / (2.0 * (bi - 1))) if math.isfinite(u) else 0.0
    lw = math.exp(-u / 2.0) if math.isfinite(u) else 0.0
    return RegimePrediction("b_integer_ge3", float(b), u, cands, cands, lu, lw)
