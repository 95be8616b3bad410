"""Critical-scaling algebra for k-connectivity of the on/off key graph.

The critical link probability for k-connectivity (and for minimum degree at
least k) is ``(ln n + (k-1) ln ln n) / n``. Writing the actual link
probability as ``(ln n + (k-1) ln ln n + alpha) / n`` defines the deviation
``alpha``: large positive alpha means the property holds with high
probability, large negative alpha means it fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.stats import binom

from .errors import InfeasibleError, InvalidArgumentError
from .model import ModelParams, p_e_exact, p_s_approx, p_s_exact


@dataclass(frozen=True)
class ScalingPoint:
    k: int
    alpha: float

    def __post_init__(self):
        if int(self.k) < 1:
            raise InvalidArgumentError(f"k must be >= 1, got {self.k}")
        if not math.isfinite(self.alpha):
            raise InvalidArgumentError(f"alpha must be finite, got {self.alpha}")


@dataclass(frozen=True)
class RegimeCheck:
    name: str
    satisfied: bool
    value: float
    threshold: float


@dataclass(frozen=True)
class RegimeReport:
    """Finite-n readings of the hypotheses behind the zero-one laws."""

    checks: list[RegimeCheck] = field(default_factory=list)

    @property
    def all_satisfied(self) -> bool:
        return all(c.satisfied for c in self.checks)

    def failed(self) -> list[RegimeCheck]:
        return [c for c in self.checks if not c.satisfied]

    def __getitem__(self, name: str) -> RegimeCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def format(self) -> str:
        lines = []
        for c in self.checks:
            mark = "ok  " if c.satisfied else "WARN"
            lines.append(f"  [{mark}] {c.name}: value={c.value:.6g} (threshold {c.threshold:.6g})")
        return "\n".join(lines)


def _check_n(n: int) -> None:
    if n < 3:
        raise InvalidArgumentError(f"scaling needs n >= 3 so that ln ln n > 0, got n={n}")


def critical_p_e(n: int, k: int, alpha: float = 0.0) -> float:
    """Link probability ``(ln n + (k-1) ln ln n + alpha) / n``."""
    _check_n(n)
    return (math.log(n) + (k - 1) * math.log(math.log(n)) + alpha) / n


def beta_from_params(params: ModelParams, ell: int) -> float:
    """Deviation ``n p_e - ln n - ell ln ln n``."""
    _check_n(params.n)
    if ell < 0:
        raise InvalidArgumentError(f"ell must be >= 0, got {ell}")
    n = params.n
    return n * p_e_exact(params) - math.log(n) - ell * math.log(math.log(n))


def alpha_from_params(params: ModelParams, k: int) -> ScalingPoint:
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    return ScalingPoint(k, beta_from_params(params, k - 1))


def p_required(n: int, k: int, alpha: float, K: int, P: int, approx: bool = False) -> float:
    """Channel probability placing the model at deviation ``alpha``.

    With ``approx=True`` the key-sharing probability is taken as ``K^2/P``
    instead of its exact value.

    Raises
    ------
    InfeasibleError
        if the required probability exceeds 1.
    InvalidArgumentError
        if the target link probability is not positive.
    """
    target = critical_p_e(n, k, alpha)
    if target <= 0:
        raise InvalidArgumentError(
            f"alpha={alpha} gives non-positive link probability n*p_e={target * n:.6g}")
    p_s = p_s_approx(K, P) if approx else p_s_exact(K, P)
    p = target / p_s
    if p > 1.0:
        raise InfeasibleError(
            f"required p={p:.6g} > 1: link probability {target:.6g} exceeds "
            f"key-sharing probability {p_s:.6g}",
            required_p_e=target, available_p_s=p_s, required_p=p)
    return p


def K_required(n: int, k: int, alpha: float, p: float, P: int) -> int:
    """Smallest ring size whose link probability reaches deviation ``alpha`` at channel probability ``p``.

    Ring sizes are integers, so the realized deviation is at least ``alpha``.
    """
    target = critical_p_e(n, k, alpha)
    if target <= 0:
        raise InvalidArgumentError(
            f"alpha={alpha} gives non-positive link probability n*p_e={target * n:.6g}")
    if not 0.0 < p <= 1.0:
        raise InvalidArgumentError(f"p must lie in (0, 1], got {p}")
    if p * p_s_exact(P, P) < target:
        raise InfeasibleError(
            f"even K=P cannot reach link probability {target:.6g} at p={p}",
            required_p_e=target, available_p_s=1.0)
    lo, hi = 1, (P + 1) // 2
    # p_s is non-decreasing in K and equals 1 once 2K > P
    if p * p_s_exact(hi, P) < target:
        return min(hi + 1, P)
    while lo < hi:
        mid = (lo + hi) // 2
        if p * p_s_exact(mid, P) >= target:
            hi = mid
        else:
            lo = mid + 1
    return lo


def validate_regime(params: ModelParams, k: int, sigma: float = 1.0, small: float = 0.01,
                    eps: float = 0.5) -> RegimeReport:
    """Report how the finite-n parameters sit against the asymptotic assumptions.

    Never raises on a failed check; the report is informational.
    """
    n, K, P = params.n, params.K, params.P
    ln_n = math.log(n) if n > 1 else 0.0
    k2p = K * K / P
    checks = [
        RegimeCheck("K >= 2", K >= 2, K, 2),
        RegimeCheck("P >= sigma*n", P >= sigma * n, P, sigma * n),
        RegimeCheck("K/P <= small", K / P <= small, K / P, small),
        RegimeCheck("K^2/P <= small", k2p <= small, k2p, small),
        RegimeCheck("K^2*ln(n)/P <= 1", k2p * ln_n <= 1.0, k2p * ln_n, 1.0),
        RegimeCheck("p_e*n >= eps", p_e_exact(params) * n >= eps, p_e_exact(params) * n, eps),
    ]
    return RegimeReport(checks)


def expected_degree_count(params: ModelParams, ell: int, mode: str = "exact") -> float:
    """Expected number of nodes with degree exactly ``ell``.

    ``mode="exact"`` uses the binomial degree law, ``mode="poisson"`` its
    Poisson limit with mean ``n p_e``.
    """
    n = params.n
    ell = int(ell)
    if not 0 <= ell <= n - 1:
        raise InvalidArgumentError(f"ell must lie in 0..{n - 1}, got {ell}")
    p_e = p_e_exact(params)
    if mode == "exact":
        return n * float(binom.pmf(ell, n - 1, p_e))
    if mode == "poisson":
        lam = p_e * n
        if lam == 0.0:
            return float(n) if ell == 0 else 0.0
        return n * math.exp(ell * math.log(lam) - lam - math.lgamma(ell + 1))
    raise InvalidArgumentError(f"mode must be 'exact' or 'poisson', got {mode!r}")


def consensus_tolerance(kappa: int, n: int) -> int:
    """Largest number of adversarial nodes f with f < kappa/2 and f < n/3."""
    if n < 1 or kappa < 0:
        raise InvalidArgumentError(f"need n >= 1 and kappa >= 0, got n={n}, kappa={kappa}")
    return max(0, min(-(-kappa // 2) - 1, -(-n // 3) - 1))
