"""Seeded Monte Carlo estimation of connectivity probabilities.

Trial ``i`` of an experiment samples its graph from
``derive_seed(master_seed, "trial", i)``; sweep row ``j`` runs an experiment
whose master seed is ``derive_seed(master_seed, "row", j)``. Results are
therefore identical for any worker count and any execution order, and a
single row can be recomputed by calling :func:`run_trials` with the row seed
recorded in the output.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Optional, Sequence

import numpy as np
from scipy.stats import norm

from .errors import (BudgetExceededError, InfeasibleError, InvalidArgumentError,
                     InvariantViolation)
from .graph import is_connected, is_k_connected, min_degree, vertex_connectivity
from .model import (ModelParams, channel_on, induce_random_key_graph, layer_seeds,
                    p_e_exact, sample_coupled_er_pair, sample_key_rings,
                    sample_onoff_graph)
from .rng import check_seed, derive_seed
from .scaling import K_required, p_required

METRICS = frozenset({"k_connected", "min_degree", "connected", "degree_counts", "kappa_exact"})

#: largest graph for which exact vertex connectivity is computed per trial
KAPPA_MAX_NODES = 20_000

CSV_HEADER = ("alpha", "p", "p_e", "trials", "frac_k_connected", "frac_min_deg_ge_k",
              "ci_low_k", "ci_high_k", "ci_low_deg", "ci_high_deg", "seed")

# per-process count of outcomes checked for "k-connected implies min degree >= k"
_implication = {"checked": 0, "violations": 0}


def implication_tally() -> tuple[int, int]:
    """(outcomes checked, violations) for the implication k-connected => min degree >= k."""
    return _implication["checked"], _implication["violations"]


def _record_implication(k_connected: Optional[bool], delta: int, k: int) -> None:
    if k_connected is None:
        return
    _implication["checked"] += 1
    if k_connected and delta < k:
        _implication["violations"] += 1
        raise InvariantViolation(f"k-connected graph with minimum degree {delta} < k={k}")


@dataclass(frozen=True)
class ExperimentConfig:
    params: ModelParams
    k: int
    trials: int
    master_seed: int
    metrics: frozenset = frozenset({"k_connected", "min_degree"})

    def __post_init__(self):
        object.__setattr__(self, "metrics", frozenset(self.metrics))
        if self.k < 1:
            raise InvalidArgumentError(f"k must be >= 1, got {self.k}")
        if self.trials < 1:
            raise InvalidArgumentError(f"trials must be >= 1, got {self.trials}")
        check_seed(self.master_seed)
        if not self.metrics:
            raise InvalidArgumentError("at least one metric is required")
        unknown = self.metrics - METRICS
        if unknown:
            raise InvalidArgumentError(f"unknown metrics: {sorted(unknown)}")
        if "kappa_exact" in self.metrics and self.params.n > KAPPA_MAX_NODES:
            raise BudgetExceededError(
                f"kappa_exact limited to n <= {KAPPA_MAX_NODES}, got n={self.params.n}")


@dataclass(frozen=True)
class TrialOutcome:
    """Measurements on one sampled graph.

    ``is_k_connected`` is None unless the ``k_connected`` metric was requested.
    ``degree_histogram[l]`` is the number of nodes of degree ``l``.
    """

    trial_index: int
    k: int
    min_degree: int
    is_k_connected: Optional[bool] = None
    is_connected: Optional[bool] = None
    kappa: Optional[int] = None
    degree_histogram: Optional[tuple] = None

    def __post_init__(self):
        if self.is_k_connected and self.min_degree < self.k:
            raise InvariantViolation(
                f"trial {self.trial_index}: k-connected with minimum degree {self.min_degree} < k={self.k}")


@dataclass(frozen=True)
class ConfidenceInterval:
    low: float
    high: float
    level: float = 0.95


def wilson_interval(successes: int, trials: int, level: float = 0.95) -> ConfidenceInterval:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise InvalidArgumentError("need at least one trial")
    if not 0 <= successes <= trials:
        raise InvalidArgumentError(f"successes must lie in 0..{trials}, got {successes}")
    z = float(norm.ppf(0.5 + level / 2))
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    low = 0.0 if successes == 0 else max(0.0, min(centre - half, phat))
    high = 1.0 if successes == trials else min(1.0, max(centre + half, phat))
    return ConfidenceInterval(low, high, level)


@dataclass(frozen=True)
class Estimate:
    trials: int
    frac_k_connected: float
    frac_min_deg_ge_k: float
    ci_k_connected: ConfidenceInterval
    ci_min_degree: ConfidenceInterval


def _run_one(config: ExperimentConfig, index: int) -> TrialOutcome:
    seed = derive_seed(config.master_seed, "trial", index)
    g = sample_onoff_graph(config.params, seed)
    metrics = config.metrics
    delta = min_degree(g)
    out = {"trial_index": index, "k": config.k, "min_degree": delta}
    if "k_connected" in metrics:
        out["is_k_connected"] = is_k_connected(g, config.k)
    if "connected" in metrics:
        out["is_connected"] = is_connected(g)
    if "kappa_exact" in metrics:
        out["kappa"] = vertex_connectivity(g)
    if "degree_counts" in metrics:
        out["degree_histogram"] = tuple(np.bincount(g.degrees()).tolist())
    return TrialOutcome(**out)


def _run_chunk(config: ExperimentConfig, indices: Sequence[int]) -> list[TrialOutcome]:
    return [_run_one(config, i) for i in indices]


def run_trials(config: ExperimentConfig, workers: int = 1) -> list[TrialOutcome]:
    """Run every trial of ``config``; the result does not depend on ``workers``."""
    indices = range(config.trials)
    if workers <= 1:
        outcomes = _run_chunk(config, indices)
    else:
        chunks = [indices[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_run_chunk, [config] * len(chunks), chunks)
            outcomes = sorted((o for part in parts for o in part), key=lambda o: o.trial_index)
    for o in outcomes:
        _record_implication(o.is_k_connected, o.min_degree, o.k)
    return outcomes


def estimate(outcomes: Sequence[TrialOutcome], k: Optional[int] = None,
             level: float = 0.95) -> Estimate:
    """Fractions of trials that are k-connected and that have minimum degree >= k."""
    if not outcomes:
        raise InvalidArgumentError("no outcomes to estimate from")
    if k is None:
        k = outcomes[0].k
    if any(o.is_k_connected is None for o in outcomes):
        raise InvalidArgumentError("k_connected metric was not recorded")
    if k != outcomes[0].k:
        raise InvalidArgumentError(f"outcomes were recorded for k={outcomes[0].k}, not k={k}")
    n = len(outcomes)
    hits_k = sum(bool(o.is_k_connected) for o in outcomes)
    hits_deg = sum(o.min_degree >= k for o in outcomes)
    return Estimate(n, hits_k / n, hits_deg / n,
                    wilson_interval(hits_k, n, level), wilson_interval(hits_deg, n, level))


def empirical_degree_counts(outcomes: Sequence[TrialOutcome], ell: int) -> float:
    """Mean number of nodes of degree ``ell`` across trials."""
    if not outcomes:
        raise InvalidArgumentError("no outcomes")
    if any(o.degree_histogram is None for o in outcomes):
        raise InvalidArgumentError("degree_counts metric was not recorded")
    counts = [o.degree_histogram[ell] if ell < len(o.degree_histogram) else 0 for o in outcomes]
    return float(np.mean(counts))


# -- alpha sweeps -------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    alpha: float
    seed: int
    feasible: bool
    K: Optional[int] = None
    p: Optional[float] = None
    p_e: Optional[float] = None
    trials: int = 0
    frac_k_connected: Optional[float] = None
    frac_min_deg_ge_k: Optional[float] = None
    ci_low_k: Optional[float] = None
    ci_high_k: Optional[float] = None
    ci_low_deg: Optional[float] = None
    ci_high_deg: Optional[float] = None
    note: str = ""


@dataclass(frozen=True)
class SweepResult:
    rows: list[SweepRow]
    master_seed: int
    config: dict = field(default_factory=dict)

    def feasible_rows(self) -> list[SweepRow]:
        return [r for r in self.rows if r.feasible]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in self.rows:
            writer.writerow([_fmt(getattr(r, name)) for name in CSV_HEADER])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {"config": self.config, "master_seed": self.master_seed,
               "columns": list(CSV_HEADER), "rows": [asdict(r) for r in self.rows]}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def sweep_alpha(base: ExperimentConfig, alphas: Sequence[float], solve_for: str = "p",
                workers: int = 1, level: float = 0.95, approx: bool = False) -> SweepResult:
    """Estimate both connectivity probabilities along a list of deviations.

    For each alpha the unknown parameter (``p`` or ``K``) is solved from the
    remaining fields of ``base.params``; the other fields are kept.
    Infeasible alphas produce rows with ``feasible=False``.
    """
    alphas = [float(a) for a in alphas]
    if any(b < a for a, b in zip(alphas, alphas[1:])):
        raise InvalidArgumentError("alphas must be sorted ascending")
    if solve_for not in ("p", "K"):
        raise InvalidArgumentError(f"solve_for must be 'p' or 'K', got {solve_for!r}")
    prm = base.params
    metrics = base.metrics | {"k_connected", "min_degree"}
    rows = []
    for idx, alpha in enumerate(alphas):
        row_seed = derive_seed(base.master_seed, "row", idx)
        try:
            if solve_for == "p":
                params = prm.with_p(p_required(prm.n, base.k, alpha, prm.K, prm.P, approx=approx))
            else:
                params = ModelParams(prm.n, K_required(prm.n, base.k, alpha, prm.p, prm.P), prm.P, prm.p)
        except (InfeasibleError, InvalidArgumentError) as exc:
            rows.append(SweepRow(alpha, row_seed, False, note=str(exc)))
            continue
        cfg = replace(base, params=params, master_seed=row_seed, metrics=metrics)
        est = estimate(run_trials(cfg, workers=workers), base.k, level)
        rows.append(SweepRow(
            alpha, row_seed, True, params.K, params.p, p_e_exact(params), est.trials,
            est.frac_k_connected, est.frac_min_deg_ge_k,
            est.ci_k_connected.low, est.ci_k_connected.high,
            est.ci_min_degree.low, est.ci_min_degree.high))
    echo = {"n": prm.n, "K": prm.K, "P": prm.P, "p": prm.p, "k": base.k, "trials": base.trials,
            "alpha": alphas, "solve_for": solve_for, "level": level, "approx": approx,
            "seed": base.master_seed}
    return SweepResult(rows, base.master_seed, echo)


def monotone_up_to_ci(result: SweepResult) -> bool:
    """No feasible row's k-connectivity interval lies wholly below an earlier row's."""
    rows = result.feasible_rows()
    for i, earlier in enumerate(rows):
        for later in rows[i + 1:]:
            if later.frac_k_connected < earlier.frac_k_connected and later.ci_high_k < earlier.ci_low_k:
                return False
    return True


# -- empirical bound checks ---------------------------------------------------

def connected_subgraph_probability(params: ModelParams, r: int, trials: int, seed: int) -> float:
    """Fraction of trials whose subgraph induced on nodes ``0..r-1`` is connected."""
    if not 2 <= r <= params.n:
        raise InvalidArgumentError(f"r must lie in 2..{params.n}, got {r}")
    if trials < 1:
        raise InvalidArgumentError(f"trials must be >= 1, got {trials}")
    hits = 0
    for t in range(trials):
        g = sample_onoff_graph(params, derive_seed(seed, "subgraph", t))
        hits += is_connected(g.induced_subgraph(range(r)))
    return hits / trials


@dataclass(frozen=True)
class CouplingReport:
    trials: int
    containment_violations: int
    monotonicity_violations: int
    low_k_connected: int
    high_k_connected: int


def coupling_experiment(params: ModelParams, p_low: float, p_high: float, k: int,
                        trials: int, seed: int) -> CouplingReport:
    """Compare coupled on/off graphs at two channel probabilities over shared key rings.

    Each trial draws one key-ring assignment and a coupled channel pair; the
    low graph must be a spanning subgraph of the high graph, so it can never
    be k-connected when the high graph is not.
    """
    containment = monotone = low_hits = high_hits = 0
    for t in range(trials):
        trial_seed = derive_seed(seed, "coupling", t)
        key_seed, channel_seed = layer_seeds(trial_seed)
        key_graph = induce_random_key_graph(sample_key_rings(params, key_seed))
        er_low, er_high = sample_coupled_er_pair(params.n, p_low, p_high, channel_seed)
        low, high = key_graph.intersection(er_low), key_graph.intersection(er_high)
        containment += not low.is_subgraph_of(high)
        low_k, high_k = is_k_connected(low, k), is_k_connected(high, k)
        for g, flag in ((low, low_k), (high, high_k)):
            _record_implication(flag, min_degree(g), k)
        monotone += low_k and not high_k
        low_hits += low_k
        high_hits += high_k
    return CouplingReport(trials, containment, monotone, low_hits, high_hits)


def edge_frequency(params: ModelParams, pair: tuple[int, int], trials: int, seed: int) -> float:
    """Fraction of trials in which the on/off graph contains the edge ``pair``."""
    i, j = sorted(pair)
    if not 0 <= i < j < params.n:
        raise InvalidArgumentError(f"pair must be two distinct nodes in 0..{params.n - 1}")
    key = i * params.n + j
    hits = 0
    for t in range(trials):
        key_seed, channel_seed = layer_seeds(derive_seed(seed, "edge", t))
        rings = sample_key_rings(params, key_seed)
        shared = not rings.ring(i).isdisjoint(rings.ring(j))
        hits += shared and bool(channel_on(params.n, params.p, channel_seed, np.array([key]))[0])
    return hits / trials
