"""SINR model: parameters, affectance, the feasibility check and f-scores."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import PreconditionError
from .geometry import Link, link_distance, symmetric_link_distance

__all__ = [
    "SinrParams",
    "FeasibilityReport",
    "FEASIBILITY_RTOL",
    "gamma",
    "affectance",
    "is_feasible",
    "f_value",
    "f_matrix",
    "amenability_score",
    "kesselheim_scores",
    "check_node_disjoint",
    "link_arrays",
    "DEFAULT_RHO",
    "MEASURED_MAX_AMENABILITY",
    "is_amenable",
]

FEASIBILITY_RTOL = 1e-9

# Twice the largest amenability score seen over 50 seeded uniform
# instances (seeds 0..49, n=100, alpha=3, MST oriented toward point 0,
# probes = all MST links); see tests/test_sinr.py.
MEASURED_MAX_AMENABILITY = 7.5761
DEFAULT_RHO = 2 * MEASURED_MAX_AMENABILITY


@dataclass(frozen=True)
class SinrParams:
    alpha: float = 3.0
    beta: float = 1.0
    noise: float = 0.0

    def __post_init__(self):
        if not self.alpha > 2:
            raise PreconditionError(f"alpha must exceed 2, got {self.alpha}")
        if not self.beta >= 1:
            raise PreconditionError(f"beta must be at least 1, got {self.beta}")
        if not self.noise >= 0:
            raise PreconditionError(f"noise must be nonnegative, got {self.noise}")

    @classmethod
    def parse(cls, text: str) -> "SinrParams":
        """Parse ``"alpha,beta,noise"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise PreconditionError(f"expected alpha,beta,noise, got {text!r}")
        return cls(*(float(p) for p in parts))


def gamma(params: SinrParams) -> float:
    """Threshold of the one-slot schedulability condition."""
    return 1.0 / (4.0 * 3.0 ** params.alpha * (4.0 * params.beta + 2.0))


def link_arrays(links: Sequence[Link]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sender coordinates, receiver coordinates and lengths as arrays."""
    if not links:
        empty = np.zeros((0, 2))
        return empty, empty, np.zeros(0)
    s = np.array([l.s for l in links], dtype=np.float64)
    r = np.array([l.r for l in links], dtype=np.float64)
    lengths = np.array([l.length for l in links], dtype=np.float64)
    return s, r, lengths


def check_node_disjoint(links: Sequence[Link]) -> None:
    seen: set[int] = set()
    for link in links:
        for node in (link.sender, link.receiver):
            if node in seen:
                raise PreconditionError(f"point {node} appears in two links of the slot")
            seen.add(node)


def _noise_coefficient(length: float, power: float, params: SinrParams) -> float:
    slack = 1.0 - params.beta * params.noise * length**params.alpha / power
    if slack <= 0:
        raise PreconditionError("link power is too weak to overcome the noise")
    return params.beta / slack


def affectance(source: Link, target: Link, powers: Mapping[Link, float], params: SinrParams) -> float:
    """Affectance of ``source`` on ``target``, capped at 1."""
    if source == target:
        raise PreconditionError("affectance of a link on itself is undefined")
    p_src, p_tgt = powers[source], powers[target]
    c = _noise_coefficient(target.length, p_tgt, params)
    d = link_distance(source, target)
    if d == 0:
        return 1.0
    ratio = c * (p_src / d**params.alpha) / (p_tgt / target.length**params.alpha)
    return min(1.0, ratio)


@dataclass
class FeasibilityReport:
    sinr: dict[Link, float]
    affectance_sum: dict[Link, float]
    passed: bool
    worst: Link | None
    affectance_passed: bool | None = None

    def min_margin(self, beta: float) -> float:
        """Smallest SINR / beta over the slot (inf for an empty slot)."""
        if not self.sinr:
            return float("inf")
        return min(self.sinr.values()) / beta


def is_feasible(slot: Sequence[Link], powers: Mapping[Link, float], params: SinrParams) -> FeasibilityReport:
    """Check the SINR condition directly for every link of ``slot``.

    The affectance form is evaluated alongside; ``affectance_passed`` holds
    its verdict, where an interferer whose uncapped affectance exceeds 1
    alone makes the target infeasible.
    """
    links = list(slot)
    check_node_disjoint(links)
    missing = [l for l in links if l not in powers]
    if missing:
        raise PreconditionError(f"no power for link(s) {missing}")
    if not links:
        return FeasibilityReport({}, {}, True, None, True)
    p = np.array([powers[l] for l in links], dtype=np.float64)
    if not np.all(np.isfinite(p) & (p > 0)):
        raise PreconditionError("powers must be positive and finite")
    a = params.alpha
    sx = np.array([l.s[0] for l in links])
    sy = np.array([l.s[1] for l in links])
    rx = np.array([l.r[0] for l in links])
    ry = np.array([l.r[1] for l in links])
    length = np.hypot(sx - rx, sy - ry)
    # d[j, i]: sender of j to receiver of i
    d = np.hypot(sx[:, None] - rx[None, :], sy[:, None] - ry[None, :])
    with np.errstate(divide="ignore"):
        received = p[:, None] / d**a
    np.fill_diagonal(received, 0.0)
    interference = received.sum(axis=0)
    signal = p / length**a
    with np.errstate(divide="ignore"):
        sinr = signal / (interference + params.noise)
    ok = sinr >= params.beta * (1.0 - FEASIBILITY_RTOL)

    slack = 1.0 - params.beta * params.noise / signal
    with np.errstate(divide="ignore", invalid="ignore"):
        c = np.where(slack > 0, params.beta / slack, np.inf)
        raw = c[None, :] * received / signal[None, :]
    np.fill_diagonal(raw, 0.0)
    capped = np.minimum(raw, 1.0)
    aff_sum = capped.sum(axis=0)
    aff_ok = np.all((aff_sum <= 1.0 + FEASIBILITY_RTOL) & ~np.any(raw > 1.0, axis=0) & (slack > 0))

    worst_idx = int(np.argmin(sinr))
    return FeasibilityReport(
        sinr={l: float(v) for l, v in zip(links, sinr)},
        affectance_sum={l: float(v) for l, v in zip(links, aff_sum)},
        passed=bool(np.all(ok)),
        worst=links[worst_idx],
        affectance_passed=bool(aff_ok),
    )


def f_value(link: Link, other: Link, alpha: float) -> float:
    """How strongly the shorter ``link`` can disturb ``other`` (0 otherwise)."""
    if link == other or link.key > other.key:
        return 0.0
    d = symmetric_link_distance(link, other)
    if d == 0:
        return 1.0
    return min(1.0, (link.length / d) ** alpha)


def f_matrix(links: Sequence[Link], alpha: float) -> np.ndarray:
    """``F[i, j] = f_value(links[i], links[j])`` for all pairs."""
    m = len(links)
    if m == 0:
        return np.zeros((0, 0))
    s, r, lengths = link_arrays(links)
    rank = np.empty(m, dtype=np.int64)
    rank[sorted(range(m), key=lambda i: links[i].key)] = np.arange(m)
    d_sr = np.hypot(s[:, None, 0] - r[None, :, 0], s[:, None, 1] - r[None, :, 1])
    d = np.minimum(d_sr, d_sr.T)
    with np.errstate(divide="ignore"):
        f = np.minimum(1.0, (lengths[:, None] / d) ** alpha)
    f[d == 0] = 1.0
    f[rank[:, None] >= rank[None, :]] = 0.0
    return f


def amenability_score(links: Sequence[Link], probe: Link, alpha: float) -> float:
    """Sum of ``f_probe`` over links of ``links`` that are at least as long as ``probe``."""
    return float(sum(f_value(probe, other, alpha) for other in links))


def kesselheim_scores(links: Sequence[Link], alpha: float) -> dict[Link, float]:
    """For each link, the summed f-score it receives from shorter links of the set."""
    f = f_matrix(links, alpha)
    col = f.sum(axis=0) if len(links) else []
    return {l: float(v) for l, v in zip(links, col)}


def is_amenable(links: Sequence[Link], probes: Sequence[Link], alpha: float, rho: float = DEFAULT_RHO) -> bool:
    """Whether every probe's amenability score stays within ``rho``."""
    return all(amenability_score(links, probe, alpha) <= rho for probe in probes)
