"""Leggett-Garg inequality families: standard (SLGI), Wigner (WLGI), entropic (ELGI).

All two-time probabilities entering an inequality come from experiments in
which only those two measurements are performed, and single-time entropies
from single-measurement experiments; this is what quantum mechanics
prescribes and what makes the no-signaling-in-time diagnostics (lgscan.nsit)
generally nonzero.

Families and canonical orderings
--------------------------------
* SLGI (bound 1):  s1 s2 <M1 M2> + s2 s3 <M2 M3> - s1 s3 <M1 M3>.
  Outcome relabelings M_i -> s_i M_i give 4 distinct inequalities; the
  canonical order fixes s1 = +1 and iterates (s2, s3) over
  (+,+), (+,-), (-,+), (-,-).  Spec 0 is the familiar
  <M1 M2> + <M2 M3> - <M1 M3> <= 1.
* WLGI (bound 0):  P(M_p^u, M_q^v) - P(. , .) - P(. , .), where the two
  subtracted pair probabilities split the remaining time r with outcomes
  s and -s.  24 inequalities: positive pair in [(1,2), (1,3), (2,3)]
  (lexicographic), then u, v, s each over (+1, -1).  Under noninvasive
  marginalization every one reduces to minus a sum of two triple
  probabilities, hence the macrorealist bound 0.
* ELGI (bound 0):  H(M_a, M_c) - H(M_a, M_b) - H(M_b, M_c) + H(M_b) with
  b the conditioned middle variable; specs iterate middle = 1, 2, 3.
  Entropies are Shannon entropies in nats.

Closed forms for two special parameter families are provided as cross-check
targets; the measurement pipeline is the ground truth and any mismatch above
1e-8 is treated as a transcription defect of the closed form, not patched
into the pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterable

import numpy as np

from .measurement import JointDistribution, QubitState, Schedule, correlator, run_schedule

VIOLATION_TOL = 1e-12

PAIRS = ((1, 2), (1, 3), (2, 3))


@dataclass(frozen=True)
class SlgiSpec:
    """Outcome relabeling (s1, s2, s3); only the products s_i s_j matter."""

    signs: tuple[int, int, int]


@dataclass(frozen=True)
class WlgiSpec:
    """Positive pair (p, q), its outcomes (u, v), and the split sign s for the
    marginalized time r."""

    positive_pair: tuple[int, int]
    u: int
    v: int
    s: int

    @property
    def marginalized(self) -> int:
        (p, q) = self.positive_pair
        return ({1, 2, 3} - {p, q}).pop()


@dataclass(frozen=True)
class ElgiSpec:
    """Index of the conditioned middle variable."""

    middle: int


SLGI_SPECS: tuple[SlgiSpec, ...] = tuple(
    SlgiSpec((1, s2, s3)) for s2, s3 in product((1, -1), repeat=2)
)

WLGI_SPECS: tuple[WlgiSpec, ...] = tuple(
    WlgiSpec(pair, u, v, s)
    for pair in PAIRS
    for u in (1, -1)
    for v in (1, -1)
    for s in (1, -1)
)

ELGI_SPECS: tuple[ElgiSpec, ...] = tuple(ElgiSpec(m) for m in (1, 2, 3))


@dataclass(frozen=True, eq=False)
class InequalityResult:
    value: float
    bound: float
    violated: bool
    spec: object
    params: dict


def _result(value: float, bound: float, spec: object, state: QubitState, schedule: Schedule) -> InequalityResult:
    return InequalityResult(
        value=float(value),
        bound=float(bound),
        violated=bool(value > bound + VIOLATION_TOL),
        spec=spec,
        params={
            "tau": schedule.tau,
            "eta": schedule.eta,
            "x": schedule.x,
            "axis": tuple(schedule.axis),
            "state_bloch": tuple(state.bloch()),
        },
    )


def pair_distributions(state: QubitState, schedule: Schedule) -> dict[tuple[int, int], JointDistribution]:
    """The three stand-alone two-time experiments for this parameter point."""
    return {pair: run_schedule(state, schedule.with_measured(pair)) for pair in PAIRS}


# --- SLGI -------------------------------------------------------------------


def slgi_value(state: QubitState, schedule: Schedule, spec: SlgiSpec) -> InequalityResult:
    """s1 s2 <M1 M2> + s2 s3 <M2 M3> - s1 s3 <M1 M3> against the bound 1."""
    s1, s2, s3 = spec.signs
    c12 = correlator(state, schedule.with_measured((1, 2)))
    c23 = correlator(state, schedule.with_measured((2, 3)))
    c13 = correlator(state, schedule.with_measured((1, 3)))
    value = s1 * s2 * c12 + s2 * s3 * c23 - s1 * s3 * c13
    return _result(value, 1.0, spec, state, schedule)


def slgi_all(state: QubitState, schedule: Schedule) -> list[InequalityResult]:
    c = {pair: correlator(state, schedule.with_measured(pair)) for pair in PAIRS}
    out = []
    for spec in SLGI_SPECS:
        s1, s2, s3 = spec.signs
        value = s1 * s2 * c[(1, 2)] + s2 * s3 * c[(2, 3)] - s1 * s3 * c[(1, 3)]
        out.append(_result(value, 1.0, spec, state, schedule))
    return out


def slgi_closed_form_spin(eta: float, tau: float) -> float:
    """Unbiased (x = 0) SLGI value eta^2 (2 cos 2tau - cos 4tau).

    State-independent; peaks at 3/2 eta^2 where cos 2tau = 1/2 (tau = pi/6,
    5pi/6, ...), so violation requires eta > sqrt(2/3) ~ 0.8165.
    """
    return eta**2 * (2.0 * np.cos(2.0 * tau) - np.cos(4.0 * tau))


def slgi_closed_form_biased(theta: float, phi: float, tau: float, eta: float) -> float:
    """SLGI value for the bias family x = eta - 1 (effects eta*(I + m.sigma)/2).

    Transcribed long form; cross-checked against the pipeline (which is the
    ground truth).  At (theta, phi, tau) = (pi/3, pi/2, 5pi/6) it reduces to
    1 + eta^2/2, which exceeds the bound for every eta > 0.
    """
    rt = math.sqrt(max(1.0 - eta, 0.0))
    s2th, c2th = math.sin(2 * theta), math.cos(2 * theta)
    s2t, c2t = math.sin(2 * tau), math.cos(2 * tau)
    s4t, c4t = math.sin(4 * tau), math.cos(4 * tau)
    sp = math.sin(phi)
    term1 = eta * (4 * s2th * s2t * sp) * (4 * (eta - 1) * math.cos(tau) ** 2 + 2 * rt * (2 * c2t - 1))
    term2 = -4 * eta * rt * (sp * s2th * s4t + c2th * c4t)
    term3 = 2 * eta * c2th * (4 * (eta - 1) * s2t**2 + 8 * (eta - 1) * c2t + 2 * rt)
    term4 = 8 * (eta - 1) ** 2
    term5 = -8 * eta**2 * (-2 * c2t + c4t)
    return (term1 + term2 + term3 + term4 + term5) / 8.0


# --- WLGI -------------------------------------------------------------------


def wlgi_from_pairs(dists: dict[tuple[int, int], JointDistribution], spec: WlgiSpec) -> float:
    """WLGI left-hand side from the three stand-alone pair distributions.

    The subtracted terms pair the marginalized time r (outcome s with the
    earlier of p, q; outcome -s with the later), each temporally ordered.
    """
    (p, q), u, v, s = spec.positive_pair, spec.u, spec.v, spec.s
    r = spec.marginalized
    pos = dists[(p, q)].prob((u, v))
    if r == 1:
        neg1 = dists[(1, 2)].prob((s, u))
        neg2 = dists[(1, 3)].prob((-s, v))
    elif r == 2:
        neg1 = dists[(1, 2)].prob((u, s))
        neg2 = dists[(2, 3)].prob((-s, v))
    else:  # r == 3
        neg1 = dists[(1, 3)].prob((u, s))
        neg2 = dists[(2, 3)].prob((v, -s))
    return pos - neg1 - neg2


def wlgi_value(state: QubitState, schedule: Schedule, spec: WlgiSpec) -> InequalityResult:
    dists = pair_distributions(state, schedule)
    return _result(wlgi_from_pairs(dists, spec), 0.0, spec, state, schedule)


def wlgi_all(state: QubitState, schedule: Schedule) -> list[InequalityResult]:
    """All 24 WLGIs, in canonical order, from one set of pair experiments."""
    dists = pair_distributions(state, schedule)
    return [
        _result(wlgi_from_pairs(dists, spec), 0.0, spec, state, schedule)
        for spec in WLGI_SPECS
    ]


# --- ELGI -------------------------------------------------------------------


def shannon_entropy(dist: JointDistribution | Iterable[float]) -> float:
    """Shannon entropy in nats, with 0 ln 0 = 0."""
    if isinstance(dist, JointDistribution):
        probs = dist.probabilities()
    else:
        probs = np.asarray(list(dist), dtype=float)
    probs = probs[probs > 0.0]
    return float(-(probs * np.log(probs)).sum()) if probs.size else 0.0


def elgi_value(state: QubitState, schedule: Schedule, spec: ElgiSpec) -> InequalityResult:
    """H(M_a, M_c) - H(M_a, M_b) - H(M_b, M_c) + H(M_b), b = spec.middle.

    Pair entropies come from two-time experiments, H(M_b) from the
    single-measurement experiment at t_b.
    """
    b = spec.middle
    if b not in (1, 2, 3):
        raise ValueError("middle must be 1, 2 or 3")
    a, c = sorted({1, 2, 3} - {b})
    h_ac = shannon_entropy(run_schedule(state, schedule.with_measured((a, c))))
    h_ab = shannon_entropy(run_schedule(state, schedule.with_measured(tuple(sorted((a, b))))))
    h_bc = shannon_entropy(run_schedule(state, schedule.with_measured(tuple(sorted((b, c))))))
    h_b = shannon_entropy(run_schedule(state, schedule.with_measured((b,))))
    return _result(h_ac - h_ab - h_bc + h_b, 0.0, spec, state, schedule)


def elgi_all(state: QubitState, schedule: Schedule) -> list[InequalityResult]:
    return [elgi_value(state, schedule, spec) for spec in ELGI_SPECS]
