"""Parameter bundle and the analytic cap/threshold formulas.

All formulas are exact real-valued evaluations.  A `relaxed` bundle keeps the
structural machinery runnable at small scale: degree thresholds collapse to 1
and size caps to infinity, so the constructions never stall on constants that
only bite for astronomically large k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional


INF = math.inf


@dataclass(frozen=True)
class Params:
    """Shared parameter bundle: ell, the edge density k (real, from
    e(G) = k * n^(1+1/ell)), n, the structural constant C, the epsilon
    schedule (eps[t-1] is eps(t) for t = 1..ell), and delta."""

    ell: int
    k: float
    n: int
    C: float
    eps_schedule: tuple[float, ...]
    delta: float
    relaxed: bool = False

    def __post_init__(self):
        if self.ell < 2:
            raise ValueError(f"ell must be >= 2, got {self.ell}")
        if self.k <= 0 or self.delta <= 0:
            raise ValueError("k and delta must be positive")
        if len(self.eps_schedule) != self.ell:
            raise ValueError(
                f"epsilon schedule needs {self.ell} entries, got {len(self.eps_schedule)}"
            )
        if any(e <= 0 for e in self.eps_schedule):
            raise ValueError("epsilon schedule entries must be positive")

    def eps(self, t: int) -> float:
        if not 1 <= t <= self.ell:
            raise ValueError(f"t must be in [1, {self.ell}], got {t}")
        return self.eps_schedule[t - 1]

    def with_instance(self, k: float, n: int) -> "Params":
        return replace(self, k=k, n=n)

    # -- degree caps on the cycle hypergraph ------------------------------

    def delta_cap(self, j: int) -> float:
        """Max degree allowed for a j-set of edges: the cap decays by a
        factor delta*k^(ell/(ell-1)) per extra edge."""
        ell = self.ell
        if not 1 <= j <= 2 * ell - 1:
            raise ValueError(f"j must be in [1, {2 * ell - 1}], got {j}")
        top = self.k ** (2 * ell - 1) * self.n ** (1 - 1 / ell)
        return top / (self.delta * self.k ** (ell / (ell - 1))) ** (j - 1)

    def delta_cap_rescaled(self, j: int) -> float:
        """Same cap written with the delta-dependence pulled out front."""
        ell = self.ell
        if not 1 <= j <= 2 * ell - 1:
            raise ValueError(f"j must be in [1, {2 * ell - 1}], got {j}")
        exponent = 2 * ell - j - (j - 1) / (ell - 1)
        return (1 / self.delta ** (j - 1)) * self.k ** exponent * self.n ** (1 - 1 / ell)

    def saturation_floor(self, j: int) -> int:
        return math.floor(self.delta_cap(j))

    def link_cap(self, size_s: int, j: int) -> float:
        """Upper bound on |L^(j)(S)| for |S| = size_s over a good hypergraph."""
        if size_s < 0 or j < 1:
            raise ValueError("need |S| >= 0 and j >= 1")
        return 2 ** (2 * self.ell + size_s + 1) * (
            self.delta * self.k ** (self.ell / (self.ell - 1))
        ) ** j

    # -- neighbourhood thresholds and caps --------------------------------

    def degree_threshold(self, t: int) -> float:
        """Required forward degree into a concentrated level."""
        return self.C * self.eps(t) * self.k * self.n ** (1 / self.ell)

    def effective_degree_threshold(self, t: int) -> float:
        return 1.0 if self.relaxed else self.degree_threshold(t)

    def level_size_cap(self, t: int) -> float:
        """Max size of the top level A_t of a concentrated t-neighbourhood."""
        ell = self.ell
        return self.k ** ((ell - t) / (ell - 1)) * self.n ** (t / ell)

    def effective_level_size_cap(self, t: int) -> float:
        return INF if self.relaxed else self.level_size_cap(t)

    def first_level_cap(self) -> float:
        """Max size of A_1 in a balanced family."""
        return self.k * self.n ** (1 / self.ell)

    def effective_first_level_cap(self) -> float:
        return INF if self.relaxed else self.first_level_cap()

    def pair_path_cap(self, i: int, j: int) -> float:
        """Max stored subpaths between a fixed level-i vertex and a fixed
        level-j vertex."""
        if j <= i:
            raise ValueError(f"need i < j, got ({i}, {j})")
        return self.k ** ((j - i - 1) * self.ell / (self.ell - 1))

    def effective_pair_path_cap(self, i: int, j: int) -> float:
        return INF if self.relaxed else self.pair_path_cap(i, j)

    def branching_cap(self) -> float:
        """Max branching factor in a balanced family."""
        return self.k * self.n ** (1 / self.ell)

    def effective_branching_cap(self) -> float:
        return INF if self.relaxed else self.branching_cap()

    def q_size(self, t: int) -> tuple[int, bool]:
        """Per-vertex neighbour-subset size used when generating balanced
        paths; floored at 1, flagged when the formula is below 1."""
        if self.relaxed:
            return 0, False  # 0 means "no truncation"
        raw = self.degree_threshold(t)
        if raw < 1:
            return 1, True
        return math.floor(raw), False

    # -- refinement thresholds (relaxed mode: 0, i.e. nothing is removed) --

    def refine_forward_threshold(self, t: int) -> float:
        return self.eps(t) * self.k * self.n ** (1 / self.ell)

    def refine_back_threshold(self, t: int) -> float:
        return self.eps(t) * self.k ** (self.ell / (self.ell - 1))

    def refine_endpoint_threshold(self, t: int) -> float:
        return self.eps(t) ** t * self.k ** ((t - 1) * self.ell / (self.ell - 1))

    def effective_refine_thresholds(self, t: int) -> tuple[float, float, float]:
        if self.relaxed:
            return 0.0, 0.0, 0.0
        return (
            self.refine_forward_threshold(t),
            self.refine_back_threshold(t),
            self.refine_endpoint_threshold(t),
        )

    # -- caps on paths through a vertex / edge set ------------------------

    def paths_through_vertex_cap(self, t: int) -> float:
        return self.ell * self.k ** ((t - 2) * self.ell / (self.ell - 1))

    def paths_through_set_cap(self, t: int, sigma_size: int) -> float:
        if not 1 <= sigma_size <= t:
            raise ValueError(f"sigma size must be in [1, {t}], got {sigma_size}")
        return t ** t * self.k ** ((t - sigma_size - 1) * self.ell / (self.ell - 1))

    # -- cycle-finding monitors --------------------------------------------

    def m_of_j(self, t: int, j: int) -> float:
        """Cap on zig-zag paths ending at a fixed vertex and containing a
        fixed j-set of edges; piecewise in j."""
        ell = self.ell
        if not 1 <= j <= 2 * ell - t - 1:
            raise ValueError(f"j must be in [1, {2 * ell - t - 1}], got {j}")
        lead = (2 * ell) ** (2 * ell)
        a = self.eps(t) * self.k * self.n ** (1 / ell)
        b = self.eps(t) * self.k ** (ell / (ell - 1))
        if j <= ell - t:
            return lead * a ** (ell - 1) * b ** (ell - t - j)
        return lead * a ** (2 * ell - t - j - 1)

    def cycle_target(self) -> float:
        """Cycle-collection size that guarantees one addable cycle exists."""
        return 4 * self.ell * self.delta * self.k ** (2 * self.ell) * self.n

    def bad_path_cap(self, t: int) -> float:
        """Cap on the number of zig-zag paths with too many forbidden
        return paths."""
        a = self.eps(t) * self.k * self.n ** (1 / self.ell)
        b = self.eps(t) * self.k ** (self.ell / (self.ell - 1))
        return 0.25 * a ** self.ell * b ** (self.ell - t)

    # -- container-side formulas -------------------------------------------

    def tau(self) -> tuple[float, bool]:
        """Container fingerprint density tau and whether tau < delta."""
        ell = self.ell
        inv = self.delta ** 4 * self.k * min(
            self.k ** (1 / (ell - 1)),
            self.n ** ((ell - 1) / (ell * (2 * ell - 1))),
        )
        tau = 1 / inv
        return tau, tau < self.delta

    def mu(self, eps: Optional[float] = None) -> float:
        """Per-level fingerprint budget density in the coloured encoding."""
        ell = self.ell
        e = self.eps(ell) if eps is None else eps
        return (1 / e) * max(
            self.k ** (-1 / (ell - 1)),
            self.n ** (-(ell - 1) / (ell * (2 * ell - 1))),
        )


def analysis_eps_schedule(ell: int, C: float) -> tuple[float, ...]:
    # eps(ell) = 1/C^2, then eps(t-1) = eps(t)^t going down
    eps = [0.0] * ell
    eps[ell - 1] = 1 / C ** 2
    for t in range(ell, 1, -1):
        eps[t - 2] = eps[t - 1] ** t
    return tuple(eps)


def analysis_params(ell: int, k: float, n: int) -> Params:
    """The asymptotic-analysis preset: C = 10*ell, eps(ell) = 1/C^2,
    eps(t-1) = eps(t)^t, delta = eps(1)^(2*ell)."""
    C = 10.0 * ell
    eps = analysis_eps_schedule(ell, C)
    delta = eps[0] ** (2 * ell)
    return Params(ell=ell, k=k, n=n, C=C, eps_schedule=eps, delta=delta)


def relaxed_params(
    ell: int,
    k: float,
    n: int,
    delta: float = 1.0,
    C: float = 1.0,
    eps: float = 1.0,
) -> Params:
    """Generous constants: thresholds 1, caps infinite, so small instances
    exercise the full code paths."""
    return Params(
        ell=ell, k=k, n=n, C=C, eps_schedule=(eps,) * ell, delta=delta, relaxed=True
    )
