"""Shell location, the locally finite composition psi with its inverse, and
the final conjugated deleting map.

psi is only ever evaluated through a finite composition: the shell level of
a point is the smallest n with the point outside P_{n+1}, and there
psi = h_1 o ... o h_n.  Its inverse locates the smallest n with the point
outside A_n and unwinds the same maps.  Queries that fail to leave the body
system by the built truncation depth raise DomainTruncation (a first-class
outcome, never silent extrapolation).  The final map conjugates the inverse
composition by an outer four-bodies map carrying a user body onto the
universal body; when the inner map acts as the identity the conjugation is
cancelled algebraically, so the identity zone is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BadSeparation, DomainTruncation
from .gauges import (
    Ball,
    Body,
    Certificate,
    Scaled,
    Tolerances,
    strict_inclusion_mu,
    subset_certificate,
)
from .radial_maps import FourBodiesMap
from .rng import SplitMix64
from .seqspace import SUP_NORM, SparseVec, norm
from .smoothing import approximate_body, separate_compactum
from .tower import TowerScenario


@dataclass
class EvalResult:
    point: SparseVec
    shell: int
    map_name: str
    residual: float | None = None
    dist_K: float | None = None

    def to_json(self) -> dict:
        return {
            "point": self.point.to_json(),
            "shell": self.shell,
            "map": self.map_name,
            "residual": self.residual,
            "dist_K": self.dist_K,
        }


class DeletionMap:
    """psi, Psi = psi^{-1}, evaluated through the frozen level maps."""

    def __init__(self, scenario: TowerScenario):
        self.scenario = scenario
        self.maps = scenario.maps
        self.N_max = scenario.N_max
        self.tol = scenario.tol

    # -- shell location -------------------------------------------------------

    def locate_shell(self, x: SparseVec) -> int | None:
        """Smallest n <= N_max with x outside P_{n+1}; None if x never leaves."""
        for n in range(1, self.N_max + 1):
            if self.scenario.P[n + 1].gauge(x) > 1.0 + self.tol.tol_num:
                return n
        return None

    def locate_inverse_shell(self, y: SparseVec) -> int | None:
        """Smallest n <= N_max with y outside A_n."""
        for n in range(1, self.N_max + 1):
            if self.scenario.levels[n].A.gauge(y) > 1.0 + self.tol.tol_num:
                return n
        return None

    def _deepest(self, x: SparseVec, which: str) -> dict:
        if which == "P":
            g = self.scenario.P[self.N_max + 1].gauge(x)
            return {"deepest_body": f"P{self.N_max + 1}", "gauge": g}
        g = self.scenario.levels[self.N_max].A.gauge(x)
        return {"deepest_body": f"A{self.N_max}", "gauge": g}

    # -- evaluation -------------------------------------------------------------

    def psi(self, x: SparseVec) -> SparseVec:
        n = self.locate_shell(x)
        if n is None:
            raise DomainTruncation(
                f"point inside every P_n up to depth {self.N_max + 1}",
                self._deepest(x, "P"),
            )
        for j in range(n, 0, -1):  # innermost map first
            x = self.maps[j].forward(x)
        return x

    def psi_inverse(self, y: SparseVec) -> SparseVec:
        n = self.locate_inverse_shell(y)
        if n is None:
            raise DomainTruncation(
                f"point inside every A_n up to depth {self.N_max}",
                self._deepest(y, "A"),
            )
        for j in range(1, n + 1):
            y = self.maps[j].inverse(y)
        return y

    # -- diagnostics ---------------------------------------------------------

    def psi_at_depth(self, x: SparseVec, n: int) -> SparseVec:
        """The n-th finite composition, regardless of shell location."""
        for j in range(n, 0, -1):
            x = self.maps[j].forward(x)
        return x

    def roundtrip_residual(self, y: SparseVec) -> float:
        return (self.psi(self.psi_inverse(y)) - y).sup_norm()


def psi_forward(dmap: DeletionMap, x: SparseVec) -> SparseVec:
    return dmap.psi(x)


def psi_inverse(dmap: DeletionMap, y: SparseVec) -> SparseVec:
    return dmap.psi_inverse(y)


def build_deletion_map(scenario: TowerScenario) -> DeletionMap:
    return DeletionMap(scenario)


class TheoremMap:
    """h = G^{-1} o Psi o G: deletes K, identity outside the user body."""

    def __init__(
        self,
        G: FourBodiesMap,
        deletion: DeletionMap,
        A_user: Body,
        U1: Body,
        U2: Body,
        rB: Body,
        certificates: list[Certificate],
    ):
        self.G = G
        self.deletion = deletion
        self.A_user = A_user
        self.U1 = U1
        self.U2 = U2
        self.rB = rB
        self.certificates = certificates

    def forward(self, x: SparseVec) -> SparseVec:
        z = self.G.forward(x)
        w = self.deletion.psi_inverse(z)
        if w == z:
            # inner map acted as the identity: G^{-1}(G(x)) = x exactly
            return x
        return self.G.inverse(w)

    def inverse(self, y: SparseVec) -> SparseVec:
        z = self.G.forward(y)
        w = self.deletion.psi(z)
        if w == z:
            return y
        return self.G.inverse(w)


def build_theorem_map(
    scenario: TowerScenario,
    A_user: Body | None = None,
    theta: float = 0.25,
    rng: SplitMix64 | None = None,
    budget: int | None = None,
) -> TheoremMap:
    """Outer separation bodies, the universal body, and the conjugated map.

    Requires dist(K, complement of A_user) > 0, witnessed by every point of
    K having A_user-gauge at most 1 - 2*theta.
    """
    tol = scenario.tol
    rng = rng or SplitMix64(scenario.seed).spawn("theorem")
    budget = budget or scenario.cert_budget
    if A_user is None:
        radius = float(scenario.config.get("A_user", {}).get("radius", 2.0))
        A_user = Ball(radius, scenario.source_norm, SparseVec.zero(), tol)

    for k in scenario.K:
        if A_user.gauge(k) > 1.0 - 2.0 * theta + tol.tol_num:
            raise BadSeparation("K is not deep enough inside the user body")

    sep = separate_compactum(scenario.K, A_user, theta, rng.spawn("sep"), budget=budget)
    U1, U2 = sep.D1, sep.D2

    # universal body: smooth surrogate squeezed between E/2 and E, then scaled by r
    if scenario.mode == "c0":
        base = Ball(0.75 * scenario.r_E, SUP_NORM, SparseVec.zero(), tol)
        univ = approximate_body(base, 0.3, rng.spawn("universal"), budget=budget,
                                label="universal").body
    else:
        from .gauges import PullbackBody

        tgt_base = Ball(0.75 * scenario.target.r_E, SUP_NORM, SparseVec.zero(), tol)
        tgt_univ = approximate_body(tgt_base, 0.3, rng.spawn("universal"), budget=budget,
                                    label="universal").body
        univ = PullbackBody(scenario.injection, tgt_univ, tol)
    rB = Scaled(univ, scenario.r)
    D_out = Scaled(rB, 1.5)

    certs = list(sep.certificates)
    certs.append(subset_certificate(U2, rB, budget, rng.spawn("U2_in_rB"),
                                    name="outer:U2_in_rB"))
    certs.append(subset_certificate(scenario.P[1], rB, budget, rng.spawn("P1_in_rB"),
                                    name="outer:P1_in_rB"))
    certs.append(strict_inclusion_mu(rB, D_out, budget, rng.spawn("rB_mu_D"),
                                     margin=min(tol.margin, 0.25 * (0.5 / 1.5)),
                                     name="outer:rB_mu_D", bound=1.0 / 1.5))
    for c in certs:
        if not c.holds:
            raise BadSeparation(f"outer certificate {c.name} failed ({c.observed:.6g})")

    G = FourBodiesMap.from_slacks(
        U1, U2, rB, D_out,
        slack_inner=sep.eps / (1.0 + sep.eps),
        allowance_outer=0.5,
        tol=tol, name="outer", certificates=certs,
    )
    scenario.bodies.setdefault("U1", U1)
    scenario.bodies.setdefault("U2", U2)
    scenario.bodies.setdefault("rB", rB)
    scenario.bodies.setdefault("A_user", A_user)
    return TheoremMap(G, DeletionMap(scenario), A_user, U1, U2, rB, certs)


def theorem_map(scenario: TowerScenario, A_user: Body | None = None, **kwargs) -> TheoremMap:
    return build_theorem_map(scenario, A_user, **kwargs)


def evaluate(
    obj: DeletionMap | TheoremMap,
    x: SparseVec,
    which: str,
    with_residual: bool = True,
) -> EvalResult:
    """Evaluate psi / Psi / h / h_inv with shell metadata and residual."""
    if which in ("psi", "Psi"):
        dmap: DeletionMap = obj if isinstance(obj, DeletionMap) else obj.deletion
        if which == "psi":
            shell = dmap.locate_shell(x)
            out = dmap.psi(x)
            residual = (dmap.psi_inverse(out) - x).sup_norm() if with_residual else None
        else:
            shell = dmap.locate_inverse_shell(x)
            out = dmap.psi_inverse(x)
            residual = (dmap.psi(out) - x).sup_norm() if with_residual else None
        dist_K = dmap.scenario.dist_to_K(out)
        return EvalResult(out, shell or 0, which, residual, dist_K)
    if which in ("h", "h_inv"):
        assert isinstance(obj, TheoremMap)
        dmap = obj.deletion
        z = obj.G.forward(x)
        shell = (dmap.locate_inverse_shell(z) if which == "h" else dmap.locate_shell(z)) or 0
        out = obj.forward(x) if which == "h" else obj.inverse(x)
        residual = None
        if with_residual:
            back = obj.inverse(out) if which == "h" else obj.forward(out)
            residual = (back - x).sup_norm()
        dist_K = dmap.scenario.dist_to_K(out)
        return EvalResult(out, shell, which, residual, dist_K)
    raise ValueError(f"unknown map {which!r}")
