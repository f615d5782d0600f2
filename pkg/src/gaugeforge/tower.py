"""The frozen body system a deletion map is built from.

Given a finite point set K inside a sup-ball ambient body, the construction
produces, per level n: a slab neighborhood C_n of {||x|| <= rho, T(x) >=
alpha - 1/n} (a non-attaining functional makes the total intersection
empty), a center c_n interior to C_n, the star-hull sublevel body P_n =
{mu_n <= 1 + delta_n} about c_{n+1} with the delta_n induction
delta_{n+1} < min(delta_n'/(2*Delta), 2^-n), and the interpolated smooth
bodies D_n, E_n, A_n, B_n, Q_n about c_{n+2} satisfying the chain

    C_{n+2} in D_n <~ E_n <~ A_n in C_{n+1} in P_{n+1} in B_n <~ Q_n in P_n

(<~ denoting gauge-strict inclusion).  All strictness constants are derived
from closed-form slab geometry; the attached sampled certificates are
regression checks against that arithmetic.  A reflexive-mode variant builds
the same system in a target sup-norm model around the image of K under a
diagonal injection and pulls every body back.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    CenterNotInterior,
    ConfigError,
    LipschitzUnavailable,
)
from .gauges import (
    Ball,
    Body,
    Certificate,
    Recentered,
    Scaled,
    SlabNbhd,
    StarHull,
    Sublevel,
    Tolerances,
    slab_feasible,
    slab_distance,
    strict_inclusion_d,
    strict_inclusion_mu,
    subset_certificate,
)
from .radial_maps import ComposedMap, FourBodiesMap
from .rng import SplitMix64
from .seqspace import (
    DiagonalInjection,
    NormKind,
    SUP_NORM,
    SparseVec,
    SummableFunctional,
    p_norm_kind,
)
from .smoothing import interpolate_bodies


def canonical_config(config: dict) -> str:
    return json.dumps(config, sort_keys=True, separators=(",", ":"))


def scenario_digest(config: dict) -> str:
    return hashlib.sha256(canonical_config(config).encode()).hexdigest()[:16]


@dataclass
class FunctionalTower:
    """Slab parameters C_n = N(H_n, eps/2^n) shared by every level."""

    radius: float          # ambient sup-ball radius r_C (centered at 0)
    delta0: float
    rho: float             # (1 - 2*delta0) * radius
    alpha: float           # sup of T over the rho-ball, exactly rho * mass
    eps: float
    T: SummableFunctional
    n_slabs: int
    tol: Tolerances

    def beta(self, n: int) -> float:
        return self.alpha - 1.0 / n

    def eta(self, n: int) -> float:
        return self.eps / 2.0**n

    def slab_body(self, n: int, center: SparseVec) -> SlabNbhd:
        return SlabNbhd(self.rho, self.T, self.beta(n), self.eta(n), center, self.tol)

    def in_slab_set(self, n: int, x: SparseVec) -> bool:
        return slab_feasible(self.T, x, self.eta(n), self.rho, self.beta(n))


def build_functional_tower(
    radius: float,
    delta0: float,
    T: SummableFunctional,
    n_slabs: int,
    tol: Tolerances = Tolerances(),
) -> tuple[float, FunctionalTower]:
    """Slab tower with empty total intersection; returns (eps, tower).

    eps is computed, not configured: the largest value satisfying both
    H_1 + eps*B inside (1 - delta0)C and 3*eps below the shrink gap
    delta0*radius, each with a 10% margin, capped at 0.25*delta0*radius.
    """
    if not 0.0 < delta0 < 0.5:
        raise ConfigError("delta0 must satisfy 0 < delta0 < 1/2")
    if T.attaining:
        raise ConfigError("tower functional must be non-attaining (positive tail)")
    rho = (1.0 - 2.0 * delta0) * radius
    alpha = rho * T.mass
    eps = min(0.9 * delta0 * radius, 0.9 * delta0 * radius / 3.0, 0.25 * delta0 * radius)
    tower = FunctionalTower(radius, delta0, rho, alpha, eps, T, n_slabs, tol)
    return eps, tower


def choose_centers(
    tower: FunctionalTower, count: int
) -> tuple[dict[int, SparseVec], dict[int, int]]:
    """Centers c_n = rho * (1,...,1,0,...) with m(n) leading ones.

    m(n) is the least m with rho * partial_mass(m) >= alpha - 1/(2n), which
    puts T(c_n) within 1/(2n) of the supremum while keeping c_n in every
    slab H_j for j <= n.  Interiority is certified by the exact feasibility
    test at distance zero.
    """
    centers: dict[int, SparseVec] = {}
    m_of: dict[int, int] = {}
    for n in range(1, count + 1):
        target = tower.alpha - 1.0 / (2.0 * n)
        m = 1
        while tower.rho * tower.T.partial_mass(m) < target:
            m += 1
            if m > 100_000:
                raise CenterNotInterior(f"no finite support reaches the level-{n} threshold")
        c = SparseVec({i: tower.rho for i in range(1, m + 1)})
        if n <= tower.n_slabs and not slab_feasible(tower.T, c, 0.0, tower.rho, tower.beta(n)):
            raise CenterNotInterior(f"center {n} not inside its slab")
        centers[n] = c
        m_of[n] = m
    return centers, m_of


@dataclass
class LevelBodies:
    n: int
    D: Body
    E: Body
    A: Body
    B: Body
    Q: Body
    constants: dict = field(default_factory=dict)


class TowerScenario:
    """Frozen construction: slabs, centers, P-bodies, level bodies, level maps."""

    def __init__(self):
        self.mode = "c0"
        self.config: dict = {}
        self.tol = Tolerances()
        self.K: list[SparseVec] = []
        self.T: SummableFunctional | None = None
        self.r = 0.0
        self.r_E = 1.0
        self.delta0 = 0.0
        self.N_max = 0
        self.radius = 0.0       # r_C of the ambient ball (r/2)E
        self.rho = 0.0
        self.alpha = 0.0
        self.eps = 0.0
        self.Delta = 0.0
        self.ftower: FunctionalTower | None = None
        self.centers: dict[int, SparseVec] = {}
        self.m_of: dict[int, int] = {}
        self.C: dict[int, Body] = {}
        self.V: dict[int, Body] = {}
        self.P: dict[int, Body] = {}
        self.deltas: dict[int, float] = {}
        self.delta_primes: dict[int, float] = {}
        self.lips: dict[int, float] = {}
        self.levels: dict[int, LevelBodies] = {}
        self.maps: dict[int, ComposedMap] = {}
        self.bodies: dict[str, Body] = {}
        self.certificates: list[Certificate] = []
        self.amp = 1.0
        self.seed = 0
        self.cert_budget = 48
        self.digest = ""
        self.source_norm: NormKind = SUP_NORM
        self.injection: DiagonalInjection | None = None
        self.target: "TowerScenario | None" = None

    # -- conveniences ---------------------------------------------------------

    def ambient(self) -> Body:
        """The ambient convex body (r/2)E the tower lives in."""
        return self.bodies["ambient"]

    def dist_to_K(self, x: SparseVec) -> float:
        from .seqspace import norm as _norm

        return min(_norm(x - k, self.source_norm) for k in self.K)

    def chain_certificates(self) -> list[Certificate]:
        return [c for c in self.certificates if c.name.startswith("L")]

    def constants_json(self) -> dict:
        return {
            "r_C": self.radius,
            "rho": self.rho,
            "alpha": self.alpha,
            "eps": self.eps,
            "Delta": self.Delta,
            "m": {str(n): m for n, m in sorted(self.m_of.items())},
            "delta": {str(n): d for n, d in sorted(self.deltas.items())},
            "delta_prime": {str(n): d for n, d in sorted(self.delta_primes.items())},
            "lipschitz": {str(n): m for n, m in sorted(self.lips.items())},
        }


DEFAULT_CONFIG = {
    "space": "c0",
    "K": [[]],
    "r": 8.0,
    "r_E": 1.0,
    "delta0": 0.1,
    "functional": {"head": {}, "tail": {"a": 0.5, "q": 0.5}},
    "N_max": 8,
    "seed": 42,
    "cert_budget": 48,
    "A_user": {"radius": 2.0},
    "theta": 0.25,
    "tolerances": {},
}

REFLEXIVE_EXTRAS = {"injection_weights": "1/n", "source_p": 2.0}


def normalize_config(config: dict) -> dict:
    cfg = dict(DEFAULT_CONFIG)
    cfg["tolerances"] = dict(Tolerances().to_json())
    if config.get("space") == "reflexive":
        cfg.update(REFLEXIVE_EXTRAS)
    for key, value in config.items():
        if key == "tolerances":
            cfg["tolerances"].update(value)
        else:
            cfg[key] = value
    unknown = set(cfg) - set(DEFAULT_CONFIG) - set(REFLEXIVE_EXTRAS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if cfg["space"] not in ("c0", "reflexive"):
        raise ConfigError(f"space must be 'c0' or 'reflexive', got {cfg['space']!r}")
    return cfg


def _intersection_set(parts):
    class _Both:
        def __init__(self, parts):
            self.parts = parts

        def contains(self, x):
            return all(p.contains(x) for p in self.parts)

    return _Both(list(parts))


def _build_c0_core(
    scn: TowerScenario,
    K: list[SparseVec],
    rng: SplitMix64,
    budget: int,
) -> None:
    """Slabs, centers, P-induction, level bodies and maps, for a c0-model scenario."""
    tol = scn.tol
    n_slabs = scn.N_max + 2
    eps, ftower = build_functional_tower(scn.radius, scn.delta0, scn.T, n_slabs, tol)
    scn.eps = eps
    scn.ftower = ftower
    scn.rho = ftower.rho
    scn.alpha = ftower.alpha
    scn.Delta = 2.0 * scn.radius

    for k in K:
        if k.sup_norm() > scn.rho + tol.tol_num:
            raise ConfigError("every point of K must lie in (1-2*delta0) times the ambient body")

    scn.centers, scn.m_of = choose_centers(ftower, scn.N_max + 3)
    for n in range(1, n_slabs + 1):
        scn.C[n] = ftower.slab_body(n, scn.centers[n])
        scn.bodies[f"C{n}"] = scn.C[n]

    ambient = Ball(scn.radius, SUP_NORM, SparseVec.zero(), tol)
    scn.bodies["ambient"] = ambient

    certs = scn.certificates
    for n in range(1, n_slabs):
        certs.append(
            strict_inclusion_d(
                scn.C[n + 1], scn.C[n], 0.9 * ftower.eta(n + 1), budget,
                rng.spawn(f"cert:C{n + 1}dC{n}"), name=f"L{n}:C{n + 1}_d_C{n}",
                bound=ftower.eta(n + 1),
            )
        )

    # [K, C1] + 3*eps*B inside the ambient body
    v_hull = StarHull(K, scn.C[1])
    certs.append(
        subset_certificate(
            v_hull, Ball(scn.radius - 3.0 * eps, SUP_NORM, SparseVec.zero(), tol),
            budget, rng.spawn("cert:hull3eps"), name="L0:KC1_3eps_in_ambient",
            bound=3.0 * eps,
        )
    )

    # P-sequence induction
    delta = 0.9 * min(eps / scn.Delta, 1.0)
    for n in range(1, scn.N_max + 2):
        eta_n = ftower.eta(n)
        sd = slab_distance(scn.rho, scn.T, ftower.beta(n), scn.centers[n + 1], tol)
        inradius = eta_n - sd
        if not inradius > 0.0:
            raise LipschitzUnavailable(
                f"center {n + 1} at slab distance {sd:.3g} leaves no inradius in C{n}"
            )
        M_n = 1.0 / inradius
        base = Recentered(scn.C[n], scn.centers[n + 1], tol,
                          radial_bound=M_n, lipschitz=M_n)
        V_n = StarHull(K, base)
        P_n = Sublevel(
            V_n.offset_gauge, 1.0 + delta, scn.centers[n + 1], tol,
            lipschitz=M_n / (1.0 + delta), radial_bound=M_n / (1.0 + delta),
            label=f"P{n}",
        )
        scn.V[n] = V_n
        scn.P[n] = P_n
        scn.bodies[f"P{n}"] = P_n
        scn.deltas[n] = delta
        scn.lips[n] = M_n
        d_prime = delta / (2.0 * M_n)
        scn.delta_primes[n] = d_prime
        delta = 0.9 * min(d_prime / (2.0 * scn.Delta), 1.0 / 2.0**n)

    worst_K = max(max(scn.P[n].gauge(k) for k in K) for n in range(1, scn.N_max + 2))
    certs.append(
        Certificate("L0:K_in_every_P", "subset", worst_K <= 1.0 + tol.tol_num,
                    worst_K, 0.0, 1.0, len(K) * (scn.N_max + 1))
    )
    for n in range(2, scn.N_max + 2):
        certs.append(
            strict_inclusion_d(
                scn.P[n], scn.P[n - 1], 0.9 * scn.delta_primes[n - 1] / 2.0, budget,
                rng.spawn(f"cert:P{n}dP{n - 1}"), name=f"L{n - 1}:P{n}_d_P{n - 1}",
                bound=scn.delta_primes[n - 1] / 2.0,
            )
        )
    for n in range(1, scn.N_max + 1):
        certs.append(
            strict_inclusion_d(
                scn.C[n + 1], _intersection_set([scn.P[n], scn.C[n]]),
                0.9 * ftower.eta(n + 1), budget, rng.spawn(f"cert:C{n + 1}PC{n}"),
                name=f"L{n}:C{n + 1}_d_PnCn", bound=ftower.eta(n + 1),
            )
        )
    p1_gap = 3.0 * eps - scn.deltas[1] * scn.Delta
    certs.append(
        strict_inclusion_d(
            scn.P[1], ambient, 0.9 * p1_gap, budget, rng.spawn("cert:P1ambient"),
            name="L1:P1_d_ambient", bound=p1_gap,
        )
    )

    # level bodies and maps
    for n in range(1, scn.N_max + 1):
        lb = build_level_bodies(scn, n, rng, budget)
        scn.levels[n] = lb
        for tag in "DEABQ":
            scn.bodies[f"{tag}{n}"] = getattr(lb, tag)
        scn.maps[n] = _build_level_map(scn, n)


def build_level_bodies(
    scn: TowerScenario, n: int, rng: SplitMix64, budget: int
) -> LevelBodies:
    """Three interpolation passes produce the level-n smooth bodies.

    (C_{n+2}, C_{n+1}) -> D_n, E_n; (E_n, C_{n+1}) -> A_n; (P_{n+1}, P_n) ->
    B_n, Q_n; all about c_{n+2} (P_n enters the last pass as a mere set).
    """
    tol = scn.tol
    c = scn.centers[n + 2]
    certs = scn.certificates
    ft = scn.ftower

    gap1 = ft.eta(n + 2)  # exact: C_{n+2} fattens by eta(n+1) - eta(n+2) inside C_{n+1}
    R_slab = 2.0 * scn.rho + scn.eps
    res1 = interpolate_bodies(
        scn.C[n + 2], scn.C[n + 1], gap1, c, rng.spawn(f"L{n}:DE"),
        outer_radius=R_slab, budget=budget, label=f"L{n}:DE",
    )
    D_n, E_n = res1.D1, res1.D2

    res2 = interpolate_bodies(
        E_n, scn.C[n + 1], res1.dist_out, c, rng.spawn(f"L{n}:A"),
        outer_radius=R_slab * 1.25, budget=budget, label=f"L{n}:A", check_gap=False,
    )
    A_n = res2.D1

    gap3 = scn.delta_primes[n] / 2.0
    R_P = scn.radius + scn.rho
    res3 = interpolate_bodies(
        scn.P[n + 1], scn.P[n], gap3, c, rng.spawn(f"L{n}:BQ"),
        outer_radius=R_P, budget=budget, label=f"L{n}:BQ",
    )
    B_n, Q_n = res3.D1, res3.D2

    certs.extend(res1.certificates)
    certs.extend(res2.certificates)
    certs.extend(res3.certificates)
    certs.append(subset_certificate(A_n, scn.C[n + 1], budget, rng.spawn(f"L{n}:AinC"),
                                    name=f"L{n}:A_in_C{n + 1}"))
    certs.append(subset_certificate(scn.C[n + 1], scn.P[n + 1], budget,
                                    rng.spawn(f"L{n}:CinP"), name=f"L{n}:C{n + 1}_in_P{n + 1}"))
    certs.append(subset_certificate(E_n, B_n, budget, rng.spawn(f"L{n}:EinB"),
                                    name=f"L{n}:E_in_B"))
    certs.append(subset_certificate(Q_n, scn.P[n], budget, rng.spawn(f"L{n}:QinP"),
                                    name=f"L{n}:Q_in_P{n}"))

    # dilation allowance of A_n inside Q_n: A_n in C_{n+1} in P_{n+1}, and
    # sup_{P_{n+1}} mu_B <= 1/(1+s3), Q_n = (1+g3)B_n
    s3 = res3.slack_inner
    g3 = res3.gamma_outer
    allowance_AQ = (1.0 + s3) * (1.0 + g3) - 1.0
    aq_cert = strict_inclusion_mu(
        A_n, Q_n, budget, rng.spawn(f"L{n}:AQ"),
        margin=min(tol.margin, 0.25 * allowance_AQ),
        name=f"L{n}:A_mu_Q", bound=1.0 / (1.0 + allowance_AQ),
    )
    certs.append(aq_cert)

    constants = {
        "slack_DE": res1.gamma_outer / (1.0 + res1.gamma_outer),
        "allowance_BQ": g3,
        "allowance_AQ": allowance_AQ,
        "gap_slab": gap1,
        "gap_P": gap3,
        "eps_rel_DE": res1.eps_rel,
        "eps_rel_BQ": res3.eps_rel,
    }
    return LevelBodies(n, D_n, E_n, A_n, B_n, Q_n, constants)


def _build_level_map(scn: TowerScenario, n: int) -> ComposedMap:
    lb = scn.levels[n]
    cns = lb.constants
    f_n = FourBodiesMap.from_slacks(
        lb.D, lb.E, lb.B, lb.Q,
        slack_inner=cns["slack_DE"], allowance_outer=cns["allowance_BQ"],
        tol=scn.tol, name=f"f{n}",
    )
    g_n = FourBodiesMap.from_slacks(
        lb.D, lb.E, lb.A, lb.Q,
        slack_inner=cns["slack_DE"], allowance_outer=cns["allowance_AQ"],
        tol=scn.tol, name=f"g{n}",
    )
    return ComposedMap(inner=f_n, outer=g_n, name=f"h{n}")


def build_scenario(config: dict) -> TowerScenario:
    """Build and freeze a scenario from its JSON config (both modes)."""
    cfg = normalize_config(config)
    if cfg["space"] == "reflexive":
        return build_reflexive_scenario(cfg)

    scn = TowerScenario()
    scn.mode = "c0"
    scn.config = cfg
    scn.digest = scenario_digest(cfg)
    scn.tol = Tolerances.from_json(cfg["tolerances"])
    scn.T = SummableFunctional.from_json(cfg["functional"])
    scn.K = [SparseVec.from_json(k) for k in cfg["K"]]
    scn.r = float(cfg["r"])
    scn.r_E = float(cfg["r_E"])
    scn.delta0 = float(cfg["delta0"])
    scn.N_max = int(cfg["N_max"])
    scn.seed = int(cfg["seed"])
    scn.cert_budget = int(cfg["cert_budget"])
    scn.radius = scn.r * scn.r_E / 2.0
    scn.amp = 2.0 * scn.r
    scn.source_norm = SUP_NORM
    if scn.N_max < 1:
        raise ConfigError("N_max must be at least 1")

    rng = SplitMix64(scn.seed)
    _build_c0_core(scn, scn.K, rng, scn.cert_budget)
    return scn


def build_reflexive_scenario(config: dict) -> TowerScenario:
    """Case of a reflexive source model: build the tower in the c0 target
    around the image of K and pull every body back through the injection."""
    cfg = normalize_config(config)
    inj = DiagonalInjection(
        law=cfg.get("injection_weights", "1/n"),
        source_norm=p_norm_kind(float(cfg.get("source_p", 2.0))),
        target_norm=SUP_NORM,
    )
    K_src = [SparseVec.from_json(k) for k in cfg["K"]]
    K_tgt = [inj(k) for k in K_src]

    target_cfg = dict(cfg)
    target_cfg["space"] = "c0"
    target_cfg["K"] = [k.to_json() for k in K_tgt]
    target_cfg.pop("injection_weights", None)
    target_cfg.pop("source_p", None)
    target = build_scenario(target_cfg)

    scn = TowerScenario()
    scn.mode = "reflexive"
    scn.config = cfg
    scn.digest = scenario_digest(cfg)
    scn.tol = target.tol
    scn.T = target.T
    scn.K = K_src
    scn.r = target.r
    scn.r_E = target.r_E
    scn.delta0 = target.delta0
    scn.N_max = target.N_max
    scn.seed = target.seed
    scn.cert_budget = target.cert_budget
    scn.radius = target.radius
    scn.rho = target.rho
    scn.alpha = target.alpha
    scn.eps = target.eps
    scn.Delta = target.Delta
    scn.ftower = target.ftower
    scn.m_of = dict(target.m_of)
    scn.deltas = dict(target.deltas)
    scn.delta_primes = dict(target.delta_primes)
    scn.lips = dict(target.lips)
    scn.amp = target.amp
    scn.source_norm = inj.source_norm
    scn.injection = inj
    scn.target = target

    from .gauges import PullbackBody

    def pull(body: Body) -> Body:
        return PullbackBody(inj, body, scn.tol)

    scn.centers = {n: inj.preimage(c) for n, c in target.centers.items()}
    for n, b in target.C.items():
        scn.C[n] = pull(b)
        scn.bodies[f"C{n}"] = scn.C[n]
    for n, b in target.P.items():
        scn.P[n] = pull(b)
        scn.bodies[f"P{n}"] = scn.P[n]
    for n, b in target.V.items():
        scn.V[n] = pull(b)
    scn.bodies["ambient"] = pull(target.bodies["ambient"])

    rng = SplitMix64(scn.seed)
    budget = max(8, scn.cert_budget // 2)
    for n, lb in target.levels.items():
        pulled = LevelBodies(
            n, pull(lb.D), pull(lb.E), pull(lb.A), pull(lb.B), pull(lb.Q),
            dict(lb.constants),
        )
        scn.levels[n] = pulled
        for tag in "DEABQ":
            scn.bodies[f"{tag}{n}"] = getattr(pulled, tag)
        scn.maps[n] = _build_level_map(scn, n)

    # gauge-strict inclusions transfer through the injection: the source sup
    # is dominated by the target sup.  Record source-sampled certificates
    # whose bound field carries the target observation for the transfer law.
    for n, lb in scn.levels.items():
        tgt_lb = target.levels[n]
        for (src_a, src_b, tgt_name, label) in (
            (lb.D, lb.E, f"L{n}:DE:D1_mu_D2", f"L{n}:transfer:D_mu_E"),
            (lb.B, lb.Q, f"L{n}:BQ:D1_mu_D2", f"L{n}:transfer:B_mu_Q"),
            (lb.E, lb.A, f"L{n}:A:C1_mu_D1", f"L{n}:transfer:E_mu_A"),
        ):
            tgt_cert = next(c for c in target.certificates if c.name == tgt_name)
            cert = strict_inclusion_mu(
                src_a, src_b, budget, rng.spawn(label),
                margin=tgt_cert.margin, name=label, bound=tgt_cert.observed,
            )
            scn.certificates.append(cert)
    scn.certificates.extend(target.certificates)
    return scn
