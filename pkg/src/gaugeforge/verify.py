"""Property-test suites and independent brute-force oracles, packaged as
runnable checks with machine-readable reports.

Reports are reproducible bit-for-bit given (seed, scenario digest, budget):
the RNG is the documented SplitMix64 scheme, per-check streams are derived
from the seed and the check name (never from call order), records are sorted
by check id, and wall time is kept out of the serialized payload.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

from .deletion import DeletionMap, TheoremMap
from .errors import DomainTruncation, UnknownSuite
from .gauges import (
    Ball,
    Body,
    ConeHull,
    PullbackBody,
    Scaled,
    StarHull,
    Sublevel,
    gauge_from_membership,
)
from .rng import SplitMix64, random_direction, random_sparse
from .seqspace import SUP_NORM, SparseVec, SummableFunctional, norm
from .tower import TowerScenario, build_functional_tower, choose_centers


@dataclass
class CheckRecord:
    check_id: str
    passed: bool
    observed: float
    bound: float
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        obj = {
            "check_id": self.check_id,
            "passed": self.passed,
            "observed": self.observed,
            "bound": self.bound,
        }
        if self.detail:
            obj["detail"] = self.detail
        return obj


@dataclass
class VerificationReport:
    suite: str
    seed: int
    budget: int
    scenario_digest: str
    records: list[CheckRecord]
    wall_time_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def to_jsonl(self) -> str:
        """One line per record plus a summary line; excludes wall time so the
        payload is bit-for-bit reproducible."""
        lines = [json.dumps(r.to_json(), sort_keys=True) for r in
                 sorted(self.records, key=lambda r: r.check_id)]
        lines.append(json.dumps({
            "suite": self.suite,
            "seed": self.seed,
            "budget": self.budget,
            "scenario_digest": self.scenario_digest,
            "total": len(self.records),
            "failed": sum(not r.passed for r in self.records),
            "passed": self.passed,
        }, sort_keys=True))
        return "\n".join(lines) + "\n"


@dataclass
class VerifyContext:
    scenario: TowerScenario
    deletion: DeletionMap
    theorem: TheoremMap | None = None


def brute_gauge_oracle(body: Body, x: SparseVec, grid: int = 64) -> float:
    """Gauge by dense scan plus bisection on t along the ray, membership-only.

    Independent of any closed form: the only question it asks the body is
    membership, so it validates the closed-form gauges.
    """
    u = x - body.center
    if u.is_zero():
        return 0.0
    member = lambda t: body.contains(body.center + u.scale(1.0 / t))
    t_hi = 1.0
    doublings = 0
    while not member(t_hi):
        t_hi *= 2.0
        doublings += 1
        if doublings > 200:
            from .errors import NoBracket

            raise NoBracket("brute oracle found no membership along the ray")
    # dense scan for the earliest member on the grid, then bisect inside it
    lo, hi = 0.0, t_hi
    for k in range(1, grid + 1):
        t = t_hi * k / grid
        if member(t):
            hi = t
            lo = t_hi * (k - 1) / grid
            break
    return gauge_from_membership(member, hi, body.tol) if lo == 0.0 else _bisect(member, lo, hi, body.tol)


def _bisect(member, lo, hi, tol):
    while hi - lo > tol.tol_gauge * hi:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if member(mid):
            hi = mid
        else:
            lo = mid
    return hi


# --------------------------------------------------------------------------
# suites
# --------------------------------------------------------------------------

def _suite_gauge_axioms(ctx: VerifyContext, rng: SplitMix64, budget: int) -> list[CheckRecord]:
    scn = ctx.scenario
    records = []
    names = ["C1", "P1", "D1", "B1"]
    amp = scn.amp
    for bname in names:
        body = scn.bodies[bname]
        r = rng.spawn(f"axioms:{bname}")
        worst_h = 0.0
        worst_mem = True
        for _ in range(max(budget // 8, 1)):
            u = random_sparse(r, amp)
            g1 = body.offset_gauge(u)
            for s in (0.5, 2.0, 10.0):
                gs = body.offset_gauge(u.scale(s))
                err = abs(gs - s * g1)
                worst_h = max(worst_h, err / (1.0 + s * g1))
            x = body.center + u
            inside = body.contains(x)
            if inside != (body.gauge(x) <= 1.0 + scn.tol.tol_num):
                worst_mem = False
        records.append(CheckRecord(f"gauge_axioms:{bname}:homogeneity", worst_h <= 64 * scn.tol.tol_gauge + scn.tol.tol_num,
                                   worst_h, scn.tol.tol_num))
        records.append(CheckRecord(f"gauge_axioms:{bname}:membership_iff", worst_mem, float(worst_mem), 1.0))
        g0 = body.offset_gauge(SparseVec.zero())
        records.append(CheckRecord(f"gauge_axioms:{bname}:center_zero", g0 == 0.0, g0, 0.0))
    # monotonicity: A inside B implies mu_B <= mu_A
    r = rng.spawn("axioms:monotone")
    body = scn.bodies["C1"]
    bigger = Scaled(body, 1.25)
    worst = 0.0
    for _ in range(budget):
        u = random_sparse(r, amp)
        worst = max(worst, bigger.offset_gauge(u) - body.offset_gauge(u))
    records.append(CheckRecord("gauge_axioms:monotonicity", worst <= scn.tol.tol_num,
                               worst, scn.tol.tol_num))
    return records


def _gauge_oracle_pairs(scn: TowerScenario, rng: SplitMix64):
    tol = scn.tol
    ball = Ball(1.0, SUP_NORM, SparseVec.zero(), tol)
    scaled = Scaled(Ball(2.0, SUP_NORM, SparseVec.zero(), tol), 1.75)
    cone = ConeHull(SparseVec({1: 3.0}), Ball(1.0, SUP_NORM, SparseVec.zero(), tol))
    star = StarHull([SparseVec({1: 3.0}), SparseVec({1: -3.0, 2: 1.0})],
                    Ball(1.0, SUP_NORM, SparseVec.zero(), tol))
    from .seqspace import DiagonalInjection

    pull = PullbackBody(DiagonalInjection(), Ball(1.0, SUP_NORM, SparseVec.zero(), tol), tol)
    return {"ball": ball, "scaled": scaled, "cone_hull": cone, "star_hull": star,
            "pullback": pull}


def _suite_gauge_oracle(ctx: VerifyContext, rng: SplitMix64, budget: int) -> list[CheckRecord]:
    scn = ctx.scenario
    records = []
    for name, body in _gauge_oracle_pairs(scn, rng).items():
        r = rng.spawn(f"oracle:{name}")
        worst = 0.0
        bad = None
        for _ in range(budget):
            x = body.center + random_sparse(r, 4.0)
            g = body.gauge(x)
            b = brute_gauge_oracle(body, x)
            rel = abs(g - b) / max(1e-12, abs(b))
            if rel > worst:
                worst, bad = rel, x
        rec = CheckRecord(f"gauge_oracle:{name}", worst <= 1e-6, worst, 1e-6)
        if not rec.passed and bad is not None:
            rec.detail = {"point": bad.to_json()}
        records.append(rec)
    return records


def _suite_lemma1_fattening(ctx, rng, budget):
    scn = ctx.scenario
    V = scn.V[1]
    M = scn.lips[1]
    records = []
    for eps in (0.5, 0.1):
        delta = 0.9 * eps / M
        r = rng.spawn(f"fatten:{eps}")
        worst = 0.0
        for _ in range(budget):
            d = random_direction(r)
            p = V.boundary_point(d)
            if p is None:
                continue
            probe = p.axpy(delta, random_direction(r))
            worst = max(worst, V.gauge(probe))
        records.append(CheckRecord(f"lemma1_fattening:eps_{eps}",
                                   worst <= 1.0 + eps + scn.tol.tol_num, worst, 1.0 + eps))
    return records


def _suite_lemma3_lipschitz(ctx, rng, budget):
    scn = ctx.scenario
    records = []
    for n in (1, 2):
        V = scn.V[n]
        M = scn.lips[n]
        r = rng.spawn(f"lip:{n}")
        worst = 0.0
        for _ in range(budget):
            x = V.center + random_sparse(r, scn.amp)
            z = x + random_sparse(r, 0.5)
            lhs = abs(V.gauge(x) - V.gauge(z))
            rhs = M * (x - z).sup_norm() + scn.tol.tol_num + 1e-6 * max(V.gauge(x), 1.0)
            worst = max(worst, lhs - rhs)
        records.append(CheckRecord(f"lemma3_lipschitz:V{n}", worst <= 0.0, worst, 0.0))
    return records


def _concentric_four_bodies(tol):
    from .radial_maps import FourBodiesMap

    z = SparseVec.zero()
    return FourBodiesMap(
        Ball(0.5, SUP_NORM, z, tol), Ball(1.0, SUP_NORM, z, tol),
        Ball(2.0, SUP_NORM, z, tol), Ball(3.0, SUP_NORM, z, tol),
        delta=0.2, tol=tol, name="concentric",
    )


def _suite_four_bodies(ctx, rng, budget):
    scn = ctx.scenario
    m = _concentric_four_bodies(scn.tol)
    records = []
    r = rng.spawn("fb:boundary")
    worst = 0.0
    for _ in range(budget):
        d = random_direction(r)
        p = m.B.boundary_point(d)
        if p is None:
            continue
        worst = max(worst, abs(m.C.gauge(m.forward(p)) - 1.0))
    records.append(CheckRecord("four_bodies:boundary_maps_B_to_C", worst <= 1e-6, worst, 1e-6))

    r = rng.spawn("fb:identity")
    ok = True
    for _ in range(budget):
        d = random_direction(r)
        inner = m.center + d.scale(0.5 * rng.uniform(0.1, 1.0 - m.delta) / max(d.sup_norm(), 1e-9))
        outer = m.center + d.scale((3.5 + rng.uniform(0.0, 3.0)) / max(d.sup_norm(), 1e-9))
        if m.forward(inner) != inner or m.forward(outer) != outer:
            ok = False
    records.append(CheckRecord("four_bodies:identity_zones_exact", ok, float(ok), 1.0))

    r = rng.spawn("fb:roundtrip")
    worst = 0.0
    for _ in range(budget):
        x = random_sparse(r, 3.0)
        y = m.forward(x)
        worst = max(worst, (m.inverse(y) - x).sup_norm())
    records.append(CheckRecord("four_bodies:roundtrip", worst <= scn.tol.tol_map, worst,
                               scn.tol.tol_map))
    return records


def _suite_seam(ctx, rng, budget):
    scn = ctx.scenario
    m = _concentric_four_bodies(scn.tol)
    r = rng.spawn("seam")
    worst = 0.0
    for _ in range(budget):
        d = random_direction(r)
        p = m.B.boundary_point(d)
        if p is None:
            continue
        t = 1.0 + rng.uniform(0.0, 0.25 * m.delta)
        x = m.center + (p - m.center).scale(t)
        res = m.seam_residual(x) / (1.0 + (x - m.center).sup_norm())
        worst = max(worst, res)
    return [CheckRecord("seam:f_equals_g_inverse", worst <= 1e-7, worst, 1e-7)]


def _suite_tower_chain(ctx, rng, budget):
    scn = ctx.scenario
    records = []
    for cert in scn.certificates:
        passed = cert.holds
        records.append(CheckRecord(f"tower_chain:{cert.name}", passed, cert.observed,
                                   1.0 - cert.margin if cert.kind == "mu" else cert.observed,
                                   {"kind": cert.kind, "margin": cert.margin}))
    return records


def _probe_set(scn: TowerScenario, rng: SplitMix64, count: int) -> list[SparseVec]:
    probes = []
    r = rng.spawn("probes")
    while len(probes) < count:
        probes.append(random_sparse(r, scn.amp))
    return probes


def _suite_tower_empty_intersection(ctx, rng, budget):
    scn = ctx.scenario
    ft = scn.ftower
    count = max(budget, 1)
    probes = _probe_set(scn, rng, count)
    # a few adversarial probes partway up the functional's range
    for m in (1, 2, 4):
        probes.append(SparseVec({i: scn.rho for i in range(1, m + 1)}))
    records = []
    worst_exit = 0
    all_exit = True
    monotone = True
    for idx, p in enumerate(probes):
        exit_level = None
        prev_in = True
        for n in range(1, scn.N_max + 1):
            inside = ft.in_slab_set(n, p) if scn.mode == "c0" else ft.in_slab_set(
                n, scn.injection(p))
            if inside and not prev_in:
                monotone = False
            prev_in = inside
            if not inside:
                exit_level = n
                break
        if exit_level is None:
            all_exit = False
        else:
            worst_exit = max(worst_exit, exit_level)
    records.append(CheckRecord("tower_empty_intersection:all_probes_exit", all_exit,
                               float(worst_exit), float(scn.N_max)))
    records.append(CheckRecord("tower_empty_intersection:membership_monotone", monotone,
                               float(monotone), 1.0))
    return records


def _suite_finite_dim_negative_control(ctx, rng, budget):
    """PASSES by detecting the expected failure: a truncated (sup-attaining)
    functional leaves its box maximizer inside every slab level."""
    scn = ctx.scenario
    T10 = SummableFunctional.truncated(scn.T, 10)
    from .gauges import slab_feasible

    rho, radius = scn.rho, scn.radius
    alpha10 = rho * T10.mass
    eps = scn.eps
    maximizer = SparseVec({i: rho for i in range(1, 11)})
    stayed = all(
        slab_feasible(T10, maximizer, eps / 2.0**n, rho, alpha10 - 1.0 / n)
        for n in range(1, scn.N_max + 1)
    )
    records = [
        CheckRecord("finite_dim_negative_control:sup_attained", T10.attaining,
                    float(T10.attaining), 1.0),
        CheckRecord("finite_dim_negative_control:maximizer_never_exits", stayed,
                    float(stayed), 1.0),
    ]
    return records


def _admissible_points(ctx, rng, count):
    scn = ctx.scenario
    dmap = ctx.deletion
    pts = []
    r = rng.spawn("admissible")
    tries = 0
    while len(pts) < count and tries < 50 * count:
        tries += 1
        y = random_sparse(r, scn.amp)
        if dmap.locate_inverse_shell(y) is not None and dmap.locate_shell(y) is not None:
            pts.append(y)
    return pts


def _suite_deletion_roundtrip(ctx, rng, budget):
    scn = ctx.scenario
    dmap = ctx.deletion
    records = []
    worst = 0.0
    for y in _admissible_points(ctx, rng, budget):
        n = dmap.locate_inverse_shell(y)
        res = (dmap.psi(dmap.psi_inverse(y)) - y).sup_norm() / max(1, n)
        worst = max(worst, res)
    records.append(CheckRecord("deletion_roundtrip:psi_o_Psi", worst <= 1e-6, worst, 1e-6))
    if ctx.theorem is not None:
        h = ctx.theorem
        worst_h = 0.0
        r = rng.spawn("roundtrip:h")
        done = 0
        tries = 0
        while done < budget and tries < 50 * max(budget, 1):
            tries += 1
            x = random_sparse(r, 2.0 * h.A_user.gauge(SparseVec.zero()) + 4.0)
            try:
                y = h.forward(x)
                back = h.inverse(y)
            except DomainTruncation:
                continue
            z = h.G.forward(x)
            level = max(1, h.deletion.locate_inverse_shell(z) or 1)
            worst_h = max(worst_h, (back - x).sup_norm() / level)
            done += 1
        records.append(CheckRecord("deletion_roundtrip:h_inv_o_h", worst_h <= 1e-6,
                                   worst_h, 1e-6))
    return records


def _suite_deletion_identity_zone(ctx, rng, budget):
    scn = ctx.scenario
    dmap = ctx.deletion
    records = []
    r = rng.spawn("idzone:Psi")
    exact = True
    for _ in range(budget):
        d = random_direction(r)
        p = scn.P[1].boundary_point(d)
        if p is None:
            continue
        y = scn.P[1].center + (p - scn.P[1].center).scale(1.0 + rng.uniform(0.2, 2.0))
        if dmap.psi_inverse(y) != y or dmap.psi(y) != y:
            exact = False
    records.append(CheckRecord("deletion_identity_zone:Psi_outside_P1", exact,
                               float(exact), 1.0))
    if ctx.theorem is not None:
        h = ctx.theorem
        exact_h = True
        r = rng.spawn("idzone:h")
        for _ in range(budget):
            d = random_direction(r)
            p = h.A_user.boundary_point(d)
            if p is None:
                continue
            x = h.A_user.center + (p - h.A_user.center).scale(1.0 + rng.uniform(0.05, 2.0))
            if h.forward(x) != x or h.inverse(x) != x:
                exact_h = False
        records.append(CheckRecord("deletion_identity_zone:h_outside_A_user", exact_h,
                                   float(exact_h), 1.0))
    return records


def _suite_deletion_avoids_K(ctx, rng, budget):
    scn = ctx.scenario
    dmap = ctx.deletion
    records = []
    min_dist = math.inf
    truncated_far = 0
    r = rng.spawn("mesh")
    distances = (1e-1, 1e-2, 1e-3, 1e-4)
    for ki, k in enumerate(scn.K):
        for ray in range(5):
            d = random_direction(r, scn.source_norm)
            for t in distances:
                y = k.axpy(t, d)
                try:
                    out = dmap.psi_inverse(y)
                    min_dist = min(min_dist, scn.dist_to_K(out))
                except DomainTruncation:
                    if t >= 1e-3:
                        truncated_far += 1
                if ctx.theorem is not None:
                    try:
                        out = ctx.theorem.forward(y)
                        min_dist = min(min_dist, scn.dist_to_K(out))
                    except DomainTruncation:
                        if t >= 1e-3:
                            truncated_far += 1
    for k in scn.K:
        try:
            out = dmap.psi_inverse(k)
            min_dist = min(min_dist, scn.dist_to_K(out))
        except DomainTruncation:
            truncated_far += 1
    records.append(CheckRecord("deletion_avoids_K:outputs_clear_of_K",
                               min_dist >= 1e-6, min_dist, 1e-6))
    records.append(CheckRecord("deletion_avoids_K:no_truncation_above_1e-3",
                               truncated_far == 0, float(truncated_far), 0.0))
    return records


def _suite_pullback_transfer(ctx, rng, budget):
    scn = ctx.scenario
    records = []
    if scn.mode != "reflexive":
        return [CheckRecord("pullback_transfer:not_applicable", True, 0.0, 0.0)]
    for cert in scn.certificates:
        if ":transfer:" not in cert.name:
            continue
        passed = cert.observed <= cert.bound + 1e-9
        records.append(CheckRecord(f"pullback_transfer:{cert.name}", passed,
                                   cert.observed, cert.bound))
    return records


SUITES = {
    "gauge_axioms": _suite_gauge_axioms,
    "gauge_oracle": _suite_gauge_oracle,
    "lemma1_fattening": _suite_lemma1_fattening,
    "lemma3_lipschitz": _suite_lemma3_lipschitz,
    "four_bodies": _suite_four_bodies,
    "seam": _suite_seam,
    "tower_chain": _suite_tower_chain,
    "tower_empty_intersection": _suite_tower_empty_intersection,
    "finite_dim_negative_control": _suite_finite_dim_negative_control,
    "deletion_roundtrip": _suite_deletion_roundtrip,
    "deletion_identity_zone": _suite_deletion_identity_zone,
    "deletion_avoids_K": _suite_deletion_avoids_K,
    "pullback_transfer": _suite_pullback_transfer,
}


def run_suite(name: str, ctx: VerifyContext, seed: int, budget: int) -> VerificationReport:
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; known: {sorted(SUITES)}")
    start = time.perf_counter()
    records = [] if budget <= 0 else SUITES[name](ctx, SplitMix64(seed).spawn(name), budget)
    wall = time.perf_counter() - start
    return VerificationReport(name, seed, budget, ctx.scenario.digest, records, wall)
