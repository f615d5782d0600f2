"""Smooth surrogates of gauges and the approximation/separation/interpolation
constructors built from them.

The surrogate of a gauge is produced by homogenization: take a reference
body B about the same center and set psi(x) = mu_B(x) * g(x / mu_B(x)) for a
function g that approximates the gauge on the boundary of B.  Where the
gauge has explicit min/max structure an analytic smoothing is substituted
(softmin with temperature tau over the cone gauges of a star hull; a p-norm
for the sup norm); elsewhere g is the gauge itself.  In every case the
deliverable is the certified relative-error contract
|psi(x) - mu_C(x)| <= eps0 * mu_C(x), checked by sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import BadGap, BadSeparation, CertificateFailure, ConfigError, SmoothingBudget
from .gauges import (
    Ball,
    Body,
    Certificate,
    HasMembership,
    Scaled,
    StarHull,
    Sublevel,
    Tolerances,
    strict_inclusion_d,
    strict_inclusion_mu,
)
from .rng import SplitMix64, random_direction, random_sparse
from .seqspace import SparseVec


def _softmin(vals: Sequence[float], tau: float) -> float:
    vmin = min(vals)
    s = sum(math.exp(-(v - vmin) / tau) for v in vals)
    return vmin - tau * math.log(s)


def _unwrap_scaling(body: Body) -> tuple[Body, float]:
    """Follow Scaled wrappers down to the core body; returns (core, total factor)."""
    factor = 1.0
    while isinstance(body, Scaled):
        factor *= body.factor
        body = body.base
    return body, factor


@dataclass
class HomogenizedGauge:
    """Positively homogeneous surrogate psi of a body's gauge.

    surrogate: "pnorm" (sup-norm core), "softmin" (star-hull core with at
    least two apexes), or "exact" (identity surrogate; zero error).
    """

    body: Body
    eps0: float
    surrogate: str
    p_exponent: int | None = None
    eff_radius: float | None = None
    tau: float | None = None
    star: StarHull | None = None
    star_scale: float = 1.0

    @property
    def center(self) -> SparseVec:
        return self.body.center

    def offset_value(self, u: SparseVec) -> float:
        if u.is_zero():
            return 0.0
        if self.surrogate == "pnorm":
            return u.p_norm(self.p_exponent) / self.eff_radius
        if self.surrogate == "softmin":
            # homogenize through the sup-ball: psi(u) = |u| * g(u/|u|)
            h = u.sup_norm()
            z = u.scale(1.0 / h)
            vals = [c.offset_gauge(z) / self.star_scale for c in self.star.cones]
            return h * _softmin(vals, self.tau)
        return self.body.offset_gauge(u)

    def __call__(self, x: SparseVec) -> float:
        return self.offset_value(x - self.center)


def _pnorm_exponent(eps0: float, support_bound: int) -> int:
    # ||u||_P / ||u||_sup <= S**(1/P); keep that factor within 1 + eps0/2.
    target = math.log(max(support_bound, 2)) / math.log1p(0.5 * eps0)
    p = max(16, int(math.ceil(target)))
    return p + (p % 2)


def make_homogenized(
    C: Body,
    eps0: float,
    rng: SplitMix64,
    support_bound: int | None = None,
    sphere_budget: int = 128,
) -> HomogenizedGauge:
    """Build the surrogate for a body, choosing the smoothing by its structure."""
    if not 0.0 < eps0 < 1.0:
        raise ConfigError("relative error budget must lie in (0, 1)")
    support_bound = support_bound or C.tol.support_bound
    core, factor = _unwrap_scaling(C)

    if isinstance(core, Ball) and core.norm_kind.kind == "sup":
        return HomogenizedGauge(
            body=C,
            eps0=eps0,
            surrogate="pnorm",
            p_exponent=_pnorm_exponent(eps0, support_bound),
            eff_radius=core.radius * factor,
        )

    if isinstance(core, StarHull) and len(core.points) >= 2:
        # certified lower bound of mu_C on the sup-unit sphere, sampled with
        # safety factor 0.5; tau * ln|K| stays below eps0 * that bound.
        m = math.inf
        for _ in range(sphere_budget):
            d = random_direction(rng)
            m = min(m, C.offset_gauge(d))
        if not (m > 0.0) or not math.isfinite(m):
            raise SmoothingBudget("no positive lower bound for the gauge on the sphere")
        tau = 0.5 * eps0 * m / math.log(len(core.points))
        if tau < 1e-14:
            raise SmoothingBudget(f"softmin temperature {tau:.3g} underflows")
        return HomogenizedGauge(
            body=C, eps0=eps0, surrogate="softmin", tau=tau, star=core, star_scale=factor
        )

    return HomogenizedGauge(body=C, eps0=eps0, surrogate="exact")


def certify_relative_error(
    hg: HomogenizedGauge,
    rng: SplitMix64,
    budget: int,
    amp: float,
    name: str = "smoothing_rel_error",
) -> Certificate:
    """Check |psi - mu_C| <= eps0 * mu_C on random offsets."""
    worst = 0.0
    bad = None
    for _ in range(budget):
        u = random_sparse(rng, amp)
        mu = hg.body.offset_gauge(u)
        if mu <= 1e-12:
            continue
        rel = abs(hg.offset_value(u) - mu) / mu
        if rel > worst:
            worst = rel
            bad = u
    holds = worst <= hg.eps0 + hg.body.tol.tol_num
    detail = {} if holds or bad is None else {"worst_offset": bad.to_json()}
    return Certificate(name, "value", holds, worst, hg.eps0, hg.eps0, budget, detail)


@dataclass
class SmoothedBody(Sublevel):
    """Sublevel body {psi <= 1} of a homogenized surrogate gauge."""

    def __init__(self, hg: HomogenizedGauge, label: str = "smooth"):
        C = hg.body
        lip = None if C.lipschitz is None else C.lipschitz * (1.0 + hg.eps0)
        rad = None if C.radial_bound is None else C.radial_bound * (1.0 + hg.eps0)
        super().__init__(
            hg.offset_value, 1.0, C.center, C.tol,
            lipschitz=lip, radial_bound=rad, label=label,
        )
        self.homogenized = hg


@dataclass
class ApproximationResult:
    body: Body
    eps0: float
    certificates: list[Certificate]


def approximate_body(
    C: Body,
    delta: float,
    rng: SplitMix64,
    budget: int = 200,
    amp: float | None = None,
    label: str = "smooth",
    enforce: bool = True,
) -> ApproximationResult:
    """Smooth surrogate body A with (1-delta)C subset A subset (1+delta)C.

    eps0 is chosen so that 1/(1-eps0) < 1+delta and 1+eps0 < 1/(1-delta),
    with a 10% safety margin; both inclusion certificates are attached.
    """
    if not 0.0 < delta < 1.0:
        raise ConfigError("approximation delta must lie in (0, 1)")
    eps0 = 0.9 * delta / (1.0 + delta)
    hg = make_homogenized(C, eps0, rng.spawn(f"homog:{label}"))
    amp = amp if amp is not None else 4.0
    certs = [certify_relative_error(hg, rng.spawn(f"relerr:{label}"), budget, amp,
                                    name=f"{label}:rel_error")]
    A = SmoothedBody(hg, label=label)

    # (1-delta)C subset A: psi <= (1+eps0)(1-delta) < 1 on its boundary
    lower_slack = 1.0 - (1.0 + eps0) * (1.0 - delta)
    certs.append(
        strict_inclusion_mu(
            Scaled(C, 1.0 - delta), A, budget, rng.spawn(f"lower:{label}"),
            margin=min(C.tol.margin, 0.5 * lower_slack),
            name=f"{label}:inner_inclusion",
            bound=(1.0 + eps0) * (1.0 - delta),
        )
    )
    # A subset (1+delta)C: mu_C <= 1/(1-eps0) on the boundary of A
    upper_slack = 1.0 - 1.0 / ((1.0 - eps0) * (1.0 + delta))
    certs.append(
        strict_inclusion_mu(
            A, Scaled(C, 1.0 + delta), budget, rng.spawn(f"upper:{label}"),
            margin=min(C.tol.margin, 0.5 * upper_slack),
            name=f"{label}:outer_inclusion",
            bound=1.0 / ((1.0 - eps0) * (1.0 + delta)),
        )
    )
    if enforce:
        for c in certs:
            if not c.holds:
                raise CertificateFailure(f"{c.name}: observed {c.observed:.6g}")
    return ApproximationResult(A, eps0, certs)


@dataclass
class SeparationResult:
    D1: Body
    D2: Body
    certificates: list[Certificate]
    delta: float
    eps: float


def separate_compactum(
    K: Sequence[SparseVec],
    D: Body,
    theta: float,
    rng: SplitMix64,
    budget: int = 200,
    label: str = "sep",
) -> SeparationResult:
    """Two nested smooth bodies with K subset D1, D1 strictly inside D2 subset D.

    Requires the hypothesis K subset (1-2*theta)D, certified pointwise; then
    delta and eps follow the arithmetic (1-2θ)/(1-θ) < 1-δ,
    (1+δ)(1-θ) < 1 and (1+ε)(1+δ)(1-θ) < 1 with a 10% margin.
    """
    if not 0.0 < theta < 0.5:
        raise ConfigError("separation parameter must lie in (0, 1/2)")
    shrink = 1.0 - 2.0 * theta
    for k in K:
        g = D.gauge(k)
        if g > shrink + D.tol.tol_num:
            raise BadSeparation(f"compactum point has gauge {g:.6g} > {shrink:.6g}")
    delta = 0.9 * theta / (1.0 - theta)
    C = Scaled(D, 1.0 - theta)
    approx = approximate_body(C, delta, rng, budget=budget, label=f"{label}:D1")
    D1 = approx.body
    eps = 0.9 * (1.0 / ((1.0 + delta) * (1.0 - theta)) - 1.0)
    D2 = Scaled(D1, 1.0 + eps)

    certs = list(approx.certificates)
    worst = max((D1.gauge(k) for k in K), default=0.0)
    certs.append(
        Certificate(f"{label}:K_in_D1", "subset", worst <= 1.0 + D.tol.tol_num,
                    worst, 0.0, (1.0 + approx.eps0) * shrink / (1.0 - theta), len(K)) )
    certs.append(
        strict_inclusion_mu(D1, D2, budget, rng.spawn(f"{label}:d1d2"),
                            margin=min(D.tol.margin, 0.5 * eps / (1.0 + eps)),
                            name=f"{label}:D1_mu_D2", bound=1.0 / (1.0 + eps))
    )
    outer_bound = (1.0 + eps) * (1.0 - theta) / (1.0 - approx.eps0)
    certs.append(
        strict_inclusion_mu(D2, D, budget, rng.spawn(f"{label}:d2d"),
                            margin=min(D.tol.margin, 0.5 * (1.0 - outer_bound)),
                            name=f"{label}:D2_in_D", bound=outer_bound)
    )
    for c in certs:
        if not c.holds:
            raise CertificateFailure(f"{c.name}: observed {c.observed:.6g}")
    return SeparationResult(D1, D2, certs, delta, eps)


@dataclass
class InterpolationResult:
    D1: Body
    D2: Body
    certificates: list[Certificate]
    eps_abs: float
    eps_rel: float
    theta: float
    # slack of 1 - sup_{C1} mu_{D1}; dilation allowance of D1 into D2
    slack_inner: float = 0.0
    gamma_outer: float = 0.0
    dist_out: float = 0.0


def interpolate_bodies(
    C1: Body,
    C2: HasMembership,
    eps_abs: float,
    c: SparseVec,
    rng: SplitMix64,
    outer_radius: float,
    budget: int = 200,
    label: str = "interp",
    check_gap: bool = True,
) -> InterpolationResult:
    """Smooth bodies D1 strictly inside D2 between C1 and a mere set C2.

    Needs dist(C1, complement of C2) >= eps_abs.  outer_radius must dominate
    sup ||x - c|| over C1 so dilation factors convert to absolute motions;
    the output carries dist(D2, complement of C2) >= eps_abs/8.
    """
    if not eps_abs > 0.0:
        raise ConfigError("interpolation gap must be positive")
    if (C1.center - c).sup_norm() > C1.tol.tol_num:
        raise ConfigError("C1 must be starlike about the requested center")
    if check_gap:
        gap_cert = strict_inclusion_d(C1, C2, eps_abs, budget, rng.spawn(f"{label}:gap"),
                                      name=f"{label}:gap")
        if not gap_cert.holds:
            raise BadGap(f"claimed gap {eps_abs:.6g} failed its certificate")
    else:
        gap_cert = Certificate(f"{label}:gap", "dist", True, eps_abs, eps_abs,
                               eps_abs, 0, {"assumed": True})

    R = max(outer_radius, eps_abs, 1e-12)
    eps_rel = eps_abs / R
    theta = 0.9 * eps_rel / (4.0 + 2.0 * eps_rel)
    approx = approximate_body(Scaled(C1, 1.0 + 0.5 * eps_rel), theta, rng,
                              budget=budget, label=f"{label}:D1")
    D1 = approx.body
    gamma = eps_rel / 8.0
    D2 = Scaled(D1, 1.0 + gamma)

    # (1-theta)(1+eps_rel/2) >= 1 + eps_rel/4, guaranteed by the theta choice
    slack_inner = 0.5 * eps_rel - theta * (1.0 + 0.5 * eps_rel)
    certs = list(approx.certificates)
    certs.append(gap_cert)
    certs.append(
        strict_inclusion_mu(C1, D1, budget, rng.spawn(f"{label}:c1d1"),
                            margin=min(C1.tol.margin, 0.25 * slack_inner),
                            name=f"{label}:C1_mu_D1",
                            bound=1.0 / (1.0 + slack_inner))
    )
    certs.append(
        strict_inclusion_mu(D1, D2, budget, rng.spawn(f"{label}:d1d2"),
                            margin=min(C1.tol.margin, 0.5 * gamma / (1.0 + gamma)),
                            name=f"{label}:D1_mu_D2", bound=1.0 / (1.0 + gamma))
    )
    certs.append(
        strict_inclusion_d(D2, C2, 0.9 * eps_abs / 8.0, budget, rng.spawn(f"{label}:d2c2"),
                           name=f"{label}:D2_d_C2", bound=eps_abs / 8.0)
    )
    for cert in certs:
        if not cert.holds:
            raise CertificateFailure(f"{cert.name}: observed {cert.observed:.6g}")
    return InterpolationResult(
        D1, D2, certs, eps_abs, eps_rel, theta,
        slack_inner=slack_inner, gamma_outer=gamma, dist_out=eps_abs / 8.0,
    )
