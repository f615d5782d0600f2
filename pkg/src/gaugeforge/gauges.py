"""Starlike bodies as (center, membership, gauge) triples.

A body's gauge is its Minkowski functional about the stored center:
mu(x) = inf{t > 0 : center + (x - center)/t in A}.  It is positively
homogeneous about the center, and A = {mu <= 1}.  Closed forms are used
where they exist (balls, scalings, cone/star hulls, pullbacks); everything
else falls back to bracketing bisection on t driven by the membership
oracle.  Strict inclusions between bodies are certified by sampling, with
the certificate recording its budget and margin; construction code chooses
the underlying constants so the true inclusions hold by arithmetic, and the
sampled certificate is a regression check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Protocol, Sequence

from .errors import (
    CenterNotInterior,
    ConfigError,
    EmptyK,
    EmptySlab,
    NoBracket,
)
from .rng import SplitMix64, random_direction
from .seqspace import (
    NormKind,
    SUP_NORM,
    SparseVec,
    SummableFunctional,
    DiagonalInjection,
    norm,
)


@dataclass(frozen=True)
class Tolerances:
    """Scenario-wide numeric knobs (single source of truth for comparisons)."""

    tol_num: float = 1e-9     # absolute comparison tolerance, membership slack
    tol_gauge: float = 1e-10  # relative tolerance of gauge bisection
    tol_map: float = 1e-8     # round-trip tolerance of map inversion
    margin: float = 1e-6      # default strict-inclusion certificate margin
    support_bound: int = 64   # support size covered by p-norm surrogates

    def to_json(self) -> dict:
        return {
            "tol_num": self.tol_num,
            "tol_gauge": self.tol_gauge,
            "tol_map": self.tol_map,
            "margin": self.margin,
            "support_bound": self.support_bound,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Tolerances":
        base = cls()
        return cls(
            tol_num=float(obj.get("tol_num", base.tol_num)),
            tol_gauge=float(obj.get("tol_gauge", base.tol_gauge)),
            tol_map=float(obj.get("tol_map", base.tol_map)),
            margin=float(obj.get("margin", base.margin)),
            support_bound=int(obj.get("support_bound", base.support_bound)),
        )


DEFAULT_TOL = Tolerances()

_T_FLOOR = 1e-280  # below this radial parameter the direction counts as unbounded


class HasMembership(Protocol):
    def contains(self, x: SparseVec) -> bool: ...


def gauge_from_membership(
    member_at: Callable[[float], bool],
    start_hi: float,
    tol: Tolerances,
    max_doublings: int = 200,
) -> float:
    """Gauge by bracketing bisection on t using a membership oracle.

    member_at(t) must test center + (x-center)/t in A and be monotone in t
    (true for starlike bodies).  Returns the certified-member end of the
    bracket.
    """
    t_hi = max(start_hi, 1e-12)
    doublings = 0
    while not member_at(t_hi):
        t_hi *= 2.0
        doublings += 1
        if doublings > max_doublings:
            raise NoBracket(
                f"no membership along the ray after {max_doublings} doublings (t={t_hi:.3g})"
            )
    t_lo = 0.0
    while t_hi - t_lo > tol.tol_gauge * t_hi and t_hi > _T_FLOOR:
        mid = 0.5 * (t_lo + t_hi)
        if mid <= t_lo or mid >= t_hi:
            break
        if member_at(mid):
            t_hi = mid
        else:
            t_lo = mid
    if t_hi <= _T_FLOOR:
        return 0.0
    return t_hi


class Body:
    """A starlike body about ``center`` with gauge and membership oracles."""

    kind = "body"

    def __init__(
        self,
        center: SparseVec,
        tol: Tolerances = DEFAULT_TOL,
        lipschitz: float | None = None,
        radial_bound: float | None = None,
    ):
        self.center = center
        self.tol = tol
        self.lipschitz = lipschitz
        self.radial_bound = radial_bound

    def offset_gauge(self, u: SparseVec) -> float:
        """mu(center + u); subclasses implement the geometry here."""
        raise NotImplementedError

    def gauge(self, x: SparseVec) -> float:
        return self.offset_gauge(x - self.center)

    def contains(self, x: SparseVec) -> bool:
        return self.gauge(x) <= 1.0 + self.tol.tol_num

    def boundary_point(self, direction: SparseVec) -> SparseVec | None:
        """Point of gauge exactly 1 along ``direction`` from the center."""
        g = self.offset_gauge(direction)
        if not (g > 1e-12) or not math.isfinite(g):
            return None
        return self.center + direction.scale(1.0 / g)

    def _membership_gauge(self, u: SparseVec, member: Callable[[SparseVec], bool]) -> float:
        if u.is_zero():
            return 0.0
        hint = 1.0
        if self.radial_bound is not None:
            hint = max(1.0, self.radial_bound * u.sup_norm())
        return gauge_from_membership(
            lambda t: member(self.center + u.scale(1.0 / t)), hint, self.tol
        )

    def describe(self) -> dict:
        return {"kind": self.kind, "center": self.center.to_json()}


class Ball(Body):
    """Norm ball of given radius about a center."""

    kind = "ball"

    def __init__(
        self,
        radius: float,
        norm_kind: NormKind = SUP_NORM,
        center: SparseVec = SparseVec.zero(),
        tol: Tolerances = DEFAULT_TOL,
    ):
        if not radius > 0.0:
            raise ConfigError("ball radius must be positive")
        super().__init__(center, tol, lipschitz=1.0 / radius, radial_bound=1.0 / radius)
        self.radius = radius
        self.norm_kind = norm_kind

    def offset_gauge(self, u: SparseVec) -> float:
        return norm(u, self.norm_kind) / self.radius

    def contains(self, x: SparseVec) -> bool:
        return norm(x - self.center, self.norm_kind) <= self.radius * (1.0 + self.tol.tol_num)

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "center": self.center.to_json(),
            "radius": self.radius,
            "norm": self.norm_kind.to_json(),
        }


class Scaled(Body):
    """Dilation of a body by a positive factor about its own center."""

    kind = "scaled"

    def __init__(self, base: Body, factor: float):
        if not factor > 0.0:
            raise ConfigError("scale factor must be positive")
        lip = None if base.lipschitz is None else base.lipschitz / factor
        rad = None if base.radial_bound is None else base.radial_bound / factor
        super().__init__(base.center, base.tol, lipschitz=lip, radial_bound=rad)
        self.base = base
        self.factor = factor

    def offset_gauge(self, u: SparseVec) -> float:
        return self.base.offset_gauge(u) / self.factor

    def contains(self, x: SparseVec) -> bool:
        u = (x - self.center).scale(1.0 / self.factor)
        return self.base.contains(self.center + u)

    def describe(self) -> dict:
        return {"kind": self.kind, "factor": self.factor, "base": self.base.describe()}


class Translated(Body):
    """A body shifted rigidly by a vector."""

    kind = "translated"

    def __init__(self, base: Body, shift: SparseVec):
        super().__init__(base.center + shift, base.tol, base.lipschitz, base.radial_bound)
        self.base = base
        self.shift = shift

    def offset_gauge(self, u: SparseVec) -> float:
        return self.base.offset_gauge(u)

    def contains(self, x: SparseVec) -> bool:
        return self.base.contains(x - self.shift)

    def describe(self) -> dict:
        return {"kind": self.kind, "shift": self.shift.to_json(), "base": self.base.describe()}


class Recentered(Body):
    """The same point set as ``base``, gauged about a different interior center.

    Sound whenever the set is starlike about the new center (any interior
    point works for convex bases).  The gauge falls back to membership
    bisection; membership delegates to the base unchanged.
    """

    kind = "recentered"

    def __init__(
        self,
        base: Body | HasMembership,
        new_center: SparseVec,
        tol: Tolerances | None = None,
        radial_bound: float | None = None,
        lipschitz: float | None = None,
    ):
        tol = tol or getattr(base, "tol", DEFAULT_TOL)
        super().__init__(new_center, tol, lipschitz=lipschitz, radial_bound=radial_bound)
        self.base = base
        if not base.contains(new_center):
            raise CenterNotInterior("new center is not inside the body")

    def offset_gauge(self, u: SparseVec) -> float:
        if isinstance(self.base, SlabNbhd):
            return self.base.gauge_about(self.center, u)
        return self._membership_gauge(u, self.base.contains)

    def contains(self, x: SparseVec) -> bool:
        return self.base.contains(x)

    def describe(self) -> dict:
        base_desc = self.base.describe() if isinstance(self.base, Body) else {"kind": "set"}
        return {"kind": self.kind, "center": self.center.to_json(), "base": base_desc}


def _golden_min(f: Callable[[float], float], lo: float, hi: float, tol_abs: float,
                max_iter: int = 160) -> tuple[float, float]:
    """Golden-section minimum of a 1-D convex function on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    invphi2 = (3.0 - math.sqrt(5.0)) / 2.0
    a, b = lo, hi
    h = b - a
    if h <= tol_abs:
        m = 0.5 * (a + b)
        return m, f(m)
    n = min(max_iter, int(math.ceil(math.log(tol_abs / h) / math.log(invphi))))
    c = a + invphi2 * h
    d = a + invphi * h
    yc = f(c)
    yd = f(d)
    for _ in range(max(n - 1, 0)):
        if yc < yd:
            b, d, yd = d, c, yc
            h = invphi * h
            c = a + invphi2 * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h = invphi * h
            d = a + invphi * h
            yd = f(d)
    if yc < yd:
        return c, yc
    return d, yd


class ConeHull(Body):
    """[apex, C]: union of segments from an apex point to a convex body C.

    Gauged about C's center.  The gauge has the exact convex form
    inf over lam >= 0 of lam + mu_C(u - lam*w), minimized by golden section;
    lam = 0 is always feasible so the bracket is [0, mu_C(u)].  Membership is
    an independent 1-D convex scan along the apex chord (it never consults
    the lam-form, so the two routes cross-check each other).
    """

    kind = "cone_hull"

    def __init__(self, apex: SparseVec, base: Body):
        super().__init__(
            base.center,
            base.tol,
            lipschitz=base.radial_bound,
            radial_bound=base.radial_bound,
        )
        self.apex = apex
        self.base = base
        self._w = apex - base.center
        self._mu_w = None  # lazy: base gauge of the apex offset

    def _apex_gauge(self) -> float:
        if self._mu_w is None:
            self._mu_w = self.base.offset_gauge(self._w)
        return self._mu_w

    def offset_gauge(self, u: SparseVec) -> float:
        f0 = self.base.offset_gauge(u)
        if f0 <= 0.0:
            return 0.0
        w = self._w
        if w.is_zero():
            return f0
        phi = lambda lam: lam + self.base.offset_gauge(u.axpy(-lam, w))
        slope = 1.0 + self._apex_gauge()
        tol_abs = self.tol.tol_gauge * max(1.0, f0) / slope
        lam_best, val = _golden_min(phi, 0.0, f0, tol_abs)
        return min(f0, val)

    def contains(self, x: SparseVec) -> bool:
        return self._member_offset(x - self.center)

    def _member_offset(self, u: SparseVec) -> bool:
        # x in [apex, C]  iff  some point of the chord {w + tau(u - w), tau >= 1}
        # lies in C (tau = 1/s for the segment parameter s); mu_C along that
        # line is convex, so a golden-section scan decides membership sharply.
        w = self._w
        d = u - w
        if d.is_zero():
            return True  # the apex itself
        mu_d = self.base.offset_gauge(d)
        g = lambda tau: self.base.offset_gauge(w.axpy(tau, d))
        if g(1.0) <= 1.0 + self.tol.tol_num:
            return True
        if mu_d <= 0.0:
            return False  # unbounded chord direction: never re-enters
        tau_max = (1.0 + self._apex_gauge()) / mu_d + 1.0
        if tau_max <= 1.0:
            return False
        _, val = _golden_min(g, 1.0, tau_max, self.tol.tol_gauge * max(1.0, tau_max))
        return val <= 1.0 + self.tol.tol_num

    def describe(self) -> dict:
        return {"kind": self.kind, "apex": self.apex.to_json(), "base": self.base.describe()}


class StarHull(Body):
    """[K, C]: union of cone hulls [y, C] over a finite apex set K.

    The gauge is the min of the cone-hull gauges and inherits the Lipschitz
    constant of the convex base.
    """

    kind = "star_hull"

    def __init__(self, points: Sequence[SparseVec], base: Body):
        if not points:
            raise EmptyK("star hull needs at least one apex")
        super().__init__(
            base.center,
            base.tol,
            lipschitz=base.radial_bound,
            radial_bound=base.radial_bound,
        )
        self.points = list(points)
        self.base = base
        self.cones = [ConeHull(y, base) for y in self.points]

    def offset_gauge(self, u: SparseVec) -> float:
        return min(c.offset_gauge(u) for c in self.cones)

    def contains(self, x: SparseVec) -> bool:
        return any(c.contains(x) for c in self.cones)

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "points": [p.to_json() for p in self.points],
            "base": self.base.describe(),
        }


def slab_box_max(T: SummableFunctional, x: SparseVec, d: float, rho: float) -> float | None:
    """Max of T over {h : ||h - x||_sup <= d, ||h||_sup <= rho}.

    Returns None when the box is empty (some coordinate cannot be brought
    within the rho-ball).  The off-support part is min(d, rho) times the
    exact tail mass, so no truncation occurs.
    """
    off_mass = T.mass
    total = 0.0
    for i, v in x.items():
        if abs(v) > rho + d:
            return None
        a = T.coefficient(i)
        total += a * min(v + d, rho)
        off_mass -= a
    total += min(d, rho) * off_mass
    return total


def slab_feasible(T: SummableFunctional, x: SparseVec, d: float, rho: float, beta: float) -> bool:
    m = slab_box_max(T, x, d, rho)
    return m is not None and m >= beta


def slab_ray_escape(
    T: SummableFunctional,
    rho: float,
    beta: float,
    eta: float,
    center: SparseVec,
    u: SparseVec,
) -> float:
    """sup{s >= 0 : center + s*u in N(H, eta)} for H = {||h|| <= rho, T(h) >= beta}.

    Exact: the box maximum along the ray is concave piecewise-linear in s, so
    the escape parameter is found by walking its breakpoints, with no
    iteration error.  Returns 0.0 when the center itself is outside and
    math.inf when the ray never leaves (cannot happen for u != 0).
    """
    idx = sorted(set(center.support) | set(u.support))
    a = [T.coefficient(i) for i in idx]
    c = [center.get(i) for i in idx]
    w = [u.get(i) for i in idx]
    bound = rho + eta
    s_hi = math.inf
    for ci, wi in zip(c, w):
        if wi > 0.0:
            s_hi = min(s_hi, (bound - ci) / wi)
        elif wi < 0.0:
            s_hi = min(s_hi, (-bound - ci) / wi)
        elif abs(ci) > bound:
            return 0.0
    if s_hi <= 0.0:
        return 0.0
    cap = min(eta, rho)
    const = cap * (T.mass - sum(a)) - beta

    def G(s: float) -> float:
        tot = const
        for ai, ci, wi in zip(a, c, w):
            tot += ai * min(ci + s * wi + eta, rho)
        return tot

    if G(0.0) < 0.0:
        return 0.0
    if not math.isfinite(s_hi):
        return math.inf
    if G(s_hi) >= 0.0:
        return s_hi
    pts = [0.0]
    for ci, wi in zip(c, w):
        if wi != 0.0:
            sb = (rho - eta - ci) / wi
            if 0.0 < sb < s_hi:
                pts.append(sb)
    pts.append(s_hi)
    pts.sort()
    x_prev = pts[0]
    g_prev = G(x_prev)
    for x in pts[1:]:
        g = G(x)
        if g < 0.0:
            return x_prev + (x - x_prev) * g_prev / (g_prev - g)
        x_prev, g_prev = x, g
    return s_hi


def slab_distance(
    rho: float,
    T: SummableFunctional,
    beta: float,
    x: SparseVec,
    tol: Tolerances = DEFAULT_TOL,
) -> float:
    """Sup-norm distance from x to {h : ||h||_sup <= rho, T(h) >= beta}.

    Bisection on d with the exact box-maximum feasibility test, which is
    monotone in d.
    """
    if not beta < rho * T.mass:
        raise EmptySlab(f"threshold {beta} >= sup {rho * T.mass}: empty slab")
    if slab_feasible(T, x, 0.0, rho, beta):
        return 0.0
    d_lo = 0.0
    d_hi = x.sup_norm() + rho
    while d_hi - d_lo > tol.tol_num:
        mid = 0.5 * (d_lo + d_hi)
        if mid <= d_lo or mid >= d_hi:
            break
        if slab_feasible(T, x, mid, rho, beta):
            d_hi = mid
        else:
            d_lo = mid
    return d_hi


class SlabNbhd(Body):
    """eta-neighborhood of the slab {||h||_sup <= rho, T(h) >= beta}.

    Membership is the exact closed-form feasibility test at distance eta;
    the gauge about the stored interior center falls back to membership
    bisection.
    """

    kind = "slab_nbhd"

    def __init__(
        self,
        rho: float,
        T: SummableFunctional,
        beta: float,
        eta: float,
        center: SparseVec,
        tol: Tolerances = DEFAULT_TOL,
    ):
        if not beta < rho * T.mass:
            raise EmptySlab(f"threshold {beta} >= sup {rho * T.mass}: empty slab")
        if not eta > 0.0:
            raise ConfigError("fattening radius must be positive")
        center_dist = slab_distance(rho, T, beta, center, tol)
        inradius = eta - center_dist
        if not inradius > 0.0:
            raise CenterNotInterior(
                f"center at slab distance {center_dist:.3g} >= fattening {eta:.3g}"
            )
        super().__init__(center, tol, lipschitz=1.0 / inradius, radial_bound=1.0 / inradius)
        self.rho = rho
        self.T = T
        self.beta = beta
        self.eta = eta
        self.inradius = inradius

    def contains(self, x: SparseVec) -> bool:
        return slab_feasible(self.T, x, self.eta, self.rho, self.beta)

    def offset_gauge(self, u: SparseVec) -> float:
        return self.gauge_about(self.center, u)

    def gauge_about(self, center: SparseVec, u: SparseVec) -> float:
        """Gauge about any interior point, via the exact ray-escape solve."""
        if u.is_zero():
            return 0.0
        s = slab_ray_escape(self.T, self.rho, self.beta, self.eta, center, u)
        if s <= 0.0:
            return math.inf
        return 1.0 / s if math.isfinite(s) else 0.0

    def distance(self, x: SparseVec) -> float:
        return slab_distance(self.rho, self.T, self.beta, x, self.tol)

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "center": self.center.to_json(),
            "rho": self.rho,
            "beta": self.beta,
            "eta": self.eta,
            "functional": self.T.to_json(),
        }


class Sublevel(Body):
    """{x : f(x - center) <= level} for a positively homogeneous f; gauge = f/level."""

    kind = "sublevel"

    def __init__(
        self,
        fn: Callable[[SparseVec], float],
        level: float,
        center: SparseVec,
        tol: Tolerances = DEFAULT_TOL,
        lipschitz: float | None = None,
        radial_bound: float | None = None,
        label: str = "sublevel",
    ):
        if not level > 0.0:
            raise ConfigError("sublevel threshold must be positive")
        super().__init__(center, tol, lipschitz=lipschitz, radial_bound=radial_bound)
        self.fn = fn
        self.level = level
        self.label = label

    def offset_gauge(self, u: SparseVec) -> float:
        return self.fn(u) / self.level

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "center": self.center.to_json(),
            "level": self.level,
            "label": self.label,
        }


class PullbackBody(Body):
    """Preimage T^{-1}(B') of a target body under a diagonal injection.

    The gauge composes exactly: mu(x) = mu'(T(center) + T(x - center)), which
    is the gauge of the preimage about the preimage of the target center.
    """

    kind = "pullback"

    def __init__(self, injection: DiagonalInjection, target: Body, tol: Tolerances | None = None):
        center = injection.preimage(target.center)
        w_max = injection.operator_norm
        lip = None if target.lipschitz is None else target.lipschitz * w_max
        rad = None if target.radial_bound is None else target.radial_bound * w_max
        super().__init__(center, tol or target.tol, lipschitz=lip, radial_bound=rad)
        self.injection = injection
        self.target = target

    def offset_gauge(self, u: SparseVec) -> float:
        return self.target.offset_gauge(self.injection(u))

    def contains(self, x: SparseVec) -> bool:
        return self.target.contains(self.target.center + self.injection(x - self.center))

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "weights": self.injection.law,
            "target": self.target.describe(),
        }


class UnionSet:
    """Union of bodies used as a mere set: membership only, no gauge."""

    kind = "union_set"

    def __init__(self, parts: Sequence[HasMembership]):
        self.parts = list(parts)

    def contains(self, x: SparseVec) -> bool:
        return any(p.contains(x) for p in self.parts)

    def describe(self) -> dict:
        return {"kind": self.kind, "parts": len(self.parts)}


# --- spec-shaped convenience functions -------------------------------------

def gauge(b: Body, x: SparseVec) -> float:
    return b.gauge(x)


def cone_hull_gauge(y: SparseVec, C: Body, x: SparseVec) -> float:
    return ConeHull(y, C).gauge(x)


def star_hull_gauge(K: Sequence[SparseVec], C: Body, x: SparseVec) -> float:
    return StarHull(K, C).gauge(x)


def pullback_gauge(P: PullbackBody, x: SparseVec) -> float:
    return P.gauge(x)


# --- inclusion certificates --------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    """Sampled evidence for an inclusion claim; a regression check, not a proof."""

    name: str
    kind: str            # "mu" | "dist" | "subset" | "value"
    holds: bool
    observed: float      # sup estimate (mu / subset) or verified eta (dist)
    margin: float        # slack the holds-test enforced
    bound: float         # arithmetic prediction when known, else nan
    budget: int
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "holds": self.holds,
            "observed": self.observed,
            "margin": self.margin,
            "bound": self.bound,
            "budget": self.budget,
            "detail": self.detail,
        }


def _check_shared_center(A: Body, B: Body) -> None:
    if (A.center - B.center).sup_norm() > A.tol.tol_num:
        raise ConfigError("gauge-strict inclusion requires a shared center")


def strict_inclusion_mu(
    A: Body,
    B: Body,
    budget: int,
    rng: SplitMix64,
    margin: float | None = None,
    name: str = "",
    bound: float = math.nan,
) -> Certificate:
    """Estimate sup over the boundary of A of mu_B by sampling random rays.

    holds = sup_est <= 1 - margin.  Sampled, not proved: the certificate
    records its budget and margin.
    """
    _check_shared_center(A, B)
    margin = A.tol.margin if margin is None else margin
    sup_est = 0.0
    worst = None
    for _ in range(budget):
        d = random_direction(rng, SUP_NORM)
        p = A.boundary_point(d)
        if p is None:
            continue
        v = B.gauge(p)
        if v > sup_est:
            sup_est = v
            worst = p
    holds = sup_est <= 1.0 - margin
    detail = {} if holds or worst is None else {"worst_point": worst.to_json()}
    return Certificate(name, "mu", holds, sup_est, margin, bound, budget, detail)


def strict_inclusion_d(
    A: Body,
    B: HasMembership,
    eta: float,
    budget: int,
    rng: SplitMix64,
    name: str = "",
    norm_kind: NormKind = SUP_NORM,
    bound: float = math.nan,
) -> Certificate:
    """Sampled lower-bound check of dist(A, complement of B) >= eta.

    Verifies a + eta * (random unit direction) in B for boundary samples a of
    A; holds iff every probe passes.
    """
    holds = True
    worst = None
    for _ in range(budget):
        d = random_direction(rng, SUP_NORM)
        a = A.boundary_point(d)
        if a is None:
            continue
        step = random_direction(rng, norm_kind)
        probe = a.axpy(eta, step)
        if not B.contains(probe):
            holds = False
            worst = probe
            break
    detail = {} if holds or worst is None else {"escaped_point": worst.to_json()}
    return Certificate(name, "dist", holds, eta, eta, bound, budget, detail)


def subset_certificate(
    A: Body,
    B: HasMembership,
    budget: int,
    rng: SplitMix64,
    name: str = "",
    bound: float = math.nan,
) -> Certificate:
    """Sampled plain-inclusion check: boundary points of A belong to B."""
    holds = True
    sup_est = 0.0
    worst = None
    has_gauge = isinstance(B, Body)
    for _ in range(budget):
        d = random_direction(rng, SUP_NORM)
        a = A.boundary_point(d)
        if a is None:
            continue
        if has_gauge:
            v = B.gauge(a)
            sup_est = max(sup_est, v)
            if v > 1.0 + A.tol.tol_num:
                holds = False
                worst = a
                break
        elif not B.contains(a):
            holds = False
            worst = a
            break
    detail = {} if holds or worst is None else {"escaped_point": worst.to_json()}
    return Certificate(name, "subset", holds, sup_est, 0.0, bound, budget, detail)
