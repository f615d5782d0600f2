"""Smooth transition functions and the four-bodies radial diffeomorphism.

For nested bodies A strictly inside B inside C strictly inside D about a
common center, the map fixes every ray from the center, carries the boundary
of B onto the boundary of C, and is the exact identity on the inner zone
(gauge_B <= 1 - delta) and the outer zone (gauge_C >= 1 + delta/2).  The
inner branch is the explicit rescaling

    f(x) = center + [lam(mu_B(x)) * mu_B(x)/mu_C(x) + 1 - lam(mu_B(x))] (x - center)

and the outer branch is the ray inverse of the analogous descending map g.
Both gauges are constant ratios along a ray, so ray inversion reduces to a
1-D monotone root solve with no further gauge evaluations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import CertificateFailure, ConfigError, RayInversionFailure, SeamMismatch
from .gauges import Body, Certificate, Tolerances
from .seqspace import SparseVec


@lru_cache(maxsize=None)
def _smoothstep_coeffs(order: int) -> tuple[float, ...]:
    # degree 2m+1 polynomial with m vanishing derivatives at both seams
    return tuple(
        math.comb(order + k, k) * math.comb(2 * order + 1, order - k) * (-1.0) ** k
        for k in range(order + 1)
    )

def smoothstep(u: float, order: int = 3) -> float:
    """Polynomial smoothstep: 0 at u<=0, 1 at u>=1, C^order at the seams."""
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    acc = 0.0
    for k, c in enumerate(reversed(_smoothstep_coeffs(order))):
        acc = acc * u + c
    return acc * u ** (order + 1)


@dataclass(frozen=True)
class TransitionFn:
    """Monotone bridge with exact plateaus.

    kind "rise": 0 below 1-delta, 1 above 1.
    kind "fall": 1 below 1+delta/4, 0 above 1+delta/2.
    Plateau branches are evaluated first so a sub-representable delta
    degrades to an exact step rather than dividing by zero.
    """

    kind: str
    delta: float
    order: int = 3

    def __post_init__(self):
        if self.kind not in ("rise", "fall"):
            raise ConfigError(f"unknown transition kind {self.kind!r}")
        if not 0.0 < self.delta < 1.0:
            raise ConfigError("transition width must lie in (0, 1)")

    def __call__(self, t: float) -> float:
        d = self.delta
        if self.kind == "rise":
            if t >= 1.0:
                return 1.0
            if t <= 1.0 - d:
                return 0.0
            return smoothstep((t - (1.0 - d)) / d, self.order)
        if t <= 1.0 + 0.25 * d:
            return 1.0
        if t >= 1.0 + 0.5 * d:
            return 0.0
        return 1.0 - smoothstep((t - (1.0 + 0.25 * d)) / (0.25 * d), self.order)


def _bisect_increasing(phi, lo: float, hi: float, tol_rel: float = 1e-13) -> float:
    """Root of phi(t) = 1 for increasing phi, bracketed in [lo, hi]."""
    flo, fhi = phi(lo), phi(hi)
    grow = 0
    while flo > 1.0 and grow < 8:
        lo *= 0.5
        flo = phi(lo)
        grow += 1
    grow = 0
    while fhi < 1.0 and grow < 8:
        hi *= 2.0
        fhi = phi(hi)
        grow += 1
    if flo > 1.0 + 1e-9 or fhi < 1.0 - 1e-9:
        raise RayInversionFailure(
            f"bracket [{lo:.6g}, {hi:.6g}] -> [{flo:.6g}, {fhi:.6g}] does not straddle 1"
        )
    for _ in range(200):
        if hi - lo <= tol_rel * hi:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if phi(mid) < 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class FourBodiesMap:
    """Radial diffeomorphism h with h(B) = C, identity on A and outside D."""

    def __init__(
        self,
        A: Body,
        B: Body,
        C: Body,
        D: Body,
        delta: float,
        tol: Tolerances | None = None,
        order: int = 3,
        certificates: Sequence[Certificate] = (),
        name: str = "four_bodies",
    ):
        tol = tol or B.tol
        if not 0.0 < delta < 1.0:
            raise ConfigError("four-bodies delta must lie in (0, 1)")
        for other in (B, C, D):
            if (A.center - other.center).sup_norm() > tol.tol_num:
                raise ConfigError("four-bodies map needs a common center")
        for cert in certificates:
            if not cert.holds:
                raise CertificateFailure(f"{name}: certificate {cert.name} failed")
        self.A, self.B, self.C, self.D = A, B, C, D
        self.delta = delta
        self.tol = tol
        self.center = B.center
        self.lam = TransitionFn("rise", delta, order)
        self.theta = TransitionFn("fall", delta, order)
        self.certificates = list(certificates)
        self.name = name

    @classmethod
    def from_slacks(
        cls,
        A: Body,
        B: Body,
        C: Body,
        D: Body,
        slack_inner: float,
        allowance_outer: float,
        **kwargs,
    ) -> "FourBodiesMap":
        """delta from construction-time slacks with a 10% margin.

        slack_inner bounds 1 - sup_A mu_B; allowance_outer is the dilation
        room of C inside D (1/sup - 1).  Building fails when either is gone.
        """
        delta = 0.9 * min(slack_inner, allowance_outer, 0.999)
        if not delta > 0.0:
            raise CertificateFailure("four-bodies hypothesis has no positive slack")
        return cls(A, B, C, D, delta, **kwargs)

    # -- forward ------------------------------------------------------------

    def forward(self, x: SparseVec) -> SparseVec:
        u = x - self.center
        if u.is_zero():
            return x
        tB = self.B.offset_gauge(u)
        if tB <= 1.0 - self.delta:
            return x
        if tB < 1.0 + 0.25 * self.delta:
            return self._f_formula(u, tB)
        tC = self.C.offset_gauge(u)
        if tC >= 1.0 + 0.5 * self.delta:
            return x
        return self._g_inverse_on_ray(u, tB, tC)

    def _f_formula(self, u: SparseVec, tB: float, tC: float | None = None) -> SparseVec:
        lam = self.lam(tB)
        if lam == 0.0:
            return self.center + u
        if tC is None:
            tC = self.C.offset_gauge(u)
        factor = lam * (tB / tC) + (1.0 - lam)
        return self.center + u.scale(factor)

    def _g_inverse_on_ray(self, u: SparseVec, tB: float, tC: float) -> SparseVec:
        # solve g(center + t*u) = center + u: the gauge ratio r = tC/tB is
        # ray-constant, so phi(t) = t * [theta(t*tC) * r + 1 - theta(t*tC)]
        r = tC / tB
        phi = lambda t: t * (self.theta(t * tC) * r + (1.0 - self.theta(t * tC)))
        hi = 1.0 / max(r, 1e-300)
        t = _bisect_increasing(phi, min(1.0, hi) * (1.0 - 1e-9), max(1.0, hi) * (1.0 + 1e-9))
        return self.center + u.scale(t)

    # -- inverse ------------------------------------------------------------

    def inverse(self, y: SparseVec) -> SparseVec:
        u = y - self.center
        if u.is_zero():
            return y
        tC = self.C.offset_gauge(u)
        if tC >= 1.0 + 0.5 * self.delta:
            return y
        if tC > 1.0:
            return self._g_formula(u, tC)
        tB = self.B.offset_gauge(u)
        if tB <= 1.0 - self.delta:
            return y
        return self._f_inverse_on_ray(u, tB, tC)

    def _g_formula(self, u: SparseVec, tC: float) -> SparseVec:
        th = self.theta(tC)
        if th == 0.0:
            return self.center + u
        tB = self.B.offset_gauge(u)
        factor = th * (tC / tB) + (1.0 - th)
        return self.center + u.scale(factor)

    def _f_inverse_on_ray(self, u: SparseVec, tB: float, tC: float) -> SparseVec:
        ratio = tB / max(tC, 1e-300)
        phi = lambda t: t * (self.lam(t * tB) * ratio + (1.0 - self.lam(t * tB)))
        lo = min(1.0, 1.0 / ratio)
        t = _bisect_increasing(phi, lo * (1.0 - 1e-9), 1.0 + 1e-9)
        return self.center + u.scale(t)

    # -- diagnostics ----------------------------------------------------------

    def seam_residual(self, x: SparseVec) -> float:
        """Disagreement of the two branches; meaningful for 1 <= mu_B <= 1+delta/4."""
        u = x - self.center
        if u.is_zero():
            return 0.0
        tB = self.B.offset_gauge(u)
        tC = self.C.offset_gauge(u)
        a = self._f_formula(u, tB, tC)
        b = self._g_inverse_on_ray(u, tB, tC)
        return (a - b).sup_norm()

    def check_seam(self, x: SparseVec) -> None:
        res = self.seam_residual(x)
        bound = 1e-7 * (1.0 + (x - self.center).sup_norm())
        if res > bound:
            raise SeamMismatch(f"seam residual {res:.3g} exceeds {bound:.3g}")


class ComposedMap:
    """h = outer o inner^{-1}: the per-level building block of the shift maps."""

    def __init__(self, inner: FourBodiesMap, outer: FourBodiesMap, name: str = "level"):
        self.inner = inner
        self.outer = outer
        self.name = name

    def forward(self, x: SparseVec) -> SparseVec:
        return self.outer.forward(self.inner.inverse(x))

    def inverse(self, y: SparseVec) -> SparseVec:
        return self.inner.forward(self.outer.inverse(y))


class ShiftMap:
    """Finite composition m_1 o m_2 o ... o m_n applied innermost-first."""

    def __init__(self, maps: Sequence):
        self.maps = list(maps)

    def forward(self, x: SparseVec) -> SparseVec:
        for m in reversed(self.maps):
            x = m.forward(x)
        return x

    def inverse(self, y: SparseVec) -> SparseVec:
        for m in self.maps:
            y = m.inverse(y)
        return y


def make_shift_map(h_list: Sequence) -> ShiftMap:
    return ShiftMap(h_list)


def four_bodies_forward(m: FourBodiesMap, x: SparseVec) -> SparseVec:
    return m.forward(x)


def four_bodies_inverse(m: FourBodiesMap, y: SparseVec) -> SparseVec:
    return m.inverse(y)
