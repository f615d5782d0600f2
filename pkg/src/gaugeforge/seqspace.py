"""Sparse finitely supported sequence vectors and the maps acting on them.

Coordinates are 1-based unbounded integers; "infinite dimension" is realized
by letting supports grow without bound. Vectors are immutable, hashable, and
compared entrywise. Linear functionals carry an explicit head plus a
geometric tail so that total masses and suprema over balls are exact closed
forms rather than truncated sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import CenterNotInImage, ConfigError


class SparseVec:
    """Finitely supported real sequence; entries of exactly 0 are dropped."""

    __slots__ = ("_entries", "_hash")

    def __init__(self, entries: Mapping[int, float] | Iterable[tuple[int, float]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        data: dict[int, float] = {}
        for i, v in items:
            if not isinstance(i, int) or isinstance(i, bool) or i < 1:
                raise ConfigError(f"coordinate index must be a positive integer, got {i!r}")
            v = float(v)
            if v != 0.0:
                if i in data:
                    raise ConfigError(f"duplicate coordinate index {i}")
                data[i] = v
        self._entries = data
        self._hash = None

    @classmethod
    def _from_clean(cls, data: dict[int, float]) -> "SparseVec":
        # internal fast path: data already validated, may contain zeros to drop
        v = cls.__new__(cls)
        v._entries = {i: x for i, x in data.items() if x != 0.0}
        v._hash = None
        return v

    @classmethod
    def zero(cls) -> "SparseVec":
        return cls._from_clean({})

    @classmethod
    def basis(cls, i: int, value: float = 1.0) -> "SparseVec":
        return cls({i: value})

    def items(self) -> list[tuple[int, float]]:
        return sorted(self._entries.items())

    def get(self, i: int) -> float:
        return self._entries.get(i, 0.0)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self._entries))

    def is_zero(self) -> bool:
        return not self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __add__(self, other: "SparseVec") -> "SparseVec":
        return self.axpy(1.0, other)

    def __sub__(self, other: "SparseVec") -> "SparseVec":
        return self.axpy(-1.0, other)

    def __neg__(self) -> "SparseVec":
        return self.scale(-1.0)

    def scale(self, s: float) -> "SparseVec":
        if s == 0.0:
            return SparseVec._from_clean({})
        return SparseVec._from_clean({i: v * s for i, v in self._entries.items()})

    def axpy(self, a: float, other: "SparseVec") -> "SparseVec":
        """self + a * other in one pass."""
        data = dict(self._entries)
        for i, v in other._entries.items():
            nv = data.get(i, 0.0) + a * v
            if nv == 0.0:
                data.pop(i, None)
            else:
                data[i] = nv
        return SparseVec._from_clean(data)

    def sup_norm(self) -> float:
        if not self._entries:
            return 0.0
        return max(abs(v) for v in self._entries.values())

    def p_norm(self, p: float) -> float:
        if not self._entries:
            return 0.0
        m = self.sup_norm()
        if m == 0.0:
            return 0.0
        return m * sum((abs(v) / m) ** p for v in self._entries.values()) ** (1.0 / p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseVec):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(sorted(self._entries.items())))
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{i}: {v!r}" for i, v in self.items())
        return f"SparseVec({{{inner}}})"

    def to_json(self) -> list[list]:
        """JSON form: array of [index, value] pairs, indices strictly increasing."""
        return [[i, v] for i, v in self.items()]

    @classmethod
    def from_json(cls, obj) -> "SparseVec":
        if not isinstance(obj, list):
            raise ConfigError("sparse vector JSON must be a list of [index, value] pairs")
        pairs = []
        last = 0
        for entry in obj:
            if not (isinstance(entry, list) and len(entry) == 2):
                raise ConfigError(f"bad sparse vector entry {entry!r}")
            i, v = entry
            if not isinstance(i, int) or i <= last:
                raise ConfigError("sparse vector indices must be strictly increasing positive ints")
            last = i
            pairs.append((i, float(v)))
        return cls(pairs)


@dataclass(frozen=True)
class NormKind:
    """Norm selector: sup norm for the c0 model, p-norm (p >= 2) for the reflexive model."""

    kind: str
    p: float | None = None

    def __post_init__(self):
        if self.kind == "sup":
            if self.p is not None:
                raise ConfigError("sup norm takes no exponent")
        elif self.kind == "p":
            if self.p is None or not math.isfinite(self.p) or self.p < 2:
                raise ConfigError("p-norm requires finite p >= 2")
        else:
            raise ConfigError(f"unknown norm kind {self.kind!r}")

    def to_json(self) -> dict:
        return {"kind": self.kind} if self.kind == "sup" else {"kind": "p", "p": self.p}

    @classmethod
    def from_json(cls, obj) -> "NormKind":
        if obj.get("kind") == "sup":
            return SUP_NORM
        return cls("p", float(obj["p"]))


SUP_NORM = NormKind("sup")


def p_norm_kind(p: float) -> NormKind:
    return NormKind("p", float(p))


def norm(x: SparseVec, k: NormKind = SUP_NORM) -> float:
    return x.sup_norm() if k.kind == "sup" else x.p_norm(k.p)


def dist(x: SparseVec, y: SparseVec, k: NormKind = SUP_NORM) -> float:
    return norm(x - y, k)


@dataclass(frozen=True)
class SummableFunctional:
    """Linear functional with strictly positive coefficients and exact mass.

    coefficient(i) = head[i-1] for i <= len(head); beyond the head the
    coefficients follow the geometric law a * q**(i - len(head) - 1).  The
    total mass sum(head) + a/(1-q) is a closed form, so the supremum over any
    sup-ball is exact and is approached but never attained by finitely
    supported vectors.  A degenerate variant with a == 0 (made only through
    ``truncated``) attains its supremum and serves as the negative control.
    """

    head: tuple[float, ...] = ()
    tail_a: float = 0.5
    tail_q: float = 0.5

    def __post_init__(self):
        for c in self.head:
            if not (c > 0.0) or not math.isfinite(c):
                raise ConfigError("head coefficients must be strictly positive finite reals")
        if not (0.0 < self.tail_q < 1.0):
            raise ConfigError("tail ratio must satisfy 0 < q < 1")
        if self.tail_a < 0.0 or not math.isfinite(self.tail_a):
            raise ConfigError("tail scale must be a nonnegative finite real")

    @classmethod
    def truncated(cls, base: "SummableFunctional", m: int) -> "SummableFunctional":
        """First m coefficients of ``base`` with the tail removed.

        The result attains its sup on every ball: the intended failure mode
        for finite-dimensional negative controls.
        """
        head = tuple(base.coefficient(i) for i in range(1, m + 1))
        return cls(head=head, tail_a=0.0, tail_q=base.tail_q)

    @property
    def attaining(self) -> bool:
        return self.tail_a == 0.0

    def coefficient(self, i: int) -> float:
        h = len(self.head)
        if i <= h:
            return self.head[i - 1]
        return self.tail_a * self.tail_q ** (i - h - 1)

    @property
    def mass(self) -> float:
        return sum(self.head) + self.tail_a / (1.0 - self.tail_q)

    def partial_mass(self, m: int) -> float:
        """Sum of the first m coefficients, in closed form."""
        h = len(self.head)
        total = sum(self.head[: min(m, h)])
        if m > h:
            k = m - h
            total += self.tail_a * (1.0 - self.tail_q**k) / (1.0 - self.tail_q)
        return total

    def tail_mass_beyond(self, m: int) -> float:
        return self.mass - self.partial_mass(m)

    def __call__(self, x: SparseVec) -> float:
        return sum(self.coefficient(i) * v for i, v in x.items())

    def to_json(self) -> dict:
        return {
            "head": {str(i + 1): c for i, c in enumerate(self.head)},
            "tail": {"a": self.tail_a, "q": self.tail_q},
        }

    @classmethod
    def from_json(cls, obj) -> "SummableFunctional":
        head_map = {int(k): float(v) for k, v in obj.get("head", {}).items()}
        if head_map:
            m = max(head_map)
            if sorted(head_map) != list(range(1, m + 1)):
                raise ConfigError("functional head must cover a contiguous prefix 1..m")
            head = tuple(head_map[i] for i in range(1, m + 1))
        else:
            head = ()
        tail = obj["tail"]
        return cls(head=head, tail_a=float(tail["a"]), tail_q=float(tail["q"]))


def eval_functional(T: SummableFunctional, x: SparseVec) -> float:
    return T(x)


@dataclass(frozen=True)
class SupOnBall:
    value: float
    attained: bool


def sup_on_ball(T: SummableFunctional, rho: float) -> SupOnBall:
    """Supremum of T over the sup-ball of radius rho: rho * mass, exactly."""
    if not rho > 0.0:
        raise ConfigError("ball radius must be positive")
    return SupOnBall(value=rho * T.mass, attained=T.attaining)


@dataclass(frozen=True)
class DiagonalInjection:
    """Injective diagonal operator x -> (w_i x_i) with weights w_i -> 0."""

    law: str = "1/n"
    source_norm: NormKind = p_norm_kind(2.0)
    target_norm: NormKind = SUP_NORM

    def __post_init__(self):
        if self.law != "1/n":
            raise ConfigError(f"unknown injection weight law {self.law!r}")

    def weight(self, i: int) -> float:
        return 1.0 / i

    @property
    def operator_norm(self) -> float:
        return self.weight(1)

    def __call__(self, x: SparseVec) -> SparseVec:
        return SparseVec._from_clean({i: v * self.weight(i) for i, v in x.items()})

    def preimage(self, y: SparseVec) -> SparseVec:
        """Exact inverse on the image; every finitely supported vector qualifies."""
        out: dict[int, float] = {}
        for i, v in y.items():
            w = self.weight(i)
            if w == 0.0:
                raise CenterNotInImage(f"coordinate {i} has zero weight")
            out[i] = v / w
        return SparseVec._from_clean(out)


def apply_injection(T: DiagonalInjection, x: SparseVec) -> SparseVec:
    return T(x)
