"""Boundary color vectors and their numerical invariants.

A boundary vector is the list of colors read at the 2m endpoints of a tangle
diagram.  Over the integers it carries four quantities: the alternating sum,
the gcd of pairwise differences, the 2-adic valuation of that gcd, and the
multiset of entries modulo twice the gcd.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import BadModulus, TrivialVector


class RingKind(Enum):
    INTEGERS = "z"
    MODP = "zp"


@dataclass(frozen=True)
class RingSpec:
    kind: RingKind
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind is RingKind.MODP:
            if self.p is None or self.p < 3 or self.p % 2 == 0:
                raise BadModulus(f"modulus must be an odd integer >= 3, got {self.p}")
        elif self.p is not None:
            raise BadModulus("the integer ring takes no modulus")

    @classmethod
    def integers(cls) -> "RingSpec":
        return cls(RingKind.INTEGERS)

    @classmethod
    def mod(cls, p: int) -> "RingSpec":
        return cls(RingKind.MODP, p)

    @property
    def is_integers(self) -> bool:
        return self.kind is RingKind.INTEGERS

    def canon(self, x: int) -> int:
        return x if self.p is None else x % self.p

    def to_json(self):
        return "z" if self.p is None else {"zp": self.p}

    @classmethod
    def from_json(cls, obj) -> "RingSpec":
        if obj == "z":
            return cls.integers()
        if isinstance(obj, dict) and set(obj) == {"zp"}:
            return cls.mod(int(obj["zp"]))
        raise ValueError(f"unrecognized ring {obj!r}")

    def __str__(self):
        return "Z" if self.p is None else f"Z/{self.p}Z"


Z = RingSpec.integers()


@dataclass(frozen=True)
class BoundaryVector:
    """An even-length vector of ring elements, read cyclically from index 1."""

    entries: tuple
    ring: RingSpec = Z

    def __post_init__(self):
        entries = tuple(self.ring.canon(int(a)) for a in self.entries)
        if len(entries) == 0 or len(entries) % 2:
            raise ValueError(f"a boundary vector needs 2m >= 2 entries, got {len(entries)}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, entries: Iterable[int], ring: RingSpec = Z) -> "BoundaryVector":
        return cls(tuple(entries), ring)

    @property
    def m(self) -> int:
        return len(self.entries) // 2

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def rotate(self, k: int) -> "BoundaryVector":
        n = len(self.entries)
        k %= n
        return BoundaryVector(self.entries[k:] + self.entries[:k], self.ring)

    def reduce_mod(self, p: int) -> "BoundaryVector":
        return BoundaryVector(self.entries, RingSpec.mod(p))

    def __str__(self):
        body = ",".join(str(a) for a in self.entries)
        return f"({body})" if self.ring.is_integers else f"({body}) mod {self.ring.p}"


def as_vector(v, ring: RingSpec = Z) -> BoundaryVector:
    if isinstance(v, BoundaryVector):
        return v
    return BoundaryVector(tuple(v), ring)


def parse_vector(text: str, ring: RingSpec = Z) -> BoundaryVector:
    """Parse a comma-separated integer list such as ``"1, 7,-5,-11"``."""
    parts = [s.strip() for s in text.strip().strip("()[]").split(",")]
    if any(not s for s in parts):
        raise ValueError(f"cannot parse vector {text!r}")
    return BoundaryVector(tuple(int(s) for s in parts), ring)


@dataclass(frozen=True)
class InvariantReport:
    delta: int
    trivial: bool
    d: Optional[int] = None
    k: Optional[int] = None
    m_multiset: Optional[tuple] = None  # sorted residues modulo 2d

    @property
    def modulus(self) -> Optional[int]:
        return None if self.d is None else 2 * self.d

    def to_json(self) -> dict:
        return {
            "delta": self.delta,
            "trivial": self.trivial,
            "d": self.d,
            "k": self.k,
            "M": None if self.m_multiset is None else list(self.m_multiset),
            "M_modulus": self.modulus,
        }


@dataclass(frozen=True)
class AssociatedDecomposition:
    a1: int
    d: int
    w: BoundaryVector


def two_adic_valuation(n: int) -> int:
    if n == 0:
        raise ValueError("2-adic valuation of 0 is undefined")
    n = abs(n)
    return (n & -n).bit_length() - 1


def is_trivial(v) -> bool:
    v = as_vector(v)
    return len(set(v.entries)) == 1


def delta(v) -> int:
    v = as_vector(v)
    total = sum(a if i % 2 == 0 else -a for i, a in enumerate(v.entries))
    return v.ring.canon(total)


def diff_gcd(entries: Sequence[int]) -> int:
    """gcd of all pairwise differences; 0 for a constant sequence."""
    a1 = entries[0]
    return reduce(gcd, (a - a1 for a in entries[1:]), 0)


def residue_multiset(entries: Sequence[int], modulus: int) -> tuple:
    return tuple(sorted(a % modulus for a in entries))


def invariants(v) -> InvariantReport:
    v = as_vector(v)
    dl = delta(v)
    triv = is_trivial(v)
    if triv or not v.ring.is_integers:
        return InvariantReport(delta=dl, trivial=triv)
    d = diff_gcd(v.entries)
    return InvariantReport(
        delta=dl,
        trivial=False,
        d=d,
        k=two_adic_valuation(d),
        m_multiset=residue_multiset(v.entries, 2 * d),
    )


def _require_nontrivial_integer(v: BoundaryVector):
    if not v.ring.is_integers:
        raise ValueError("operation is defined over the integers only")
    if is_trivial(v):
        raise TrivialVector(f"{v} is trivial")


def associated(v) -> AssociatedDecomposition:
    """Write ``a_i = a_1 + d * b_i``; the vector of the b_i has b_1 = 0."""
    v = as_vector(v)
    _require_nontrivial_integer(v)
    d = diff_gcd(v.entries)
    a1 = v.entries[0]
    w = BoundaryVector(tuple((a - a1) // d for a in v.entries))
    return AssociatedDecomposition(a1=a1, d=d, w=w)


def divisibility_certificate(v) -> bool:
    v = as_vector(v)
    _require_nontrivial_integer(v)
    rep = invariants(v)
    return rep.delta % (2 ** (rep.k + 1)) == 0


def odd_count(v) -> int:
    return sum(1 for a in as_vector(v).entries if a % 2)


def residue_counts(v) -> Counter:
    rep = invariants(v)
    return Counter(rep.m_multiset or ())
