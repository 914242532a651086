"""Residue rings Z_n and finite direct sums Z_{n1} + ... + Z_{nr}.

Elements of a direct sum are tuples of residues. ``Z_1`` is the zero ring,
whose single element ``0`` is also its identity and therefore a unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterator, Sequence

import numpy as np

from .errors import DomainError

# Element counts must stay representable as native unsigned 64-bit integers.
MAX_CARDINALITY = 2**64 - 1


@dataclass(frozen=True)
class RingSpec:
    """A direct sum of residue rings, given by its ordered moduli."""

    moduli: tuple[int, ...]

    def __init__(self, moduli: Sequence[int]):
        moduli = tuple(int(m) for m in moduli)
        if not moduli:
            raise DomainError("a ring needs at least one modulus")
        if any(m < 1 for m in moduli):
            raise DomainError(f"moduli must be >= 1, got {moduli}")
        if math.prod(moduli) > MAX_CARDINALITY:
            raise OverflowError(f"ring of size {math.prod(moduli)} overflows 64 bits")
        object.__setattr__(self, "moduli", moduli)

    @property
    def r(self) -> int:
        return len(self.moduli)

    @property
    def size(self) -> int:
        return math.prod(self.moduli)

    def elements(self) -> Iterator[RingElement]:
        """All elements in lexicographic order of their residue tuples."""
        for idx in range(self.size):
            yield self.element_at(idx)

    def element_at(self, index: int) -> RingElement:
        """The element at position ``index`` of the lexicographic order."""
        if not 0 <= index < self.size:
            raise DomainError(f"index {index} outside [0, {self.size})")
        residues = []
        for m in reversed(self.moduli):
            index, rem = divmod(index, m)
            residues.append(rem)
        return RingElement(tuple(reversed(residues)))

    def index_of(self, x: RingElement) -> int:
        _check_shape(x, self)
        idx = 0
        for res, m in zip(x.residues, self.moduli):
            idx = idx * m + res
        return idx

    def residue_table(self) -> np.ndarray:
        """``size x r`` array of all elements, row i = element_at(i)."""
        grids = np.indices(self.moduli).reshape(self.r, -1)
        return np.ascontiguousarray(grids.T, dtype=np.int64)

    def add(self, x: RingElement, y: RingElement) -> RingElement:
        _check_shape(x, self)
        _check_shape(y, self)
        return RingElement(
            tuple((a + b) % m for a, b, m in zip(x.residues, y.residues, self.moduli))
        )

    def __str__(self) -> str:
        return " + ".join(f"Z_{m}" for m in self.moduli)


@dataclass(frozen=True)
class RingElement:
    residues: tuple[int, ...]

    def __init__(self, residues: Sequence[int]):
        object.__setattr__(self, "residues", tuple(int(a) for a in residues))

    def __len__(self) -> int:
        return len(self.residues)


def _check_shape(x: RingElement, spec: RingSpec) -> None:
    if len(x.residues) != spec.r:
        raise DomainError(f"element {x.residues} does not have {spec.r} components")
    for a, m in zip(x.residues, spec.moduli):
        if not 0 <= a < m:
            raise DomainError(f"residue {a} is not reduced modulo {m}")


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division, as ``[(p, e), ...]`` with p ascending."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    factors = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        factors.append((n, 1))
    return factors


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == [(n, 1)]


def euler_phi(n: int) -> int:
    if n < 1:
        raise DomainError(f"euler_phi is defined for n >= 1, got {n}")
    result = n
    for p, _ in factorize(n):
        result = result // p * (p - 1)
    return result


def is_unit(x: RingElement, spec: RingSpec) -> bool:
    _check_shape(x, spec)
    # math.gcd(0, 1) == 1, so the zero ring's only element counts as a unit.
    return all(math.gcd(a, m) == 1 for a, m in zip(x.residues, spec.moduli))


def unit_mask(m: int) -> np.ndarray:
    """Boolean array of length m; entry a is True iff a is a unit of Z_m."""
    return np.gcd(np.arange(m), m) == 1


def units(spec: RingSpec) -> set[RingElement]:
    return {x for x in spec.elements() if is_unit(x, spec)}


def non_units(spec: RingSpec) -> set[RingElement]:
    return {x for x in spec.elements() if not is_unit(x, spec)}


def unit_count(spec: RingSpec) -> int:
    return math.prod(euler_phi(m) for m in spec.moduli)


def crt_decompose(n: int) -> RingSpec:
    """Prime-power moduli of n, ordered by ascending prime."""
    if n < 2:
        raise DomainError(f"crt_decompose needs n >= 2, got {n}")
    return RingSpec([p**e for p, e in factorize(n)])


def ring_of(n: int) -> RingSpec:
    """The CRT form of Z_n, with Z_1 kept as the zero ring."""
    return RingSpec([1]) if n == 1 else crt_decompose(n)


def crt_map(x: int, n: int) -> RingElement:
    if not 0 <= x < n:
        raise DomainError(f"{x} is not a residue modulo {n}")
    return RingElement([x % m for m in crt_decompose(n).moduli])


def crt_inverse(x: RingElement, n: int) -> int:
    """The unique residue modulo n that crt_map sends to x."""
    spec = crt_decompose(n)
    _check_shape(x, spec)

    def combine(acc: tuple[int, int], part: tuple[int, int]) -> tuple[int, int]:
        a, m = acc
        b, k = part
        t = (b - a) * pow(m, -1, k) % k
        return a + m * t, m * k

    value, _ = reduce(combine, zip(x.residues, spec.moduli), (0, 1))
    return value


def lemma_violations(p: int, k: int) -> list[tuple[int, int]]:
    """Pairs (u, v) with u a unit and v a non-unit of Z_{p^k} whose sum is not a unit.

    An empty list confirms that unit + non-unit is always a unit in Z_{p^k}.
    """
    if not is_prime(p) or k < 1:
        raise DomainError(f"{p}^{k} is not a prime power")
    m = p**k
    mask = unit_mask(m)
    u = np.flatnonzero(mask)
    v = np.flatnonzero(~mask)
    sums = (u[:, None] + v[None, :]) % m
    bad = np.argwhere(~mask[sums])
    return [(int(u[i]), int(v[j])) for i, j in bad]


def prime_powers_up_to(bound: int) -> list[tuple[int, int]]:
    """All (p, k) with p prime, k >= 1 and p^k <= bound."""
    out = []
    for p in range(2, bound + 1):
        if is_prime(p):
            k, q = 1, p
            while q <= bound:
                out.append((p, k))
                k += 1
                q *= p
    return sorted(out, key=lambda pk: pk[0] ** pk[1])
