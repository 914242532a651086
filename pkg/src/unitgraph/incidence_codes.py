"""Linear codes spanned by the incidence matrix of a unit graph.

Minimum distances are exact or explicitly absent. Two exhaustive engines are
available:

* ``min_weight_exhaustive`` walks every nonzero message of a generator matrix
  (cost q^k - 1 codewords).
* ``min_weight_dependency`` searches for the smallest set of linearly dependent
  columns of a parity-check matrix, weight by weight, which is cheap when the
  answer is small even though the code dimension is large.

Either returns ``UNKNOWN`` when the work would exceed the budget, and
``UNDEFINED`` for the zero code.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np

from .errors import DomainError
from .gf_linalg import GfMatrix, inverse_table, null_space_basis, rank, row_basis
from .unit_graph import UnitGraph

UNKNOWN = "unknown"
UNDEFINED = "undefined"
Distance = Union[int, str]

DEFAULT_DISTANCE_BUDGET = 2**24
BUDGET_ENV = "UNITGRAPH_BUDGET"

# Entries in the precomputed low-message table of the enumerator.
_TABLE_CELLS = 1 << 22
# Python-level cost charged per prefix in the dependency search.
_PREFIX_COST = 64
# Size (log2) of the membership prefilter used by the dependency search.
_SLOT_BITS = 22


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_DISTANCE_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"{BUDGET_ENV}={raw!r} is not an integer") from None
    if value < 0:
        raise DomainError(f"{BUDGET_ENV} must be non-negative")
    return value


@dataclass(frozen=True)
class CodeParams:
    length: int
    dimension: int
    min_distance: Distance

    @property
    def detect_capability(self) -> int | None:
        return self.min_distance - 1 if isinstance(self.min_distance, int) else None

    @property
    def correct_capability(self) -> int | None:
        return (self.min_distance - 1) // 2 if isinstance(self.min_distance, int) else None

    def triple(self) -> list:
        return [self.length, self.dimension, self.min_distance]

    def __str__(self) -> str:
        return f"[{self.length}, {self.dimension}, {self.min_distance}]"


@dataclass(frozen=True, eq=False)
class LinearCode:
    q: int
    generator: GfMatrix  # k x length, rows independent
    d: Distance
    d_method: str | None = None  # "enumeration", "dependency" or None

    @property
    def length(self) -> int:
        return self.generator.cols

    @property
    def k(self) -> int:
        return self.generator.rows

    @property
    def params(self) -> CodeParams:
        return CodeParams(self.length, self.k, self.d)

    @cached_property
    def parity_check(self) -> GfMatrix:
        """Generator of the dual code, i.e. a parity-check matrix of this code."""
        return null_space_basis(self.generator)

    @cached_property
    def decoder(self) -> SyndromeDecoder:
        return SyndromeDecoder(self)

    def encode(self, message) -> np.ndarray:
        msg = np.asarray(message, dtype=np.int64)
        return msg @ self.generator.data.astype(np.int64) % self.q

    def __str__(self) -> str:
        return f"{self.params}_{self.q}"


def incidence_matrix(g: UnitGraph, q: int) -> GfMatrix:
    """|V| x |E| matrix with column e holding 1 at both endpoints of edge e."""
    data = np.zeros((g.num_vertices, g.num_edges), dtype=np.int64)
    cols = np.arange(g.num_edges)
    data[g.edges[:, 0], cols] = 1
    data[g.edges[:, 1], cols] = 1
    return GfMatrix(q, data)


def code_from_incidence(g: UnitGraph, q: int, distance_budget: int | None = None) -> LinearCode:
    budget = default_budget() if distance_budget is None else distance_budget
    gen = row_basis(incidence_matrix(g, q))
    d = min_weight_exhaustive(gen, budget)
    return LinearCode(q, gen, d, "enumeration" if isinstance(d, int) else None)


def dual_code(c: LinearCode, distance_budget: int | None = None) -> LinearCode:
    """The dual code, generated by the canonical null-space basis of c's generator.

    The distance is taken by message enumeration when q^k fits the budget and
    otherwise by the column-dependency search on c's generator.
    """
    budget = default_budget() if distance_budget is None else distance_budget
    gen = c.parity_check
    if gen.rows == 0:
        return LinearCode(c.q, gen, UNDEFINED)
    if _message_count(c.q, gen.rows) <= budget:
        return LinearCode(c.q, gen, min_weight_exhaustive(gen, budget), "enumeration")
    d = min_weight_dependency(c.generator, budget)
    return LinearCode(c.q, gen, d, "dependency" if isinstance(d, int) else None)


def error_capabilities(params: CodeParams) -> tuple[int, int]:
    d = params.min_distance
    if not isinstance(d, int):
        raise DomainError(f"minimum distance is {d}; capabilities need an exact value")
    return d - 1, (d - 1) // 2


def _message_count(q: int, k: int) -> int:
    return q**k - 1


def min_weight_exhaustive(gen: GfMatrix, budget: int | None = None) -> Distance:
    """Minimum weight over all q^k - 1 nonzero codewords of the row space of gen.

    gen must have independent rows (RREF or any other basis).
    """
    budget = default_budget() if budget is None else budget
    q, k = gen.q, gen.rows
    if k == 0:
        return UNDEFINED
    if _message_count(q, k) > budget:
        return UNKNOWN
    if rank(gen) != k:
        raise DomainError("generator rows are linearly dependent")
    if q == 2:
        return _min_weight_binary(gen.data)
    return _min_weight_qary(gen.data, q)


def _min_weight_binary(g: np.ndarray) -> int:
    k, n = g.shape
    packed = np.packbits(g.astype(bool), axis=1)
    pad = (-packed.shape[1]) % 8
    words = np.pad(packed, ((0, 0), (0, pad))).view(np.uint64)

    t = min(k, 16)
    table = np.zeros((1, words.shape[1]), dtype=np.uint64)
    for row in words[:t]:
        table = np.concatenate([table, table ^ row])
    high = words[t:]

    best = n + 1
    base = np.zeros(words.shape[1], dtype=np.uint64)
    # Gray-code walk over the high part of the message.
    for step in range(1 << len(high)):
        if step:
            base = base ^ high[(step & -step).bit_length() - 1]
        weights = np.bitwise_count(table ^ base).sum(axis=1, dtype=np.int64)
        if step == 0:
            weights[0] = n + 1
        best = min(best, int(weights.min()))
        if best == 1:
            break
    return best


def _min_weight_qary(g: np.ndarray, q: int) -> int:
    k, n = g.shape
    g = g.astype(np.int64)
    t = 1
    while t < k and q ** (t + 1) * n <= _TABLE_CELLS:
        t += 1
    table = np.zeros((1, n), dtype=np.int64)
    for row in g[:t]:
        table = np.concatenate([(table + a * row) % q for a in range(q)])
    table = table.astype(np.uint8)
    high = g[t:]

    best = n + 1
    for msg in itertools.product(range(q), repeat=len(high)):
        base = np.asarray(msg, dtype=np.int64) @ high % q if len(high) else np.zeros(n, np.int64)
        # table + base vanishes mod q exactly where table == -base
        neg = ((q - base) % q).astype(np.uint8)
        weights = n - np.count_nonzero(table == neg, axis=1)
        if not any(msg):
            weights[0] = n + 1
        best = min(best, int(weights.min()))
        if best == 1:
            break
    return best


def _normalise(vecs: np.ndarray, q: int) -> np.ndarray:
    """Scale each nonzero row so that its first nonzero entry is 1."""
    inv = np.asarray(inverse_table(q), dtype=np.int64)
    lead = vecs[np.arange(len(vecs)), (vecs != 0).argmax(axis=1)]
    return vecs * inv[lead][:, None] % q


def min_weight_dependency(parity: GfMatrix, budget: int | None = None) -> Distance:
    """Minimum weight of a nonzero x with parity @ x = 0.

    Weights are tried in increasing order; at weight w every (w-2)-prefix of
    columns is combined with all later columns in one vectorised step, and the
    last column is looked up through a random linear hash of the columns.
    Linear hashes never miss a true dependency and candidates are checked
    exactly, so the answer is exact.
    """
    budget = default_budget() if budget is None else budget
    q = parity.q
    n = parity.cols
    r = rank(parity)
    if r == n:
        return UNDEFINED
    cols = parity.data.T.astype(np.int64)  # one row per column of the parity check

    nonzero = cols.any(axis=1)
    if not nonzero.all():
        return 1
    norm = _normalise(cols, q)
    if len(np.unique(norm, axis=0)) < n:
        return 2

    field = _FieldHash(cols, q)
    hv = field.hashes
    scalars = list(range(1, q))
    # key of t * column l, for every column l and every nonzero t
    keys = np.concatenate([field.scale(hv, t) for t in scalars])
    owners = np.tile(np.arange(n), q - 1)
    owner_scalar = np.repeat(np.array(scalars), n)
    order = np.argsort(keys, kind="stable")
    keys, owners, owner_scalar = keys[order], owners[order], owner_scalar[order]
    present = np.zeros(1 << _SLOT_BITS, dtype=bool)
    present[_slot(keys)] = True

    spent = 2 * n
    for w in range(3, r + 2):
        for prefix in itertools.combinations(range(n - 2), w - 2):
            last = prefix[-1]
            rest = np.arange(last + 1, n)
            spent += _PREFIX_COST * (q - 1) ** (w - 3) + len(rest) * (q - 1) ** (w - 2)
            if spent > budget:
                return UNKNOWN
            tail = hv[rest]
            for coeffs in itertools.product(scalars, repeat=w - 3):
                a = (1,) + coeffs
                s_hash = hv[prefix[0]]
                for i, c in zip(prefix[1:], coeffs):
                    s_hash = field.add(s_hash, field.scale(hv[i], c))
                # needle for (b, j): key of -(s + b * column j)
                needle = np.concatenate(
                    [field.scale(field.add(s_hash, field.scale(tail, b)), q - 1) for b in scalars]
                )
                maybe = np.flatnonzero(present[_slot(needle)])
                if not maybe.size:
                    continue
                pos = np.minimum(np.searchsorted(keys, needle[maybe]), len(keys) - 1)
                hits = maybe[keys[pos] == needle[maybe]]
                if not hits.size:
                    continue
                s_exact = np.asarray(a, dtype=np.int64) @ cols[list(prefix)] % q
                for h in hits:
                    b = scalars[h // len(rest)]
                    j = int(rest[h % len(rest)])
                    v = (s_exact + b * cols[j]) % q
                    lo = np.searchsorted(keys, needle[h], side="left")
                    hi = np.searchsorted(keys, needle[h], side="right")
                    for pos_l in range(lo, hi):
                        l, t = int(owners[pos_l]), int(owner_scalar[pos_l])
                        if l in prefix or l == j:
                            continue
                        if not ((v + t * cols[l]) % q).any():
                            return w
    raise AssertionError("null space is nonzero but no dependency was found")


class _FieldHash:
    """A random F_q-linear map of column vectors into integer keys.

    For q = 2 and q = 3 a key is one uint64 (64 bits, or 32 trits held in two
    bit planes) so adding and scaling keys are a few bitwise operations. Other
    fields use base-q integers and go through their digits. Linearity means
    key(a x + b y) = a key(x) + b key(y), so a true dependency always collides
    with its partner.
    """

    _MASK32 = np.uint64(0xFFFFFFFF)
    _SHIFT32 = np.uint64(32)

    def __init__(self, cols: np.ndarray, q: int):
        self.q = q
        width = {2: 64, 3: 32}.get(q, int(62 // math.log2(q)))
        k = cols.shape[1]
        if k <= width:
            digits = np.zeros((cols.shape[0], width), dtype=np.int64)
            digits[:, :k] = cols % q
        else:
            proj = np.random.default_rng(0x5EED).integers(0, q, size=(k, width))
            digits = cols @ proj % q
        self.powers = q ** np.arange(width, dtype=np.int64)
        if q == 2:
            self.hashes = _pack_bits(digits == 1)
        elif q == 3:
            self.hashes = _pack_bits(digits == 1) | (_pack_bits(digits == 2) << self._SHIFT32)
        else:
            self.hashes = self._encode(digits)

    def _encode(self, digits: np.ndarray) -> np.ndarray:
        return digits @ self.powers

    def _decode(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x)[..., None] // self.powers % self.q

    def add(self, x, y):
        if self.q == 2:
            return x ^ y
        if self.q == 3:
            x1, x2 = x & self._MASK32, x >> self._SHIFT32
            y1, y2 = y & self._MASK32, y >> self._SHIFT32
            t = (x1 | y2) ^ (x2 | y1)
            return ((x2 | y2) ^ t) | (((x1 | y1) ^ t) << self._SHIFT32)
        return self._encode((self._decode(x) + self._decode(y)) % self.q)

    def scale(self, x, t: int):
        t %= self.q
        if t == 1:
            return x
        if self.q == 3:
            return (x >> self._SHIFT32) | ((x & self._MASK32) << self._SHIFT32)
        return self._encode(self._decode(x) * t % self.q)


def _slot(keys: np.ndarray) -> np.ndarray:
    """Multiplicative hash of keys onto a table of 2^_SLOT_BITS slots."""
    mixed = keys.astype(np.uint64) * np.uint64(0x9E3779B97F4A7C15)
    return (mixed >> np.uint64(64 - _SLOT_BITS)).astype(np.intp)


def _pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a (m, <=64) boolean array into m little-endian uint64 words."""
    padded = np.zeros((bits.shape[0], 64), dtype=bool)
    padded[:, : bits.shape[1]] = bits
    return np.packbits(padded, axis=1, bitorder="little").view(np.uint64).ravel()


class SyndromeDecoder:
    """Table-driven single-error decoder for a linear code."""

    def __init__(self, code: LinearCode):
        if isinstance(code.d, int) and code.d < 3:
            raise DomainError(f"a code with d = {code.d} cannot correct single errors")
        self.code = code
        self.q = code.q
        self.check = code.parity_check.data.astype(np.int64)
        self.table: dict[bytes, tuple[int, int]] = {}
        for pos in range(code.length):
            for a in range(1, self.q):
                syn = a * self.check[:, pos] % self.q
                key = syn.astype(np.uint8).tobytes()
                if not syn.any() or key in self.table:
                    raise DomainError("single-error syndromes are not distinct")
                self.table[key] = (pos, a)

    def syndrome(self, received) -> np.ndarray:
        r = np.asarray(received, dtype=np.int64)
        if r.shape != (self.code.length,):
            raise DomainError(f"received word of length {r.size}, code length {self.code.length}")
        return self.check @ (r % self.q) % self.q

    def decode(self, received) -> tuple[np.ndarray, str]:
        syn = self.syndrome(received)
        word = np.asarray(received, dtype=np.int64) % self.q
        if not syn.any():
            return word, "clean"
        hit = self.table.get(syn.astype(np.uint8).tobytes())
        if hit is None:
            return word, "uncorrectable"
        pos, a = hit
        word = word.copy()
        word[pos] = (word[pos] - a) % self.q
        return word, "corrected"


def syndrome_decode_single(c: LinearCode, received) -> tuple[np.ndarray, str]:
    return c.decoder.decode(received)


def decode_trials(code: LinearCode, errors: int, trials: int, seed: int) -> dict[str, int]:
    """Encode random messages, add `errors` random errors, decode, and tally outcomes."""
    if not 0 <= errors <= code.length:
        raise DomainError(f"cannot place {errors} errors in length {code.length}")
    rng = np.random.default_rng(seed)
    tally = {"trials": trials, "recovered": 0, "clean": 0, "corrected": 0,
             "uncorrectable": 0, "miscorrected": 0}
    for _ in range(trials):
        sent = code.encode(rng.integers(0, code.q, size=code.k))
        noisy = sent.copy()
        where = rng.choice(code.length, size=errors, replace=False)
        noisy[where] = (noisy[where] + rng.integers(1, code.q, size=errors)) % code.q
        decoded, flag = syndrome_decode_single(code, noisy)
        tally[flag] += 1
        if np.array_equal(decoded, sent):
            tally["recovered"] += 1
        elif flag != "uncorrectable":
            tally["miscorrected"] += 1
    return tally
