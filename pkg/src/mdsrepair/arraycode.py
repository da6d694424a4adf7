"""The (K+2, K) MDS array code with two symbols per node.

The parity-check structure is a 2x N block matrix: identity blocks on
top and one invertible 2x2 block A_i per node below.  A codeword is N
column vectors alpha^(i) of two field symbols satisfying

    sum_i alpha^(i) = 0        and        sum_i A_i alpha^(i) = 0.

The code tolerates any two node erasures iff (A_i + A_j) is invertible
for every i != j; validate_mds checks exactly that, plus invertibility
of each A_i.  Nodes 0..K-1 are systematic by convention here (the
placement is immaterial to the repair theory).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .blockmat import Block
from .gf2m import GF2m


class CodeFormatError(ValueError):
    """Raised for malformed or invalid serialized codes."""


@dataclass(frozen=True)
class ArrayCode:
    """N invertible blocks over a shared field; K = N - 2 data nodes."""

    field: GF2m
    blocks: tuple[Block, ...]

    def __post_init__(self) -> None:
        if len(self.blocks) < 3:
            raise ValueError(f"need at least 3 nodes, got {len(self.blocks)}")
        for i, b in enumerate(self.blocks):
            if b.field != self.field:
                raise ValueError(f"block {i} belongs to {b.field!r}, code uses {self.field!r}")

    @property
    def n(self) -> int:
        return len(self.blocks)

    @property
    def k(self) -> int:
        return self.n - 2

    def parity_check_rows(self) -> list[list[int]]:
        """The 4 x 2N scalar parity-check matrix, for display."""
        top1 = []
        top2 = []
        bot1 = []
        bot2 = []
        for b in self.blocks:
            b11, b12, b21, b22 = b.entries
            top1 += [1, 0]
            top2 += [0, 1]
            bot1 += [b11, b12]
            bot2 += [b21, b22]
        return [top1, top2, bot1, bot2]


@dataclass(frozen=True)
class MdsReport:
    """Outcome of validate_mds; failures are data, not exceptions."""

    ok: bool
    singular_nodes: tuple[int, ...]
    bad_pairs: tuple[tuple[int, int], ...]

    def describe(self) -> str:
        if self.ok:
            return "MDS: ok"
        parts = []
        if self.singular_nodes:
            parts.append("singular nodes " + ", ".join(str(i + 1) for i in self.singular_nodes))
        if self.bad_pairs:
            parts.append(
                "singular pair sums "
                + ", ".join(f"({i + 1},{j + 1})" for i, j in self.bad_pairs)
            )
        return "MDS: FAIL (" + "; ".join(parts) + ")"


def validate_mds(code: ArrayCode) -> MdsReport:
    """Check all A_i invertible and all pairwise sums A_i + A_j invertible."""
    singular = tuple(i for i, b in enumerate(code.blocks) if not b.is_invertible)
    bad = []
    for i in range(code.n):
        for j in range(i + 1, code.n):
            if not (code.blocks[i] + code.blocks[j]).is_invertible:
                bad.append((i, j))
    return MdsReport(ok=not singular and not bad, singular_nodes=singular, bad_pairs=tuple(bad))


@dataclass(frozen=True)
class Codeword:
    """N column vectors of two symbols each."""

    symbols: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, i: int) -> tuple[int, int]:
        return self.symbols[i]


def parity_residuals(code: ArrayCode, word: Codeword) -> tuple[tuple[int, int], tuple[int, int]]:
    """The two block parity sums; both are (0, 0) for a valid codeword."""
    f = code.field
    s1 = [0, 0]
    s2 = [0, 0]
    for blk, (a1, a2) in zip(code.blocks, word.symbols):
        s1[0] ^= a1
        s1[1] ^= a2
        v = blk.mul_vec((a1, a2))
        s2[0] ^= v[0]
        s2[1] ^= v[1]
    del f
    return (tuple(s1), tuple(s2))


def encode(code: ArrayCode, data: list[int] | tuple[int, ...]) -> Codeword:
    """Place 2K data symbols on nodes 0..K-1 and solve the two parities.

    With s = sum of data vectors and t = sum of A_i alpha^(i) over data
    nodes, the parity nodes satisfy alpha^(N-2) + alpha^(N-1) = s and
    A_(N-2) alpha^(N-2) + A_(N-1) alpha^(N-1) = t, so
    alpha^(N-2) = (A_(N-2)+A_(N-1))^-1 (t + A_(N-1) s).
    """
    k = code.k
    if len(data) != 2 * k:
        raise ValueError(f"expected {2 * k} data symbols, got {len(data)}")
    if any(not 0 <= d < code.field.q for d in data):
        raise ValueError("data symbol out of field range")
    vecs = [(data[2 * i], data[2 * i + 1]) for i in range(k)]
    s = (0, 0)
    t = (0, 0)
    for blk, v in zip(code.blocks[:k], vecs):
        s = (s[0] ^ v[0], s[1] ^ v[1])
        w = blk.mul_vec(v)
        t = (t[0] ^ w[0], t[1] ^ w[1])
    ap, aq = code.blocks[k], code.blocks[k + 1]
    pair_sum = ap + aq
    if not pair_sum.is_invertible:
        raise ValueError("parity blocks have a singular sum; code is not MDS")
    rhs = aq.mul_vec(s)
    rhs = (rhs[0] ^ t[0], rhs[1] ^ t[1])
    alpha_p = pair_sum.inverse().mul_vec(rhs)
    alpha_q = (alpha_p[0] ^ s[0], alpha_p[1] ^ s[1])
    word = Codeword(tuple(vecs) + (alpha_p, alpha_q))
    assert parity_residuals(code, word) == ((0, 0), (0, 0))
    return word


class CodeGenerationError(RuntimeError):
    """Raised when rejection sampling exhausts its draw budget."""


def random_code(field: GF2m, n: int, seed: int, max_draws: int = 1_000_000) -> ArrayCode:
    """Rejection-sample N blocks keeping every pairwise sum invertible.

    Deterministic in (field, n, seed).  Each candidate block drawn counts
    against max_draws whether or not it is accepted.
    """
    if n < 3:
        raise ValueError(f"need at least 3 nodes, got n={n}")
    rng = random.Random(seed)
    chosen: list[Block] = []
    for _ in range(max_draws):
        cand = Block(field, (rng.randrange(field.q), rng.randrange(field.q),
                             rng.randrange(field.q), rng.randrange(field.q)))
        if not cand.is_invertible:
            continue
        if all((cand + b).is_invertible for b in chosen):
            chosen.append(cand)
            if len(chosen) == n:
                return ArrayCode(field, tuple(chosen))
    raise CodeGenerationError(
        f"no MDS code with n={n} over GF({field.q}) found within {max_draws} draws"
    )


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

_CODE_KEYS = {"m", "poly", "n", "A"}


def code_to_json(code: ArrayCode) -> str:
    doc = {
        "m": code.field.m,
        "poly": code.field.poly,
        "n": code.n,
        "A": [list(b.entries) for b in code.blocks],
    }
    return json.dumps(doc, indent=2) + "\n"


def code_from_json(text: str) -> ArrayCode:
    """Parse and fully validate a code document (strict keys, MDS check)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CodeFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise CodeFormatError("top-level document must be an object")
    unknown = set(doc) - _CODE_KEYS
    if unknown:
        raise CodeFormatError(f"unknown keys: {sorted(unknown)}")
    missing = _CODE_KEYS - set(doc)
    if missing:
        raise CodeFormatError(f"missing keys: {sorted(missing)}")
    try:
        field = GF2m(int(doc["m"]), int(doc["poly"]))
    except ValueError as exc:
        raise CodeFormatError(str(exc)) from exc
    n = int(doc["n"])
    if n < 3:
        raise CodeFormatError(f"n must be at least 3, got {n}")
    raw = doc["A"]
    if not isinstance(raw, list) or len(raw) != n:
        raise CodeFormatError(f"A must list exactly {n} blocks")
    blocks = []
    for i, entries in enumerate(raw):
        if not isinstance(entries, list) or len(entries) != 4:
            raise CodeFormatError(f"A[{i}] must have 4 entries")
        try:
            blocks.append(Block(field, tuple(int(e) for e in entries)))
        except ValueError as exc:
            raise CodeFormatError(f"A[{i}]: {exc}") from exc
    code = ArrayCode(field, tuple(blocks))
    report = validate_mds(code)
    if not report.ok:
        raise CodeFormatError(report.describe())
    return code
