"""Brute-force search and empirical verification over the repair-matrix space.

Two repair matrices with the same row space repair exactly the same
nodes, so per-node searches range over one canonical representative per
2-dimensional row space of F_q^4 (``blockmat.enumerate_row_spaces``).
The per-node minima assemble directly into a repair process because a
node's bandwidth depends only on its own group's matrix.

``verify_lemmas`` re-checks the structural facts this package's search
relies on, over either sampled random codes or an exhaustive
enumeration of small codes.  Every check names the fact it exercises;
counterexamples are reported as data, never raised.  Two of the checked
claims (``hatM`` part 1 and ``girth4free``) are *expected* to produce
counterexamples: they implicitly assume the strict one-sided block
classes are preserved by invertible row transforms, which is false (a
strict one-sided block can degrade to a singular class-M block, turning
a 1-symbol helper into a 2-symbol helper).  The report pins down every
such instance so the failure mode is reproducible.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arraycode import ArrayCode, random_code
from .blockmat import Block, BlockTag, RepairMat, canonical_matrix_array, enumerate_row_spaces
from .gf2m import GF2m
from .repair import (
    RepairGroup,
    RepairProcess,
    compute_blocks,
    helper_cost,
    merge_equivalent,
    process_bandwidth,
    process_validate,
)

#: Row-space enumeration is (q^2+1)(q^2+q+1); past q=16 that is no longer
#: desk-scale, so searches refuse larger fields unless told otherwise.
DEFAULT_MAX_Q = 16


# ---------------------------------------------------------------------------
# vectorized kernels
# ---------------------------------------------------------------------------


def _code_array(code: ArrayCode) -> np.ndarray:
    return np.asarray([b.entries for b in code.blocks], dtype=np.uint8)


def _induced_entries(field: GF2m, mats: np.ndarray, codes: np.ndarray):
    """Entries of H = M1 + M2 A for every (matrix, node) combination.

    mats has shape (..., 8) laid out as RepairMat.rows flattened; codes
    has shape (..., N, 4).  Returns four arrays h11, h12, h21, h22 of
    shape broadcast(mats[..., None], codes[..., None, :, :]).
    """
    mul = field.mul_array
    m1_11, m1_12, m2_11, m2_12 = (mats[..., i, None] for i in (0, 1, 2, 3))
    m1_21, m1_22, m2_21, m2_22 = (mats[..., i, None] for i in (4, 5, 6, 7))
    a11, a12, a21, a22 = (codes[..., None, :, i] for i in (0, 1, 2, 3))
    h11 = m1_11 ^ mul(m2_11, a11) ^ mul(m2_12, a21)
    h12 = m1_12 ^ mul(m2_11, a12) ^ mul(m2_12, a22)
    h21 = m1_21 ^ mul(m2_21, a11) ^ mul(m2_22, a21)
    h22 = m1_22 ^ mul(m2_21, a12) ^ mul(m2_22, a22)
    return h11, h12, h21, h22


@dataclass(frozen=True)
class ClassArrays:
    """Per-(matrix, node) block classification in array form."""

    invertible: np.ndarray
    zero: np.ndarray
    strict_l: np.ndarray
    strict_r: np.ndarray
    cost: np.ndarray

    @property
    def onesided(self) -> np.ndarray:
        return self.strict_l | self.strict_r


def _classify_entries(field: GF2m, h11, h12, h21, h22, l_cost: int = 1, r_cost: int = 1) -> ClassArrays:
    mul = field.mul_array
    det = mul(h11, h22) ^ mul(h12, h21)
    zero = (h11 | h12 | h21 | h22) == 0
    strict_l = (h11 == 0) & (h21 == 0) & (h12 != 0) & (h22 != 0)
    strict_r = (h12 == 0) & (h22 == 0) & (h11 != 0) & (h21 != 0)
    cost = np.full(zero.shape, 2, dtype=np.uint8)
    cost[strict_l] = l_cost
    cost[strict_r] = r_cost
    cost[zero] = 0
    return ClassArrays(det != 0, zero, strict_l, strict_r, cost)


@dataclass(frozen=True)
class CodeScan:
    """Classification of every canonical matrix against one code."""

    code: ArrayCode
    classes: ClassArrays
    #: bandwidth[c, i] for matrices that can repair node i, else _SENTINEL
    bandwidth: np.ndarray
    m2_singular: np.ndarray


_SENTINEL = np.int32(1 << 20)


def scan_code(code: ArrayCode, l_cost: int = 1, r_cost: int = 1) -> CodeScan:
    field = code.field
    mats = canonical_matrix_array(field.q)
    h = _induced_entries(field, mats, _code_array(code))
    cls = _classify_entries(field, *h, l_cost=l_cost, r_cost=r_cost)
    totals = cls.cost.sum(axis=-1, dtype=np.int32)
    bandwidth = np.where(cls.invertible, totals[:, None] - cls.cost, _SENTINEL)
    m2 = mats[:, (2, 3, 6, 7)]
    m2_det = field.mul_array(m2[:, 0], m2[:, 3]) ^ field.mul_array(m2[:, 1], m2[:, 2])
    return CodeScan(code, cls, bandwidth, m2_det == 0)


# ---------------------------------------------------------------------------
# per-node and total optima
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BestRepair:
    node: int
    bandwidth: int
    matrix: RepairMat
    canonical_index: int
    #: canonical indices of every matrix attaining the minimum
    minimizers: tuple[int, ...]


@dataclass(frozen=True)
class OptimalRepair:
    total: int
    per_node: tuple[BestRepair, ...]
    process: RepairProcess


def _check_field_size(field: GF2m, max_q: int | None) -> None:
    limit = DEFAULT_MAX_Q if max_q is None else max_q
    if field.q > limit:
        raise ValueError(
            f"row-space enumeration over GF({field.q}) has "
            f"{(field.q**2 + 1) * (field.q**2 + field.q + 1)} entries; "
            f"pass max_q>={field.q} to search anyway"
        )


def _best_from_scan(scan: CodeScan, node: int) -> BestRepair:
    column = scan.bandwidth[:, node]
    best = int(column.min())
    assert best < _SENTINEL, "the [I | O] matrix repairs every node"
    minimizers = np.flatnonzero(column == best)
    field = scan.code.field
    mats = canonical_matrix_array(field.q)
    winner = int(minimizers[0])
    rows = mats[winner]
    mat = RepairMat(field, (tuple(int(e) for e in rows[:4]), tuple(int(e) for e in rows[4:])))
    return BestRepair(node, best, mat, winner, tuple(int(i) for i in minimizers))


def best_repair_for_node(code: ArrayCode, node: int, max_q: int | None = None) -> BestRepair:
    """Scan every row space and minimize the node's repair bandwidth.

    The winner is the lowest-index canonical representative among the
    minimizers, so results are reproducible run to run.
    """
    _check_field_size(code.field, max_q)
    if not 0 <= node < code.n:
        raise ValueError(f"node {node} out of range for n={code.n}")
    return _best_from_scan(scan_code(code), node)


def optimal_total_bandwidth(code: ArrayCode, max_q: int | None = None) -> OptimalRepair:
    """Per-node optima assembled into one repair process.

    Nodes whose winning row spaces coincide share a group; distinct row
    spaces can never satisfy the merge condition, so the assembly is
    already effective (merge_equivalent is run anyway and must be a
    fixed point).
    """
    _check_field_size(code.field, max_q)
    scan = scan_code(code)
    best = tuple(_best_from_scan(scan, i) for i in range(code.n))
    groups: dict[int, list[int]] = {}
    for b in best:
        groups.setdefault(b.canonical_index, []).append(b.node)
    by_index = sorted(groups.items())
    mats = {b.canonical_index: b.matrix for b in best}
    proc = RepairProcess(
        tuple(RepairGroup(mats[idx], frozenset(nodes)) for idx, nodes in by_index)
    )
    proc = merge_equivalent(proc, code)
    report = process_bandwidth(proc, code)
    total = sum(b.bandwidth for b in best)
    assert report.total == total, "assembled process must realize the per-node minima"
    return OptimalRepair(total, best, proc)


def best_repair_reference(code: ArrayCode, node: int) -> tuple[int, int]:
    """Object-level rescan of the same space; cross-checks the kernels.

    Returns (bandwidth, canonical index of the first minimizer).
    """
    best = None
    best_idx = None
    for idx, mat in enumerate(enumerate_row_spaces(code.field)):
        blocks = compute_blocks(mat, code)
        if not blocks[node].is_invertible:
            continue
        b = sum(helper_cost(blk) for j, blk in enumerate(blocks) if j != node)
        if best is None or b < best:
            best, best_idx = b, idx
    return best, best_idx


# ---------------------------------------------------------------------------
# exhaustive small-code enumeration
# ---------------------------------------------------------------------------


def enumerate_codes_identity_first(field: GF2m, n: int) -> np.ndarray:
    """All MDS codes with the first block pinned to the identity.

    Every valid code is carried to exactly one identity-first code by the
    global left factor A_i -> A_1^{-1} A_i, which maps repair matrices to
    repair matrices of equal induced blocks, so for exhaustive lemma
    verification this family is the natural transversal.  Returns an
    array of shape (count, n) of indices into the invertible-block list
    (``invertible_blocks``), in lexicographic order.
    """
    inv_list = invertible_blocks(field)
    entries = np.asarray([b.entries for b in inv_list], dtype=np.uint8)
    g = len(inv_list)
    mul = field.mul_array
    sums = entries[:, None, :] ^ entries[None, :, :]
    det = mul(sums[..., 0], sums[..., 3]) ^ mul(sums[..., 1], sums[..., 2])
    compat = det != 0  # [g, g]; diagonal is False (A + A = 0)
    ident = next(i for i, b in enumerate(inv_list) if b.entries == (1, 0, 0, 1))

    rows: list[np.ndarray] = []
    base = np.flatnonzero(compat[ident])
    if n == 3:
        for a2 in base:
            c3 = base[compat[a2][base]]
            for a3 in c3:
                rows.append(np.asarray((ident, a2, a3)))
    elif n == 4:
        for a2 in base:
            c3 = base[compat[a2][base]]
            for a3 in c3:
                c4 = c3[compat[a3][c3]]
                if len(c4):
                    block = np.empty((len(c4), 4), dtype=np.int64)
                    block[:, 0] = ident
                    block[:, 1] = a2
                    block[:, 2] = a3
                    block[:, 3] = c4
                    rows.append(block)
    else:
        raise ValueError(f"exhaustive enumeration supports n in (3, 4), not n={n}")
    if not rows:
        return np.empty((0, n), dtype=np.int64)
    out = np.vstack([r.reshape(-1, n) for r in rows])
    return out


@lru_cache(maxsize=4)
def invertible_blocks(field: GF2m) -> list[Block]:
    """GL(2, q) in lexicographic entry order."""
    out = []
    for entries in itertools.product(range(field.q), repeat=4):
        b = Block(field, entries)
        if b.is_invertible:
            out.append(b)
    return out


# ---------------------------------------------------------------------------
# lemma verification
# ---------------------------------------------------------------------------

LEMMA_NAMES = (
    "Bij2",
    "sameBiBj",
    "totalrepairbandwidth",
    "allzeros",
    "fullrankM",
    "Bicalculation",
    "M2notinvertible",
    "hatM",
    "sametype",
    "girth4free",
)

_MAX_COUNTEREXAMPLES = 5


class _Recorder:
    def __init__(self) -> None:
        self.checks = {name: 0 for name in LEMMA_NAMES}
        self.violations = {name: 0 for name in LEMMA_NAMES}
        self.payloads: dict[str, list[dict]] = {name: [] for name in LEMMA_NAMES}

    def count(self, name: str, amount: int) -> None:
        self.checks[name] += int(amount)

    def fail(self, name: str, amount: int, payloads: list[dict]) -> None:
        self.violations[name] += int(amount)
        room = _MAX_COUNTEREXAMPLES - len(self.payloads[name])
        if room > 0:
            self.payloads[name].extend(payloads[:room])

    def merge(self, other: "_Recorder") -> None:
        for name in LEMMA_NAMES:
            self.checks[name] += other.checks[name]
            self.violations[name] += other.violations[name]
            room = _MAX_COUNTEREXAMPLES - len(self.payloads[name])
            if room > 0:
                self.payloads[name].extend(other.payloads[name][:room])


@dataclass(frozen=True)
class LemmaResult:
    name: str
    checks: int
    violations: int
    counterexamples: tuple[dict, ...]

    @property
    def passed(self) -> bool:
        return self.violations == 0


@dataclass(frozen=True)
class VerifyReport:
    m: int
    poly: int
    n: int
    mode: str
    samples: int
    seed: int
    codes_checked: int
    lemmas: tuple[LemmaResult, ...]

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.lemmas)

    def result(self, name: str) -> LemmaResult:
        for r in self.lemmas:
            if r.name == name:
                return r
        raise KeyError(name)

    def as_text(self) -> str:
        lines = [
            f"lemma verification over GF({1 << self.m}) "
            f"(poly {self.poly:#b}), n={self.n}, mode={self.mode}, "
            f"samples={self.samples}, seed={self.seed}, codes={self.codes_checked}"
        ]
        for r in self.lemmas:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"  {r.name:<22s} {status}  checks={r.checks} violations={r.violations}")
            for ce in r.counterexamples:
                lines.append(f"    counterexample: {_payload_text(ce)}")
        lines.append("all-pass" if self.all_pass else "COUNTEREXAMPLES FOUND")
        return "\n".join(lines) + "\n"

    def as_json(self) -> dict:
        return {
            "m": self.m,
            "poly": self.poly,
            "n": self.n,
            "mode": self.mode,
            "samples": self.samples,
            "seed": self.seed,
            "codes_checked": self.codes_checked,
            "all_pass": self.all_pass,
            "lemmas": [
                {
                    "name": r.name,
                    "checks": r.checks,
                    "violations": r.violations,
                    "counterexamples": list(r.counterexamples),
                }
                for r in self.lemmas
            ],
        }


def _payload_text(ce: dict) -> str:
    parts = [f"{k}={ce[k]}" for k in sorted(ce)]
    return " ".join(parts)


def _code_payload(code_entries: np.ndarray) -> list[list[int]]:
    return [[int(e) for e in row] for row in code_entries]


def _verify_batch(
    field: GF2m,
    n: int,
    code_entries: np.ndarray,
    rec: _Recorder,
    l_cost: int,
    r_cost: int,
    girth_codes: set[int],
    process_codes: set[int],
    batch_offset: int,
    seed: int,
) -> None:
    """Run the array-level verifiers for a batch of codes.

    code_entries has shape (B, n, 4).  girth_codes / process_codes hold
    *global* code indices selected for the object-level checks.
    """
    k = n - 2
    mats = canonical_matrix_array(field.q)
    h = _induced_entries(field, mats[None, :, :], code_entries)
    cls = _classify_entries(field, *h, l_cost=l_cost, r_cost=r_cost)
    inv, zero, cost = cls.invertible, cls.zero, cls.cost
    onesided = cls.onesided
    bsize, cmats, _ = cost.shape

    totals = cost.sum(axis=-1, dtype=np.int32)  # [B, C]
    bandwidth = totals[:, :, None] - cost  # valid where inv
    inv_count = inv.sum(axis=-1)

    # Bij2: helpers repairable by the same matrix always cost 2 symbols.
    pair_checks = int((inv_count * (inv_count - 1) // 2).sum())
    rec.count("Bij2", pair_checks)
    bad = inv & (cost != 2)
    if bad.any():
        idx = np.argwhere(bad)[:_MAX_COUNTEREXAMPLES]
        rec.fail(
            "Bij2",
            int(bad.sum()),
            [_site_payload(field, mats, code_entries, b, c, int(i)) for b, c, i in idx],
        )

    # sameBiBj: bandwidth is constant across a matrix's repairable nodes.
    multi = inv_count >= 2
    rec.count("sameBiBj", int(multi.sum()))
    bw_masked = np.where(inv, bandwidth, -1)
    bw_max = bw_masked.max(axis=-1)
    bw_min = np.where(inv, bandwidth, _SENTINEL).min(axis=-1)
    bad_rows = multi & (bw_max != bw_min)
    if bad_rows.any():
        idx = np.argwhere(bad_rows)[:_MAX_COUNTEREXAMPLES]
        rec.fail(
            "sameBiBj",
            int(bad_rows.sum()),
            [_site_payload(field, mats, code_entries, b, c, None) for b, c in idx],
        )

    # allzeros: a zero block outside the group forces every other block
    # invertible and pins the bandwidth at exactly 2K.
    has_zero = zero.any(axis=-1)
    zrows = has_zero & (inv_count > 0)
    rec.count("allzeros", int(zrows.sum()))
    filled = inv | zero
    struct_bad = zrows & ~filled.all(axis=-1)
    value_bad = zrows & (np.where(inv, bandwidth, 2 * k) != 2 * k).any(axis=-1)
    bad_rows = struct_bad | value_bad
    if bad_rows.any():
        idx = np.argwhere(bad_rows)[:_MAX_COUNTEREXAMPLES]
        rec.fail(
            "allzeros",
            int(bad_rows.sum()),
            [_site_payload(field, mats, code_entries, b, c, None) for b, c in idx],
        )

    # Bicalculation: below 2K, bandwidth = 2(N-1) - #one-sided helpers.
    low = inv & (bandwidth < 2 * k)
    rec.count("Bicalculation", int(low.sum()))
    ones_count = onesided.sum(axis=-1)  # one-sided blocks are never invertible
    expected = 2 * (n - 1) - ones_count
    bad = low & (bandwidth != expected[:, :, None])
    if bad.any():
        idx = np.argwhere(bad)[:_MAX_COUNTEREXAMPLES]
        rec.fail(
            "Bicalculation",
            int(bad.sum()),
            [_site_payload(field, mats, code_entries, b, c, int(i)) for b, c, i in idx],
        )

    # M2notinvertible: below 2K the right half of the matrix is singular.
    m2 = mats[:, (2, 3, 6, 7)]
    m2_det = field.mul_array(m2[:, 0], m2[:, 3]) ^ field.mul_array(m2[:, 1], m2[:, 2])
    rec.count("M2notinvertible", int(low.sum()))
    bad = low & (m2_det != 0)[None, :, None]
    if bad.any():
        idx = np.argwhere(bad)[:_MAX_COUNTEREXAMPLES]
        rec.fail(
            "M2notinvertible",
            int(bad.sum()),
            [_site_payload(field, mats, code_entries, b, c, int(i)) for b, c, i in idx],
        )

    # sametype: below 2K the 1-symbol helpers are all L or all R.
    rec.count("sametype", int(low.sum()))
    mixed = cls.strict_l.any(axis=-1) & cls.strict_r.any(axis=-1)
    bad = low & mixed[:, :, None]
    if bad.any():
        idx = np.argwhere(bad)[:_MAX_COUNTEREXAMPLES]
        rec.fail(
            "sametype",
            int(bad.sum()),
            [_site_payload(field, mats, code_entries, b, c, int(i)) for b, c, i in idx],
        )

    # hatM and the object-level checks want concrete matrices.
    low_sites = np.argwhere(low)
    for b, c, i in low_sites:
        _check_hatm(field, mats, code_entries, int(b), int(c), int(i), rec)

    rng = random.Random(seed)
    inv_list = invertible_blocks(field)
    for local in range(bsize):
        global_idx = batch_offset + local
        draws = [inv_list[rng.randrange(len(inv_list))] for _ in range(3)]
        if global_idx in girth_codes:
            _check_girth4free(
                field, mats, code_entries[local], cls, local, draws, rec, l_cost, r_cost
            )
        if global_idx in process_codes:
            _check_process_identities(field, code_entries[local], rec)


def _site_payload(field, mats, code_entries, b, c, node):
    payload = {
        "code": _code_payload(code_entries[b]),
        "matrix": [[int(e) for e in mats[c][:4]], [int(e) for e in mats[c][4:]]],
    }
    if node is not None:
        payload["node"] = int(node) + 1
    return payload


def _block_rows(mat_row: np.ndarray) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return tuple(int(e) for e in mat_row[:4]), tuple(int(e) for e in mat_row[4:])


def _objects(field: GF2m, mats: np.ndarray, code_entries: np.ndarray, c: int):
    mat = RepairMat(field, _block_rows(mats[c]))
    code = ArrayCode(field, tuple(Block(field, tuple(int(e) for e in row)) for row in code_entries))
    return mat, code


def _check_hatm(field, mats, code_entries, b, c, node, rec: _Recorder) -> None:
    """hatM: normalization yields the identity at the repaired node, the
    documented solved row shape, the same repairable set, and (part 1)
    an unchanged bandwidth.  Part 1 is the check that can genuinely fail."""
    mat, code = _objects(field, mats, code_entries[b], c)
    blocks = compute_blocks(mat, code)
    before = [blk.classify().tag for blk in blocks]
    b_before = sum(helper_cost(blk) for j, blk in enumerate(blocks) if j != node)
    norm = mat.left_mul(blocks[node].inverse())
    nblocks = compute_blocks(norm, code)
    b_after = sum(helper_cost(blk) for j, blk in enumerate(nblocks) if j != node)
    ntags = [blk.classify().tag for blk in nblocks]

    rec.count("hatM", 1)
    problems = []
    if nblocks[node].entries != (1, 0, 0, 1):
        problems.append("normalized block at the repaired node is not the identity")
    if [blk.is_invertible for blk in blocks] != [blk.is_invertible for blk in nblocks]:
        problems.append("normalization changed the repairable set")
    n_l = sum(1 for t in ntags if t is BlockTag.L)
    n_r = sum(1 for t in ntags if t is BlockTag.R)
    # Two strict-L blocks force the solved row (0,1,0,0) in the second row;
    # two strict-R blocks force (1,0,0,0) in the first.
    if n_l >= 2 and norm.rows[1] != (0, 1, 0, 0):
        problems.append(f"expected solved second row, got {norm.rows[1]}")
    if n_r >= 2 and norm.rows[0] != (1, 0, 0, 0):
        problems.append(f"expected solved first row, got {norm.rows[0]}")
    if b_after != b_before:
        problems.append(
            f"bandwidth changed {b_before} -> {b_after}: classes "
            f"{[t.value for t in before]} -> {[t.value for t in ntags]}"
        )
    if problems:
        payload = _site_payload(field, mats, code_entries, b, c, node)
        payload["detail"] = "; ".join(problems)
        rec.fail("hatM", 1, [payload])


def _check_girth4free(
    field: GF2m,
    mats: np.ndarray,
    code_entries: np.ndarray,
    cls: ClassArrays,
    local: int,
    t_draws: list[Block],
    rec: _Recorder,
    l_cost: int,
    r_cost: int,
) -> None:
    """girth4free: merging two groups whose matrices share the strict
    one-sided classes at two helper positions must keep the total
    repair bandwidth.  This is the check that can genuinely fail."""
    onesided_rows = np.flatnonzero(
        (cls.onesided[local].sum(axis=-1) >= 2) & (cls.invertible[local].sum(axis=-1) >= 2)
    )
    if not len(onesided_rows):
        return
    code = ArrayCode(
        field, tuple(Block(field, tuple(int(e) for e in row)) for row in code_entries)
    )
    charge = {BlockTag.ZERO: 0, BlockTag.L: l_cost, BlockTag.R: r_cost, BlockTag.M: 2}
    for c in onesided_rows[:24]:
        mat = RepairMat(field, _block_rows(mats[int(c)]))
        blocks = compute_blocks(mat, code)
        tags = [blk.classify().tag for blk in blocks]
        inv_pos = [i for i, blk in enumerate(blocks) if blk.is_invertible]
        for t in t_draws:
            tmat = mat.left_mul(t)
            tblocks = compute_blocks(tmat, code)
            ttags = [blk.classify().tag for blk in tblocks]
            a_node, b_node = inv_pos[0], inv_pos[1]
            premise = [
                p
                for p in range(code.n)
                if p not in (a_node, b_node)
                and tags[p] in (BlockTag.L, BlockTag.R)
                and ttags[p] == tags[p]
            ]
            if len(premise) < 2:
                continue
            rec.count("girth4free", 1)
            b_under_own = sum(charge[tags[j]] for j in range(code.n) if j != b_node)
            b_under_merged = sum(charge[ttags[j]] for j in range(code.n) if j != b_node)
            if b_under_own != b_under_merged:
                payload = {
                    "code": _code_payload(code_entries),
                    "matrix": [list(mat.rows[0]), list(mat.rows[1])],
                    "transform": list(t.entries),
                    "node": b_node + 1,
                    "detail": (
                        f"merged bandwidth {b_under_merged} != {b_under_own}: classes "
                        f"{[x.value for x in tags]} -> {[x.value for x in ttags]}"
                    ),
                }
                rec.fail("girth4free", 1, [payload])


def _check_process_identities(field, code_entries, rec: _Recorder) -> None:
    """totalrepairbandwidth on the assembled per-node-optimal process."""
    code = ArrayCode(
        field, tuple(Block(field, tuple(int(e) for e in row)) for row in code_entries)
    )
    opt = optimal_total_bandwidth(code)
    report = process_bandwidth(opt.process, code)
    rec.count("totalrepairbandwidth", 1)
    group_sum = sum(len(g.nodes) * b for g, b in zip(opt.process.groups, report.per_group))
    ok = (
        report.total == sum(report.per_node) == group_sum == opt.total
        and all(sum(row) == bi for row, bi in zip(report.per_pair, report.per_node))
    )
    if not ok:
        rec.fail(
            "totalrepairbandwidth",
            1,
            [{"code": _code_payload(code_entries), "detail": "aggregation identities failed"}],
        )


def _verify_worker(args) -> _Recorder:
    (m, poly, n, entries, l_cost, r_cost, girth, procs, offset, seed) = args
    field = GF2m(m, poly)
    rec = _Recorder()
    _verify_batch(field, n, entries, rec, l_cost, r_cost, girth, procs, offset, seed)
    return rec


def verify_lemmas(
    field: GF2m,
    n: int,
    samples: int = 20,
    seed: int = 0,
    exhaustive_codes: bool = False,
    jobs: int = 1,
    l_cost: int = 1,
    r_cost: int = 1,
    max_q: int | None = None,
) -> VerifyReport:
    """Check every structural claim against sampled or enumerated codes.

    Sampled mode draws ``samples`` random MDS codes from ``seed``;
    exhaustive mode enumerates every identity-first code (see
    ``enumerate_codes_identity_first``) and ignores ``samples``.  The
    report is a pure function of (field, n, samples, seed, mode): the
    merge-transform draws are derived per code index, so chunked and
    parallel runs agree bit for bit.  ``l_cost``/``r_cost`` override the
    1-symbol helper charges; they exist so tests can corrupt the
    accounting and watch the right verifiers trip.
    """
    _check_field_size(field, max_q)
    if exhaustive_codes:
        mode = "exhaustive"
        idx = enumerate_codes_identity_first(field, n)
        inv_entries = np.asarray([b.entries for b in invertible_blocks(field)], dtype=np.uint8)
        all_entries = inv_entries[idx]  # [count, n, 4]
        # Object-level checks are throttled on the big enumeration.
        girth_stride = max(1, len(all_entries) // 512)
        process_stride = max(1, len(all_entries) // 256)
    else:
        mode = "sampled"
        rng = random.Random(seed)
        code_seeds = [rng.randrange(1 << 32) for _ in range(samples)]
        codes = [random_code(field, n, s) for s in code_seeds]
        all_entries = np.asarray(
            [[b.entries for b in code.blocks] for code in codes], dtype=np.uint8
        )
        girth_stride = 1
        process_stride = 1

    count = len(all_entries)
    girth_codes = set(range(0, count, girth_stride))
    process_codes = set(range(0, count, process_stride))

    # fullrankM once per run: every canonical matrix spans 2 dimensions.
    rec = _Recorder()
    rank_ok, rank_checked = _canonical_ranks_ok(field)
    rec.count("fullrankM", rank_checked)
    if not rank_ok:
        rec.fail("fullrankM", 1, [{"detail": "canonical enumeration produced a rank-deficient matrix"}])

    chunk = 4096 if exhaustive_codes else max(1, count)
    tasks = []
    for start in range(0, count, chunk):
        entries = all_entries[start : start + chunk]
        girth = {i - start for i in girth_codes if start <= i < start + chunk}
        procs = {i - start for i in process_codes if start <= i < start + chunk}
        # Per-chunk transform seed derives from the global seed and offset
        # so results do not depend on chunking or parallelism.
        tasks.append(
            (field.m, field.poly, n, entries, l_cost, r_cost, girth, procs, 0, seed ^ (start * 2654435761 % (1 << 32)))
        )

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_verify_worker, tasks):
                rec.merge(part)
    else:
        for t in tasks:
            rec.merge(_verify_worker(t))

    lemmas = tuple(
        LemmaResult(name, rec.checks[name], rec.violations[name], tuple(rec.payloads[name]))
        for name in LEMMA_NAMES
    )
    return VerifyReport(
        m=field.m,
        poly=field.poly,
        n=n,
        mode=mode,
        samples=0 if exhaustive_codes else samples,
        seed=seed,
        codes_checked=count,
        lemmas=lemmas,
    )


def _canonical_ranks_ok(field: GF2m) -> tuple[bool, int]:
    if field.q <= 4:
        mats = enumerate_row_spaces(field)
    else:
        full = enumerate_row_spaces(field)
        mats = full[:: max(1, len(full) // 997)]
    return all(m.rank() == 2 for m in mats), len(mats)
