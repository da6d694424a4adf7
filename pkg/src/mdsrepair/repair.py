"""Repair processes and their bandwidth accounting.

A repair process is a partition of the nodes into groups, each paired
with a rank-2 2x4 repair matrix M = [M1 | M2].  Against a code with
blocks A_i, a matrix induces one 2x2 block per node,

    H_i = M1 + M2 A_i,

and the matrix can rebuild node i iff H_i is invertible.  Rebuilding
node i downloads, from every other node j, a number of symbols set by
the class of H_j: nothing for a zero block, one symbol for a strict
one-sided block (class L wants the second symbol, class R the first),
and both symbols otherwise.  Node indices are 0-based throughout; the
JSON interchange format uses 1-based indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .arraycode import ArrayCode, Codeword, CodeFormatError, parity_residuals
from .blockmat import Block, BlockTag, RepairMat
from .gf2m import GF2m


class InvalidRepairError(ValueError):
    """A repair matrix was applied to a node it cannot rebuild."""


#: Symbols downloaded from a helper whose induced block has this class.
HELPER_COST: dict[BlockTag, int] = {
    BlockTag.ZERO: 0,
    BlockTag.L: 1,
    BlockTag.R: 1,
    BlockTag.M: 2,
}


def helper_cost(block: Block) -> int:
    return HELPER_COST[block.classify().tag]


@dataclass(frozen=True)
class RepairGroup:
    matrix: RepairMat
    nodes: frozenset[int]


@dataclass(frozen=True)
class RepairProcess:
    groups: tuple[RepairGroup, ...]

    @property
    def size(self) -> int:
        return len(self.groups)

    def group_of(self, node: int) -> int:
        for r, g in enumerate(self.groups):
            if node in g.nodes:
                return r
        raise InvalidRepairError(f"node {node} belongs to no repair group")


def compute_blocks(mat: RepairMat, code: ArrayCode) -> list[Block]:
    """The induced blocks H_i = M1 + M2 A_i for every node."""
    mat.field.check_same(code.field)
    m1, m2 = mat.m1, mat.m2
    return [m1 + (m2 @ a) for a in code.blocks]


def pair_bandwidth(blocks: list[Block], node: int) -> tuple[int, ...]:
    """Row of per-helper download counts for rebuilding ``node``.

    Entry j is 0/1/2 per the block class at j; the diagonal entry is 0.
    """
    if not blocks[node].is_invertible:
        raise InvalidRepairError(
            f"induced block {blocks[node].entries} at node {node} is singular"
        )
    return tuple(0 if j == node else helper_cost(b) for j, b in enumerate(blocks))


# ---------------------------------------------------------------------------
# validation and effectiveness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProcessReport:
    valid: bool
    problems: tuple[str, ...]
    effective: bool
    #: (r1, r2, i, j) witnesses: groups r1 < r2 are mergeable because the
    #: induced blocks at helper nodes i and j are strict one-sided blocks of
    #: matching side under both matrices.
    merge_witnesses: tuple[tuple[int, int, int, int], ...]


def _merge_witnesses(
    proc: RepairProcess, blocklists: list[list[Block]]
) -> list[tuple[int, int, int, int]]:
    out = []
    n = len(blocklists[0])
    onesided = (BlockTag.L, BlockTag.R)
    for r1 in range(proc.size):
        for r2 in range(r1 + 1, proc.size):
            members = proc.groups[r1].nodes | proc.groups[r2].nodes
            shared = []
            for p in range(n):
                if p in members:
                    continue
                t1 = blocklists[r1][p].classify().tag
                t2 = blocklists[r2][p].classify().tag
                if t1 in onesided and t1 == t2:
                    shared.append(p)
            if len(shared) >= 2:
                out.append((r1, r2, shared[0], shared[1]))
    return out


def process_validate(proc: RepairProcess, code: ArrayCode) -> ProcessReport:
    """Check the partition/rank/invertibility rules and flag mergeable pairs.

    A process is *not effective* when two groups could be merged without
    changing which nodes are repairable: that happens when two distinct
    helper positions see strict one-sided blocks of matching side under
    both group matrices (such matrices necessarily share a row space).
    """
    problems: list[str] = []
    seen: dict[int, int] = {}
    for r, g in enumerate(proc.groups):
        if not g.nodes:
            problems.append(f"group {r} is empty")
        for i in g.nodes:
            if i in seen:
                problems.append(f"node {i} appears in groups {seen[i]} and {r}")
            seen[i] = r
        if g.matrix.field != code.field:
            problems.append(f"group {r} matrix uses a different field")
        elif g.matrix.rank() != 2:
            problems.append(f"group {r} matrix has rank {g.matrix.rank()}, need 2")
    missing = sorted(set(range(code.n)) - set(seen))
    if missing:
        problems.append(f"nodes {missing} belong to no group")
    extra = sorted(i for i in seen if not 0 <= i < code.n)
    if extra:
        problems.append(f"node indices {extra} out of range for n={code.n}")

    blocklists: list[list[Block]] = []
    if not problems:
        for r, g in enumerate(proc.groups):
            blocks = compute_blocks(g.matrix, code)
            blocklists.append(blocks)
            for i in sorted(g.nodes):
                if not blocks[i].is_invertible:
                    problems.append(f"group {r} cannot repair node {i}: singular induced block")

    if problems:
        return ProcessReport(False, tuple(problems), False, ())
    witnesses = _merge_witnesses(proc, blocklists)
    return ProcessReport(True, (), not witnesses, tuple(witnesses))


# ---------------------------------------------------------------------------
# bandwidth
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BandwidthReport:
    per_pair: tuple[tuple[int, ...], ...]
    per_node: tuple[int, ...]
    per_group: tuple[int, ...]
    total: int


def process_bandwidth(proc: RepairProcess, code: ArrayCode) -> BandwidthReport:
    """Full bandwidth accounting for a valid process."""
    report = process_validate(proc, code)
    if not report.valid:
        raise InvalidRepairError("; ".join(report.problems))
    blocklists = [compute_blocks(g.matrix, code) for g in proc.groups]
    per_pair = []
    per_node = []
    for i in range(code.n):
        row = pair_bandwidth(blocklists[proc.group_of(i)], i)
        per_pair.append(row)
        per_node.append(sum(row))
    per_group = []
    for r, g in enumerate(proc.groups):
        values = {per_node[i] for i in g.nodes}
        assert len(values) == 1, f"group {r} mixes bandwidths {values}"
        per_group.append(values.pop())
    total = sum(per_node)
    assert total == sum(len(g.nodes) * b for g, b in zip(proc.groups, per_group))
    return BandwidthReport(tuple(per_pair), tuple(per_node), tuple(per_group), total)


# ---------------------------------------------------------------------------
# recovery
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RepairResult:
    node: int
    recovered: tuple[int, int]
    #: transcript of fetched symbols as (helper node, symbol slot, value)
    downloads: tuple[tuple[int, int, int], ...]
    consistent: bool

    @property
    def downloaded_count(self) -> int:
        return len(self.downloads)


def repair_node(
    proc: RepairProcess,
    code: ArrayCode,
    received: list[tuple[int, int] | None],
    node: int,
) -> RepairResult:
    """Rebuild an erased node from its group's check equations.

    ``received`` holds the surviving symbol pairs (the erased node's entry
    is ignored and may be None).  Only the symbols the block classes call
    for are fetched; their count always equals the node's accounted
    bandwidth.  ``consistent`` is False when the completed word fails the
    parity equations, i.e. the survivors were not part of one codeword.
    """
    if len(received) != code.n:
        raise ValueError(f"received word has {len(received)} entries, code has {code.n}")
    r = proc.group_of(node)
    blocks = compute_blocks(proc.groups[r].matrix, code)
    if not blocks[node].is_invertible:
        raise InvalidRepairError(f"group {r} cannot repair node {node}")
    f = code.field
    acc = (0, 0)
    downloads: list[tuple[int, int, int]] = []
    for j, blk in enumerate(blocks):
        if j == node:
            continue
        tag = blk.classify().tag
        if tag is BlockTag.ZERO:
            continue
        symbols = received[j]
        if symbols is None:
            raise InvalidRepairError(f"helper node {j} is unavailable")
        b11, b12, b21, b22 = blk.entries
        if tag is BlockTag.L:  # first column zero: only the second symbol matters
            downloads.append((j, 1, symbols[1]))
            contrib = (f.mul(b12, symbols[1]), f.mul(b22, symbols[1]))
        elif tag is BlockTag.R:  # second column zero: only the first symbol matters
            downloads.append((j, 0, symbols[0]))
            contrib = (f.mul(b11, symbols[0]), f.mul(b21, symbols[0]))
        else:
            downloads.append((j, 0, symbols[0]))
            downloads.append((j, 1, symbols[1]))
            contrib = blk.mul_vec(symbols)
        acc = (acc[0] ^ contrib[0], acc[1] ^ contrib[1])
    recovered = blocks[node].inverse().mul_vec(acc)
    completed = Codeword(
        tuple(recovered if j == node else tuple(received[j]) for j in range(code.n))
    )
    consistent = parity_residuals(code, completed) == ((0, 0), (0, 0))
    return RepairResult(node, recovered, tuple(downloads), consistent)


# ---------------------------------------------------------------------------
# normalization and merging
# ---------------------------------------------------------------------------


def normalize_matrix(mat: RepairMat, code: ArrayCode, node: int) -> RepairMat:
    """Left-multiply by the inverse of the node's induced block.

    The result satisfies Mhat [I; A_node] = I, so the repaired node's
    equations come out in solved form.
    """
    blocks = compute_blocks(mat, code)
    if not blocks[node].is_invertible:
        raise InvalidRepairError(f"matrix cannot repair node {node}")
    return mat.left_mul(blocks[node].inverse())


def merge_equivalent(proc: RepairProcess, code: ArrayCode) -> RepairProcess:
    """Merge mergeable group pairs until the process is effective.

    The lexicographically first mergeable pair is merged first and keeps
    the lower-indexed group's matrix, so the result is deterministic.
    """
    current = proc
    while True:
        report = process_validate(current, code)
        if not report.valid:
            raise InvalidRepairError("; ".join(report.problems))
        if report.effective:
            return current
        r1, r2, _, _ = report.merge_witnesses[0]
        merged = RepairGroup(
            current.groups[r1].matrix,
            current.groups[r1].nodes | current.groups[r2].nodes,
        )
        groups = [g for r, g in enumerate(current.groups) if r not in (r1, r2)]
        groups.insert(r1, merged)
        current = RepairProcess(tuple(groups))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

_PROCESS_KEYS = {"groups"}
_GROUP_KEYS = {"matrix", "nodes"}


def process_to_json(proc: RepairProcess) -> str:
    doc = {
        "groups": [
            {
                "matrix": [list(g.matrix.rows[0]), list(g.matrix.rows[1])],
                "nodes": sorted(i + 1 for i in g.nodes),
            }
            for g in proc.groups
        ]
    }
    return json.dumps(doc, indent=2) + "\n"


def process_from_json(text: str, field: GF2m) -> RepairProcess:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CodeFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or set(doc) != _PROCESS_KEYS:
        raise CodeFormatError('process document must have exactly the key "groups"')
    groups = []
    for gi, raw in enumerate(doc["groups"]):
        if not isinstance(raw, dict) or set(raw) != _GROUP_KEYS:
            raise CodeFormatError(f'group {gi} must have exactly the keys "matrix" and "nodes"')
        rows = raw["matrix"]
        if not isinstance(rows, list) or len(rows) != 2 or any(len(r) != 4 for r in rows):
            raise CodeFormatError(f"group {gi}: matrix must be 2 rows of 4 entries")
        try:
            mat = RepairMat(field, (tuple(int(e) for e in rows[0]), tuple(int(e) for e in rows[1])))
        except ValueError as exc:
            raise CodeFormatError(f"group {gi}: {exc}") from exc
        nodes = raw["nodes"]
        if not isinstance(nodes, list) or not nodes:
            raise CodeFormatError(f"group {gi}: nodes must be a nonempty list")
        if any(int(i) < 1 for i in nodes):
            raise CodeFormatError(f"group {gi}: node indices are 1-based")
        groups.append(RepairGroup(mat, frozenset(int(i) - 1 for i in nodes)))
    return RepairProcess(tuple(groups))
