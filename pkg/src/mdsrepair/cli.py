"""Command-line front end.

Subcommands:

    bound     emit the lower-bound table (CSV or SVG) for a range of N
    example   reproduce the bundled 3-node walkthrough and re-run its repairs
    search    per-node optimal repair search over random codes
    verify    run the structural-claim verifiers over sampled or all codes
    simulate  erase one node of a coded word and replay its repair

Exit codes: 0 success / all checks pass, 1 verification mismatch or
counterexamples found, 2 usage or I/O errors.  Identical invocations
produce byte-identical output; all randomness is seed-derived.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

from . import bound as bound_mod
from .arraycode import (
    ArrayCode,
    CodeFormatError,
    CodeGenerationError,
    code_from_json,
    encode,
    random_code,
    validate_mds,
)
from .blockmat import BlockTag
from .gf2m import GF2m
from .repair import (
    compute_blocks,
    process_bandwidth,
    process_from_json,
    process_validate,
    repair_node,
)
from .search import optimal_total_bandwidth, verify_lemmas

_BUNDLED = {"example.json", "example_process.json"}


def _read_maybe_bundled(path: str) -> str:
    """Read a file; fall back to the bundled fixture of the same name."""
    p = Path(path)
    if p.exists():
        return p.read_text()
    if p.name in _BUNDLED and str(p) == p.name:
        return resources.files("mdsrepair").joinpath(f"data/{p.name}").read_text()
    raise FileNotFoundError(path)


def _parse_field(spec: str) -> GF2m:
    if not spec.startswith("gf"):
        raise ValueError(f"field spec {spec!r} should look like gf16")
    q = int(spec[2:])
    m = q.bit_length() - 1
    if q != 1 << m or m < 1:
        raise ValueError(f"field size {q} is not a power of two")
    return GF2m(m)


# ---------------------------------------------------------------------------
# bound
# ---------------------------------------------------------------------------


def cmd_bound(args: argparse.Namespace) -> int:
    rows = bound_mod.bound_table(args.min, args.max)
    text = bound_mod.rows_to_csv(rows) if args.format == "csv" else bound_mod.rows_to_svg(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    for line in bound_mod.compare_to_reported(rows).lines():
        print(line, file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# example
# ---------------------------------------------------------------------------

_EXAMPLE_BLOCK_ROWS = (
    ([1, 0, 1, 0, 1, 0], [0, 2, 5, 0, 9, 0]),
    ([0, 1, 0, 1, 0, 1], [0, 3, 5, 1, 9, 1]),
)
_EXAMPLE_PAIR_TABLE = ((0, 1, 1), (1, 0, 2), (1, 2, 0))
_EXAMPLE_PER_NODE = (2, 3, 3)
_EXAMPLE_SEED = 2024


def _scalar_rows(blocks) -> tuple[list[int], list[int]]:
    top = []
    bottom = []
    for b in blocks:
        b11, b12, b21, b22 = b.entries
        top += [b11, b12]
        bottom += [b21, b22]
    return top, bottom


def run_example_report(code: ArrayCode | None = None) -> tuple[bool, str]:
    """Rebuild the bundled walkthrough and diff every value it pins down.

    Returns (ok, printable report).  A corrupted code yields ok=False and
    the report carries the first mismatch.
    """
    lines: list[str] = []
    problems: list[str] = []
    if code is None:
        code = code_from_json(_read_maybe_bundled("example.json"))
    else:
        report = validate_mds(code)
        if not report.ok:
            return False, report.describe() + "\n"
    proc = process_from_json(_read_maybe_bundled("example_process.json"), code.field)

    lines.append(f"code: n={code.n}, k={code.k}, field GF({code.field.q}) poly {code.field.poly:#b}")
    lines.append("parity-check matrix:")
    for row in code.parity_check_rows():
        lines.append("  " + " ".join(f"{e:2d}" for e in row))

    for r, g in enumerate(proc.groups):
        blocks = compute_blocks(g.matrix, code)
        top, bottom = _scalar_rows(blocks)
        lines.append(f"group {r + 1}: matrix rows {list(g.matrix.rows[0])} {list(g.matrix.rows[1])} "
                     f"repairs nodes {sorted(i + 1 for i in g.nodes)}")
        lines.append("  induced blocks: " + " ".join(f"{e:2d}" for e in top))
        lines.append("                  " + " ".join(f"{e:2d}" for e in bottom))
        tags = [b.classify() for b in blocks]
        lines.append("  classes: " + " ".join(
            ("M_inv" if c.is_minv else c.tag.value) for c in tags))
        expected = _EXAMPLE_BLOCK_ROWS[r]
        if (top, bottom) != (list(expected[0]), list(expected[1])):
            problems.append(f"group {r + 1} induced blocks differ: "
                            f"got {top} / {bottom}, expected {expected[0]} / {expected[1]}")

    validation = process_validate(proc, code)
    if not (validation.valid and validation.effective):
        problems.append(f"process not valid+effective: {validation}")
    else:
        bw = process_bandwidth(proc, code)
        lines.append("pairwise downloads B[i][j]:")
        for row in bw.per_pair:
            lines.append("  " + " ".join(str(e) for e in row))
        lines.append(f"per-node bandwidth: {bw.per_node}  total: {bw.total}")
        if bw.per_pair != _EXAMPLE_PAIR_TABLE:
            problems.append(f"pair table differs: got {bw.per_pair}, expected {_EXAMPLE_PAIR_TABLE}")
        if bw.per_node != _EXAMPLE_PER_NODE:
            problems.append(f"per-node differs: got {bw.per_node}, expected {_EXAMPLE_PER_NODE}")

        rng = random.Random(_EXAMPLE_SEED)
        word = encode(code, [rng.randrange(code.field.q) for _ in range(2 * code.k)])
        lines.append(f"codeword: {list(word.symbols)}")
        for node in range(code.n):
            received = [None if j == node else word[j] for j in range(code.n)]
            result = repair_node(proc, code, received, node)
            fetched = ", ".join(f"node{j + 1}[{slot}]={v}" for j, slot, v in result.downloads)
            lines.append(
                f"repair node {node + 1}: downloaded {result.downloaded_count} symbols "
                f"({fetched}) -> {result.recovered}"
            )
            if result.recovered != word[node]:
                problems.append(f"node {node + 1} repair returned {result.recovered}, "
                                f"expected {word[node]}")
            if result.downloaded_count != bw.per_node[node]:
                problems.append(f"node {node + 1} downloaded {result.downloaded_count} symbols, "
                                f"accounted {bw.per_node[node]}")
            if not result.consistent:
                problems.append(f"node {node + 1} repair left an inconsistent word")

    ok = not problems
    lines.append("example check: PASS" if ok else "example check: FAIL")
    lines.extend(f"  mismatch: {p}" for p in problems)
    return ok, "\n".join(lines) + "\n"


def cmd_example(args: argparse.Namespace) -> int:
    ok, text = run_example_report()
    sys.stdout.write(text)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------


def _search_one(task: tuple[int, int, int, int]) -> dict:
    m, poly, n, code_seed = task
    field = GF2m(m, poly)
    code = random_code(field, n, code_seed)
    opt = optimal_total_bandwidth(code)
    return {
        "code_seed": code_seed,
        "A": [list(b.entries) for b in code.blocks],
        "per_node": [b.bandwidth for b in opt.per_node],
        "winners": [
            {
                "node": b.node + 1,
                "bandwidth": b.bandwidth,
                "canonical_index": b.canonical_index,
                "matrix": [list(b.matrix.rows[0]), list(b.matrix.rows[1])],
                "minimizers": len(b.minimizers),
            }
            for b in opt.per_node
        ],
        "groups": len(opt.process.groups),
        "total": opt.total,
    }


def cmd_search(args: argparse.Namespace) -> int:
    field = _parse_field(args.field)
    rng = random.Random(args.seed)
    code_seeds = [rng.randrange(1 << 32) for _ in range(args.samples)]
    tasks = [(field.m, field.poly, args.n, s) for s in code_seeds]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_search_one, tasks))
    else:
        results = [_search_one(t) for t in tasks]

    limit = bound_mod.delta3(args.n).value
    if args.n >= 4:
        limit = min(limit, bound_mod.delta4(args.n).value)
    all_ok = all(r["total"] >= limit for r in results)

    if args.json:
        doc = {
            "field": args.field,
            "n": args.n,
            "samples": args.samples,
            "seed": args.seed,
            "bound": limit,
            "codes": results,
            "all_pass": all_ok,
        }
        print(json.dumps(doc, indent=2))
    else:
        print(f"search over {args.samples} random codes, field {args.field}, "
              f"n={args.n}, seed={args.seed}")
        for r in results:
            print(f"code seed={r['code_seed']} A={r['A']}")
            for w in r["winners"]:
                print(f"  node {w['node']}: B={w['bandwidth']} canonical#{w['canonical_index']} "
                      f"matrix {w['matrix'][0]} {w['matrix'][1]} (ties: {w['minimizers']})")
            verdict = "PASS" if r["total"] >= limit else "FAIL"
            print(f"  total={r['total']} groups={r['groups']}  "
                  f"total ≥ min{{Δ3,Δ4}}: {verdict} (bound {limit})")
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    field = _parse_field(args.field)
    report = verify_lemmas(
        field,
        args.n,
        samples=args.samples,
        seed=args.seed,
        exhaustive_codes=args.exhaustive,
        jobs=args.jobs,
    )
    if args.json:
        print(json.dumps(report.as_json(), indent=2))
    else:
        sys.stdout.write(report.as_text())
    return 0 if report.all_pass else 1


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def cmd_simulate(args: argparse.Namespace) -> int:
    code = code_from_json(_read_maybe_bundled(args.code))
    if not 1 <= args.node <= code.n:
        raise ValueError(f"node {args.node} out of range 1..{code.n}")
    node = args.node - 1
    if args.process:
        proc = process_from_json(_read_maybe_bundled(args.process), code.field)
        origin = args.process
    else:
        proc = optimal_total_bandwidth(code).process
        origin = "per-node optimal search"
    validation = process_validate(proc, code)
    if not validation.valid:
        raise CodeFormatError("; ".join(validation.problems))
    bw = process_bandwidth(proc, code)

    rng = random.Random(args.seed)
    word = encode(code, [rng.randrange(code.field.q) for _ in range(2 * code.k)])
    received = [None if j == node else word[j] for j in range(code.n)]
    result = repair_node(proc, code, received, node)
    ok = result.recovered == word[node] and result.downloaded_count == bw.per_node[node]

    if args.json:
        doc = {
            "code": args.code,
            "process": origin,
            "node": args.node,
            "seed": args.seed,
            "erased": list(word[node]),
            "recovered": list(result.recovered),
            "downloads": [list(d) for d in result.downloads],
            "accounted_bandwidth": bw.per_node[node],
            "ok": ok,
        }
        print(json.dumps(doc, indent=2))
    else:
        print(f"simulate: code={args.code} process={origin} node={args.node} seed={args.seed}")
        print(f"erased symbols: {list(word[node])}")
        for j, slot, v in result.downloads:
            print(f"  fetch node {j + 1} symbol {slot + 1}: {v}")
        print(f"downloaded {result.downloaded_count} symbols "
              f"(accounted bandwidth {bw.per_node[node]})")
        print(f"recovered: {list(result.recovered)}  "
              f"{'MATCH' if result.recovered == word[node] else 'MISMATCH'}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mdsrepair", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="emit the lower-bound table")
    p.add_argument("--min", type=int, default=4)
    p.add_argument("--max", type=int, default=200)
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("example", help="reproduce the bundled 3-node walkthrough")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("search", help="per-node optimal repair over random codes")
    p.add_argument("--field", default="gf16")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="run the structural-claim verifiers")
    p.add_argument("--field", default="gf16")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true",
                   help="enumerate every identity-first code instead of sampling")
    p.add_argument("--json", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="erase one node and replay its repair")
    p.add_argument("--code", required=True,
                   help="code JSON file (example.json resolves to the bundled fixture)")
    p.add_argument("--node", type=int, required=True, help="1-based node index")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--process", default=None,
                   help="repair-process JSON; defaults to the optimal searched process")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CodeFormatError, CodeGenerationError, FileNotFoundError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
