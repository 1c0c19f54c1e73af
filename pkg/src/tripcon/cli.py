"""Command-line interface.

Subcommands: conflicts, count, check, bench, gen.  Results go to stdout,
statistics and diagnostics to stderr, so the tool composes in pipelines.

Exit codes: 0 success; 1 check found a fast/oracle mismatch; 2 I/O or
parse error (also bad usage); 3 taxon mismatch or non-binary input.
"""

import argparse
import json
import os
import sys
import time

from .enumeration import active_backend, enumerate_conflicts
from .errors import (
    NonBinaryError,
    TaxonMismatchError,
    TripconError,
)
from .generator import (
    SHAPES,
    GeneratorConfig,
    SplitMix64,
    generate_pair,
    random_binary_tree,
)
from .newick import parse_newick, serialize_newick
from .oracle import enumerate_bruteforce

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_BAD_TREES = 3

# check refuses to run the cubic oracle above this n unless --oracle is given
ORACLE_GUARD = 512


class _UsageError(TripconError):
    pass


def _load_pair(path_p, path_q):
    with open(path_p, "r", encoding="utf-8") as fh:
        p, taxa = parse_newick(fh.read())
    with open(path_q, "r", encoding="utf-8") as fh:
        q, _ = parse_newick(fh.read(), taxa)
    return p, q, taxa


def _label_triples(instr, taxa, sort_lines):
    rows = [sorted(taxa.name_of(t) for t in trip) for trip in instr.conflicts]
    if sort_lines:
        rows.sort()
    return rows


def _stats_line(instr):
    return (
        f"n={instr.n_taxa}\td={instr.d}\tframes_opened={instr.frames_opened}"
        f"\tnodes_touched={instr.nodes_touched}"
    )


def _cmd_conflicts(args):
    p, q, taxa = _load_pair(args.tree_p, args.tree_q)
    instr = enumerate_conflicts(p, q, collect=True, backend=args.backend)
    rows = _label_triples(instr, taxa, args.sorted)
    if args.format == "json":
        doc = {
            "n": instr.n_taxa,
            "d": instr.d,
            "conflicts": rows,
            "stats": {
                "frames_opened": instr.frames_opened,
                "nodes_touched": instr.nodes_touched,
                "backend": instr.backend,
            },
        }
        sys.stdout.write(json.dumps(doc) + "\n")
    else:  # text and tsv are the same tab-separated triple lines
        out = sys.stdout
        for row in rows:
            out.write("\t".join(row) + "\n")
    if args.stats:
        print(_stats_line(instr), file=sys.stderr)
    return EXIT_OK


def _cmd_count(args):
    p, q, _ = _load_pair(args.tree_p, args.tree_q)
    instr = enumerate_conflicts(p, q, backend=args.backend)
    if args.format == "json":
        sys.stdout.write(json.dumps({"n": instr.n_taxa, "d": instr.d}) + "\n")
    else:
        sys.stdout.write(f"{instr.d}\n")
    if args.stats:
        print(_stats_line(instr), file=sys.stderr)
    return EXIT_OK


def _check_one(p, q, taxa, force_oracle, label, backend=None):
    if p.n_leaves > ORACLE_GUARD and not force_oracle:
        raise _UsageError(
            f"{label}: n={p.n_leaves} exceeds {ORACLE_GUARD}; the cubic oracle "
            "would be expensive, rerun with --oracle to force it"
        )
    instr = enumerate_conflicts(p, q, collect=True, backend=backend)
    fast = set(instr.conflicts)
    if len(fast) != len(instr.conflicts):
        print(f"{label}: duplicate emissions detected", file=sys.stderr)
        return False
    oracle = enumerate_bruteforce(p, q)
    if fast == oracle:
        return True
    missing = sorted(oracle - fast)
    extra = sorted(fast - oracle)
    print(f"{label}: MISMATCH (fast d={len(fast)}, oracle d={len(oracle)})",
          file=sys.stderr)
    for tag, sample in (("missing", missing), ("extra", extra)):
        for trip in sample[:5]:
            names = ",".join(taxa.name_of(t) for t in trip)
            print(f"{label}:   {tag} {names}", file=sys.stderr)
    return False


def _cmd_check(args):
    ok = True
    if args.tree_p:
        if not args.tree_q:
            raise _UsageError("check needs two tree files (or --pairs)")
        p, q, taxa = _load_pair(args.tree_p, args.tree_q)
        ok = _check_one(p, q, taxa, args.oracle, "pair", args.backend)
    else:
        if args.pairs < 1:
            raise _UsageError("--pairs must be at least 1")
        rng = SplitMix64(args.seed)
        for i in range(args.pairs):
            cfg = GeneratorConfig(
                n=args.n, seed=rng.next_u64(), shape=args.shape, k=args.k
            )
            p, q = generate_pair(cfg)
            if not _check_one(p, q, p.taxa, args.oracle, f"pair[{i}]",
                              args.backend):
                ok = False
    if ok:
        print("check: OK", file=sys.stderr)
        return EXIT_OK
    return EXIT_MISMATCH


def _cmd_bench(args):
    try:
        sizes = [int(x) for x in args.n.split(",") if x]
        swaps = [int(x) for x in args.k.split(",") if x]
    except ValueError as exc:
        raise _UsageError(f"bad --n/--k list: {exc}") from None
    backends = [b.strip() for b in args.backends.split(",") if b.strip()]
    out = sys.stdout
    cols = ["backend", "shape", "n", "k", "seed", "d", "frames",
            "nodes_touched", "ratio", "ms"]
    if args.oracle:
        cols += ["oracle_d", "oracle_ms"]
    out.write("\t".join(cols) + "\n")
    rng = SplitMix64(args.seed)
    for n in sizes:
        for k in swaps:
            seed = rng.next_u64()
            cfg = GeneratorConfig(n=n, seed=seed, shape=args.shape, k=k)
            p, q = generate_pair(cfg)
            oracle_cells = []
            if args.oracle:
                t0 = time.perf_counter()
                oracle_d = len(enumerate_bruteforce(p, q))
                oracle_cells = [str(oracle_d),
                                f"{(time.perf_counter() - t0) * 1e3:.3f}"]
            for backend in backends:
                t0 = time.perf_counter()
                instr = enumerate_conflicts(p, q, backend=backend)
                ms = (time.perf_counter() - t0) * 1e3
                ratio = instr.nodes_touched / (n + instr.d)
                row = [instr.backend, args.shape, str(n), str(k), str(seed),
                       str(instr.d), str(instr.frames_opened),
                       str(instr.nodes_touched), f"{ratio:.3f}", f"{ms:.3f}"]
                out.write("\t".join(row + oracle_cells) + "\n")
    return EXIT_OK


def _cmd_gen(args):
    cfg = GeneratorConfig(n=args.n, seed=args.seed, shape=args.shape, k=args.k)
    if args.k:
        _, tree = generate_pair(cfg)
    else:
        tree = random_binary_tree(cfg)
    sys.stdout.write(serialize_newick(tree) + "\n")
    return EXIT_OK


def _build_parser():
    top = argparse.ArgumentParser(
        prog="tripcon",
        description="Enumerate rooted triplet conflicts between two "
                    "phylogenetic trees in O(n + d) time.",
    )
    top.add_argument("--backend", default=None, choices=("auto", "fast", "pure"),
                     help="kernel to use (default: fast when compiled)")
    sub = top.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("conflicts", help="list all conflict triples")
    pc.add_argument("tree_p")
    pc.add_argument("tree_q")
    pc.add_argument("--sorted", action="store_true",
                    help="sort output lines lexicographically")
    pc.add_argument("--stats", action="store_true",
                    help="print a summary line to stderr")
    pc.add_argument("--format", default="text", choices=("text", "tsv", "json"))
    pc.set_defaults(func=_cmd_conflicts)

    pn = sub.add_parser("count", help="print only the number of conflicts")
    pn.add_argument("tree_p")
    pn.add_argument("tree_q")
    pn.add_argument("--stats", action="store_true")
    pn.add_argument("--format", default="text", choices=("text", "json"))
    pn.set_defaults(func=_cmd_count)

    pk = sub.add_parser("check",
                        help="compare the fast enumerator against the oracle")
    pk.add_argument("tree_p", nargs="?")
    pk.add_argument("tree_q", nargs="?")
    pk.add_argument("--oracle", action="store_true",
                    help=f"run the cubic oracle even when n > {ORACLE_GUARD}")
    pk.add_argument("--pairs", type=int, default=0,
                    help="instead of files: number of generated pairs")
    pk.add_argument("--n", type=int, default=30)
    pk.add_argument("--k", type=int, default=3)
    pk.add_argument("--seed", type=int, default=1)
    pk.add_argument("--shape", default="uniform-attachment", choices=SHAPES)
    pk.set_defaults(func=_cmd_check)

    pb = sub.add_parser("bench", help="run a seeded corpus and report TSV")
    pb.add_argument("--shape", default="uniform-attachment", choices=SHAPES)
    pb.add_argument("--n", default="1024,4096",
                    help="comma-separated taxa counts")
    pb.add_argument("--k", default="1,16",
                    help="comma-separated leaf-swap counts")
    pb.add_argument("--seed", type=int, default=1)
    pb.add_argument("--backends", default=None,
                    help="comma-separated kernel list (default: the active one)")
    pb.add_argument("--oracle", action="store_true",
                    help="also run and time the cubic oracle per instance")
    pb.set_defaults(func=_cmd_bench)

    pg = sub.add_parser("gen", help="emit a seeded Newick tree")
    pg.add_argument("--n", type=int, required=True)
    pg.add_argument("--seed", type=int, default=1)
    pg.add_argument("--shape", default="uniform-attachment", choices=SHAPES)
    pg.add_argument("--k", type=int, default=0,
                    help="emit the k-leaf-swap perturbation of the seeded tree")
    pg.set_defaults(func=_cmd_gen)
    return top


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "backends", "") is None:
        args.backends = args.backend or active_backend()
    try:
        return args.func(args)
    except (NonBinaryError, TaxonMismatchError) as exc:
        print(f"tripcon: {exc}", file=sys.stderr)
        return EXIT_BAD_TREES
    except BrokenPipeError:
        # the downstream reader (head, etc.) closed the pipe: not an error;
        # point stdout at devnull so interpreter shutdown stays quiet
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except (TripconError, OSError) as exc:
        print(f"tripcon: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
