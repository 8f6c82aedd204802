"""Command-line entry point ``tvg``."""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import __version__
from .intervals import IntervalSet, format_scalar, parse_intervalset, scalar
from .io import ParseError, format_barcode, parse_barcode, read_manifest, read_tvg, write_manifest, write_tvg
from .matrix import (LabelMismatch, TvgMatrix, arrival_summary, cumulant, kleene_radius, kleene_star,
                     lifetime_curve, ping, strongly_connected, temporal_diameter)
from .semirings.basic import LIFETIME, WalkBudgetExceeded

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_SEMANTIC, EXIT_RESOURCE = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


class SemanticError(Exception):
    pass


# -- helpers --------------------------------------------------------------------

def _window(text: str) -> IntervalSet:
    try:
        lo, hi = (scalar(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"window must be 'a,b', got {text!r}") from None
    if lo > hi:
        raise UsageError(f"empty window {text!r}")
    return IntervalSet([(lo, hi)])


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path: str) -> TvgMatrix:
    return read_tvg(_read(path))


def _convert(M: TvgMatrix, name: str | None) -> TvgMatrix:
    from .semirings.contact import CONTACT, ContactMap
    from .semirings.delay import DELAY, DelayedLifetime

    if name is None:
        return M
    current = {LIFETIME: "lifetime", DELAY: "delay", CONTACT: "contact"}.get(M.semiring)
    if current == name:
        return M
    if current == "lifetime" and name == "delay":
        return M.map(lambda x: DelayedLifetime(x), DELAY)
    if current == "lifetime" and name == "contact":
        return M.map(lambda x: ContactMap.window(x, 0), CONTACT)
    if current == "delay" and name == "contact":
        return M.map(lambda x: ContactMap.window(x.lifetime, x.delay), CONTACT)
    raise SemanticError(f"cannot read a {current} TVG as {name}")


def _header(args) -> str:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}
    return f"# tvg {__version__}\n# config: {json.dumps(cfg, sort_keys=True, default=str)}\n"


def _emit(args, body: str):
    text = _header(args) + body
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _num(x) -> str:
    if isinstance(x, float):
        return "inf" if x == math.inf else repr(x)
    return format_scalar(x)


def _seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("TVG_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"TVG_SEED must be an integer, got {env!r}") from None


# -- subcommands ------------------------------------------------------------------

def cmd_cumulant(args):
    M = _convert(_load(args.file), args.semiring)
    _emit(args, write_tvg(cumulant(M, args.k)))


def cmd_star(args):
    M = _convert(_load(args.file), args.semiring)
    res = kleene_star(M, args.max_k)
    status = "none" if res.converged_at is None else str(res.converged_at)
    body = f"converged: {status}\n"
    if args.matrix:
        body += write_tvg(res.star)
    _emit(args, body)


def cmd_curve(args):
    M = _load(args.file)
    if M.semiring is not LIFETIME:
        raise SemanticError("lifetime curves need a lifetime matrix")
    curve = lifetime_curve(M, args.k_max, _window(args.window))
    names = ["average"] + ([f"{u}->{v}" for u, v in curve.per_pair] if args.pairs else [])
    lines = ["# k " + " ".join(names)]
    cols = [curve.average] + (list(curve.per_pair.values()) if args.pairs else [])
    for k in curve.ks:
        lines.append(f"{k} " + " ".join(f"{float(c[k]):.10g}" for c in cols))
    _emit(args, "\n".join(lines) + "\n")


def cmd_diameter(args):
    M = _load(args.file)
    if M.semiring is not LIFETIME:
        raise SemanticError("temporal diameter needs a lifetime matrix")
    d = temporal_diameter(M)
    body = f"diameter: {d.diameter}\n"
    if args.radius:
        body += f"kleene_radius: {kleene_radius(M)}\n"
    if args.pairs:
        body += "".join(f"{u} {v} {h}\n" for (u, v), h in d.per_pair.items())
    _emit(args, body)


def cmd_connected(args):
    M = _load(args.file)
    if M.semiring is not LIFETIME:
        raise SemanticError("strong connectivity needs a lifetime matrix")
    ok = strongly_connected(M, _window(args.window))
    _emit(args, f"strongly_connected: {'true' if ok else 'false'}\n")


def cmd_ping(args):
    M = _convert(_load(args.file), args.semiring)
    if M.semiring is LIFETIME:
        raise SemanticError("ping needs the delay or contact semi-ring (use --semiring)")
    if args.source not in M.labels:
        raise SemanticError(f"unknown source node {args.source!r}")
    start = parse_intervalset(args.start) if args.start.startswith("[") or args.start == "R" \
        else scalar(args.start)
    rows = ping(M, args.source, start, args.k_max)
    lines = []
    for k, row in enumerate(rows):
        for v, x in zip(M.labels, row):
            lines.append(f"{k} {v} {arrival_summary(x)}")
    _emit(args, "\n".join(lines) + "\n")


def _barcode_of(path: str, dim: int):
    text = _read(path)
    body = "\n".join(l for l in text.splitlines() if not l.startswith("#")).strip()
    if body.startswith("{") or body.lower().startswith("source"):
        from .zigzag import zigzag_barcode
        return zigzag_barcode(read_tvg(text), dim)
    from .metrics import Barcode
    return parse_barcode(text).get(dim, Barcode())


def cmd_dist(args):
    from . import metrics

    p = math.inf if args.p == "inf" else float(args.p)
    q = math.inf if args.q == "inf" else float(args.q)
    p = int(p) if p != math.inf and p.is_integer() else p
    q = int(q) if q != math.inf and q.is_integer() else q
    if len(args.files) < 2:
        raise UsageError("dist needs at least two inputs")

    if args.metric in ("bottleneck", "wasserstein"):
        items = [_barcode_of(f, args.dim) for f in args.files]
        pp = math.inf if args.metric == "bottleneck" else p

        def d(a, b):
            return metrics.matching_distance(a, b, pp)
    else:
        items = [_load(f) for f in args.files]
        if args.metric == "hausdorff":
            d = metrics.tvg_hausdorff
        elif args.metric == "symhausdorff":
            def d(a, b):
                return metrics.symmetrized_hausdorff(a, b, args.mode).distance
        else:
            if args.window is None:
                raise UsageError("the disconnect distance needs --window")
            W = _window(args.window)

            def d(a, b):
                return metrics.disconnect_distance(a, b, p, q, W)
    if len(items) == 2:
        _emit(args, f"{_num(d(items[0], items[1]))}\n")
        return
    names = [os.path.basename(f) for f in args.files]
    lines = ["," + ",".join(names)]
    for i, a in enumerate(items):
        lines.append(names[i] + "," + ",".join(_num(d(a, b)) if i != j else "0"
                                                for j, b in enumerate(items)))
    _emit(args, "\n".join(lines) + "\n")


def cmd_zigzag(args):
    from .zigzag import zigzag_barcode
    M = _load(args.file)
    if M.semiring is not LIFETIME:
        raise SemanticError("zigzag barcodes need a lifetime matrix")
    _emit(args, format_barcode(zigzag_barcode(M, args.dim), args.dim))


def cmd_knn(args):
    from .knn import LabeledCorpus, distance_matrix, format_dat, shuffled, split_runner

    samples = read_manifest(args.manifest)
    tvgs = [read_tvg(_read(f)) for f, _ in samples]
    corpus = LabeledCorpus([os.path.basename(f) for f, _ in samples], [l for _, l in samples], tvgs)
    p = math.inf if args.p == "inf" else int(args.p) if float(args.p).is_integer() else float(args.p)
    D = distance_matrix(corpus, args.dim, p, jobs=args.jobs or os.cpu_count() or 1)
    seed = _seed(args)
    ks = range(1, args.k_max + 1)
    curves = {"accuracy": split_runner(D, corpus.labels, args.train_frac, args.splits, seed, ks)}
    if args.null:
        runs = [split_runner(D, shuffled(corpus.labels, seed + 1 + r), args.train_frac,
                             args.splits, seed, ks) for r in range(args.null)]
        curves["null"] = {k: sum(r[k] for r in runs) / len(runs) for k in ks}
    _emit(args, format_dat(curves))


def cmd_gen(args):
    from . import generators as g

    seed = _seed(args)
    if args.kind == "random":
        W = _window(args.window)
        M = g.gen_random_tvg(args.n, (W.lower, W.upper), args.density, args.max_contacts, seed,
                             symmetric=args.symmetric)
        _emit(args, write_tvg(M))
    elif args.kind == "sphere":
        M = g.gen_sphere_constellation(args.n, args.theta, scalar(args.duration), args.rotating,
                                       seed, args.steps)
        _emit(args, write_tvg(M))
    else:
        if args.output == "-":
            raise UsageError("gen corpus needs --output DIR")
        os.makedirs(args.output, exist_ok=True)
        samples = g.gen_two_class_corpus(args.m, seed)
        entries = []
        for s in samples:
            name = f"{s.id}.json"
            with open(os.path.join(args.output, name), "w", encoding="utf-8") as fh:
                fh.write(_header(args) + write_tvg(s.tvg))
            entries.append((name, s.label))
        with open(os.path.join(args.output, "manifest.json"), "w", encoding="utf-8") as fh:
            fh.write(write_manifest(entries))
        sys.stdout.write(f"wrote {len(samples)} samples to {args.output}\n")


def cmd_check_axioms(args):
    from .suites import SUITES, run_suite

    names = list(SUITES) if args.semiring == "all" else [args.semiring]
    lines = []
    failed = False
    for name in names:
        report = run_suite(name, args.trials, _seed(args))
        lines.append(str(report))
        failed |= not report.ok and name != "delay-literal"
    _emit(args, "\n".join(lines) + "\n")
    if failed:
        raise SemanticError("semi-ring identities violated")


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tvg", description="Semi-ring tools for time-varying graphs.")
    ap.add_argument("--version", action="version", version=f"tvg {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("-o", "--output", default="-", help="output path, '-' for stdout")
        p.set_defaults(func=func)
        return p

    semirings = ["lifetime", "delay", "contact"]
    p = add("cumulant", cmd_cumulant, "k-th cumulant I + A + ... + A^k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--semiring", choices=semirings)
    p.add_argument("file")

    p = add("star", cmd_star, "Kleene star with convergence detection")
    p.add_argument("--max-k", type=int, default=None)
    p.add_argument("--semiring", choices=semirings)
    p.add_argument("--matrix", action="store_true", help="also print the last cumulant")
    p.add_argument("file")

    p = add("curve", cmd_curve, "lifetime curves as .dat columns")
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--window", required=True)
    p.add_argument("--pairs", action="store_true", help="one column per ordered pair")
    p.add_argument("file")

    p = add("diameter", cmd_diameter, "temporal hop diameter")
    p.add_argument("--radius", action="store_true", help="also report the Kleene convergence radius")
    p.add_argument("--pairs", action="store_true")
    p.add_argument("file")

    p = add("connected", cmd_connected, "strong connectivity over a window")
    p.add_argument("--window", required=True)
    p.add_argument("file")

    p = add("ping", cmd_ping, "propagate a message from one node")
    p.add_argument("--source", required=True)
    p.add_argument("--start", default="0", help="send time, or an interval set such as R")
    p.add_argument("--k-max", type=int, default=5)
    p.add_argument("--semiring", choices=["delay", "contact"])
    p.add_argument("file")

    p = add("dist", cmd_dist, "distances between TVGs or barcodes")
    p.add_argument("--metric", required=True,
                   choices=["hausdorff", "disconnect", "symhausdorff", "bottleneck", "wasserstein"])
    p.add_argument("--p", default="inf")
    p.add_argument("--q", default="inf")
    p.add_argument("--window")
    p.add_argument("--dim", type=int, choices=[0, 1], default=1)
    p.add_argument("--mode", choices=["exact", "greedy"], default="exact")
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("files", nargs="+")

    p = add("zigzag", cmd_zigzag, "zigzag persistence barcode")
    p.add_argument("--dim", type=int, choices=[0, 1], required=True)
    p.add_argument("file")

    p = add("knn", cmd_knn, "KNN accuracy curves over stratified splits")
    p.add_argument("--dim", type=int, choices=[0, 1], default=1)
    p.add_argument("--p", default="2")
    p.add_argument("--k-max", type=int, default=10)
    p.add_argument("--splits", type=int, default=100)
    p.add_argument("--train-frac", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--null", type=int, default=0, metavar="SHUFFLES",
                   help="also report the mean accuracy over this many label shuffles")
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("manifest")

    p = add("gen", cmd_gen, "synthetic TVGs")
    p.add_argument("kind", choices=["random", "sphere", "corpus"])
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--m", type=int, default=20, help="samples per class (corpus)")
    p.add_argument("--window", default="0,100")
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--max-contacts", type=int, default=3)
    p.add_argument("--symmetric", action="store_true")
    p.add_argument("--theta", type=float, default=math.pi / 3)
    p.add_argument("--duration", default="1")
    p.add_argument("--rotating", action="store_true")
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)

    p = add("check-axioms", cmd_check_axioms, "randomized semi-ring identity checks")
    from .suites import SUITES
    p.add_argument("--semiring", choices=list(SUITES) + ["all"], default="all")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"tvg: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, OSError, UnicodeDecodeError) as exc:
        print(f"tvg: input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (WalkBudgetExceeded, MemoryError, RecursionError) as exc:
        print(f"tvg: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (SemanticError, LabelMismatch, ValueError, ArithmeticError) as exc:
        print(f"tvg: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
