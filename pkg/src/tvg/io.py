"""Contact plans, JSON TVG files, corpus manifests and barcode files."""
from __future__ import annotations

import csv
import io
import json
import os

from .intervals import (INF, REALS, IntervalSet, format_intervalset, format_scalar,
                        parse_intervalset, scalar)
from .matrix import TvgMatrix
from .metrics import Barcode, BarcodeInterval
from .semirings.basic import LIFETIME
from .semirings.contact import CONTACT, format_contact, parse_contact
from .semirings.delay import DELAY, DelayedLifetime, format_delayed, parse_delayed


class ParseError(ValueError):
    """Malformed input; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


SEMIRINGS = {"lifetime": LIFETIME, "delay": DELAY, "contact": CONTACT}


def _diagonal_default(S):
    # lifetime matrices keep vertices alive forever; the others are adjacency matrices
    return REALS if S is LIFETIME else S.zero


# -- CSV contact plans ----------------------------------------------------------

def _read_text(source) -> str:
    if hasattr(source, "read"):
        return source.read()
    if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            return fh.read()
    return str(source)


def parse_contacts(source, nodes=None) -> TvgMatrix:
    """Contact plan CSV to a lifetime matrix, or a delay matrix if a delay column is present.

    ``source`` is a path, an open file or the CSV text itself.  A leading
    ``# nodes: a,b,c`` comment fixes the node order (and keeps isolated nodes).
    """
    text = _read_text(source)
    header = None
    rows = []
    declared = None
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            if body.startswith("nodes:"):
                declared = [x.strip() for x in body[6:].split(",") if x.strip()]
            continue
        fields = next(csv.reader([line]))
        fields = [f.strip() for f in fields]
        if header is None:
            header = [f.lower() for f in fields]
            if header[:4] != ["source", "target", "start", "end"] or len(header) > 5 or \
                    (len(header) == 5 and header[4] != "delay"):
                raise ParseError("header must be source,target,start,end[,delay]", lineno)
            continue
        if len(fields) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(fields)}", lineno)
        src, dst = fields[0], fields[1]
        if not src or not dst:
            raise ParseError("empty node label", lineno)
        try:
            start, end = scalar(fields[2]), scalar(fields[3])
            delay = scalar(fields[4]) if len(fields) == 5 else None
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad number in {line.strip()!r}", lineno) from None
        if start > end:
            raise ParseError(f"start {fields[2]} after end {fields[3]}", lineno)
        if delay is not None and (delay < 0 or delay == INF):
            raise ParseError(f"delay must be finite and non-negative, got {fields[4]}", lineno)
        rows.append((lineno, src, dst, start, end, delay))
    if header is None:
        raise ParseError("no header and no contacts")
    labels = list(nodes or declared or [])
    seen = set(labels)
    for _, src, dst, *_ in rows:
        for v in (src, dst):
            if v not in seen:
                if nodes is not None or declared is not None:
                    raise ParseError(f"node {v!r} not in the declared node list")
                seen.add(v)
                labels.append(v)
    if not labels:
        raise ParseError("contact plan has no nodes")
    delayed = len(header) == 5
    S = DELAY if delayed else LIFETIME
    edges: dict = {}
    for _, src, dst, start, end, delay in rows:
        life = IntervalSet([(start, end)])
        x = DelayedLifetime(life, delay) if delayed else life
        edges[(src, dst)] = S.add(edges.get((src, dst), S.zero), x)
    M = TvgMatrix.from_edges(labels, {}, S, diagonal=_diagonal_default(S))
    rows_out = [list(r) for r in M.entries]
    idx = {v: i for i, v in enumerate(labels)}
    for (u, v), x in edges.items():
        i, j = idx[u], idx[v]
        if i == j and not delayed:
            continue  # vertices of a lifetime matrix are always alive
        rows_out[i][j] = x
    return TvgMatrix(labels, rows_out, S)


def serialize_contacts(M: TvgMatrix) -> str:
    """Inverse of :func:`parse_contacts` for lifetime and delay matrices."""
    if M.semiring not in (LIFETIME, DELAY):
        raise ValueError("only lifetime and delay matrices have a CSV form")
    delayed = M.semiring is DELAY
    out = io.StringIO()
    out.write("# nodes: " + ",".join(str(v) for v in M.labels) + "\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["source", "target", "start", "end"] + (["delay"] if delayed else []))
    for i, u in enumerate(M.labels):
        for j, v in enumerate(M.labels):
            x = M.entries[i][j]
            if i == j and not delayed:
                continue
            life = x.lifetime if delayed else x
            if not life.bounded:
                raise ValueError(f"entry ({u},{v}) is unbounded and has no CSV form")
            for lo, hi in life:
                row = [u, v, format_scalar(lo), format_scalar(hi)]
                if delayed:
                    row.append(format_scalar(x.delay))
                w.writerow(row)
    return out.getvalue()


# -- JSON TVG files ---------------------------------------------------------------

_FORMAT = {"lifetime": format_intervalset, "delay": format_delayed, "contact": format_contact}
_PARSE = {"lifetime": parse_intervalset, "delay": parse_delayed, "contact": parse_contact}


def tvg_to_json(M: TvgMatrix) -> dict:
    name = next((k for k, S in SEMIRINGS.items() if S is M.semiring), None)
    if name is None:
        raise ValueError(f"no JSON form for the {M.semiring.name} semi-ring")
    fmt = _FORMAT[name]
    S = M.semiring
    diag = _diagonal_default(S)
    edges = []
    for i, u in enumerate(M.labels):
        for j, v in enumerate(M.labels):
            x = M.entries[i][j]
            if (i == j and S.equals(x, diag)) or (i != j and S.equals(x, S.zero)):
                continue
            edges.append({"from": u, "to": v, "value": fmt(x)})
    return {"nodes": list(M.labels), "semiring": name, "edges": edges}


def tvg_from_json(data) -> TvgMatrix:
    """Edges with ``from == to`` replace the default diagonal entry."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    try:
        nodes = data["nodes"]
        name = data.get("semiring", "lifetime")
        edges = data.get("edges", [])
    except (TypeError, KeyError) as exc:
        raise ParseError(f"missing field {exc}") from None
    if name not in SEMIRINGS:
        raise ParseError(f"unknown semi-ring {name!r}")
    if not nodes:
        raise ParseError("TVG has no nodes")
    S = SEMIRINGS[name]
    parse = _PARSE[name]
    idx = {v: i for i, v in enumerate(nodes)}
    n = len(nodes)
    diag = _diagonal_default(S)
    rows = [[diag if i == j else S.zero for j in range(n)] for i in range(n)]
    seen_diag = set()
    for k, e in enumerate(edges):
        try:
            i, j = idx[e["from"]], idx[e["to"]]
            if not isinstance(e["value"], str):
                raise ValueError("edge values must be strings in the semi-ring's text form")
            x = parse(e["value"])
        except KeyError as exc:
            raise ParseError(f"edge {k}: unknown node or missing field {exc}") from None
        except ValueError as exc:
            raise ParseError(f"edge {k}: {exc}") from None
        if i == j and i not in seen_diag:
            rows[i][j] = x
            seen_diag.add(i)
        else:
            rows[i][j] = S.add(rows[i][j], x)
    return TvgMatrix(nodes, rows, S)


def read_tvg(path) -> TvgMatrix:
    """JSON TVG or CSV contact plan, chosen by content."""
    text = _read_text(path)
    body = "\n".join(l for l in text.splitlines() if not l.startswith("#"))
    if body.lstrip().startswith("{"):
        return tvg_from_json(body)
    return parse_contacts(text)


def write_tvg(M: TvgMatrix) -> str:
    return json.dumps(tvg_to_json(M), indent=1) + "\n"


# -- corpus manifests -------------------------------------------------------------

def read_manifest(path) -> list:
    """``[(file, label)]`` with paths resolved against the manifest's directory."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    base = os.path.dirname(os.path.abspath(path))
    try:
        return [(os.path.join(base, s["file"]), str(s["label"])) for s in data["samples"]]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad manifest entry: {exc}") from None


def write_manifest(samples: list) -> str:
    return json.dumps({"samples": [{"file": f, "label": l} for f, l in samples]}, indent=1) + "\n"


# -- barcode files ----------------------------------------------------------------

def format_barcode(B: Barcode, k: int) -> str:
    lines = []
    for bar, m in B.items():
        lines.append(f"{k} {format_scalar(bar.birth)} {format_scalar(bar.death)} "
                     f"{int(bar.open_l)} {int(bar.open_r)} {m}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_barcode(text: str) -> dict:
    """``{k: Barcode}`` from ``k birth death open_l open_r multiplicity`` lines."""
    out: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 6:
            raise ParseError("expected 6 fields", lineno)
        try:
            k = int(parts[0])
            bar = BarcodeInterval(scalar(parts[1]), scalar(parts[2]), parts[3] == "1", parts[4] == "1")
            m = int(parts[5])
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        out.setdefault(k, []).append((bar, m))
    return {k: Barcode(v) for k, v in out.items()}
