"""Command line front end: ``geodesic-index <command> ...``.

Model files are JSON::

    {"n": 2,
     "geodesics": [{"label": "c1", "index": 1,
                    "angles": [{"kind": "quadratic", "p": 0, "q": 1, "d": 2, "r": 2}]}],
     "options": {"M0": 1, "N_max": 1000, "max_degree": 40, "max_m": 10}}

Angles are turns ``theta / 2pi`` written as rational, quadratic or decimal
literals.  Matrix files are ``{"dimension": 2k, "entries": [...row-major...],
"exact_angles": [<literal>, ...]}``.

Exit status: 0 success or consistent verdict, 1 inconsistent verdict,
2 input error, 3 search bound exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import jump, morse, topology, verifier
from .iteration import GeodesicModel, ModelError, index_iterate_elliptic, mean_index
from .numerics import BracketError, ExactReal, from_literal, to_literal
from .symplectic import (
    H,
    N1,
    N2,
    R,
    ClassificationError,
    NotSymplecticError,
    decompose,
    elliptic_height,
    is_irrationally_elliptic,
)

EXIT_OK, EXIT_INCONSISTENT, EXIT_INPUT, EXIT_EXHAUSTED = 0, 1, 2, 3


class InputError(ValueError):
    """A model or matrix file that does not parse; the message names the location."""


# ---------------------------------------------------------------------------
# file parsing

def _load_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _field(obj, key, where, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"{where}: missing field '{key}'")
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise InputError(f"{where}.{key}: expected {kind.__name__}, got {type(value).__name__}")
    return value


def parse_literal(obj, where: str) -> ExactReal:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: angle literal must be an object")
    try:
        return from_literal(obj)
    except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: {exc}") from None


def parse_models(doc, source: str = "<model>") -> tuple[list[GeodesicModel], dict]:
    """Models and the options block from a decoded model file."""
    n = _field(doc, "n", source, int)
    entries = _field(doc, "geodesics", source, list)
    if not entries:
        raise InputError(f"{source}.geodesics: at least one geodesic is needed")
    models = []
    for j, entry in enumerate(entries):
        where = f"{source}: geodesics[{j}]"
        index = _field(entry, "index", where, int)
        angles = _field(entry, "angles", where, list)
        turns = tuple(parse_literal(a, f"{where}.angles[{k}]") for k, a in enumerate(angles))
        try:
            models.append(GeodesicModel(n, index, turns, str(entry.get("label", ""))))
        except (ModelError, ValueError) as exc:
            raise InputError(f"{where}: {exc}") from None
    options = doc.get("options", {})
    if not isinstance(options, dict):
        raise InputError(f"{source}: options must be an object")
    return models, options


def load_models(path: str) -> tuple[list[GeodesicModel], dict]:
    return parse_models(_load_json(path), path)


def dump_models(models, options: dict | None = None) -> dict:
    doc = {"n": models[0].n if models else 0, "geodesics": [g.to_dict() for g in models]}
    if options:
        doc["options"] = dict(options)
    return doc


def parse_matrix(doc, source: str = "<matrix>") -> tuple[np.ndarray, list[ExactReal]]:
    dim = _field(doc, "dimension", source, int)
    entries = _field(doc, "entries", source, list)
    if dim <= 0 or dim % 2:
        raise InputError(f"{source}.dimension: must be a positive even integer, got {dim}")
    if len(entries) != dim * dim:
        raise InputError(f"{source}.entries: expected {dim * dim} numbers, got {len(entries)}")
    for k, x in enumerate(entries):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise InputError(f"{source}.entries[{k}]: not a number")
    exact = [parse_literal(a, f"{source}.exact_angles[{k}]") for k, a in enumerate(doc.get("exact_angles", []))]
    return np.array(entries, dtype=float).reshape(dim, dim), exact


# ---------------------------------------------------------------------------
# output

def _table(headers, rows) -> str:
    cells = [[str(h) for h in headers]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(row[k]) for row in cells) for k in range(len(headers))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _short(x: ExactReal) -> str:
    return f"{float(x):.12g}"


def _block_dict(b) -> dict:
    if isinstance(b, N1):
        return {"type": "N1", "lambda": b.lam, "a": b.a}
    if isinstance(b, H):
        return {"type": "H", "b": b.b}
    if isinstance(b, R):
        return {"type": "R", "turn": to_literal(b.turn)}
    if isinstance(b, N2):
        return {"type": "N2", "turn": to_literal(b.turn), "B": list(b.B), "trivial": b.trivial}
    raise TypeError(type(b).__name__)


def _block_text(b) -> str:
    if isinstance(b, N1):
        return f"N1({b.lam}, {b.a:g})"
    if isinstance(b, H):
        return f"H({b.b:.12g})"
    if isinstance(b, R):
        return f"R(turn={_short(b.turn)})"
    kind = "trivial" if b.trivial else "nontrivial"
    return f"N2(turn={_short(b.turn)}, {kind})"


# ---------------------------------------------------------------------------
# commands

def cmd_decompose(args) -> int:
    M, exact = parse_matrix(_load_json(args.matrix), args.matrix)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        nf = decompose(M, args.tol, exact)
        height = elliptic_height(M, args.tol)
    verdict = is_irrationally_elliptic(nf)
    split = nf.splitting_numbers()
    payload = {
        "splitting_numbers": split,
        "blocks": [_block_dict(b) for b in nf.blocks],
        "elliptic_height": height,
        "irrationally_elliptic": verdict,
    }
    verdict_text = {True: "yes", False: "no", None: "undetermined (angles of unknown rationality)"}[verdict]
    text = "\n".join([
        "splitting numbers: " + ", ".join(f"{k}={v}" for k, v in split.items()),
        "blocks: " + ", ".join(_block_text(b) for b in nf.blocks),
        f"elliptic height: {height}",
        f"irrationally elliptic: {verdict_text}",
    ])
    _emit(args, payload, text)
    return EXIT_OK


def _pick(models, k: int | None):
    if k is None:
        return list(enumerate(models))
    if not 0 <= k < len(models):
        raise InputError(f"--model-index {k} out of range for {len(models)} geodesics")
    return [(k, models[k])]


def cmd_iterate(args) -> int:
    models, opts = load_models(args.models)
    max_m = args.max_m if args.max_m is not None else int(opts.get("max_m", 10))
    if max_m < 1:
        raise InputError("--max-m must be positive")
    payload, blocks = {"geodesics": []}, []
    for j, g in _pick(models, args.model_index):
        rows = []
        for m in range(1, max_m + 1):
            i_m = index_iterate_elliptic(g, m)
            rows.append({"m": m, "index": i_m, "nullity": 0, "mean_so_far": i_m / m})
        mean = mean_index(g)
        payload["geodesics"].append({"model": g.to_dict(), "rows": rows, "mean_index": float(mean)})
        body = _table(["m", "i(c^m)", "nu(c^m)", "i(c^m)/m"], [
            (r["m"], r["index"], r["nullity"], f"{r['mean_so_far']:.6f}") for r in rows
        ])
        blocks.append(f"geodesic {g.name} (n={g.n}, i={g.index})\n{body}\nmean index: {_short(mean)}")
    _emit(args, payload, "\n\n".join(blocks))
    return EXIT_OK


def cmd_betti(args) -> int:
    table = topology.betti_table(args.n, args.max_degree)
    payload = {"n": args.n, "max_degree": args.max_degree, "betti": list(table.values)}
    _emit(args, payload, _table(["degree", "b"], table.rows()))
    return EXIT_OK


def cmd_morse(args) -> int:
    models, opts = load_models(args.models)
    D = args.max_degree if args.max_degree is not None else int(opts.get("max_degree", 20))
    n = models[0].n
    M = morse.morse_counts(models, D)
    b = topology.betti_table(n, D)
    report = morse.check_morse_inequalities(M, b)
    parity = morse.check_parity_vanishing(M, b, n)
    payload = {
        "n": n,
        "max_degree": D,
        "morse": list(M.totals),
        "per_geodesic": [list(r) for r in M.per_model],
        "betti": list(b.values),
        "status": [row.status for row in report.rows],
        "first_violation": report.first_violation,
        "parity_vanishing_failures": list(parity.vanishing_failures),
    }
    rows = [(r.degree, r.morse, r.betti, r.morse_alternating, r.betti_alternating, r.status) for r in report.rows]
    text = _table(["p", "M_p", "b_p", "alt M", "alt b", "status"], rows)
    text += f"\nfirst violation: {report.first_violation if report.first_violation is not None else 'none'}"
    _emit(args, payload, text)
    return EXIT_OK


def _search_options(args, opts):
    M0 = args.m0 if args.m0 is not None else opts.get("M0")
    N_max = args.n_max if args.n_max is not None else int(opts.get("N_max", 10_000))
    return (None if M0 is None else int(M0)), N_max


def cmd_jump(args) -> int:
    models, opts = load_models(args.models)
    M0, N_max = _search_options(args, opts)
    cert = jump.find_common_jump(models, M0 or 1, N_max)
    gaps = jump.isolation_check(models[cert.distinguished], cert)
    payload = {"certificate": cert.to_dict(), "isolation_passed": gaps.passed}
    lines = [f"N = {cert.N}, iterates = {list(cert.iterates)}, M0 = {cert.M0}"]
    lines.append(f"distinguished geodesic: {models[cert.distinguished].name}, witness angle {cert.witness}")
    lines += [f"  {k}: {'pass' if ok else 'FAIL'}" for k, ok in cert.checks.items()]
    lines.append(f"isolation of the distinguished geodesic: {'pass' if gaps.passed else 'FAIL'}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    models, opts = load_models(args.models)
    M0, N_max = _search_options(args, opts)
    report = verifier.verify_model_set(models, M0, N_max)
    lines = [f"{report.verdict}, forced multiplicity {report.forced_multiplicity}"]
    lines.append(f"n = {report.n}, q = {report.q}")
    if report.certificate:
        c = report.certificate
        lines.append(f"certificate: N = {c['N']}, iterates = {c['iterates']}")
        lines.append(f"window counts: {report.window_counts} (total {report.window_total})")
        lines.append(f"window Betti sum: {report.betti_window_sum}")
    lines += [f"note: {r}" for r in report.reasons]
    lines.append(f"scope: {report.scope}")
    _emit(args, report.to_dict(), "\n".join(lines))
    return {
        verifier.CONSISTENT: EXIT_OK,
        verifier.INCONSISTENT: EXIT_INCONSISTENT,
        verifier.UNDETERMINED: EXIT_EXHAUSTED,
    }[report.verdict]


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")

    parser = argparse.ArgumentParser(
        prog="geodesic-index",
        description="Index iteration, Morse bookkeeping and jump certificates for closed geodesics on spheres.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", parents=[common], help="normal form of a symplectic matrix")
    p.add_argument("matrix")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("iterate", parents=[common], help="index table of the iterates")
    p.add_argument("models")
    p.add_argument("--max-m", type=int)
    p.add_argument("--model-index", type=int)
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("betti", parents=[common], help="Betti numbers of the loop-space pair")
    p.add_argument("n", type=int)
    p.add_argument("--max-degree", type=int, default=20)
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("morse", parents=[common], help="Morse counts against Betti numbers")
    p.add_argument("models")
    p.add_argument("--max-degree", type=int)
    p.set_defaults(func=cmd_morse)

    for name, func, text in (
        ("jump", cmd_jump, "search a common index jump certificate"),
        ("verify", cmd_verify, "run the multiplicity pipeline"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("models")
        p.add_argument("--m0", type=int)
        p.add_argument("--n-max", type=int)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except jump.CertificateNotFound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (InputError, ModelError, jump.PreconditionError, NotSymplecticError,
            ClassificationError, BracketError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
