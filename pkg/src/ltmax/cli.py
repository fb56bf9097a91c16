"""Command-line front end: ``ltmax gen|sigma|greedy|opt|ratio|verify``.

Exit codes: 0 success, 1 check violation, 2 usage or input error,
3 enumeration budget or search cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .cascade import estimate_sigma
from .exact import (
    ExactIntractable,
    exact_sigma,
    exact_sigma_by_config_enum,
    exact_sigma_by_threshold_enum,
)
from .graph import GraphFormatError, parse_graph, serialize_graph
from .instances import KINDS, InstanceSpec, InfeasibleInstance, NonPositiveBudget, generate, predicted_ratio_bounds, spec_dict
from .selection import CapExceeded, ExactOracle, MonteCarloOracle, approximation_report, greedy_seeds, lazy_greedy_seeds, optimal_seeds
from .verify import SCHEMA, SUITES, report_json, run_suite

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def rational(x) -> dict:
    """Lossless "p/q" plus a decimal approximation; floats pass through."""
    if isinstance(x, Fraction) or isinstance(x, int):
        x = Fraction(x)
        return {"value": f"{x.numerator}/{x.denominator}", "decimal": f"{float(x):.12g}"}
    return {"value": repr(float(x)), "decimal": repr(float(x))}


def _text_value(v) -> str:
    if isinstance(v, dict) and set(v) == {"value", "decimal"}:
        return v["value"] if v["value"] == v["decimal"] else f"{v['value']} ({v['decimal']})"
    if isinstance(v, (list, tuple)):
        return ",".join(_text_value(x) for x in v)
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    return str(v)


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for key, v in d.items():
        name = f"{prefix}{key}"
        if isinstance(v, dict) and set(v) == {"value", "decimal"}:
            out[name] = v["value"]
            out[name + ".decimal"] = v["decimal"]
        elif isinstance(v, dict):
            out.update(_flatten(v, name + "."))
        elif isinstance(v, (list, tuple)):
            out[name] = ";".join(_text_value(x) for x in v)
        else:
            out[name] = v
    return out


def _csv(rows: list[dict]) -> str:
    flat = [_flatten(r) for r in rows]
    fields: list[str] = []
    for r in flat:
        fields += [f for f in r if f not in fields]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(flat)
    return buf.getvalue()


def render(record: dict, fmt: str, rows: list[dict] | None = None) -> str:
    if fmt == "json":
        return json.dumps({"schema": SCHEMA, **record}, indent=2) + "\n"
    if fmt == "csv":
        return _csv(rows if rows is not None else [record])
    lines = []
    for k, v in record.items():
        if isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
            lines.append(f"{k}:")
            lines += ["  " + "  ".join(f"{kk}={_text_value(vv)}" for kk, vv in x.items()) for x in v]
        else:
            lines.append(f"{k}: {_text_value(v)}")
    return "".join(line + "\n" for line in lines)


# ---------------------------------------------------------------------------
# commands


def _load(path: str):
    p = Path(path)
    try:
        data = p.read_bytes()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    return parse_graph(data), {str(p): hashlib.sha256(data).hexdigest()}


def _seeds(text: str, n: int) -> list[int]:
    try:
        seeds = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad seed list {text!r}") from None
    if any(not 0 <= s < n for s in seeds):
        raise UsageError("seed id out of range")
    return seeds


def cmd_gen(a):
    kind = a.kind.replace("-", "_")
    if kind not in KINDS:
        raise UsageError(f"unknown kind {a.kind!r}")
    if kind != "tight_undirected" and a.m is None:
        raise UsageError(f"--m is required for {a.kind}")
    spec = InstanceSpec(kind, a.k, a.m if a.m is not None else a.k, alpha=a.alpha, beta=a.beta, gamma=a.gamma, c=a.c)
    lg = generate(spec)
    out = Path(a.output)
    out.write_text(serialize_graph(lg.graph), encoding="utf-8")
    side = lg.sidecar()
    side["spec"] = spec_dict(spec)
    try:
        lower, upper = predicted_ratio_bounds(spec)
        side["predicted_bounds"] = {"lower": rational(lower), "upper": rational(upper)}
    except ValueError:
        side["predicted_bounds"] = None
    side_path = out.with_name(out.name + ".json")
    side_path.write_text(json.dumps({"schema": SCHEMA, **side}, indent=2) + "\n", encoding="utf-8")
    record = {"graph": str(out), "sidecar": str(side_path), "n": lg.graph.n, "k": lg.k, "ell": lg.ell, "star_sizes": [str(x) for x in lg.star_sizes]}
    return record, None, {}, EXIT_OK


def cmd_sigma(a):
    g, digests = _load(a.graph)
    s = _seeds(a.seeds, g.n)
    if a.method == "mc":
        est = estimate_sigma(g, s, a.samples, a.seed, workers=a.threads)
        record = {"seeds": s, "method": "mc", "mean": repr(est.mean), "std_error": repr(est.std_error), "samples": est.samples, "seed": a.seed}
    else:
        fn = {"exact": exact_sigma, "exact-config": exact_sigma_by_config_enum, "exact-threshold": exact_sigma_by_threshold_enum}[a.method]
        record = {"seeds": s, "method": a.method, "sigma": rational(fn(g, s))}
    return record, None, digests, EXIT_OK


def _oracle(a, g):
    if getattr(a, "oracle", "exact") == "mc":
        return MonteCarloOracle(g, a.samples, a.seed)
    return ExactOracle(g)


def cmd_greedy(a):
    g, digests = _load(a.graph)
    oracle = _oracle(a, g)
    if a.lazy and not oracle.exact:
        raise UsageError("--lazy needs --oracle exact")
    trace = (lazy_greedy_seeds if a.lazy else greedy_seeds)(g, a.k, oracle)
    picks = [{"step": i + 1, "vertex": v, "gain": rational(gain)} for i, (v, gain) in enumerate(trace.picks)]
    record = {"k": a.k, "oracle": oracle.tag, "seeds": trace.seeds, "value": rational(trace.value), "oracle_calls": trace.calls}
    if not oracle.exact:
        record["samples"] = a.samples
        record["seed"] = a.seed
    record["picks"] = picks
    return record, picks, digests, EXIT_OK


def cmd_opt(a):
    g, digests = _load(a.graph)
    best, val = optimal_seeds(g, a.k, ExactOracle(g), cap=a.cap)
    return {"k": a.k, "optimal": list(best), "sigma": rational(val)}, None, digests, EXIT_OK


def cmd_ratio(a):
    g, digests = _load(a.graph)
    rep = approximation_report(g, a.k, ExactOracle(g), cap=a.cap)
    record = {
        "k": rep.k,
        "greedy": rep.greedy,
        "optimal": list(rep.optimal),
        "sigma_greedy": rational(rep.sigma_greedy),
        "sigma_opt": rational(rep.sigma_opt),
        "ratio": rational(rep.ratio),
        "base": rational(rep.base),
        "surplus": rational(rep.surplus),
    }
    return record, None, digests, EXIT_OK


def cmd_verify(a):
    if a.suite != "all" and a.suite not in SUITES:
        raise UsageError(f"unknown suite {a.suite!r}; expected all or one of {', '.join(SUITES)}")
    report = run_suite(a.suite, a.corpus_seed, a.max_n, a.threads)
    if a.report:
        Path(a.report).write_text(report_json(report), encoding="utf-8")
    record = {
        "suite": a.suite,
        "corpus_seed": a.corpus_seed,
        "corpus_size": report["corpus_size"],
        "status": report["status"],
    }
    for r in report["checks"]:
        record[r["check"]] = f"{r['status']} ({r['instances']} instances, {len(r['violations'])} violations)"
    rows = [{k: r[k] for k in ("check", "instances", "status")} | {"violations": len(r["violations"])} for r in report["checks"]]
    code = EXIT_OK if report["status"] == "pass" else EXIT_VIOLATION
    if a.format == "json":
        record = {k: v for k, v in report.items() if k != "schema"}
    return record, rows, {}, code


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--json-out", metavar="FILE", help="also write a JSON record with a run manifest")
    common.add_argument("--threads", type=int, default=1)

    p = _Parser(prog="ltmax", description="Influence maximization under the linear threshold model.")
    p.add_argument("--version", action="version", version=f"ltmax {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", parents=[common], help="generate an adversarial instance")
    g.add_argument("--kind", required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--m", type=int)
    g.add_argument("--alpha", type=float, default=1.2)
    g.add_argument("--beta", type=float, default=0.8)
    g.add_argument("--gamma", type=float, default=0.2)
    g.add_argument("--c", type=float, default=1.0)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_gen, seed=None)

    s = sub.add_parser("sigma", parents=[common], help="expected influence of a seed set")
    s.add_argument("--graph", required=True)
    s.add_argument("--seeds", required=True)
    s.add_argument("--method", choices=("exact", "exact-config", "exact-threshold", "mc"), default="exact")
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_sigma)

    gr = sub.add_parser("greedy", parents=[common], help="greedy seed selection")
    gr.add_argument("--graph", required=True)
    gr.add_argument("--k", type=int, required=True)
    gr.add_argument("--oracle", choices=("exact", "mc"), default="exact")
    gr.add_argument("--lazy", action="store_true")
    gr.add_argument("--samples", type=int, default=10_000)
    gr.add_argument("--seed", type=int, default=0)
    gr.set_defaults(func=cmd_greedy)

    for name, fn, text in (("opt", cmd_opt, "optimal seed set"), ("ratio", cmd_ratio, "greedy vs optimum report")):
        o = sub.add_parser(name, parents=[common], help=text)
        o.add_argument("--graph", required=True)
        o.add_argument("--k", type=int, required=True)
        o.add_argument("--cap", type=int, default=10**6, help="largest C(n,k) searched exhaustively")
        o.set_defaults(func=fn, seed=None)

    v = sub.add_parser("verify", parents=[common], help="run the verification suite")
    v.add_argument("--suite", default="all")
    v.add_argument("--corpus-seed", type=int, default=1)
    v.add_argument("--max-n", type=int, default=7)
    v.add_argument("--report", metavar="FILE", help="write the full JSON report")
    v.set_defaults(func=cmd_verify)
    return p


def _manifest(argv, a, digests, started) -> dict:
    seed = getattr(a, "seed", None)
    if seed is None:
        seed = getattr(a, "corpus_seed", None)
    return {
        "command_line": ["ltmax", *argv],
        "master_seed": seed,
        "version": __version__,
        "inputs": digests,
        "wall_clock_seconds": round(time.perf_counter() - started, 3),
    }


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    started = time.perf_counter()
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
        if a.threads < 1:
            raise UsageError("--threads must be >= 1")
        record, rows, digests, code = a.func(a)
    except UsageError as e:
        print(f"ltmax: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphFormatError, NonPositiveBudget, InfeasibleInstance, ValueError) as e:
        print(f"ltmax: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ExactIntractable, CapExceeded) as e:
        print(f"ltmax: budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    sys.stdout.write(render(record, a.format, rows))
    if a.json_out:
        doc = {"schema": SCHEMA, "command": a.command, **record, "manifest": _manifest(argv, a, digests, started)}
        Path(a.json_out).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return code


if __name__ == "__main__":
    sys.exit(main())
