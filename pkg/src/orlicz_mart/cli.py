"""Command-line front end.

    orlicz-mart gen-corpus --seed 1 --depth 3 --n 10 --out corpus.json
    orlicz-mart norm --phi power:0.5 --input f.json
    orlicz-mart decompose --method s --input f.json
    orlicz-mart verify --suite atomic --depth 3 --phi power:0.5 --n 100 --seed 1 --out reports
    orlicz-mart report reports

``verify`` exits 0 exactly when every asserted invariant holds.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .atomic import decompose
from .campanato import w_campanato_norm
from .corpus import generate_corpus
from .errors import ConfigParse, DepthTooLarge, OrliczMartError
from .norms import all_hardy_norms
from .serialize import decomposition_to_dict, dumps, martingale_from_dict, martingale_to_dict
from .suites import SUITES, SuiteConfig, run_suite, summary_csv, tidy_csv

# flag name -> SuiteConfig field
_FLAG_FIELDS = {
    "seed": "seed", "depth": "depth", "kind": "kind", "branching": "branching",
    "skew": "skew", "phi": "phi", "q": "qs", "n": "n", "out": "out", "tol": "tol",
    "guard_enum": "guard_enum", "guard_lcd": "guard_lcd", "suite": "suites",
    "max_outcomes": "max_outcomes",
}


def _q_list(text: str) -> list:
    out = []
    for part in text.split(","):
        v = float(part)
        out.append(int(v) if v.is_integer() else v)
    return out


def _add_corpus_flags(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int)
    p.add_argument("--depth", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--kind", choices=("dyadic", "random", "mixed"))
    p.add_argument("--branching", type=int)
    p.add_argument("--skew", type=float)
    p.add_argument("--max-outcomes", dest="max_outcomes", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orlicz-mart",
                                     description="Weak Orlicz-Hardy martingale verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-corpus", help="write a deterministic martingale corpus")
    _add_corpus_flags(p)
    p.add_argument("--out")

    for name, helptext in (("norm", "weak Hardy and Campanato norms of one martingale"),
                           ("decompose", "atomic decomposition of one martingale")):
        p = sub.add_parser(name, help=helptext)
        _add_corpus_flags(p)
        p.add_argument("--input", help="martingale JSON (default: first generated case)")
        p.add_argument("--case", type=int, default=0, help="case index inside a corpus file")
        p.add_argument("--phi")
        p.add_argument("--q", type=_q_list)
        p.add_argument("--out")
        if name == "decompose":
            p.add_argument("--method", choices=("s", "S", "M", "Q", "D"), default="s")

    p = sub.add_parser("verify", help="run verification suites")
    _add_corpus_flags(p)
    p.add_argument("--config", help="JSON file whose keys mirror the flags")
    p.add_argument("--suite", action="append",
                   help=f"one of {', '.join(SUITES)} or 'all'; repeatable or comma separated")
    p.add_argument("--phi")
    p.add_argument("--q", type=_q_list)
    p.add_argument("--tol", type=float)
    p.add_argument("--guard-enum", dest="guard_enum", type=int)
    p.add_argument("--guard-lcd", dest="guard_lcd", type=int)
    p.add_argument("--out", help="directory for JSON and CSV reports")

    p = sub.add_parser("report", help="summarise report files written by verify")
    p.add_argument("paths", nargs="+", help="report JSON files or directories")
    p.add_argument("--out")
    return parser


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _config_from_args(args) -> SuiteConfig:
    data = {}
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigParse(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigParse("config must be a JSON object")
        data = {_FLAG_FIELDS.get(k.replace("-", "_"), k.replace("-", "_")): v
                for k, v in data.items()}
        if isinstance(data.get("suites"), str):
            data["suites"] = [data["suites"]]
        if isinstance(data.get("qs"), str):
            data["qs"] = _q_list(data["qs"])
    for flag, fieldname in _FLAG_FIELDS.items():
        val = getattr(args, flag, None)
        if val is not None:
            data[fieldname] = val
    suites = []
    for item in data.get("suites", ["all"]):
        suites.extend(s.strip() for s in str(item).split(",") if s.strip())
    data["suites"] = list(SUITES) if "all" in suites else suites
    return SuiteConfig.from_dict(data)


def _load_martingale(args):
    if args.input:
        d = json.loads(Path(args.input).read_text())
        if "cases" in d:
            d = d["cases"][args.case]["martingale"]
        return martingale_from_dict(d)
    corpus = generate_corpus(args.case + 1, seed=args.seed or 0, depth=args.depth or 2,
                             kind=args.kind or "dyadic", max_branching=args.branching or 2,
                             skew=0.5 if args.skew is None else args.skew)
    return corpus[args.case][1]


def cmd_gen_corpus(args) -> int:
    n = 10 if args.n is None else args.n
    params = {"seed": args.seed or 0, "depth": 3 if args.depth is None else args.depth,
              "n": n, "kind": args.kind or "dyadic", "branching": args.branching or 2,
              "skew": 0.5 if args.skew is None else args.skew}
    corpus = generate_corpus(n, params["seed"], params["depth"], params["kind"],
                             params["branching"], params["skew"])
    _emit(dumps({"config": params,
                 "cases": [{"case": cid, "martingale": martingale_to_dict(f)}
                           for cid, f in corpus]}), args.out)
    return 0


def cmd_norm(args) -> int:
    cfg = SuiteConfig(phi=args.phi or "power:0.5")
    Phi = cfg.phi_function()
    f = _load_martingale(args)
    qs = args.q or [2]
    out = {"phi": Phi.to_dict(), "weak_hardy": all_hardy_norms(f, Phi),
           "campanato": {str(q): w_campanato_norm(f, q, Phi) for q in qs}}
    _emit(dumps(out), args.out)
    return 0


def cmd_decompose(args) -> int:
    cfg = SuiteConfig(phi=args.phi or "power:0.5")
    Phi = cfg.phi_function()
    f = _load_martingale(args)
    dec = decompose(f, args.method)
    out = decomposition_to_dict(dec)
    out["atomic_quasinorm"] = dec.quasinorm(Phi)
    out["phi"] = Phi.to_dict()
    _emit(dumps(out), args.out)
    return 0


def cmd_verify(args) -> int:
    cfg = _config_from_args(args)
    reports = []
    for suite in cfg.suites:
        try:
            rep = run_suite(suite, cfg)
        except DepthTooLarge as exc:
            rep = {"suite": suite, "error": f"DepthTooLarge: {exc}", "cases": [],
                   "assertions": 0, "failures": [str(exc)], "skips": [], "passed": False}
        reports.append(rep)
        if cfg.out:
            outdir = Path(cfg.out)
            outdir.mkdir(parents=True, exist_ok=True)
            (outdir / f"{suite}.json").write_text(dumps(rep))
            (outdir / f"{suite}_cases.csv").write_text(tidy_csv(rep))
    summary = summary_csv(reports)
    if cfg.out:
        (Path(cfg.out) / "summary.csv").write_text(summary)
    else:
        sys.stdout.write(dumps(reports if len(reports) > 1 else reports[0]))
    for rep in reports:
        status = "PASS" if rep["passed"] else "FAIL"
        extra = f" ({rep['error']})" if "error" in rep else ""
        print(f"{status} {rep['suite']}: {rep['assertions']} assertions, "
              f"{len(rep['failures'])} failures, {len(rep['skips'])} skips{extra}",
              file=sys.stderr)
    return 0 if all(r["passed"] for r in reports) else 1


def cmd_report(args) -> int:
    files = []
    for p in map(Path, args.paths):
        files.extend(sorted(p.glob("*.json")) if p.is_dir() else [p])
    reports = [json.loads(f.read_text()) for f in files]
    reports = [r for r in reports if isinstance(r, dict) and "suite" in r]
    _emit(summary_csv(reports), args.out)
    return 0 if reports and all(r["passed"] for r in reports) else 1


COMMANDS = {"gen-corpus": cmd_gen_corpus, "norm": cmd_norm, "decompose": cmd_decompose,
            "verify": cmd_verify, "report": cmd_report}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigParse as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OrliczMartError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
