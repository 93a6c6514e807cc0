"""Command line entry point: ``symcong {sieve,certify,classify,freymazur,report} CORPUS``.

Options may also come from a JSON config file (``--config``); command-line
flags take precedence.  Reports go to stdout (or ``--out``), diagnostics to
stderr.  Exit status is 0 on success, 1 on hard errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .arith import primes_between
from .oracle import load_oracle_pack
from .pipeline import (
    IngestError,
    freymazur_audit,
    ingest,
    read_isogeny_sidecar,
    report_tsv,
    run_pipeline,
    summary_tsv,
)
from .sieve import label_key

DEFAULTS = {
    "p": [7],
    "B": 50,
    "bound": None,
    "window_bound": None,
    "jobs": 1,
    "oracle_pack": None,
    "audit": False,
    "format": "auto",
    "isogeny_sidecar": None,
    "out": None,
    "max_sturm": 3 * 10**7,
    "p_min": 19,
}


def _primes_arg(s: str) -> list[int]:
    out = []
    for part in s.split(","):
        if "-" in part:
            lo, hi = part.split("-")
            out += primes_between(int(lo), int(hi))
        else:
            out.append(int(part))
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="symcong", description="Mod-p congruences between elliptic curves and their symplectic type.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("sieve", "hash-partition isogeny classes (step 1)"),
        ("certify", "sieve and certify by the Sturm bound (steps 1-2)"),
        ("classify", "full pipeline, report TSV on stdout"),
        ("report", "full pipeline, report and summary TSV files in --out"),
        ("freymazur", "M_E sets and same-conductor trace gcds"),
    ]:
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("corpus", help="allcurves-style text file or CSV")
        sp.add_argument("--config", help="JSON file with default option values")
        sp.add_argument("--format", choices=["auto", "allcurves", "csv"], default=None)
        sp.add_argument("--isogeny-sidecar", dest="isogeny_sidecar", default=None)
        sp.add_argument("--p", type=_primes_arg, default=None, help="prime(s): 7 or 7,11 or 19-97")
        sp.add_argument("--bound", type=int, default=None, help="only use curves of conductor <= bound")
        sp.add_argument("--B", type=int, default=None, help="hash window length (default 50)")
        sp.add_argument("--window-bound", dest="window_bound", type=int, default=None)
        sp.add_argument("--jobs", type=int, default=None)
        sp.add_argument("--oracle-pack", dest="oracle_pack", default=None, metavar="PATH")
        sp.add_argument("--audit", action="store_true", default=None, help="recompute conductors on ingest")
        sp.add_argument("--max-sturm", dest="max_sturm", type=int, default=None)
        sp.add_argument("--p-min", dest="p_min", type=int, default=None)
        sp.add_argument("--out", default=None)
    return ap


def resolve_options(args: argparse.Namespace) -> dict:
    opts = dict(DEFAULTS)
    if args.config:
        cfg = json.loads(Path(args.config).read_text())
        for k, v in cfg.items():
            k = k.replace("-", "_")
            if k not in DEFAULTS:
                raise ValueError(f"unknown config key {k!r}")
            opts[k] = _primes_arg(str(v)) if k == "p" and not isinstance(v, list) else v
    for k in DEFAULTS:
        v = getattr(args, k, None)
        if v is not None:
            opts[k] = v
    return opts


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = resolve_options(args)
        records = ingest(args.corpus, opts["format"], audit=bool(opts["audit"]))
        if opts["isogeny_sidecar"]:
            records = read_isogeny_sidecar(opts["isogeny_sidecar"], records)
        if opts["bound"] is not None:
            records = [r for r in records if r.conductor <= opts["bound"]]
        oracle = load_oracle_pack(opts["oracle_pack"]) if opts["oracle_pack"] else None
    except (OSError, ValueError, IngestError, KeyError) as exc:
        print(f"symcong: {exc}", file=sys.stderr)
        return 1

    if args.command == "freymazur":
        rep = freymazur_audit(records, p_min=opts["p_min"])
        _emit(rep.tsv(), opts["out"])
        return 0

    mode = {"sieve": "sieve", "certify": "certify"}.get(args.command, "full")
    results = []
    for p in opts["p"]:
        res = run_pipeline(
            records,
            p,
            window_bound=opts["window_bound"],
            B=opts["B"],
            mode=mode,
            jobs=opts["jobs"],
            oracle=oracle,
            max_bound=opts["max_sturm"],
        )
        results.append(res)
        for msg in res.errors:
            print(f"symcong: p={p}: {msg}", file=sys.stderr)

    if args.command == "sieve":
        lines = ["p\thash\tclasses"]
        for res in results:
            for b in res.nontrivial_buckets:
                lines.append(f"{res.p}\t{b.key}\t{','.join(b.members)}")
        _emit("\n".join(lines) + "\n", opts["out"])
    elif args.command == "certify":
        lines = ["p\tset_id\tclasses\tsturm_bounds\tfailures"]
        for res in results:
            for sr in res.sets:
                ok = sorted({c.bound for c in sr.cset.certificates.values() if c.certified})
                lines.append(f"{res.p}\t{sr.set_id}\t{','.join(sr.cset.classes)}\t{','.join(map(str, ok))}\t")
            for b in res.nontrivial_buckets:
                # bucket members left out of every certified set
                certified = {c for sr in res.sets for c in sr.cset.classes}
                rejected = [m for m in b.members if m not in certified]
                if rejected:
                    lines.append(f"{res.p}\t-\t{','.join(sorted(rejected, key=label_key))}\t\tuncertified")
        _emit("\n".join(lines) + "\n", opts["out"])
    elif args.command == "classify":
        _emit(report_tsv(results), opts["out"])
        sys.stderr.write(summary_tsv(results))
    else:  # report
        out = Path(opts["out"] or ".")
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.tsv").write_text(report_tsv(results))
        (out / "summary.tsv").write_text(summary_tsv(results))
    return 1 if any(res.errors for res in results) else 0


if __name__ == "__main__":
    sys.exit(main())
