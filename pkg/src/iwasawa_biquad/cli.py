"""Command line: ``iwasawa-biquad {search,verify,structure,report}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import harness


def _cases(spec: str | None) -> list[int]:
    if spec is None or spec == "all":
        return list(range(1, 30))
    out: list[int] = []
    for part in spec.split(","):
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    for c in out:
        if not 1 <= c <= 29:
            raise harness.UnknownCase(f"unknown case id {c}; expected 1..29")
    return out


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="iwasawa-biquad",
                                description="Ranks and structure of 2-Iwasawa modules of real biquadratic fields.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, case_required: bool):
        sp.add_argument("--case", required=case_required, default=None,
                        help="item id 1..29, a list '2,5', a range '1-9' or 'all'")
        sp.add_argument("--bound", type=int, default=None,
                        help="strict upper bound on every prime role (default 300, or 100 for three-prime items)")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", default=None, help="output path (default: stdout)")
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--disc-cap", type=int, default=None, dest="disc_cap",
                        help="largest discriminant for form enumeration (default 10^6)")

    common(sub.add_parser("search", help="list prime tuples satisfying an item's conditions"), True)
    common(sub.add_parser("verify", help="check predicted ranks against both levels"), False)
    common(sub.add_parser("structure", help="structure families of A(K_inf)"), False)
    rp = sub.add_parser("report", help="re-render a saved JSON report")
    rp.add_argument("input", help="JSON report produced by verify or structure")
    rp.add_argument("--format", choices=("json", "csv"), default="csv")
    rp.add_argument("--out", default=None)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "search":
            rep = harness.search_report(_cases(args.case), args.bound)
        elif args.command == "verify":
            rep = harness.verify(_cases(args.case), args.bound, max(1, args.workers), args.disc_cap)
        elif args.command == "structure":
            rep = harness.structure_campaign(args.bound or 100, max(1, args.workers), args.disc_cap)
        else:
            rep = harness.from_json(Path(args.input).read_text())
        _emit(harness.render(rep, args.format), args.out)
    except (harness.UnknownCase, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.command == "verify":
        return 0 if rep.all_agree else 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
