"""Command line front end.

translate  one query against knowledge base files, to typed problem text
run        batch translate and prove per a config file, with summaries
oracle     check a lemma file by brute force over finite sets
check      validate rendered problem files (grammar, types, canonical form)
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import harness, hforacle, th0, translate
from .sexpr import KifSyntaxError


def _error_payload(err, file_hint=None):
    span = getattr(err, "span", None)
    return {
        "file": getattr(span, "file", None) or file_hint,
        "line": getattr(span, "line", None),
        "col": getattr(span, "col", None),
        # the bare message; the span is already broken out above
        "error": getattr(err, "message", None) or str(err),
    }


def _report_errors(errors, as_json: bool) -> None:
    if as_json:
        print(json.dumps(errors, indent=2))
    else:
        for e in errors:
            where = e["file"] or "<input>"
            if e["line"] is not None:
                where += f":{e['line']}"
                if e["col"] is not None:
                    where += f":{e['col']}"
            print(f"error: {where}: {e['error']}", file=sys.stderr)


def cmd_translate(args) -> int:
    skip_heads = tuple(args.skip_head) if args.skip_head else translate.sumo.DEFAULT_SKIP_HEADS
    try:
        problem, skips, _tr = translate.translate_query_job(
            args.kb,
            args.query,
            skip_heads=skip_heads,
            expand_known_rows=args.expand_row_domains,
            collect_explanations=args.explain_guards,
            selection=args.selection.split(",") if args.selection else None,
        )
    except (KifSyntaxError, translate.TranslateError) as err:
        _report_errors([_error_payload(err, args.query)], args.errors_json)
        return 1
    text = th0.problem_text(
        problem, reproducible=args.reproducible, explain=args.explain_guards
    )
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_run(args) -> int:
    try:
        cfg = harness.load_config(args.config)
    except (OSError, harness.ConfigError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    if not cfg.queries:
        print("error: config names no query files", file=sys.stderr)
        return 2
    skip_heads = tuple(cfg.skip_heads) if cfg.skip_heads else translate.sumo.DEFAULT_SKIP_HEADS
    problems_dir = os.path.join(cfg.out_dir, "problems")
    os.makedirs(problems_dir, exist_ok=True)

    summary_lines = []
    problem_files = []
    failures = 0
    for query in cfg.queries:
        stem = os.path.splitext(os.path.basename(query))[0]
        try:
            problem, skips, _tr = translate.translate_query_job(
                cfg.kbs, query, skip_heads=skip_heads
            )
        except (OSError, KifSyntaxError, translate.TranslateError) as err:
            failures += 1
            summary_lines.append(f"{query}: FAILED: {err}")
            if args.keep_going:
                continue
            _write_lines(os.path.join(cfg.out_dir, "kb-summary.txt"), summary_lines)
            print(f"error: {query}: {err}", file=sys.stderr)
            return 1
        text = th0.problem_text(problem, reproducible=True)
        out_path = os.path.join(problems_dir, stem + ".p")
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
        problem_files.append(out_path)
        n_premises = len(problem.premises)
        summary_lines.append(
            f"{query}: {n_premises} premises, {len(skips)} skipped forms -> {out_path}"
        )
        for s in skips:
            summary_lines.append(f"  skipped {s.file}:{s.span.line}: {s.reason}")

    _write_lines(os.path.join(cfg.out_dir, "kb-summary.txt"), summary_lines)
    print("\n".join(summary_lines))

    if not cfg.provers:
        print("no provers configured; problems written only")
        return 1 if failures else 0
    results = harness.run_all(cfg.provers, problem_files, cfg.timeout, cfg.jobs)
    harness.write_tsv(os.path.join(cfg.out_dir, "results.tsv"), results)
    print(harness.format_table(results))
    return 1 if failures else 0


def _write_lines(path: str, lines) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_oracle(args) -> int:
    try:
        results = hforacle.run_lemma_file(args.lemmas, horizon=args.horizon, fuel=args.fuel)
    except (OSError, hforacle.OracleError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    print(hforacle.format_results(results))
    return 0 if all(r.ok for r in results) else 1


def cmd_check(args) -> int:
    bad = 0
    for path in args.files:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as err:
            print(f"{path}: ERROR {err}")
            bad += 1
            if not args.keep_going:
                break
            continue
        diags = th0.check_text(text)
        if diags:
            bad += 1
            for d in diags:
                print(f"{path}: {d}")
            if not args.keep_going:
                break
        else:
            print(f"{path}: ok")
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sumok2set",
        description="translate a SUMO fragment into higher-order set theory problems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("translate", help="translate one query file against knowledge bases")
    p.add_argument("query", help="query file containing one (query ...) form")
    p.add_argument("--kb", action="append", default=[], help="knowledge base file, repeatable")
    p.add_argument("-o", "--output", help="write problem text here instead of stdout")
    p.add_argument(
        "--skip-head",
        action="append",
        default=[],
        help="head symbol whose forms are skipped (default: modalAttribute, holdsDuring)",
    )
    p.add_argument("--reproducible", action="store_true", help="suppress the date comment")
    p.add_argument(
        "--explain-guards", action="store_true", help="include guard derivations as comments"
    )
    p.add_argument(
        "--expand-row-domains",
        action="store_true",
        help="expand row guards for known heads instead of the generic form",
    )
    p.add_argument("--selection", help="comma separated premise names to keep")
    p.add_argument("--errors-json", action="store_true", help="report errors as JSON")
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("run", help="translate and run provers per a config file")
    p.add_argument("config", help="key = value config naming provers, kbs, and queries")
    p.add_argument("--keep-going", action="store_true", help="continue past failing queries")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("oracle", help="brute-force check a lemma file over finite sets")
    p.add_argument("lemmas", help="lemma file, one claim per line")
    p.add_argument("--horizon", type=int, default=hforacle.DEFAULT_HORIZON)
    p.add_argument("--fuel", type=int, default=hforacle.DEFAULT_FUEL)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("check", help="validate rendered problem files")
    p.add_argument("files", nargs="+", help="problem files to validate")
    p.add_argument("--keep-going", action="store_true", help="check all files before exiting")
    p.set_defaults(fn=cmd_check)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
