"""Command-line driver: ``iitt check``, ``iitt repl`` and ``iitt test``."""

from __future__ import annotations

import argparse
import json
import sys
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import TextIO

from iitt.checker import ItemResult, run_item
from iitt.core import Term
from iitt.diagnostics import Code, Diagnostic, IITTError
from iitt.evaluation import default_fuel
from iitt.surface import Def, elaborate, parse, print_term

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_INTERNAL = 0, 1, 2, 3

# the kernel recurses on term depth; give it room
_STACK_BYTES = 512 * 1024 * 1024
_RECURSION_LIMIT = 100_000


@dataclass
class CliConfig:
    command: str
    paths: list[str] = field(default_factory=list)
    fuel: int | None = None
    json: bool = False
    allow_irr: bool = False
    erase_style: str = "named"
    suites: list[str] = field(default_factory=list)
    size: int | None = None


def exit_code_for(diagnostic: Diagnostic | None) -> int:
    if diagnostic is None:
        return EXIT_FAIL
    if diagnostic.code in (Code.PARSE, Code.SCOPE):
        return EXIT_PARSE
    if diagnostic.code is Code.FUEL:
        return EXIT_INTERNAL
    return EXIT_FAIL


def _worst(codes) -> int:
    # internal problems outrank malformed input, which outranks ordinary failures
    rank = {EXIT_OK: 0, EXIT_FAIL: 1, EXIT_PARSE: 2, EXIT_INTERNAL: 3}
    return max(codes, key=rank.__getitem__, default=EXIT_OK)


# -- check ----------------------------------------------------------------------


def check_source(source: str, config: CliConfig) -> list[ItemResult]:
    """Results for every item of one file; a parse error yields a single result."""
    try:
        items, _ = elaborate(parse(source))
    except IITTError as e:
        return [ItemResult("parse", e.diagnostic.span, False, None, e.diagnostic)]
    return [run_item(it, config.fuel, config.allow_irr, config.erase_style) for it in items]


def _item_code(r: ItemResult) -> int:
    return EXIT_OK if r.ok else exit_code_for(r.diagnostic)


def cmd_check(config: CliConfig, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    codes = []
    records = []
    for path in config.paths:
        try:
            source = Path(path).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            print(f"{path}: error[IO]: {e}", file=err)
            codes.append(EXIT_INTERNAL)
            continue
        for r in check_source(source, config):
            codes.append(_item_code(r))
            if config.json:
                records.append({"file": path, **r.to_json()})
                continue
            if r.ok:
                where = f"{path}:{r.span}" if r.span else path
                print(f"{where}: {r.kind}: {r.output}", file=out)
            else:
                print(f"{path}:{r.diagnostic}", file=err)
    if config.json:
        json.dump({"items": records}, out, ensure_ascii=False, indent=2)
        out.write("\n")
    return _worst(codes)


# -- repl -----------------------------------------------------------------------


class Repl:
    """Line-oriented loop. Input is buffered until a line ends with ``;``."""

    def __init__(self, config: CliConfig, out: TextIO = sys.stdout, err: TextIO = sys.stderr):
        self.config = config
        self.out, self.err = out, err
        self.defs: dict[str, Term] = {}
        self.types: dict[str, Term] = {}
        self.buffer: list[str] = []

    def meta(self, line: str) -> bool:
        """Handle a ``:`` command; returns False to stop."""
        cmd, _, arg = line.partition(" ")
        if cmd in (":quit", ":q"):
            return False
        if cmd == ":ctx":
            for name, ty in self.types.items():
                print(f"{name} : {print_term(ty)}", file=self.out)
        elif cmd == ":fuel":
            try:
                self.config.fuel = int(arg)
            except ValueError:
                print(f"error: :fuel expects a number, got {arg.strip()!r}", file=self.err)
            else:
                print(f"fuel = {self.config.fuel}", file=self.out)
        else:
            print(f"error: unknown command {cmd} (try :quit, :ctx, :fuel N)", file=self.err)
        return True

    def feed(self, line: str) -> bool:
        stripped = line.strip()
        if not self.buffer and stripped.startswith(":"):
            return self.meta(stripped)
        if stripped:
            self.buffer.append(line)
        if stripped.endswith(";"):
            self.run("\n".join(self.buffer))
            self.buffer.clear()
        return True

    def run(self, source: str) -> None:
        try:
            items, _ = elaborate(parse(source), self.defs)
        except IITTError as e:
            print(e.diagnostic, file=self.err)
            return
        for it in items:
            r = run_item(it, self.config.fuel, self.config.allow_irr, self.config.erase_style)
            if not r.ok:
                print(r.diagnostic, file=self.err)
                continue
            if isinstance(it, Def):
                # a definition enters the environment only once it checks
                self.defs[it.name] = it.body
                self.types[it.name] = it.type
            print(r.output, file=self.out)


def cmd_repl(config: CliConfig, inp: TextIO = sys.stdin, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    repl = Repl(config, out, err)
    interactive = inp.isatty()
    while True:
        if interactive:
            out.write("iitt> " if not repl.buffer else "  ... ")
            out.flush()
        line = inp.readline()
        if not line or not repl.feed(line.rstrip("\n")):
            break
    if repl.buffer:
        repl.run("\n".join(repl.buffer))
    return EXIT_OK


# -- test -----------------------------------------------------------------------


def cmd_test(config: CliConfig, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    from iitt.testkit import SUITES, run_suite

    names = config.suites or list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        print(f"error: unknown suite {', '.join(unknown)}; known: {', '.join(SUITES)}", file=err)
        return EXIT_PARSE
    code = EXIT_OK
    for name in names:
        report = run_suite(name, config.size, config.fuel)
        print(report.summary(), file=out)
        for f in report.failures[:10]:
            print(f"  {f}", file=out)
        if not report.ok:
            code = EXIT_FAIL
        out.flush()
    return code


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="iitt", description="Type checker for a theory with irrelevant function spaces.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(q: argparse.ArgumentParser) -> None:
        q.add_argument("--fuel", type=int, default=None, help="step budget (default: $IITT_FUEL or built-in)")
        q.add_argument("--allow-irr", action="store_true", help="accept the dummy `irr` in irrelevant positions")
        q.add_argument("--erase-style", choices=("named", "debruijn"), default="named")

    c = sub.add_parser("check", help="check source files")
    c.add_argument("paths", nargs="*")
    c.add_argument("--json", action="store_true", help="print results as JSON")
    common(c)
    r = sub.add_parser("repl", help="interactive loop")
    common(r)
    t = sub.add_parser("test", help="run property suites")
    t.add_argument("--suite", action="append", default=[], dest="suites", metavar="NAME")
    t.add_argument("--size", type=int, default=None)
    t.add_argument("--fuel", type=int, default=None)
    return p


def parse_config(argv: list[str] | None = None) -> CliConfig:
    ns = build_parser().parse_args(argv)
    cfg = CliConfig(ns.command, fuel=ns.fuel)
    if ns.command == "check":
        cfg.paths, cfg.json = ns.paths, ns.json
    if ns.command in ("check", "repl"):
        cfg.allow_irr, cfg.erase_style = ns.allow_irr, ns.erase_style
    if ns.command == "test":
        cfg.suites, cfg.size = ns.suites, ns.size
    if cfg.fuel is None:
        cfg.fuel = default_fuel()
    return cfg


def dispatch(config: CliConfig) -> int:
    return {"check": cmd_check, "repl": cmd_repl, "test": cmd_test}[config.command](config)


def main(argv: list[str] | None = None) -> int:
    config = parse_config(argv)
    result: list[int] = [EXIT_INTERNAL]

    def target() -> None:
        try:
            result[0] = dispatch(config)
        except KeyboardInterrupt:
            result[0] = 130

    # the limit is process-wide but only the big-stack worker may use it
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, _RECURSION_LIMIT))
    old = threading.stack_size(_STACK_BYTES)
    try:
        worker = threading.Thread(target=target)
        worker.start()
        worker.join()
    finally:
        threading.stack_size(old)
        sys.setrecursionlimit(limit)
    return result[0]


if __name__ == "__main__":
    sys.exit(main())
