"""Command-line front end for the normalization driver.

Input files use ``key=value`` tokens separated by whitespace or newlines::

    p=2
    field=Fp(t)
    vars=X,Y
    factor=t*X^2 + Y^2      # one factor per line; '#' starts a comment
    squarefree=yes          # optional: skip the pairwise coprimality check

A ``factor=`` value runs to the end of its line (or to the next ``key=`` on
the same line), so it may contain spaces.

Exit codes: 0 certified, 1 I/O error, 2 invalid input, 3 search exhausted.
"""

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass

from ._expr import ParseError
from .fields import PRIME, RATIONAL, DomainError, FieldDescriptor, is_prime
from .normalize import (
    Config,
    HypersurfaceInput,
    NormalizationError,
    SearchExhausted,
    TransformationLog,
    ValidationError,
    replay as replay_log,
    run,
)
from .series import TruncatedSeries, format_series

EXIT_OK = 0
EXIT_IO = 1
EXIT_INVALID = 2
EXIT_EXHAUSTED = 3

_KEY = re.compile(r"(?:(?<=\s)|^)(p|field|vars|factor|squarefree)=", re.MULTILINE)
_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


class InputError(ValueError):
    """Malformed input document; carries a 1-based line and column."""

    def __init__(self, message, line=1, col=1):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col
        self.reason = message


@dataclass(frozen=True)
class InputDocument:
    p: int
    kind: str
    names: tuple
    factors: tuple
    squarefree_attested: bool = False

    @property
    def field(self):
        return FieldDescriptor(self.p, self.kind)

    def to_input(self):
        return HypersurfaceInput.from_strings(self.field, self.names, self.factors, self.squarefree_attested)


def _location(text, pos):
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _strip_comments(text):
    # keep offsets intact so error positions refer to the original text
    return re.sub(r"#[^\n]*", lambda m: " " * len(m.group(0)), text)


def parse_input(text):
    """Parse an input document; raises :class:`InputError` with a line and column."""
    clean = _strip_comments(text)
    matches = list(_KEY.finditer(clean))
    if not matches:
        raise InputError("no 'key=value' tokens found")
    head = clean[: matches[0].start()].strip()
    if head:
        raise InputError(f"unexpected text {head.split()[0]!r}", *_location(text, clean.index(head)))

    values = {}
    factors = []
    for k, m in enumerate(matches):
        end = matches[k + 1].start() if k + 1 < len(matches) else len(clean)
        nl = clean.find("\n", m.end())
        if nl != -1 and nl < end:
            rest = clean[nl:end].strip()
            if rest:
                raise InputError(f"unexpected text {rest.split()[0]!r}", *_location(text, clean.index(rest, nl)))
            end = nl
        raw = clean[m.end() : end]
        start = m.end() + (len(raw) - len(raw.lstrip()))
        value = raw.strip()
        key = m.group(1)
        if key == "factor":
            if not value:
                raise InputError("empty factor", *_location(text, m.start()))
            factors.append((value, start))
        else:
            if key in values:
                raise InputError(f"duplicate key {key!r}", *_location(text, m.start()))
            if " " in value:
                raise InputError(f"unexpected space in {key} value", *_location(text, start + value.index(" ")))
            values[key] = (value, start)

    for key in ("p", "field", "vars"):
        if key not in values:
            raise InputError(f"missing '{key}='")
    if not factors:
        raise InputError("missing 'factor='")

    pv, ppos = values["p"]
    if not pv.isdigit():
        raise InputError(f"p must be an integer, got {pv!r}", *_location(text, ppos))
    p = int(pv)
    if not is_prime(p):
        raise InputError(f"p = {p} is not prime", *_location(text, ppos))

    fv, fpos = values["field"]
    if fv not in (PRIME, RATIONAL):
        raise InputError(f"field must be {PRIME} or {RATIONAL}, got {fv!r}", *_location(text, fpos))

    vv, vpos = values["vars"]
    names = tuple(vv.split(","))
    offset = vpos
    seen = set()
    for name in names:
        if not _NAME.match(name):
            raise InputError(f"bad variable name {name!r}", *_location(text, offset))
        if name in seen:
            raise InputError(f"duplicate variable {name!r}", *_location(text, offset))
        if fv == RATIONAL and name == "t":
            raise InputError("'t' is the field generator and cannot be a variable", *_location(text, offset))
        seen.add(name)
        offset += len(name) + 1

    squarefree = False
    if "squarefree" in values:
        sv, spos = values["squarefree"]
        if sv.lower() not in ("yes", "no", "true", "false", "1", "0"):
            raise InputError(f"squarefree must be yes or no, got {sv!r}", *_location(text, spos))
        squarefree = sv.lower() in ("yes", "true", "1")

    doc = InputDocument(p, fv, names, tuple(v for v, _ in factors), squarefree)
    for value, pos in factors:
        try:
            HypersurfaceInput.from_strings(doc.field, names, [value])
        except ParseError as exc:
            raise InputError(str(exc), *_location(text, pos + exc.pos)) from exc
        except (DomainError, ArithmeticError) as exc:
            raise InputError(str(exc), *_location(text, pos)) from exc
    return doc


# -- reports -----------------------------------------------------------------


@dataclass
class Report:
    status: str
    document: InputDocument
    result: object = None
    reason: str = ""
    error: str = ""
    elapsed: float = 0.0
    mode: str = "search"

    @property
    def certified(self):
        return self.status == "certified"

    def to_dict(self):
        """Stable tree: no timing, keys sorted on output."""
        doc = self.document
        out = {
            "status": self.status,
            "mode": self.mode,
            "input": {
                "p": doc.p,
                "field": doc.kind,
                "vars": list(doc.names),
                "factors": list(doc.factors),
            },
        }
        if self.reason:
            out["reason"] = self.reason
            out["error"] = self.error
        r = self.result
        if r is not None:
            names = r.factors[0].ring.names
            out["log"] = r.log.to_records()
            out["moves"] = [m.describe(names) for m in r.log]
            out["parameters"] = [str(e) for e in r.parameters]
            out["coefficient_field"] = r.coefficient_field
            out["factors"] = [str(f) for f in r.factors]
            out["certificates"] = [
                {
                    "factor": c.index + 1,
                    "variable": names[c.var],
                    "degree": c.degree,
                    "witness_exponent": list(c.exponent),
                    "witness_coefficient": str(c.coefficient),
                    "witness": format_series(_monomial(r.factors[0].ring, c.exponent, c.coefficient)),
                }
                for c in r.certificates
            ]
            out["diagnostics"] = r.diagnostics.as_dict()
        return out

    def structured(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def text(self):
        d = self.to_dict()
        inp = d["input"]
        lines = [f"status: {self.status}"]
        if self.reason:
            lines.append(f"reason: {self.error}: {self.reason}")
        lines.append(f"field: F_{inp['p']}" + ("(t)" if inp["field"] == RATIONAL else ""))
        lines.append("variables: " + ", ".join(inp["vars"]))
        lines.append("input factors:")
        lines.extend(f"  {i}: {f}" for i, f in enumerate(inp["factors"], 1))
        if self.result is not None:
            moves = d["moves"]
            lines.append("moves:" if moves else "moves: none")
            lines.extend(f"  {i}. {m}" for i, m in enumerate(moves, 1))
            lines.append(f"coefficient field: {d['coefficient_field']}")
            lines.append("system of parameters: " + ", ".join(d["parameters"]))
            lines.append("normalized factors:")
            lines.extend(f"  {i}: {f}" for i, f in enumerate(d["factors"], 1))
            lines.append("certificates:")
            for c in d["certificates"]:
                lines.append(
                    f"  factor {c['factor']}: degree {c['degree']} in {c['variable']}, "
                    f"witness {c['witness']}"
                )
            diag = d["diagnostics"]
            lines.append("diagnostics: " + ", ".join(f"{k}={diag[k]}" for k in sorted(diag)))
        lines.append(f"time: {self.elapsed:.3f} s")
        return "\n".join(lines) + "\n"


def _monomial(ring, exp, coeff):
    return TruncatedSeries(ring, {tuple(exp): coeff.raw})


def _load_log(path, field):
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    records = data["log"] if isinstance(data, dict) else data
    return TransformationLog.from_records(records, field)


def execute(doc, config, log=None):
    """Run (or replay) a document; returns ``(Report, exit code)``."""
    start = time.perf_counter()
    try:
        inp = doc.to_input()
        result = run(inp, config) if log is None else replay_log(inp, log, config)
    except ValidationError as exc:
        report = Report("failed", doc, reason=str(exc), error=type(exc).__name__)
        code = EXIT_INVALID
    except SearchExhausted as exc:
        report = Report("failed", doc, reason=str(exc), error=type(exc).__name__)
        code = EXIT_EXHAUSTED
    except (NormalizationError, DomainError) as exc:
        report = Report("failed", doc, reason=str(exc), error=type(exc).__name__)
        code = EXIT_INVALID
    else:
        report = Report("certified", doc, result)
        code = EXIT_OK
    report.elapsed = time.perf_counter() - start
    report.mode = "search" if log is None else "replay"
    return report, code


def build_parser():
    ap = argparse.ArgumentParser(prog="sepnorm", description="Normalize a hypersurface to a generically separable presentation.")
    ap.add_argument("input", help="input file ('-' for standard input)")
    ap.add_argument("--precision", type=int, default=24, help="initial truncation degree (default 24)")
    ap.add_argument("--max-precision", type=int, default=96, help="escalation bound (default 96)")
    ap.add_argument("--delta-attempts", type=int, default=64, help="twist parameters tried per step (default 64)")
    ap.add_argument("--shear-bound", type=int, default=64, help="shear attempts per step (default 64)")
    ap.add_argument("--format", choices=("text", "structured"), default="text")
    ap.add_argument("--replay", metavar="LOG", help="re-apply a saved log (a structured report or a list of moves) instead of searching")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        print(f"sepnorm: cannot read input: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        doc = parse_input(text)
    except InputError as exc:
        print(f"sepnorm: {args.input}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.precision < 2 or args.max_precision < args.precision:
        print("sepnorm: need 2 <= --precision <= --max-precision", file=sys.stderr)
        return EXIT_INVALID
    config = Config(args.precision, args.max_precision, args.delta_attempts, args.shear_bound)

    log = None
    if args.replay:
        try:
            log = _load_log(args.replay, doc.field)
        except OSError as exc:
            print(f"sepnorm: cannot read log: {exc}", file=sys.stderr)
            return EXIT_IO
        except (ValueError, KeyError, TypeError, DomainError, NormalizationError) as exc:
            print(f"sepnorm: bad log file: {exc}", file=sys.stderr)
            return EXIT_INVALID

    report, code = execute(doc, config, log)
    out = report.structured() if args.format == "structured" else report.text()
    sys.stdout.write(out)
    if code:
        print(f"sepnorm: {report.error}: {report.reason}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
