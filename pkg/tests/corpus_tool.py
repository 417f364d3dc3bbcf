"""Load the end-to-end corpus and (re)write its golden reports.

Run ``python3 tests/corpus_tool.py`` after an intentional output change.
"""

import contextlib
import io
import json
import sys
from pathlib import Path

from sepnorm.cli import main

CORPUS = Path(__file__).parent / "corpus"


def cases():
    data = json.loads((CORPUS / "manifest.json").read_text())
    out = []
    for case in data["cases"]:
        case = dict(case)
        case.setdefault("args", [])
        case.setdefault("error", None)
        case["id"] = case["name"] + (f"-{case['variant']}" if "variant" in case else "")
        case["input"] = CORPUS / f"{case['name']}.txt"
        case["golden"] = CORPUS / f"{case['id']}.json"
        out.append(case)
    return out


def invoke(argv):
    """Run the CLI in-process; returns ``(exit code, stdout)``."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main([str(a) for a in argv])
    return code, out.getvalue()


def structured(case):
    return invoke([case["input"], "--format", "structured", *case["args"]])


def regenerate():
    for case in cases():
        code, text = structured(case)
        if code != case["exit"]:
            print(f"{case['id']}: exit {code}, manifest says {case['exit']}", file=sys.stderr)
        case["golden"].write_text(text)
        print(f"wrote {case['golden'].name}")


if __name__ == "__main__":
    sys.path.insert(0, str(Path(__file__).parent))
    regenerate()
