"""Rewrite tests/golden/ from the bundled corpus.  Run only after an intended output change."""
import contextlib
import io
import sys
from pathlib import Path

from adicert.cli import main
from adicert.corpus import bundled_names

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"
COMMANDS = ["certify", "oracle-crosscheck"]


def render(args) -> tuple[int, str]:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(args)
    return code, buf.getvalue()


def golden_cases():
    for name in bundled_names():
        for cmd in COMMANDS:
            yield f"{name}__{cmd}.json", [cmd, "-i", name]
    yield "z-mixed-at-6__snf.json", ["snf", "-i", "z-mixed-at-6"]
    yield "z-mod12-at-2__verify-3-3.json", ["verify-3-3", "-i", "z-mod12-at-2", "--module", "X", "--module", "M"]


if __name__ == "__main__":
    GOLDEN.mkdir(exist_ok=True)
    for fname, args in golden_cases():
        code, out = render(args)
        if code != 0:
            sys.exit(f"{fname}: exit {code}")
        (GOLDEN / fname).write_text(out)
        print(fname)
