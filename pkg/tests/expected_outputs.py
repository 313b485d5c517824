"""Commands recorded in ``corpus/<name>.expected`` and a writer for those files.

Run ``python3 tests/expected_outputs.py`` to refresh them after an intended
change in report format.
"""

import io

from ktgspin.cli import run
from ktgspin.ktgio import CORPUS, corpus_path

PROMPT = "$ ktgspin "


def commands(name):
    cmds = [["validate", name], ["constituents", name, "--nmax", "7"]]
    cmds.append(["spin", name, "--all", "--verbose", "--nmax", "7"])
    if name in ("trefoil", "figure-eight"):
        cmds.append(["fox", name, "--n", "3"])
        cmds.append(["fox", name, "--n", "5"])
    cmds.append(["colorings", name, "--family", "dihedral:3"])
    return cmds


def transcript(name):
    parts = []
    for argv in commands(name):
        out, err = io.StringIO(), io.StringIO()
        code = run(argv, out, err)
        parts.append(PROMPT + " ".join(argv) + "\n" + out.getvalue() + err.getvalue() + f"[exit {code}]\n")
    return "".join(parts)


def expected_path(name):
    return corpus_path(name).with_suffix(".expected")


if __name__ == "__main__":
    for name in CORPUS:
        with open(expected_path(name), "w", encoding="utf-8") as fh:
            fh.write(transcript(name))
