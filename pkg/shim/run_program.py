#!/usr/bin/env python3
"""Minimal in-sandbox runner for one generated program.

Usage: run_program.py SOURCE_PATH ENTRY_NAME SENTINEL

Compiles the program in a fresh namespace, calls the entry function with no
arguments, and prints a single result envelope as the final stdout line:

    <SENTINEL> OK <value>

Exit codes: 0 success, 3 missing entry function, 1 any raised exception
(traceback on stderr).  The sentinel is a per-run random token supplied by
the harness, so program output cannot collide with the envelope.
"""
import sys
import traceback

NO_ENTRY = 3


def main(argv):
    if len(argv) != 4:
        print("usage: run_program.py SOURCE_PATH ENTRY_NAME SENTINEL",
              file=sys.stderr)
        return 2
    source_path, entry_name, sentinel = argv[1], argv[2], argv[3]
    with open(source_path, encoding="utf-8") as handle:
        source = handle.read()

    namespace = {"__name__": "__main__"}
    try:
        code = compile(source, source_path, "exec")
        exec(code, namespace)
    except BaseException:
        traceback.print_exc()
        return 1

    entry = namespace.get(entry_name)
    if not callable(entry):
        print(f"entry function {entry_name!r} not found", file=sys.stderr)
        return NO_ENTRY

    try:
        value = entry()
    except BaseException:
        traceback.print_exc()
        return 1

    sys.stdout.flush()
    print(f"{sentinel} OK {value}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
