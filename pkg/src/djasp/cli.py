"""Command line driver.

    djasp [flags] file...          solve / query / ground / check
    djasp bench ...                benchmark harness
    djasp serve [--host H] [--port P]   run the HTTP service

Flags (DLV-style `-x=` forms take the value after `=`):
    -n=<N>        stop after N answer sets (0 = all, default)
    -N=<maxint>   integer domain bound for the integer built-ins
    -filter=<p1,p2,...>  project printed answer sets onto these predicates
    -brave / -cautious   query modes (query read from the input, `...?`)
    --ground-only print the ground program instead of solving
    --check       last input file holds a candidate `{a, b}`; verify it
    --stats       print search statistics to stderr
    --unique      deduplicate projected answer sets
    --max-memory=<MiB>   abort with exit code 3 beyond this peak RSS
"""

from __future__ import annotations

import sys

from .pipeline import EXIT_PARSE, MODES, RunConfig, run

_USAGE = __doc__


def main(argv: list[str] | None = None) -> int:
    args = sys.argv[1:] if argv is None else list(argv)
    if args and args[0] == "bench":
        from .bench.runner import bench_main
        return bench_main(args[1:])
    if args and args[0] == "serve":
        return _serve(args[1:])

    inputs: list[str] = []
    modes: list[str] = []
    cfg = dict(max_answer_sets=0, max_int=0, filter_predicates=(),
               stats=False, unique=False, max_memory_mb=None)

    def fail(message: str) -> int:
        print(f"error: {message}", file=sys.stderr)
        return EXIT_PARSE

    for arg in args:
        if arg in ("-h", "--help"):
            print(_USAGE)
            return 0
        if arg.startswith("-n="):
            try:
                cfg["max_answer_sets"] = int(arg[3:])
            except ValueError:
                return fail(f"invalid count in {arg!r}")
        elif arg.startswith("-N="):
            try:
                cfg["max_int"] = int(arg[3:])
            except ValueError:
                return fail(f"invalid integer bound in {arg!r}")
        elif arg.startswith("-filter="):
            cfg["filter_predicates"] = tuple(
                p for p in arg[len("-filter="):].split(",") if p)
        elif arg.startswith("--max-memory="):
            try:
                cfg["max_memory_mb"] = int(arg[len("--max-memory="):])
            except ValueError:
                return fail(f"invalid memory bound in {arg!r}")
        elif arg == "-brave":
            modes.append("brave")
        elif arg == "-cautious":
            modes.append("cautious")
        elif arg == "--ground-only":
            modes.append("ground-only")
        elif arg == "--check":
            modes.append("check")
        elif arg == "--stats":
            cfg["stats"] = True
        elif arg == "--unique":
            cfg["unique"] = True
        elif arg.startswith("-") and arg != "-":
            return fail(f"unknown flag {arg!r} (see --help)")
        else:
            inputs.append(arg)

    if len(modes) > 1:
        return fail(f"flags {modes!r} are mutually exclusive")
    if cfg["max_answer_sets"] < 0 or cfg["max_int"] < 0:
        return fail("-n= and -N= must be non-negative")
    if not inputs:
        return fail("no input files (see --help)")
    mode = modes[0] if modes else "solve"
    assert mode in MODES
    config = RunConfig(inputs=tuple(inputs), mode=mode, **cfg)
    try:
        return run(config, sys.stdout, sys.stderr)
    except OSError as exc:
        return fail(str(exc))


def _serve(args: list[str]) -> int:
    host = "127.0.0.1"
    port = 8000
    it = iter(args)
    for arg in it:
        if arg == "--host":
            host = next(it, host)
        elif arg == "--port":
            try:
                port = int(next(it, str(port)))
            except ValueError:
                print("error: invalid --port", file=sys.stderr)
                return EXIT_PARSE
        else:
            print(f"error: unknown serve option {arg!r}", file=sys.stderr)
            return EXIT_PARSE
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)
    return 0


if __name__ == "__main__":
    sys.exit(main())
