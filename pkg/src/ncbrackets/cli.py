"""Command line client for the verification suites.

Runs in-process by default; ``--server URL`` sends the same request to a
running service instead, so reports are identical either way.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .runner import COMMANDS, EXIT_USAGE, run_command
from .service import RunRequest, handle


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncbrackets",
        description="verify double Poisson / vertex / Courant-Dorfman structures",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, help_text in (
        ("check", "run the axiom suite for the presentation's kind"),
        ("convert", "convert between dcd and dpva presentations"),
        ("roundtrip", "convert there and back, checking identity and axiom transport"),
        ("rep", "expand into N x N matrix entries and check the induced structure"),
        ("appendix", "run the derived-identity suites on a dcd presentation"),
    ):
        p = sub.add_parser(cmd, help=help_text)
        p.add_argument("file", type=Path, help="presentation file")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--N", type=int, default=None, dest="n")
        p.add_argument("--convention", choices=("paper", "vdb"), default=None)
        p.add_argument("--json", action="store_true", dest="as_json")
        p.add_argument("--server", default=None, help="URL of a running service")
    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _run_remote(server: str, command: str, request: RunRequest) -> dict:
    import httpx

    response = httpx.post(
        f"{server.rstrip('/')}/v1/{command}",
        json=request.model_dump(),
        timeout=600.0,
    )
    response.raise_for_status()
    return response.json()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    try:
        text = args.file.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    request = RunRequest(
        presentation=text,
        seed=args.seed,
        samples=args.samples,
        n=args.n,
        convention=args.convention,
    )
    if args.server:
        payload = _run_remote(args.server, args.command, request)
        if args.as_json:
            sys.stdout.write(json.dumps(payload, indent=2) + "\n")
        else:
            if payload.get("error"):
                sys.stdout.write(f"error: {payload['error']}\n")
            if payload.get("report"):
                sys.stdout.write(json.dumps(payload["report"], indent=2) + "\n")
            if payload.get("presentation"):
                sys.stdout.write(payload["presentation"])
            if payload.get("induced"):
                sys.stdout.write(json.dumps(payload["induced"], indent=2) + "\n")
        return int(payload["exit_code"])

    result = run_command(
        args.command,
        text,
        seed=args.seed,
        samples=args.samples,
        n=args.n,
        convention=args.convention,
    )
    if args.as_json:
        sys.stdout.write(json.dumps(result.json_obj(), indent=2) + "\n")
    else:
        sys.stdout.write(result.text())
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
