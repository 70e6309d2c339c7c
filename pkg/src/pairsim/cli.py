"""Command-line front end: a thin client of the HTTP service.

Every subcommand builds a request, sends it to the API (an in-process
ASGI transport by default, or a running server via ``--server``) and
writes the response to disk.  All simulation and analysis logic lives
behind the service, so CLI and remote clients see identical behavior.

Exit codes: 0 success, 1 validation/configuration error, 2 fit failure.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys

import httpx

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_FIT_FAILURE = 2

PUMP_PERIOD_FS = 1.3509345855525159  # 405-nm pump optical period


class CliError(Exception):
    def __init__(self, message: str, exit_code: int = EXIT_VALIDATION):
        super().__init__(message)
        self.exit_code = exit_code


def make_client(server: str | None) -> httpx.AsyncClient:
    if server:
        return httpx.AsyncClient(base_url=server.rstrip("/"), timeout=600.0)
    from .service.app import app

    return httpx.AsyncClient(
        transport=httpx.ASGITransport(app=app),
        base_url="http://pairsim.local",
        timeout=600.0,
    )


async def _post(client: httpx.AsyncClient, path: str, payload: dict) -> dict:
    response = await client.post(path, json=payload)
    if response.status_code >= 400:
        try:
            body = response.json()
        except json.JSONDecodeError:
            raise CliError(f"server error {response.status_code}: {response.text}")
        if isinstance(body, dict) and "error_type" in body:
            code = (
                EXIT_FIT_FAILURE
                if body["error_type"] == "fit_failure"
                else EXIT_VALIDATION
            )
            raise CliError(body.get("message", "request failed"), exit_code=code)
        raise CliError(f"request failed ({response.status_code}): {body}")
    return response.json()


def _load_scenario_payload(path: str) -> dict:
    import yaml

    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh.read())
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc}")
    except yaml.YAMLError as exc:
        raise CliError(f"config {path} is not valid YAML: {exc}")
    if not isinstance(data, dict):
        raise CliError(f"config {path} must contain a mapping")
    return data


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


async def cmd_calibrate(args, client: httpx.AsyncClient) -> int:
    scenario = _load_scenario_payload(args.config)
    body = await _post(client, "/calibrate", {"scenario": scenario})
    _write(args.out, body["yaml"])
    for note in body["notes"]:
        print(f"# {note}", file=sys.stderr)
    return EXIT_OK


async def cmd_scan(args, client: httpx.AsyncClient) -> int:
    scenario = _load_scenario_payload(args.config)
    payload = {"scenario": scenario, "format": args.format}
    if args.seed is not None:
        payload["seed"] = args.seed
    body = await _post(client, "/scan", payload)
    _write(args.out, body["table"])
    return EXIT_OK


async def cmd_fit(args, client: httpx.AsyncClient) -> int:
    try:
        with open(args.scan, "r", encoding="utf-8") as fh:
            table = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read scan table {args.scan}: {exc}")
    payload = {
        "table": table,
        "period_guess_fs": args.period_guess_fs,
        "channel": args.channel,
        "correct_accidentals": not args.no_accidental_correction,
        "coinc_window_ns": args.window_ns,
    }
    if args.accidental_rate_hz is not None:
        payload["accidental_rate_hz"] = args.accidental_rate_hz
    if args.lo_coinc_hz is not None:
        payload["lo_coinc_hz"] = args.lo_coinc_hz
    if args.dc_coinc_hz is not None:
        payload["dc_coinc_hz"] = args.dc_coinc_hz
    body = await _post(client, "/fit", payload)
    _write(args.out, body["report"])
    return EXIT_OK


async def cmd_reproduce(args, client: httpx.AsyncClient) -> int:
    payload = {} if args.seed is None else {"seed": args.seed}
    body = await _post(client, f"/reproduce/{args.figure}", payload)
    os.makedirs(args.out_dir, exist_ok=True)
    for name, content in body["files"].items():
        _write(os.path.join(args.out_dir, name), content)
    for check in body["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        print(f"{status} {check['name']}: {check['detail']}")
    print(f"bundle written to {args.out_dir}")
    return EXIT_OK if body["passed"] else EXIT_VALIDATION


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairsim",
        description=(
            "Simulate and analyze photon-pair interference between a "
            "down-conversion source and weak local-oscillator beams"
        ),
    )
    parser.add_argument(
        "--server",
        default=None,
        help="base URL of a running pairsim service (default: in-process)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calibrate", help="resolve rate targets into amplitudes")
    p.add_argument("--config", required=True, help="scenario YAML with rate targets")
    p.add_argument("--out", default="-", help="path for the resolved scenario YAML")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("scan", help="simulate a delay scan")
    p.add_argument("--config", required=True, help="scenario YAML")
    p.add_argument("--seed", type=int, default=None, help="override the scan seed")
    p.add_argument("--out", default="-", help="output table path")
    p.add_argument("--format", choices=("csv", "json-lines"), default="csv")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("fit", help="fit fringes in a scan table")
    p.add_argument("scan", help="scan table (CSV or JSON-lines)")
    p.add_argument("--period-guess-fs", type=float, default=PUMP_PERIOD_FS)
    p.add_argument(
        "--channel",
        choices=("coincidences", "singles_a", "singles_b"),
        default="coincidences",
    )
    p.add_argument(
        "--no-accidental-correction",
        action="store_true",
        help="skip the per-point accidental-corrected fit",
    )
    p.add_argument("--window-ns", type=float, default=1.07)
    p.add_argument("--accidental-rate-hz", type=float, default=None)
    p.add_argument("--lo-coinc-hz", type=float, default=None)
    p.add_argument("--dc-coinc-hz", type=float, default=None)
    p.add_argument("--out", default="-", help="report path")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("reproduce", help="run a built-in figure pipeline")
    p.add_argument("figure", choices=("fig3", "fig4", "fig5"))
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out-dir", default=".", help="directory for the bundle files")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


async def _run(args) -> int:
    async with make_client(args.server) as client:
        return await args.func(args, client)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "serve":
        return cmd_serve(args)
    try:
        return asyncio.run(_run(args))
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
