"""Thin command-line client for the kernel-bounds service.

Subcommands: sweep, verify, diag, count, serve.  All compute goes through
the HTTP API; by default the service app is mounted in-process, and
``--server URL`` switches to a remote instance.  CSV files are written
client-side from the response body.

Exit codes: 0 pass, 1 bound violation, 2 usage or config error,
3 resource cap.
"""

from __future__ import annotations

import argparse
import sys

import httpx

from .errors import ConfigurationError
from .harness import SweepConfig, load_config

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


class ServiceClient:
    """HTTP client for the service; in-process unless a server is given."""

    def __init__(self, server: str | None = None):
        if server:
            self._client = httpx.Client(base_url=server, timeout=None)
        else:
            from fastapi.testclient import TestClient

            from .service import create_app

            self._client = TestClient(create_app())

    def close(self):
        self._client.close()

    def post(self, path: str, payload: dict) -> dict:
        response = self._client.post(path, json=payload)
        if response.status_code == 422:
            raise ConfigurationError(_detail(response))
        if response.status_code == 507:
            raise _ResourceSignal(_detail(response))
        response.raise_for_status()
        return response.json()


class _ResourceSignal(RuntimeError):
    pass


def _detail(response) -> str:
    try:
        return str(response.json().get("detail"))
    except Exception:
        return response.text


def _plan_payload(config: SweepConfig) -> dict:
    payload = {
        "model": config.model,
        "k": config.k_values,
        "deltas": config.deltas,
        "count": config.count,
        "radius": config.radius,
        "tail_tolerance": config.tail_tolerance,
        "seed": config.seed,
        "cap": config.cap,
        "cache": config.cache,
        "cache_dir": config.cache_dir,
        "n_samples": config.n_samples,
    }
    if config.base_points is not None:
        payload["base_points"] = [(p.x, p.y) for p in config.base_points]
    if config.v_cap is not None:
        payload["v_cap"] = config.v_cap
    return payload


def _apply_overrides(config: SweepConfig, args) -> SweepConfig:
    if args.seed is not None:
        config.seed = args.seed
    if args.out is not None:
        config.out = args.out
    if args.cap is not None:
        config.cap = args.cap
    if getattr(args, "no_cache", False):
        config.cache = False
    return config


def _load(args) -> SweepConfig:
    config = load_config(args.config) if args.config else SweepConfig()
    return _apply_overrides(config, args)


def _write_out(config: SweepConfig, csv_text: str):
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(csv_text)
        print(f"wrote {config.out}")


def _cmd_sweep(args) -> int:
    config = _load(args)
    with_client = ServiceClient(args.server)
    try:
        data = with_client.post("/sweep", _plan_payload(config))
    finally:
        with_client.close()
    _write_out(config, data["csv"])
    for regime, summary in sorted(data["regimes"].items()):
        print(f"regime {regime}: {summary['rows']} rows, min margin {summary['min_margin']:.6g}")
    if data["error_rows"]:
        print(f"rows with errors: {data['error_rows']}")
    if data["resource_rows"]:
        return EXIT_RESOURCE
    return EXIT_OK


def _cmd_count(args) -> int:
    config = _load(args)
    client = ServiceClient(args.server)
    try:
        data = client.post("/count", _plan_payload(config))
    finally:
        client.close()
    _write_out(config, data["csv"])
    print(f"min slack+allowance: {data['min_slack']:.6g}")
    return EXIT_OK if data["min_slack"] >= 0 else EXIT_VIOLATION


def _cmd_diag(args) -> int:
    config = _load(args)
    client = ServiceClient(args.server)
    try:
        data = client.post("/diag", _plan_payload(config))
    finally:
        client.close()
    _write_out(config, data["csv"])
    body = [line for line in data["csv"].splitlines() if not line.startswith("#")]
    for line in body:
        print(line)
    return EXIT_OK


def _cmd_verify(args) -> int:
    config = _load(args)
    client = ServiceClient(args.server)
    try:
        if args.infile:
            with open(args.infile) as fh:
                sweep_csv = fh.read()
        else:
            data = client.post("/sweep", _plan_payload(config))
            sweep_csv = data["csv"]
            _write_out(config, sweep_csv)
        payload: dict = {"sweep_csv": sweep_csv}
        if args.count_in:
            with open(args.count_in) as fh:
                payload["count_csv"] = fh.read()
        if args.diag_in:
            with open(args.diag_in) as fh:
                payload["diag_csv"] = fh.read()
        result = client.post("/verify", payload)
    finally:
        client.close()
    for line in result["report"]:
        print(line)
    return result["exit_code"]


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("hypbergman.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--out", help="override the output CSV path")
    parser.add_argument("--cap", type=int, help="override the element cap")
    parser.add_argument("--no-cache", action="store_true", help="disable the orbit-ball cache")
    parser.add_argument("--server", help="remote service URL (default: in-process)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypbergman",
        description="Bergman-kernel bound sweeps on hyperbolic surfaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a bound sweep, write the CSV")
    _add_common(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("verify", help="verify bounds from a sweep (or CSV files)")
    _add_common(p)
    p.add_argument("--in", dest="infile", help="existing sweep CSV to verify")
    p.add_argument("--count-in", dest="count_in", help="counting-study CSV to include")
    p.add_argument("--diag-in", dest="diag_in", help="diagonal-study CSV to include")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("diag", help="diagonal growth study")
    _add_common(p)
    p.set_defaults(func=_cmd_diag)

    p = sub.add_parser("count", help="counting-inequality study")
    _add_common(p)
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _ResourceSignal as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except httpx.HTTPError as exc:
        print(f"service error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
