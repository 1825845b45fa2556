"""Thin command-line client over the service handlers.

Each subcommand validates a JSON config against the service's request model,
runs the handler in-process (or POSTs to a running service when --server is
given), and writes the CSV plus a JSON meta sidecar that echoes the config.

Exit codes: 0 success, 2 configuration error, 3 numeric failure.
"""

from __future__ import annotations

import json
import logging
import os
import sys

import click
from pydantic import ValidationError

from . import __version__
from .core import ZlbModelError
from .io import load_json, write_csv, write_meta
from .service import handlers
from .service import schemas as S

logger = logging.getLogger("zlbkit.cli")

COMMANDS = {
    "solve": (S.SolveRequest, handlers.handle_solve),
    "region-scan": (S.RegionScanRequest, handlers.handle_region_scan),
    "duration-scan": (S.DurationScanRequest, handlers.handle_duration_scan),
    "simulate": (S.SimulateRequest, handlers.handle_simulate),
    "continuous-rpe": (S.ContinuousRpeRequest, handlers.handle_continuous),
    "forward-guidance": (S.ForwardGuidanceRequest, handlers.handle_forward_guidance),
    "attention-scan": (S.AttentionScanRequest, handlers.handle_attention_scan),
    "ih-check": (S.IhCheckRequest, handlers.handle_ih_check),
}

EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _configure_logging() -> None:
    level = os.environ.get("ZLB_LOG", "warn").upper()
    level = {"WARN": "WARNING"}.get(level, level)
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))


def _load_request(command: str, config_path: str, overrides: dict):
    model_cls, _ = COMMANDS[command]
    try:
        doc = load_json(config_path)
    except (OSError, json.JSONDecodeError) as exc:
        raise SystemExit(_config_error(f"cannot read config {config_path}: {exc}"))
    if doc.get("command") not in (None, command):
        raise SystemExit(_config_error(
            f"config is for command {doc.get('command')!r}, not {command!r}"))
    doc.pop("command", None)
    for key, value in overrides.items():
        if value is not None and key in model_cls.model_fields:
            doc[key] = value
    try:
        return model_cls.model_validate(doc), doc
    except ValidationError as exc:
        raise SystemExit(_config_error(str(exc)))


def _config_error(msg: str) -> int:
    click.echo(f"config error: {msg}", err=True)
    return EXIT_CONFIG


def _dispatch(command: str, req, server: str | None):
    _, handler = COMMANDS[command]
    if server is None:
        return handler(req)
    import httpx

    resp = httpx.post(f"{server.rstrip('/')}/{command}",
                      json=json.loads(req.model_dump_json(by_alias=True)),
                      timeout=600.0)
    resp.raise_for_status()
    payload = resp.json()
    if command == "solve":
        return S.SolveResponse(**payload)
    return S.ScanResponse(**payload)


def _emit(command: str, req, result, config_echo: dict, out: str | None) -> None:
    out = out or req.output_path
    if isinstance(result, S.SolveResponse):
        text = json.dumps(result.report, indent=2, sort_keys=True,
                          allow_nan=False) + "\n"
        if out:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
            write_meta(out, config_echo)
        else:
            click.echo(text, nl=False)
        return
    if out is None:
        raise SystemExit(_config_error(f"{command} needs --out or output_path"))
    write_csv(out, result.header, result.rows)
    write_meta(out, config_echo, extra=result.meta)
    click.echo(f"wrote {out}")


def _run_command(command: str, config: str, out: str | None, seed: int | None,
                 workers: int | None, server: str | None) -> None:
    _configure_logging()
    req, echo = _load_request(command, config, {"seed": seed, "workers": workers,
                                                "output_path": out})
    logger.debug("dispatching %s (%s)", command,
                 "in-process" if server is None else server)
    try:
        result = _dispatch(command, req, server)
    except ZlbModelError as exc:
        click.echo(f"numeric failure: {exc}", err=True)
        raise SystemExit(EXIT_NUMERIC)
    echo = dict(echo, command=command)
    _emit(command, req, result, echo, out)


@click.group()
@click.version_option(version=__version__)
def main() -> None:
    """Zero-lower-bound model toolkit."""


def _make_command(name: str):
    @click.command(name=name)
    @click.option("--config", required=True, type=click.Path(exists=False),
                  help="JSON config validated against the request schema.")
    @click.option("--out", default=None, type=click.Path(), help="Output path.")
    @click.option("--seed", default=None, type=int, help="Override config seed.")
    @click.option("--workers", default=None, type=int,
                  help="Worker processes for scans (default: available cores).")
    @click.option("--server", default=None, help="Base URL of a running service; "
                  "default runs in-process.")
    def cmd(config, out, seed, workers, server):
        if workers is None and name in ("region-scan", "duration-scan"):
            workers = os.cpu_count() or 1
        _run_command(name, config, out, seed, workers, server)

    cmd.help = f"Run the {name} command from a JSON config."
    return cmd


for _name in COMMANDS:
    main.add_command(_make_command(_name))


if __name__ == "__main__":
    main()
