"""Command line entry point: parse flags, build the app, run uvicorn."""

from __future__ import annotations

import argparse
import os
import socket
import sys
from pathlib import Path

import uvicorn

from . import __version__
from .api import ConfigError, ServerConfig, create_app
from .auth import SESSION_IDLE_MINUTES
from .storage import StoreError

ENV_BIND = "FORUM_BIND"
ENV_DATA = "FORUM_DATA"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forum-server",
        description="Run the student forum HTTP server.",
    )
    parser.add_argument(
        "--bind",
        metavar="HOST:PORT",
        help=f"address to listen on (default 127.0.0.1:8080, or ${ENV_BIND})",
    )
    data = parser.add_mutually_exclusive_group()
    data.add_argument(
        "--data",
        metavar="PATH",
        help=f"journal file backing the store (or ${ENV_DATA}); created if missing",
    )
    data.add_argument(
        "--ephemeral",
        action="store_true",
        help="keep everything in memory; nothing survives a restart",
    )
    parser.add_argument(
        "--session-idle-minutes",
        type=int,
        default=SESSION_IDLE_MINUTES,
        metavar="N",
        help="idle minutes before a session expires (default %(default)s)",
    )
    parser.add_argument(
        "--admin-seed",
        metavar="NAME:PASSWORD",
        help="create this admin member on first boot of an empty store",
    )
    parser.add_argument("--info-dir", metavar="PATH", help="directory of {page}.json info pages")
    parser.add_argument("--ui-dir", metavar="PATH", help="static web UI to serve at /")
    parser.add_argument("--version", action="version", version=f"forum-server {__version__}")
    return parser


def resolve_config(args: argparse.Namespace, env: dict[str, str]) -> ServerConfig:
    """Merge flags over environment over defaults; flags always win."""
    bind = args.bind or env.get(ENV_BIND) or "127.0.0.1:8080"
    if args.ephemeral:
        data_path = None
    elif args.data:
        data_path = Path(args.data)
    elif env.get(ENV_DATA):
        data_path = Path(env[ENV_DATA])
    else:
        data_path = None
    admin_seed = None
    if args.admin_seed:
        name, sep, password = args.admin_seed.partition(":")
        if not sep:
            raise ConfigError("--admin-seed must look like NAME:PASSWORD")
        admin_seed = (name, password)
    if args.session_idle_minutes <= 0:
        raise ConfigError("--session-idle-minutes must be positive")
    return ServerConfig(
        bind_address=bind,
        data_path=data_path,
        session_idle_minutes=args.session_idle_minutes,
        admin_seed=admin_seed,
        info_dir=Path(args.info_dir) if args.info_dir else None,
        ui_dir=Path(args.ui_dir) if args.ui_dir else None,
    )


def split_bind(bind: str) -> tuple[str, int]:
    host, sep, port_text = bind.rpartition(":")
    if not sep or not port_text.isdigit():
        raise ConfigError(f"--bind must look like HOST:PORT, got {bind!r}")
    return host, int(port_text)


def _check_port_free(host: str, port: int) -> None:
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    except OSError as exc:
        raise ConfigError(f"cannot bind {host}:{port}: {exc}") from exc
    finally:
        probe.close()


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args, dict(os.environ))
        host, port = split_bind(config.bind_address)
        _check_port_free(host, port)
        app = create_app(config)
    except (ConfigError, StoreError) as exc:
        print(f"forum-server: {exc}", file=sys.stderr)
        return 1
    uvicorn.run(app, host=host, port=port, log_level="info")
    return 0


if __name__ == "__main__":
    sys.exit(main())
