"""Command-line entry points: serve the control plane, replay a fixture
through the pipeline, run the multiply benchmark, hash an API key."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .auth import hash_api_key
from .errors import ServiceError


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ServiceError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="edgeplane")
    sub = parser.add_subparsers(required=True)

    serve = sub.add_parser("serve", help="run the control plane")
    serve.add_argument("--config", required=True, type=Path)
    serve.add_argument("--port", type=int, default=None, help="override listen port")
    serve.add_argument("--data-dir", type=Path, default=None, help="override data directory")
    serve.set_defaults(handler=_cmd_serve)

    pipeline = sub.add_parser("pipeline", help="pipeline utilities")
    pipeline_sub = pipeline.add_subparsers(required=True)

    replay = pipeline_sub.add_parser("replay", help="replay a sensor fixture")
    replay.add_argument("--fixture", required=True, type=Path)
    replay.add_argument("--interval-ms", type=float, default=1.0)
    replay.add_argument("--virtual", action="store_true",
                        help="advance a simulated clock instead of sleeping")
    replay.add_argument("--max-concurrent", type=int, default=1)
    replay.set_defaults(handler=_cmd_replay)

    bench = pipeline_sub.add_parser("bench", help="run the array-multiply benchmark")
    bench.add_argument("--max-size", type=int, default=10_000_000)
    bench.set_defaults(handler=_cmd_bench)

    hash_cmd = sub.add_parser("hash-key", help="hash an API key for the config file")
    hash_cmd.add_argument("api_key")
    hash_cmd.set_defaults(handler=_cmd_hash_key)

    return parser


def _cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app
    from .config import load_config
    from .runtime import AppRuntime

    config = load_config(args.config)
    if args.port is not None:
        config.listen_port = args.port
    if args.data_dir is not None:
        config.data_dir = args.data_dir
    runtime = AppRuntime(config)
    try:
        uvicorn.run(create_app(runtime), host="0.0.0.0", port=config.listen_port)
    finally:
        runtime.shutdown()
    return 0


def _cmd_replay(args) -> int:
    from .bridge import BridgeManager
    from .brokers import BrokerHub
    from .pipeline import PipelineRuntime

    hub = BrokerHub()
    runtime = PipelineRuntime(hub, BridgeManager(hub), max_concurrent=args.max_concurrent)
    try:
        summary = runtime.replay(
            args.fixture,
            interval_ms=args.interval_ms,
            mode="virtual" if args.virtual else "realtime",
        )
        if not runtime.drain(timeout=60.0):
            print("warning: pipeline did not quiesce within 60s", file=sys.stderr)
        snapshot = runtime.snapshot()
        print(f"rows published:    {summary.rows_published}")
        print(f"batches classified: {runtime.pool.batches_dispatched()}")
        print(f"events:            {len(snapshot['events'])}")
        print(f"skipped payloads:  {snapshot['skipped_count']}")
    finally:
        runtime.shutdown()
        hub.stop()
    return 0


def _cmd_bench(args) -> int:
    from .pipeline.bench import run_multiply_benchmark

    sizes = [10 ** n for n in range(2, 9) if 10 ** n <= args.max_size]
    rows = run_multiply_benchmark(sizes, max_size=args.max_size)
    print(f"{'size':>12}  {'seconds':>10}  checksum")
    for row in rows:
        print(f"{row.size:>12}  {row.elapsed_seconds:>10.6f}  {row.checksum}")
    return 0


def _cmd_hash_key(args) -> int:
    print(hash_api_key(args.api_key))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
