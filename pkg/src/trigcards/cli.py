"""Operator CLI: serve the API, verify logs, inspect state, run scenarios.

Exit codes: replay exits 1 on a snapshot-hash mismatch and 2 on a corrupt
log; scenario exits 1 at the first step whose outcome differs from the
expectation; inspect exits 1 for an unknown account; serve exits nonzero
when the config is unreadable or the state dir is already locked.
"""

from __future__ import annotations

import argparse
import collections
import json
import sys
from pathlib import Path

from .config import EngineConfig
from .contracts import active_listings
from .engine import Engine, verify_state_dir
from .errors import CorruptLog, EngineError


def load_config(args) -> EngineConfig:
    config = EngineConfig.load(args.config) if args.config else EngineConfig()
    if getattr(args, "state_dir", None):
        config.state_dir = args.state_dir
    if getattr(args, "snapshot_every", None):
        config.snapshot_every = args.snapshot_every
    return config


def cmd_serve(args) -> int:
    import signal

    import uvicorn

    from .service import build_app

    try:
        config = load_config(args)
        engine = Engine(config, persist=True)
    except (EngineError, OSError) as exc:
        print(f"serve: {exc}", file=sys.stderr)
        return 1
    frontend = Path(args.frontend) if args.frontend else None
    app = build_app(engine, frontend_dir=frontend)
    print(f"state dir: {config.state_dir} (seq {engine.state.next_seq})")

    # uvicorn re-raises a captured SIGTERM/SIGINT after its graceful shutdown
    # with the pre-run handlers restored; ours turns that into a clean exit 0
    # after the final snapshot is on disk.
    def exit_cleanly(_signum, _frame):
        engine.close()
        print(f"final snapshot written at seq {engine.state.next_seq}")
        sys.exit(0)

    signal.signal(signal.SIGTERM, exit_cleanly)
    signal.signal(signal.SIGINT, exit_cleanly)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    finally:
        engine.close()
    return 0


def cmd_replay(args) -> int:
    try:
        config = load_config(args)
        report = verify_state_dir(config)
    except CorruptLog as exc:
        print(f"CORRUPT {exc}", file=sys.stderr)
        return 2
    except (EngineError, OSError) as exc:
        print(f"replay: {exc}", file=sys.stderr)
        return 2
    for seq, match in report.snapshots_checked:
        print(f"snapshot seq={seq}: {'match' if match else 'MISMATCH'}")
    if not report.ok:
        print(f"FAIL seq={report.final_seq} hash={report.final_hash}")
        return 1
    print(f"OK seq={report.final_seq} hash={report.final_hash}")
    return 0


def cmd_inspect(args) -> int:
    from .ledger import parse_log_lines, replay

    try:
        config = load_config(args)
        engine = Engine(config)
        log_path = Path(config.state_dir) / "txlog.jsonl"
        if log_path.exists():
            with log_path.open(encoding="utf-8") as fh:
                engine.state = replay(
                    parse_log_lines(fh), config.global_seed, config.initial_params(), engine.bank
                )
    except (EngineError, OSError) as exc:
        print(f"inspect: {exc}", file=sys.stderr)
        return 2
    state = engine.state

    accounts = state.accounts
    if args.account is not None:
        if args.account not in accounts:
            print(f"inspect: unknown account {args.account!r}", file=sys.stderr)
            return 1
        accounts = {args.account: accounts[args.account]}

    print(f"events applied: {state.next_seq}")
    print(f"params version: {state.params.version}")
    print(f"treasury: {state.treasury}")
    print(f"accounts: {len(accounts)}")
    for name in sorted(accounts):
        account = accounts[name]
        owned = [t for t in state.tokens.values() if t.owner == name]
        print(f"  {name}: currency={account.currency} xp={account.xp} cards={len(owned)}")
    histogram = collections.Counter(int(t.rarity) for t in state.tokens.values())
    rarity_counts = " ".join(
        f"{name}={histogram.get(level, 0)}"
        for level, name in enumerate(("common", "uncommon", "rare", "legendary"))
    )
    print(f"tokens: {len(state.tokens)} ({rarity_counts})")
    listings = active_listings(state)
    print(f"active listings: {len(listings)}")
    for listing in sorted(listings, key=lambda l: l.listing_id):
        print(f"  #{listing.listing_id}: token {listing.token_id} by {listing.seller} at {listing.price}")
    print(f"sales recorded: {len(state.sales)}")
    return 0


def run_scenario(engine: Engine, steps: list) -> tuple[int, list[str]]:
    """Apply scenario steps in order; returns (first failed index or -1, transcript)."""
    transcript = []
    for index, step in enumerate(steps):
        kind = step.get("kind")
        payload = step.get("payload", {})
        expect = step.get("expect", "accept")
        expected_code = step.get("code")
        try:
            result = engine.submit(kind, payload)
            outcome, code = "accept", None
            detail = f"seq={result['seq']}"
        except EngineError as exc:
            outcome, code = "reject", exc.code
            detail = exc.code
        line = f"[{index}] {kind}: {outcome} ({detail})"
        transcript.append(line)
        if outcome != expect or (expected_code is not None and code != expected_code):
            wanted = expect if expected_code is None else f"{expect}:{expected_code}"
            got = outcome if code is None else f"{outcome}:{code}"
            transcript.append(f"[{index}] MISMATCH: expected {wanted}, got {got}")
            return index, transcript
    return -1, transcript


def cmd_scenario(args) -> int:
    try:
        config = load_config(args)
        raw = json.loads(Path(args.scenario).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError, EngineError) as exc:
        print(f"scenario: {exc}", file=sys.stderr)
        return 2
    steps = raw.get("steps") if isinstance(raw, dict) else raw
    if not isinstance(steps, list):
        print("scenario: file must be a JSON array or {'steps': [...]}", file=sys.stderr)
        return 2
    engine = Engine(config)
    failed_at, transcript = run_scenario(engine, steps)
    for line in transcript:
        print(line)
    from .ledger import snapshot_hash

    print(f"final hash: {snapshot_hash(engine.state)}")
    if failed_at >= 0:
        print(f"FAIL at step {failed_at}")
        return 1
    print(f"PASS ({len(steps)} steps)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trigcards", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP API against a state directory")
    serve.add_argument("--config", help="engine config JSON")
    serve.add_argument("--state-dir", help="override config state_dir")
    serve.add_argument("--port", type=int, default=8080)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--snapshot-every", type=int, help="events between snapshots")
    serve.add_argument("--frontend", help="directory of built web UI to serve at /")
    serve.set_defaults(func=cmd_serve)

    replay = sub.add_parser("replay", help="replay the txlog and verify snapshot hashes")
    replay.add_argument("--config", help="engine config JSON")
    replay.add_argument("--state-dir", help="override config state_dir")
    replay.set_defaults(func=cmd_replay)

    inspect = sub.add_parser("inspect", help="print accounts, tokens, listings")
    inspect.add_argument("--config", help="engine config JSON")
    inspect.add_argument("--state-dir", help="override config state_dir")
    inspect.add_argument("--account", help="show only this account")
    inspect.set_defaults(func=cmd_inspect)

    scenario = sub.add_parser("scenario", help="run a scripted scenario in memory")
    scenario.add_argument("scenario", help="scenario JSON file")
    scenario.add_argument("--config", help="engine config JSON")
    scenario.set_defaults(func=cmd_scenario)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
