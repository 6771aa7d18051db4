"""The running engine: single-writer event application plus persistence.

One Engine owns one ledger.  All mutations funnel through `submit`, which
serializes writers behind a lock, applies the event, and only then appends
it to the on-disk log, so the log never contains a rejected event.  Readers
take the same lock for the microseconds a query needs; state is process-
local and small.

On-disk layout of a state directory:
    txlog.jsonl          one JSON event per line, append-only
    snapshot-{seq}.json  canonical state dump after `seq` events
    snapshot-{seq}.hash  lowercase hex SHA-256 of the canonical state
    lock                 held for the lifetime of a persistent engine
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path

from filelock import FileLock, Timeout

from .config import EngineConfig
from .errors import CorruptLog, EngineError
from .ledger import (
    LedgerState,
    apply_with_result,
    canonical_state,
    initial_state,
    new_event,
    parse_log_lines,
    replay,
    snapshot_hash,
)

TXLOG_NAME = "txlog.jsonl"
LOCK_NAME = "lock"


class StateDirLocked(EngineError):
    pass


def snapshot_paths(state_dir: Path, seq: int) -> tuple[Path, Path]:
    return state_dir / f"snapshot-{seq}.json", state_dir / f"snapshot-{seq}.hash"


class Engine:
    """A live ledger plus (optionally) its backing state directory."""

    def __init__(self, config: EngineConfig | None = None, persist: bool = False):
        self.config = config if config is not None else EngineConfig()
        self.bank = self.config.load_bank()
        self.state: LedgerState = initial_state(
            self.config.global_seed, self.config.initial_params(), self.bank
        )
        self.lock = threading.RLock()
        self.events_applied = 0
        self._log_handle = None
        self._dir_lock: FileLock | None = None
        self.state_dir: Path | None = None
        if persist:
            self._open_state_dir(Path(self.config.state_dir))

    # -- persistence ------------------------------------------------------

    def _open_state_dir(self, state_dir: Path) -> None:
        state_dir.mkdir(parents=True, exist_ok=True)
        dir_lock = FileLock(str(state_dir / LOCK_NAME))
        try:
            dir_lock.acquire(timeout=0)
        except Timeout:
            raise StateDirLocked(f"state dir {state_dir} is locked by another process") from None
        self._dir_lock = dir_lock
        self.state_dir = state_dir
        log_path = state_dir / TXLOG_NAME
        if log_path.exists():
            with log_path.open(encoding="utf-8") as fh:
                self.state = replay(
                    parse_log_lines(fh),
                    self.config.global_seed,
                    self.config.initial_params(),
                    self.bank,
                )
            self.events_applied = self.state.next_seq
        self._log_handle = log_path.open("a", encoding="utf-8")

    def close(self) -> None:
        """Write a final snapshot and release the state directory; idempotent."""
        with self.lock:
            if self._log_handle is None and self._dir_lock is None:
                return
            if self.state_dir is not None:
                self.write_snapshot()
            if self._log_handle is not None:
                self._log_handle.close()
                self._log_handle = None
            if self._dir_lock is not None:
                self._dir_lock.release()
                self._dir_lock = None

    def write_snapshot(self) -> tuple[Path, Path]:
        if self.state_dir is None:
            raise EngineError("snapshotting requires a persistent engine")
        with self.lock:
            seq = self.state.next_seq
            json_path, hash_path = snapshot_paths(self.state_dir, seq)
            json_path.write_text(
                json.dumps(canonical_state(self.state), sort_keys=True, indent=1) + "\n",
                encoding="utf-8",
            )
            hash_path.write_text(snapshot_hash(self.state) + "\n", encoding="utf-8")
            return json_path, hash_path

    # -- the single writer -------------------------------------------------

    def submit(self, kind: str, payload: dict) -> dict:
        """Apply one transaction; returns {"seq": n, ...result}.

        Raises the engine error unchanged when the event is rejected; a
        rejected event is never appended to the log.
        """
        with self.lock:
            event = new_event(self.state, kind, payload)
            result = apply_with_result(self.state, event)
            self.events_applied += 1
            if self._log_handle is not None:
                self._log_handle.write(event.to_json_line() + "\n")
                self._log_handle.flush()
                if self.state.next_seq % self.config.snapshot_every == 0:
                    self.write_snapshot()
            return {"seq": event.seq, **result}

    def current_hash(self) -> str:
        with self.lock:
            return snapshot_hash(self.state)


# -- offline verification ---------------------------------------------------

@dataclass
class VerifyReport:
    final_seq: int
    final_hash: str
    snapshots_checked: list[tuple[int, bool]]

    @property
    def ok(self) -> bool:
        return all(match for _, match in self.snapshots_checked)


def stored_snapshot_hashes(state_dir: Path) -> dict[int, str]:
    stored = {}
    for path in state_dir.glob("snapshot-*.hash"):
        try:
            seq = int(path.stem.split("-", 1)[1])
        except ValueError:
            continue
        stored[seq] = path.read_text(encoding="utf-8").strip()
    return stored


def verify_state_dir(config: EngineConfig, state_dir: Path | None = None) -> VerifyReport:
    """Replay the transaction log and check every stored snapshot hash.

    Raises CorruptLog when the log itself is unreadable or inconsistent.
    """
    directory = Path(state_dir) if state_dir is not None else Path(config.state_dir)
    log_path = directory / TXLOG_NAME
    stored = stored_snapshot_hashes(directory)
    state = initial_state(config.global_seed, config.initial_params(), config.load_bank())
    checked: list[tuple[int, bool]] = []

    def check_point() -> None:
        seq = state.next_seq
        if seq in stored:
            checked.append((seq, snapshot_hash(state) == stored.pop(seq)))

    check_point()
    if log_path.exists():
        with log_path.open(encoding="utf-8") as fh:
            for event in parse_log_lines(fh):
                try:
                    apply_with_result(state, event)
                except CorruptLog:
                    raise
                except EngineError as exc:
                    raise CorruptLog(event.seq, f"{exc.code}: {exc}") from exc
                check_point()
    # snapshots past the end of the log can never match
    for seq in stored:
        checked.append((seq, False))
    return VerifyReport(
        final_seq=state.next_seq,
        final_hash=snapshot_hash(state),
        snapshots_checked=sorted(checked),
    )
