"""File-backed, versioned storage for corpus records, recommendations, and
feedback events.

On-disk layout (documented so external tools can inspect it):

    <root>/VERSION              schema version, currently "1"
    <root>/<kind>/<id>.json     one canonical-JSON record per entity
    <root>/events/00000001.log  append-only feedback log, one JSON line per
                                event: {"seq": n, "event": {...}}

Entity ids are percent-encoded for the filesystem.  Writes go through a
single lock and land via write-then-rename, so concurrent readers always see
a complete record.  There is no external database server; the store is meant
for desk-scale deployments and sits behind this module's interface so it can
be swapped out later.
"""

from __future__ import annotations

import json
import os
import threading
import urllib.parse
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .evaluation import FeedbackEvent

SCHEMA_VERSION = 1

KIND_CALL = "call"
KIND_USER = "user"
KIND_AWARD = "award"
KIND_RECOMMENDATION = "recommendation"
KIND_NOTIFICATION = "notification"

# kind -> field holding the unique id
KINDS: dict[str, str] = {
    KIND_CALL: "call_id",
    KIND_USER: "username",
    KIND_AWARD: "award_number",
    KIND_RECOMMENDATION: "team_id",
    KIND_NOTIFICATION: "notification_id",
}

_EVENT_SEGMENT = "00000001.log"


class IntegrityViolation(ValueError):
    """Record breaks referential integrity or basic invariants."""


class StoreVersionError(RuntimeError):
    """Existing store directory has an unsupported schema version."""


def canonical_json(payload) -> str:
    """Stable serialization: sorted keys, compact separators."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class StoreSnapshot:
    """Logical state of a store: all entities plus the event log."""

    schema_version: int
    entities: tuple[tuple[str, tuple[tuple[str, str], ...]], ...]
    events: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "entities": {
                kind: {eid: json.loads(body) for eid, body in records}
                for kind, records in self.entities
            },
            "events": [json.loads(line) for line in self.events],
        }


class Store:
    """Single-directory store: many readers, one serialized writer."""

    def __init__(self, root: Path | str):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        version_file = self.root / "VERSION"
        if version_file.exists():
            found = version_file.read_text(encoding="utf-8").strip()
            if found != str(SCHEMA_VERSION):
                raise StoreVersionError(
                    f"store at {self.root} has schema {found!r}, expected {SCHEMA_VERSION}"
                )
        else:
            version_file.write_text(f"{SCHEMA_VERSION}\n", encoding="utf-8")
        for kind in KINDS:
            (self.root / kind).mkdir(exist_ok=True)
        (self.root / "events").mkdir(exist_ok=True)
        self._next_seq = self._scan_next_seq()

    @classmethod
    def load(cls, path: Path | str) -> "Store":
        """Open an existing store directory (same as the constructor)."""
        return cls(path)

    # -- entities ----------------------------------------------------------

    def _path_for(self, kind: str, entity_id: str) -> Path:
        quoted = urllib.parse.quote(entity_id, safe="")
        return self.root / kind / f"{quoted}.json"

    def _check_kind(self, kind: str) -> str:
        if kind not in KINDS:
            raise KeyError(f"unknown entity kind {kind!r}")
        return KINDS[kind]

    def _check_integrity(self, kind: str, record: Mapping) -> None:
        if kind != KIND_RECOMMENDATION:
            return
        call_id = record.get("call_id")
        if call_id and self.get_entity(KIND_CALL, call_id) is None:
            raise IntegrityViolation(f"recommendation references unknown call {call_id!r}")
        users = [record.get("lead", "")] + [
            m.get("user_id", "") for m in record.get("members", [])
        ]
        for user_id in users:
            if user_id and self.get_entity(KIND_USER, user_id) is None:
                raise IntegrityViolation(
                    f"recommendation references unknown user {user_id!r}"
                )

    def put_entity(self, kind: str, record: Mapping) -> str:
        """Upsert one record; the id comes from the kind's id field."""
        id_field = self._check_kind(kind)
        entity_id = str(record.get(id_field) or "")
        if not entity_id:
            raise IntegrityViolation(f"{kind} record is missing {id_field}")
        with self._lock:
            self._check_integrity(kind, record)
            target = self._path_for(kind, entity_id)
            tmp = target.with_name(target.name + ".tmp")
            tmp.write_text(canonical_json(record), encoding="utf-8")
            os.replace(tmp, target)
        return entity_id

    def get_entity(self, kind: str, entity_id: str) -> dict | None:
        self._check_kind(kind)
        path = self._path_for(kind, str(entity_id))
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))

    def query(self, kind: str, **filters) -> list[dict]:
        """All records of a kind matching every field=value filter, by id."""
        self._check_kind(kind)
        results = []
        for path in sorted((self.root / kind).glob("*.json")):
            record = json.loads(path.read_text(encoding="utf-8"))
            if all(record.get(field) == value for field, value in filters.items()):
                results.append(record)
        return results

    def ids(self, kind: str) -> list[str]:
        self._check_kind(kind)
        return sorted(
            urllib.parse.unquote(path.stem)
            for path in (self.root / kind).glob("*.json")
        )

    # -- event log ---------------------------------------------------------

    def _segment_path(self) -> Path:
        return self.root / "events" / _EVENT_SEGMENT

    def _scan_next_seq(self) -> int:
        path = self._segment_path()
        if not path.exists():
            return 1
        count = sum(1 for line in path.read_text(encoding="utf-8").splitlines() if line.strip())
        return count + 1

    def append_event(self, event: FeedbackEvent) -> int:
        """Append one feedback event; returns its sequence number."""
        if not isinstance(event, FeedbackEvent):
            raise IntegrityViolation("append_event expects a FeedbackEvent")
        with self._lock:
            seq = self._next_seq
            line = canonical_json({"seq": seq, "event": event.to_dict()})
            with open(self._segment_path(), "a", encoding="utf-8") as handle:
                handle.write(line + "\n")
            self._next_seq = seq + 1
        return seq

    def replay_events(self) -> list[FeedbackEvent]:
        """All events in append order."""
        path = self._segment_path()
        if not path.exists():
            return []
        events = []
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                events.append(FeedbackEvent.from_dict(json.loads(line)["event"]))
        return events

    # -- snapshots ---------------------------------------------------------

    def snapshot(self) -> StoreSnapshot:
        """Logical state for round-trip comparisons."""
        entities = []
        for kind in sorted(KINDS):
            records = tuple(
                (entity_id, canonical_json(self.get_entity(kind, entity_id)))
                for entity_id in self.ids(kind)
            )
            entities.append((kind, records))
        path = self._segment_path()
        events: tuple[str, ...] = ()
        if path.exists():
            events = tuple(
                canonical_json(json.loads(line))
                for line in path.read_text(encoding="utf-8").splitlines()
                if line.strip()
            )
        return StoreSnapshot(SCHEMA_VERSION, tuple(entities), events)
