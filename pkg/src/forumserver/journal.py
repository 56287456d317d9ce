"""Append-only, checksummed journal from which the store is rebuilt at startup.

File format, one record per UTF-8 line:

    <seq>\\t<type>\\t<json-payload>\\t<crc32c-hex>\\n

seq is strictly increasing from 1, the CRC32C covers ``<seq>\\t<type>\\t<json-payload>``
and is rendered as 8 lowercase hex digits. A reader stops at the first line whose
crc, seq or shape fails and quarantines the remainder to ``<path>.quarantine``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

RECORD_TYPES = frozenset({"member", "member_patch", "message", "admin", "chat_noop"})

# CRC32C (Castagnoli), reflected polynomial. Kept in-module: the checksum is part
# of the on-disk contract and must not drift with library versions.
_CRC32C_POLY = 0x82F63B78
_CRC32C_TABLE = []
for _n in range(256):
    _c = _n
    for _ in range(8):
        _c = (_c >> 1) ^ _CRC32C_POLY if _c & 1 else _c >> 1
    _CRC32C_TABLE.append(_c)


def crc32c(data: bytes) -> int:
    crc = 0xFFFFFFFF
    for byte in data:
        crc = (crc >> 8) ^ _CRC32C_TABLE[(crc ^ byte) & 0xFF]
    return crc ^ 0xFFFFFFFF


@dataclass
class JournalRecord:
    seq: int
    type: str
    payload: dict
    offset: int  # byte offset of the line start, for quarantine cuts


def _encode_line(seq: int, record_type: str, payload: dict) -> bytes:
    body = f"{seq}\t{record_type}\t{json.dumps(payload, ensure_ascii=False, separators=(',', ':'))}"
    checksum = crc32c(body.encode("utf-8"))
    return f"{body}\t{checksum:08x}\n".encode("utf-8")


class Journal:
    """Single-writer journal file; every append is flushed and fsynced before returning."""

    def __init__(self, path: os.PathLike | str):
        self.path = Path(path)
        self._file = None
        self._seq = 0

    @property
    def last_seq(self) -> int:
        return self._seq

    @property
    def quarantine_path(self) -> Path:
        return Path(str(self.path) + ".quarantine")

    def replay(self) -> list[JournalRecord]:
        """Parse the valid prefix; quarantine and drop everything after the first bad line."""
        data = self.path.read_bytes() if self.path.exists() else b""
        records: list[JournalRecord] = []
        pos = 0
        while pos < len(data):
            newline = data.find(b"\n", pos)
            if newline == -1:
                break  # torn tail without newline
            record = self._parse_line(data[pos:newline], expected_seq=self._seq + 1, offset=pos)
            if record is None:
                break
            records.append(record)
            self._seq += 1
            pos = newline + 1
        if pos < len(data):
            self._quarantine(data, pos)
        return records

    @staticmethod
    def _parse_line(line: bytes, expected_seq: int, offset: int) -> JournalRecord | None:
        try:
            text = line.decode("utf-8")
        except UnicodeDecodeError:
            return None
        parts = text.split("\t")
        if len(parts) != 4:
            return None
        seq_text, record_type, payload_text, crc_text = parts
        if not seq_text.isdigit() or int(seq_text) != expected_seq:
            return None
        if record_type not in RECORD_TYPES:
            return None
        if len(crc_text) != 8:
            return None
        try:
            stated_crc = int(crc_text, 16)
        except ValueError:
            return None
        body = f"{seq_text}\t{record_type}\t{payload_text}".encode("utf-8")
        if crc32c(body) != stated_crc:
            return None
        try:
            payload = json.loads(payload_text)
        except json.JSONDecodeError:
            return None
        if not isinstance(payload, dict):
            return None
        return JournalRecord(expected_seq, record_type, payload, offset)

    def _quarantine(self, data: bytes, cut: int) -> None:
        with open(self.quarantine_path, "ab") as sidecar:
            sidecar.write(data[cut:])
            sidecar.flush()
            os.fsync(sidecar.fileno())
        with open(self.path, "r+b") as handle:
            handle.truncate(cut)

    def truncate_to(self, record: JournalRecord) -> None:
        """Quarantine from the given replayed record onward (failed to apply)."""
        data = self.path.read_bytes()
        self._quarantine(data, record.offset)
        self._seq = record.seq - 1

    def open_for_append(self) -> None:
        self._file = open(self.path, "ab")

    def append(self, record_type: str, payload: dict) -> int:
        """Write one record durably (flush + fsync) and return its seq."""
        if self._file is None:
            raise ValueError("journal is not open for append")
        if record_type not in RECORD_TYPES:
            raise ValueError(f"unknown record type {record_type!r}")
        seq = self._seq + 1
        self._file.write(_encode_line(seq, record_type, payload))
        self._file.flush()
        os.fsync(self._file.fileno())
        self._seq = seq
        return seq

    def close(self) -> None:
        if self._file is not None:
            self._file.close()
            self._file = None
