"""Write-once memo table for correlator values, with a line-oriented cache file.

File layout::

    TAUTCACHE v1
    PSI;1;1;1/24
    HODGE;2;2;7/5760
    GW0;P2;1;0:2,0:2;1

Exponent lists are stored sorted descending; GW0 insertions are ``level:index``
pairs, also sorted descending.  Writes go to a temporary file that is then
renamed over the target.
"""
from __future__ import annotations

import os
import tempfile
import threading
from collections import Counter
from fractions import Fraction

from .errors import CacheParseError, ConsistencyError
from .exact import parse_rational

HEADER = "TAUTCACHE v1"
VERSION = 1
KINDS = ("PSI", "HODGE", "GW0")


def _exps_text(exps):
    return ",".join(str(a) for a in exps)


def _parse_int_list(text, lineno):
    if text == "":
        return ()
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise CacheParseError(lineno, f"bad integer list {text!r}") from None
    if any(v < 0 for v in vals):
        raise CacheParseError(lineno, "negative exponent")
    return vals


def format_record(key, value) -> str:
    kind = key[0]
    if kind in ("PSI", "HODGE"):
        _, g, exps = key
        return f"{kind};{g};{_exps_text(exps)};{value}"
    if kind == "GW0":
        _, target, degree, insertions = key
        ins = ",".join(f"{k}:{a}" for k, a in insertions)
        return f"GW0;{target};{degree};{ins};{value}"
    raise ValueError(f"unknown record kind {kind!r}")


def parse_record(line: str, lineno: int):
    fields = line.split(";")
    kind = fields[0]
    try:
        if kind in ("PSI", "HODGE"):
            if len(fields) != 4:
                raise CacheParseError(lineno, "expected 4 fields")
            g = int(fields[1])
            exps = _parse_int_list(fields[2], lineno)
            if list(exps) != sorted(exps, reverse=True):
                raise CacheParseError(lineno, "exponents not in canonical order")
            if g < 0 or 2 * g - 2 + len(exps) <= 0:
                raise CacheParseError(lineno, "unstable key")
            key = (kind, g, exps)
            value = parse_rational(fields[3])
        elif kind == "GW0":
            if len(fields) != 5:
                raise CacheParseError(lineno, "expected 5 fields")
            degree = int(fields[2])
            if degree < 0:
                raise CacheParseError(lineno, "negative degree")
            insertions = []
            if fields[3]:
                for item in fields[3].split(","):
                    k, a = item.split(":")
                    insertions.append((int(k), int(a)))
            insertions = tuple(insertions)
            if list(insertions) != sorted(insertions, reverse=True):
                raise CacheParseError(lineno, "insertions not in canonical order")
            key = ("GW0", fields[1], degree, insertions)
            value = parse_rational(fields[4])
        else:
            raise CacheParseError(lineno, f"unknown record kind {kind!r}")
    except CacheParseError:
        raise
    except ValueError as exc:
        raise CacheParseError(lineno, str(exc)) from None
    return key, value


class IntegralTable:
    """Map from canonical correlator keys to exact values.

    A key, once written, keeps its value: rewriting it with a different value
    raises ``ConsistencyError``.  Reads need no lock.
    """

    version = VERSION

    def __init__(self):
        self._data: dict = {}
        self._lock = threading.Lock()
        self.dirty = False

    def __len__(self):
        return len(self._data)

    def __contains__(self, key):
        return key in self._data

    def get(self, key, default=None):
        return self._data.get(key, default)

    def put(self, key, value) -> Fraction:
        value = Fraction(value)
        with self._lock:
            old = self._data.get(key)
            if old is None:
                self._data[key] = value
                self.dirty = True
            elif old != value:
                raise ConsistencyError(f"conflicting values for {key}: {old} vs {value}")
        return value

    def items(self):
        return list(self._data.items())

    def clear(self):
        with self._lock:
            self._data.clear()
            self.dirty = False

    def stats(self) -> dict:
        return dict(Counter(k[0] for k in self._data))

    def load(self, path) -> int:
        """Merge records from ``path``; returns how many were read."""
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        if not lines or lines[0].strip() != HEADER:
            raise CacheParseError(1, f"missing header {HEADER!r}")
        count = 0
        was_dirty = self.dirty
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            key, value = parse_record(line.strip(), lineno)
            self.put(key, value)
            count += 1
        self.dirty = was_dirty
        return count

    def save(self, path):
        path = os.fspath(path)
        directory = os.path.dirname(os.path.abspath(path))
        records = sorted(format_record(k, v) for k, v in self._data.items())
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tautcache-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(HEADER + "\n")
                for rec in records:
                    fh.write(rec + "\n")
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        self.dirty = False


# shared by all engines unless a caller passes its own table
TABLE = IntegralTable()
