"""In-memory file system values.

A file system is a plain dict mapping file name to content.  A file that
does not exist is simply a missing key; there is no sentinel content.  All
operations are pure and return fresh dicts, so values can be shared freely.
"""

from __future__ import annotations

from typing import Optional

FileSystem = dict[str, str]

# Ordered (name, content) pairs with no duplicate names; last write wins
# collapsing is applied before a WriteSet is constructed.
WriteSet = list[tuple[str, str]]


def lookup(fs: FileSystem, name: str) -> Optional[str]:
    """Content of ``name`` in ``fs``, or None if the file does not exist."""
    return fs.get(name)


def extend(fs: FileSystem, ws: WriteSet) -> FileSystem:
    """New file system agreeing with ``ws`` on written names and ``fs`` elsewhere."""
    out = dict(fs)
    for name, content in ws:
        out[name] = content
    return out


def equivalent(fs1: FileSystem, fs2: FileSystem) -> bool:
    """True iff both file systems agree on every name.

    Because absence is encoded by missing keys, agreement over the union of
    supports is exactly dict equality.
    """
    return fs1 == fs2
