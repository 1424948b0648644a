"""Byte-stream helpers: transparent gzip, path-context error wrapping."""

from __future__ import annotations

import gzip
import io
import os
from typing import BinaryIO, Iterator

from .errors import PmkitError

_GZIP_MAGIC = b"\x1f\x8b"


def open_bytes_reader(source: str | os.PathLike | bytes | BinaryIO) -> BinaryIO:
    """Open *source* for binary reading, decompressing gzip transparently.

    Accepts a filesystem path, raw bytes, or an already-open binary stream.
    Gzip input is detected by magic number, not by file extension.
    """
    if isinstance(source, (str, os.PathLike)):
        try:
            raw: BinaryIO = open(source, "rb")
        except OSError as exc:
            raise PmkitError(f"cannot read {os.fspath(source)!r}: {exc}") from exc
    elif isinstance(source, bytes):
        raw = io.BytesIO(source)
    else:
        raw = source
    buffered = raw if isinstance(raw, io.BufferedReader) else io.BufferedReader(raw)  # type: ignore[arg-type]
    if buffered.peek(2)[:2] == _GZIP_MAGIC:
        return gzip.GzipFile(fileobj=buffered, mode="rb")  # type: ignore[return-value]
    return buffered


def iter_text_lines(source: str | os.PathLike | bytes | BinaryIO) -> Iterator[str]:
    """Yield UTF-8 decoded lines with trailing newlines stripped."""
    stream = open_bytes_reader(source)
    for raw_line in stream:
        yield raw_line.decode("utf-8").rstrip("\r\n")


def write_gzip_lines(path: str | os.PathLike, lines: Iterator[str] | list[str]) -> None:
    """Write UTF-8 lines to a gzip file, one per record."""
    try:
        # mtime=0 and an empty embedded filename keep archives with equal
        # content byte-identical, run to run and path to path.
        with open(path, "wb") as raw:
            with gzip.GzipFile(filename="", fileobj=raw, mode="wb", mtime=0) as gz:
                for line in lines:
                    gz.write(line.encode("utf-8"))
                    gz.write(b"\n")
    except OSError as exc:
        raise PmkitError(f"cannot write {os.fspath(path)!r}: {exc}") from exc
