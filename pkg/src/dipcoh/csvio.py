"""Self-describing CSV: '#'-prefixed metadata, then an RFC-4180 table.

Leading comment lines of the form `# key = value` echo the run
configuration (the block is itself a valid config file); other comment
lines carry free-form notes such as a sweep's sign verdict. Reals are
written with 17 significant digits so parsing them back is lossless.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field


def format_real(x: float) -> str:
    """Render a float with 17 significant digits (round-trips exactly)."""
    return f"{float(x):.17g}"


def write_table(stream, metadata, header, rows, comments=()) -> None:
    """Write metadata comments, a header row, data rows, then trailing comments.

    `metadata` maps keys to already-formatted values; `rows` are sequences of
    strings (use format_real for reals); `comments` are bare comment texts.
    """
    for key, value in metadata.items():
        stream.write(f"# {key} = {value}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    for comment in comments:
        stream.write(f"# {comment}\n")


@dataclass
class Table:
    """Parsed form of a file produced by write_table."""

    metadata: dict[str, str] = field(default_factory=dict)
    header: list[str] = field(default_factory=list)
    rows: list[list[str]] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)


def read_table(stream) -> Table:
    """Parse metadata, header, rows and trailing comments back out."""
    table = Table()
    data_lines: list[str] = []
    for raw in stream:
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        if line.lstrip().startswith("#"):
            body = line.lstrip()[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                table.metadata[key.strip()] = value.strip()
            else:
                table.comments.append(body)
            continue
        data_lines.append(line)
    parsed = list(csv.reader(io.StringIO("\n".join(data_lines))))
    if parsed:
        table.header = parsed[0]
        table.rows = parsed[1:]
    return table
