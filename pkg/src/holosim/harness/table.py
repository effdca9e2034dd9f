"""In-memory result tables and their CSV form.

Floats are quantized to 12 significant digits when they enter a table, which
is exactly what the CSV writer prints, so write -> read is lossless.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

SIG_DIGITS = 12


def quantize(x: float) -> float:
    return float(f"{x:.{SIG_DIGITS}g}")


def _cell(v):
    if isinstance(v, Enum):
        v = v.value
    return v if isinstance(v, str) else quantize(float(v))


def _fmt(v) -> str:
    return v if isinstance(v, str) else f"{v:.{SIG_DIGITS}g}"


def _parse(text: str):
    try:
        return float(text)
    except ValueError:
        return text


@dataclass
class Table:
    columns: tuple
    rows: list = field(default_factory=list)

    def __post_init__(self):
        self.columns = tuple(self.columns)
        rows, self.rows = self.rows, []
        for r in rows:
            self.append(r)

    def append(self, row) -> None:
        row = tuple(row)
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} cells, table has {len(self.columns)} columns")
        self.rows.append(tuple(_cell(v) for v in row))

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def where(self, **match) -> "Table":
        idx = {self.columns.index(k): v for k, v in match.items()}
        return Table(self.columns, [r for r in self.rows if all(r[i] == v for i, v in idx.items())])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_fmt(v) for v in r])
        return buf.getvalue()

    def write(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())
        return path

    @classmethod
    def from_csv(cls, text: str) -> "Table":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        return cls(header, [[_parse(c) for c in row] for row in reader])

    @classmethod
    def read(cls, path) -> "Table":
        return cls.from_csv(Path(path).read_text(encoding="utf-8"))
