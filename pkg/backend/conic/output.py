"""Row schemas shared by the CLI and the HTTP app, and their CSV/JSON rendering."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Mapping

import pandas as pd

from .constants import PRINT_DIGITS
from .errors import RangeError


class Schema(str, Enum):
    FC = "fc"
    FIGURE = "figure"
    G = "g"
    TE = "te"
    ZEEMAN = "zeeman"


COLUMNS: dict[Schema, tuple[str, ...]] = {
    Schema.FC: ("rho", "phi1", "phi2"),
    Schema.FIGURE: ("rho", "phi1", "phi2", "asym1", "asym2"),
    Schema.G: ("m", "value", "error", "tail_bound", "rho_max"),
    Schema.TE: ("potential", "t_e"),
    Schema.ZEEMAN: ("m", "M", "B", "T_e", "delta_E"),
}

# Columns that may be empty (asymptote undefined near the origin).
OPTIONAL: frozenset[str] = frozenset({"asym1", "asym2"})


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


def format_number(value: float) -> str:
    """10 significant digits, no trailing noise."""
    return f"{value:.{PRINT_DIGITS}g}"


@dataclass(slots=True)
class OutputRecord:
    """Rows of one schema, validated against its column list."""

    schema: Schema
    rows: list[dict[str, Any]] = field(default_factory=list)

    @property
    def columns(self) -> tuple[str, ...]:
        return COLUMNS[self.schema]

    def add(self, **values: Any) -> None:
        missing = set(self.columns) - values.keys()
        extra = values.keys() - set(self.columns)
        if missing or extra:
            raise KeyError(f"{self.schema.value} row mismatch: missing {sorted(missing)}, extra {sorted(extra)}")
        for name, value in values.items():
            if isinstance(value, float) and not math.isfinite(value):
                raise RangeError(f"non-finite value in column {name!r}")
            if value is None and name not in OPTIONAL:
                raise KeyError(f"column {name!r} cannot be empty")
        self.rows.append({name: values[name] for name in self.columns})

    def extend(self, rows: Iterable[Mapping[str, Any]]) -> None:
        for row in rows:
            self.add(**row)

    def _cell(self, value: Any) -> Any:
        if value is None:
            return None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return str(value)
        return format_number(float(value))

    def as_dicts(self) -> list[dict[str, Any]]:
        """Rows with numbers rounded to the printed precision (JSON numbers, None for blanks)."""
        out = []
        for row in self.rows:
            item: dict[str, Any] = {}
            for name in self.columns:
                cell = self._cell(row[name])
                if cell is not None and isinstance(row[name], (int, float)) and not isinstance(row[name], bool):
                    item[name] = float(cell)
                else:
                    item[name] = cell
            out.append(item)
        return out

    def to_frame(self) -> pd.DataFrame:
        """Rows as printed cells (strings, None for blanks) in column order."""
        cells = [[self._cell(row[name]) for name in self.columns] for row in self.rows]
        return pd.DataFrame(cells, columns=list(self.columns), dtype=object)

    def to_csv(self) -> str:
        return self.to_frame().to_csv(index=False, lineterminator="\n", na_rep="")

    def to_json(self) -> str:
        return json.dumps(self.as_dicts(), indent=2) + "\n"

    def render(self, fmt: OutputFormat | str) -> str:
        return self.to_csv() if OutputFormat(fmt) is OutputFormat.CSV else self.to_json()
