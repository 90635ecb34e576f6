"""Duckworth-Lewis style resource table.

The table maps (balls_remaining, wickets_lost) to the percentage of batting
resources still available, normalised so that a full 120-ball innings with
no wickets down has 100% of its resources. A calibrated default restricted
to 20 overs ships with the package; any table with the same CSV layout can
be swapped in.
"""

from __future__ import annotations

import csv
from importlib import resources as importlib_resources
from pathlib import Path

_BUNDLED_CSV = "dl_resource_t20.csv"
_cached_default: "ResourceTable | None" = None


class ResourceTable:
    """Lookup of resources remaining, monotone in both coordinates."""

    def __init__(self, values: dict[tuple[int, int], float]):
        self._values = dict(values)
        self.max_balls = max(b for b, _ in self._values)
        self._validate()

    def _validate(self) -> None:
        v = self._values
        if abs(v[(self.max_balls, 0)] - 100.0) > 1e-9:
            raise ValueError("resource table must have 100% at full resources")
        for (b, w), pct in v.items():
            if not 0.0 <= pct <= 100.0:
                raise ValueError(f"resource pct out of range at ({b}, {w}): {pct}")
            if b == 0 and pct != 0.0:
                raise ValueError("no balls remaining must mean 0% resources")
            if w == 10 and pct != 0.0:
                raise ValueError("all out must mean 0% resources")
            prev_b = v.get((b - 1, w))
            if prev_b is not None and pct < prev_b - 1e-9:
                raise ValueError(f"not monotone in balls at ({b}, {w})")
            next_w = v.get((b, w + 1))
            if next_w is not None and next_w > pct + 1e-9:
                raise ValueError(f"not monotone in wickets at ({b}, {w})")

    def items(self):
        """All (balls_remaining, wickets_lost) -> resource_pct entries."""
        return self._values.items()

    def remaining(self, balls_remaining: int, wickets_lost: int) -> float:
        """Resource percentage still available."""
        if wickets_lost >= 10:
            return 0.0
        try:
            return self._values[(balls_remaining, wickets_lost)]
        except KeyError:
            raise KeyError(
                f"resource table has no entry for {balls_remaining} balls, "
                f"{wickets_lost} wickets"
            ) from None

    def used_pct(self, total_balls: int, balls_remaining: int, wickets_lost: int) -> float:
        """Percentage of the innings' starting resources consumed so far.

        Normalised by the resources at the innings start so that shortened
        matches also begin at 0% used.
        """
        start = self.remaining(total_balls, 0)
        if start <= 0.0:
            raise ValueError(f"no resources at {total_balls} balls")
        return 100.0 * (start - self.remaining(balls_remaining, wickets_lost)) / start

    @classmethod
    def from_csv(cls, path: str | Path) -> "ResourceTable":
        """Load a table from CSV (balls_remaining, wickets_lost, resource_pct)."""
        values: dict[tuple[int, int], float] = {}
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                key = (int(row["balls_remaining"]), int(row["wickets_lost"]))
                values[key] = float(row["resource_pct"])
        return cls(values)

    @classmethod
    def bundled(cls) -> "ResourceTable":
        """The calibrated default table shipped with the package."""
        global _cached_default
        if _cached_default is None:
            ref = importlib_resources.files("chasepressure.data") / _BUNDLED_CSV
            with importlib_resources.as_file(ref) as path:
                _cached_default = cls.from_csv(path)
        return _cached_default
