"""Innings phases: powerplay, middle overs, death overs."""

from __future__ import annotations

from dataclasses import dataclass

POWERPLAY = "powerplay"
MIDDLE = "middle"
DEATH = "death"


@dataclass(frozen=True)
class Phase:
    """An inclusive over interval with a label."""

    label: str
    first_over: int
    last_over: int

    def contains(self, over: int) -> bool:
        return self.first_over <= over <= self.last_over


DEFAULT_PHASES = (
    Phase(POWERPLAY, 1, 6),
    Phase(MIDDLE, 7, 16),
    Phase(DEATH, 17, 20),
)


def phase_of_over(over: int, phases: tuple[Phase, ...] = DEFAULT_PHASES) -> Phase:
    """Phase containing the given over number (1-based)."""
    for ph in phases:
        if ph.contains(over):
            return ph
    # Overs past the configured ranges (shortened formats) fall in the last phase.
    return phases[-1]


def validate_phases(phases: tuple[Phase, ...]) -> None:
    """Phases must be disjoint and cover overs 1..20 in order."""
    expected = 1
    for ph in phases:
        if ph.first_over != expected or ph.last_over < ph.first_over:
            raise ValueError(f"phases must partition 1..20, got {phases}")
        expected = ph.last_over + 1
    if expected != 21:
        raise ValueError(f"phases must cover overs 1..20, got {phases}")
