"""Result container shared by all outage-probability methods."""

from __future__ import annotations

from dataclasses import dataclass, field, replace


@dataclass(frozen=True)
class OutageResult:
    """Outage probability plus per-method diagnostics.

    ``err_estimate`` is a numerical error estimate where the method provides
    one (quadrature), otherwise NaN.  ``notes`` collects human-readable
    diagnostics: clamping events, fallbacks taken, mirror transforms, warnings.
    """

    probability: float
    method: str
    err_estimate: float = float("nan")
    saddle_point: float | None = None
    truncation_order: int | None = None
    panels: int | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    def with_note(self, note: str) -> "OutageResult":
        return replace(self, notes=self.notes + (note,))


def clamp_probability(p: float, notes: list[str], tol: float = 1e-9) -> float:
    """Clamp p into [0, 1]; record a diagnostic when clamping actually moved it.

    Values outside [-tol, 1+tol] are still clamped but the note records the
    overshoot so tests can distinguish rounding from real trouble.
    """
    if p < 0.0:
        notes.append(f"clamped from {p:.3e} to 0")
        return 0.0
    if p > 1.0:
        notes.append(f"clamped from {p:.6g} to 1")
        return 1.0
    return p
