"""The six-class logic taxonomy for generated math-solving programs."""

from __future__ import annotations

import enum


class TaxonomyLabel(enum.IntEnum):
    """Mutually exclusive logic classes, ordered as reported in distributions."""

    CONCEPTUAL = 1      # grounded in library calls to math libraries
    PRIMITIVE = 2       # primitive operations only
    FROM_SCRATCH = 3    # reimplements library functionality by hand
    BRUTE_FORCE = 4     # unguided exhaustive search
    DISORGANIZED = 5    # incoherent mix of the other classes
    NO_LOGIC = 6        # returns an answer without generating the steps

    @property
    def short_name(self) -> str:
        return _SHORT_NAMES[self]

    @classmethod
    def from_int(cls, value: int) -> "TaxonomyLabel":
        if value not in _VALID:
            raise ValueError(f"taxonomy class must be in 1..6, got {value!r}")
        return cls(value)


_VALID = {1, 2, 3, 4, 5, 6}

_SHORT_NAMES = {
    TaxonomyLabel.CONCEPTUAL: "Con",
    TaxonomyLabel.PRIMITIVE: "Prim",
    TaxonomyLabel.FROM_SCRATCH: "FS Imp",
    TaxonomyLabel.BRUTE_FORCE: "BF",
    TaxonomyLabel.DISORGANIZED: "D",
    TaxonomyLabel.NO_LOGIC: "NoL",
}

# Stable reporting order used by every distribution table and chart.
CLASS_ORDER = [
    TaxonomyLabel.CONCEPTUAL,
    TaxonomyLabel.PRIMITIVE,
    TaxonomyLabel.FROM_SCRATCH,
    TaxonomyLabel.BRUTE_FORCE,
    TaxonomyLabel.DISORGANIZED,
    TaxonomyLabel.NO_LOGIC,
]

N_CLASSES = 6
