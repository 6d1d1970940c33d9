"""Lightweight descriptors for real biquadratic fields."""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import is_squarefree, squarefree_part


@dataclass(frozen=True)
class BiquadField:
    """K = Q(sqrt d1, sqrt d2); ``canonical`` holds the three subfield radicands."""

    d1: int
    d2: int
    canonical: tuple[int, int, int] = field(init=False)

    def __post_init__(self):
        for d in (self.d1, self.d2):
            if d <= 1 or not is_squarefree(d):
                raise ValueError(f"radicand {d} must be squarefree and > 1")
        d3 = squarefree_part(self.d1 * self.d2)
        if self.d1 == self.d2 or d3 == 1:
            raise ValueError("radicands must be independent modulo squares")
        object.__setattr__(self, "canonical", tuple(sorted((self.d1, self.d2, d3))))

    def __eq__(self, other):
        return isinstance(other, BiquadField) and self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)

    @property
    def subfields(self) -> tuple[int, int, int]:
        return self.canonical

    def level_one_gens(self) -> tuple[int, int, int]:
        """Generators of K_1 = K(sqrt 2)."""
        if 2 in self.canonical:
            raise ValueError("sqrt 2 already lies in K")
        return (2, self.canonical[0], self.canonical[1])

    def __str__(self):
        return f"Q(sqrt{self.d1}, sqrt{self.d2})"
