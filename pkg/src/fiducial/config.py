"""Numerical tolerances shared by every module."""

from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    """Central tolerance set.

    Attributes
    ----------
    eigenvalue : float
        Slack on eigenvalue bounds (PSD tests, ``A <= I``) and on linear
        inequality constraints of the classical simplex.
    dot : float
        Agreement required between two routes to the same probability.
    rank : float
        Singular values below ``rank * s_max`` count as zero.
    """

    eigenvalue: float = 1e-9
    dot: float = 1e-12
    rank: float = 1e-8

    def with_overrides(self, **kwargs):
        return replace(self, **kwargs)

    def as_dict(self):
        return asdict(self)


DEFAULT = Tolerances()
