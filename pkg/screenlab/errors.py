"""
Exception types for screenlab
Callers distinguish these; everything else uses built-in exceptions.
"""


class ScreenLabError(Exception):
    """Base class for errors the CLI reports as JSON"""


class DomainError(ScreenLabError, ValueError):
    """Argument outside the mathematical domain of a function"""


class ConfigError(ScreenLabError, ValueError):
    """Missing or out-of-range configuration field"""


class GridMismatchError(ScreenLabError, ValueError):
    """Operators defined on different direction grids or masks"""


class UnsupportedGridError(ScreenLabError, ValueError):
    """Requested node count cannot be realized by the grid kind"""


class ModeSingularityError(ScreenLabError, ArithmeticError):
    """Screen mode block is numerically singular"""

    def __init__(self, n: int, condition: float):
        self.n = n
        self.condition = condition
        super().__init__(
            f"Mode block for degree n={n} is near-singular (cond={condition:.3e})"
        )


class AuxiliaryPoleError(ScreenLabError, ArithmeticError):
    """Auxiliary TE denominator vanishes at this (n, λ)"""

    def __init__(self, n: int, lam: complex):
        self.n = n
        self.lam = lam
        super().__init__(f"Auxiliary problem has a pole at n={n}, lambda={lam}")


class InteriorResonanceError(ScreenLabError, ArithmeticError):
    """Regular TE mode has a vanishing tangential trace at r = 1"""

    def __init__(self, n: int, kappa: float):
        self.n = n
        self.kappa = kappa
        super().__init__(
            f"Interior resonance: TE trace coefficient vanishes for n={n} at kappa={kappa}"
        )
