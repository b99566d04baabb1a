from __future__ import annotations

from typing import Optional


# ---- Base hierarchy ---------------------------------------------------------


class PerqwalkError(Exception):
    """
    Base class for every error raised on purpose by perqwalk.

    `exit_code` is what the CLI returns when the error reaches it.
    """
    exit_code: int = 1


class ConfigError(PerqwalkError, ValueError):
    """Malformed run configuration, lattice string or initial state."""
    exit_code = 2


class GuardError(PerqwalkError):
    """
    A dense path was asked for on an instance above its size guard.

    - guard: name of the guard (e.g. "dense", "general")
    - limit: the configured cap on the Hilbert dimension
    - dim: the dimension that was requested
    """
    exit_code = 3

    def __init__(self, guard: str, limit: int, dim: int) -> None:
        self.guard = guard
        self.limit = limit
        self.dim = dim
        super().__init__(
            f"{guard} guard exceeded: d = {dim} > {limit} "
            f"(raise PERQWALK_{guard.upper()}_GUARD to override)"
        )


class CertificationError(PerqwalkError):
    """The attractor space could not be certified for the requested path."""
    exit_code = 4


class ValidationFailure(PerqwalkError):
    """A property suite reported at least one failing check."""
    exit_code = 1


# ---- Domain errors ----------------------------------------------------------


class NonUnitaryCoinError(ValueError):
    def __init__(self, residual: float, tol: float) -> None:
        self.residual = residual
        super().__init__(
            f"coin is not unitary: max|C^dag C - I| = {residual:.3e} > {tol:.0e}"
        )


class WrongCoinError(ValueError):
    def __init__(self, expected: str, got: Optional[str]) -> None:
        super().__init__(f"analytic family for '{expected}' used with coin '{got}'")


class AttractorCompletenessError(CertificationError):
    def __init__(self, minimal_dim: int, general_dim: int) -> None:
        self.minimal_dim = minimal_dim
        self.general_dim = general_dim
        super().__init__(
            f"attractor space is larger than p-attractors + identity: "
            f"{general_dim} (general solver) != {minimal_dim} (minimal subspace)"
        )


class NotOrthonormalError(ValueError):
    pass
