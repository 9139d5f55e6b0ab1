"""Verdet constants, Faraday rotation and the Kerr-effect comparison estimate.

All quantities are SI except the constituent mass density and molar mass,
which are taken in grams (g/m^3 and g/mol) as is customary; only their ratio
enters, so no conversion is needed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DomainError


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = 299_792_458.0  # m/s
    epsilon0: float = 8.8541878128e-12  # F/m
    e_charge: float = 1.602176634e-19  # C
    N_A: float = 6.02214076e23  # 1/mol


CONSTANTS = PhysicalConstants()

# Trace constituents may be left out or fractions rounded; the sea-level air
# composition in common use sums to 1.001.
MAX_FRACTION_SUM = 1.005
FIBER_A_SCALE = 1e-28


@dataclass(frozen=True)
class Constituent:
    name: str
    f: float
    y: int
    mu: float  # g/m^3
    m: float  # g/mol

    def __post_init__(self):
        if not 0.0 <= self.f <= 1.0:
            raise DomainError(f"{self.name}: fraction must lie in [0, 1], got {self.f}")
        if int(self.y) != self.y or self.y < 1:
            raise DomainError(f"{self.name}: electron count must be a positive integer, got {self.y}")
        if not self.mu > 0:
            raise DomainError(f"{self.name}: mass density must be > 0, got {self.mu}")
        if not self.m > 0:
            raise DomainError(f"{self.name}: molar mass must be > 0, got {self.m}")


class MediumKind(enum.Enum):
    DIELECTRIC_COMPOSITION = "composition"
    FIBER_EMPIRICAL = "fiber"
    DIRECT_VERDET = "direct"


@dataclass(frozen=True)
class MediumSpec:
    name: str
    kind: MediumKind
    wavelength_m: float
    constituents: tuple[Constituent, ...] = ()
    n: float | None = None
    fiber_a: float | None = None
    verdet_direct: float | None = None
    description: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.wavelength_m > 0:
            raise DomainError(f"{self.name}: wavelength must be > 0")
        if self.kind is MediumKind.DIELECTRIC_COMPOSITION:
            if not self.constituents:
                raise DomainError(f"{self.name}: composition medium needs constituents")
            if self.n is None or not self.n > 1.0:
                raise DomainError(f"{self.name}: refractive index must be > 1, got {self.n}")
            total = sum(c.f for c in self.constituents)
            if total > MAX_FRACTION_SUM:
                raise DomainError(f"{self.name}: fractions sum to {total:.4f}")
        elif self.kind is MediumKind.FIBER_EMPIRICAL:
            if self.fiber_a is None or not self.fiber_a > 0:
                raise DomainError(f"{self.name}: fiber coefficient must be > 0, got {self.fiber_a}")
        elif self.verdet_direct is None or not self.verdet_direct > 0:
            raise DomainError(f"{self.name}: Verdet constant must be > 0, got {self.verdet_direct}")

    def electron_density(self) -> float:
        if self.kind is not MediumKind.DIELECTRIC_COMPOSITION:
            raise DomainError(f"{self.name}: electron density needs a composition medium")
        return electron_density(self.constituents)

    def verdet(self) -> float:
        """Verdet constant in rad/(T m) at the medium's configured wavelength."""
        if self.kind is MediumKind.DIELECTRIC_COMPOSITION:
            return verdet_dielectric(self.n, self.electron_density(), self.wavelength_m)
        if self.kind is MediumKind.FIBER_EMPIRICAL:
            return verdet_fiber(self.wavelength_m, self.fiber_a)
        return self.verdet_direct


@dataclass(frozen=True)
class FieldRegion:
    """Uniform field ``B0`` (component along propagation, may be negative) over ``L``."""

    B0: float  # T
    L: float  # m

    def __post_init__(self):
        if not self.L >= 0:
            raise DomainError(f"path length must be >= 0, got {self.L}")


def electron_density(constituents: Sequence[Constituent], constants: PhysicalConstants = CONSTANTS) -> float:
    """Electron number density (1/m^3) of a mixture."""
    if not constituents:
        raise DomainError("electron density needs at least one constituent")
    return constants.N_A * sum(c.f * c.y * c.mu / c.m for c in constituents)


def verdet_dielectric(
    n: float, rho: float, wavelength_m: float, constants: PhysicalConstants = CONSTANTS
) -> float:
    if not n > 1.0:
        raise DomainError(f"refractive index must be > 1, got {n}")
    if not rho > 0:
        raise DomainError(f"electron density must be > 0, got {rho}")
    if not wavelength_m > 0:
        raise DomainError(f"wavelength must be > 0, got {wavelength_m}")
    k = constants
    return (n * n - 1.0) ** 2 / n * 2.0 * math.pi**2 * k.c * k.epsilon0 / (
        rho * k.e_charge * wavelength_m**2
    )


def verdet_fiber(wavelength_m: float, a_coeff: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Empirical fiber Verdet constant ``a * 1e-28 * nu^2`` with ``nu = c / lambda``."""
    if not wavelength_m > 0:
        raise DomainError(f"wavelength must be > 0, got {wavelength_m}")
    if not a_coeff >= 0:
        raise DomainError(f"fiber coefficient must be >= 0, got {a_coeff}")
    nu = constants.c / wavelength_m
    return a_coeff * FIBER_A_SCALE * nu * nu


def faraday_angle(verdet: float, region: FieldRegion) -> float:
    return verdet * region.B0 * region.L


def faraday_angle_segments(verdet: float, regions: Sequence[FieldRegion]) -> float:
    """Net rotation through consecutive uniform regions."""
    return sum(faraday_angle(verdet, r) for r in regions)


def kerr_index_shift(wavelength_m: float, K: float, E0: float) -> float:
    return wavelength_m * K * E0 * E0


def kerr_field_for_index_shift(wavelength_m: float, K: float, delta_n: float) -> float:
    """Electric field (V/m) needed for a Kerr index shift ``delta_n``."""
    if not wavelength_m > 0 or not K > 0:
        raise DomainError("wavelength and Kerr constant must be > 0")
    if delta_n < 0:
        raise DomainError(f"index shift must be >= 0, got {delta_n}")
    return math.sqrt(delta_n / (wavelength_m * K))
