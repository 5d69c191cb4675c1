"""Carbon comparison: grid-powered local production versus imported lettuce.

Only operational electricity counts on the farm side; the import side counts
refrigerated transport over the supply distance with a per-mode emission
factor.  Chains ship as one YAML file per location under ``data/supply/``.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType

import yaml

from .errors import ConfigError, DomainError

TRANSPORT_MODES = ("truck", "ship", "airplane")


@dataclass(frozen=True)
class SupplyChain:
    """Import route and grid intensity for one location."""

    location: str
    export_country: str
    distance_km: float
    mode_shares: MappingProxyType         # fractions over TRANSPORT_MODES
    emission_factors: MappingProxyType    # g CO2 per tonne-km per mode
    grid_factor_g_kwh: float              # equals ton CO2 per GWh

    def validate(self) -> None:
        unknown = set(self.mode_shares) - set(TRANSPORT_MODES)
        if unknown:
            raise ConfigError(f"{self.location}: unknown transport modes {sorted(unknown)}")
        total = sum(self.mode_shares.values())
        if abs(total - 1.0) > 1e-6:
            raise ConfigError(
                f"{self.location}: transport shares sum to {total}, expected 1"
            )
        if self.distance_km < 0.0:
            raise ConfigError(f"{self.location}: negative supply distance")
        if any(self.emission_factors.get(m, 0.0) <= 0.0 for m in self.mode_shares):
            raise ConfigError(f"{self.location}: emission factors must be positive")
        if self.grid_factor_g_kwh < 0.0:
            raise ConfigError(f"{self.location}: negative grid factor")


def import_footprint(chain: SupplyChain) -> float:
    """Transport emissions of imported lettuce, g CO2 per kg delivered."""
    chain.validate()
    per_tonne_km = sum(
        share * chain.emission_factors[mode]
        for mode, share in chain.mode_shares.items()
    )
    return chain.distance_km * per_tonne_km / 1000.0


def vf_footprint(electricity_kwh_kg: float, grid_factor_g_kwh: float) -> float:
    """Farm-side emissions, g CO2 per kg, from specific electricity use."""
    if electricity_kwh_kg < 0.0 or grid_factor_g_kwh < 0.0:
        raise DomainError("electricity and grid factor must be non-negative")
    return electricity_kwh_kg * grid_factor_g_kwh


@dataclass(frozen=True)
class Savings:
    """Outcome of growing locally instead of importing."""

    vf_g_kg: float
    import_g_kg: float
    abs_g_kg: float          # positive when local production emits less
    rel: float               # fraction of the import footprint avoided
    breakeven_efficiency_gain: float
    # fractional cut in farm electricity that would reach parity; zero when
    # the farm already beats the import route


def savings(vf_g_kg: float, import_g_kg: float) -> Savings:
    if import_g_kg <= 0.0:
        raise DomainError("import footprint must be positive for a comparison")
    abs_saving = import_g_kg - vf_g_kg
    gain = max(0.0, 1.0 - import_g_kg / vf_g_kg) if vf_g_kg > 0.0 else 0.0
    return Savings(
        vf_g_kg=vf_g_kg,
        import_g_kg=import_g_kg,
        abs_g_kg=abs_saving,
        rel=abs_saving / import_g_kg,
        breakeven_efficiency_gain=gain,
    )


def load_supply_chain(path) -> SupplyChain:
    """Read one location's chain from YAML and validate it."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read supply chain {path}: {exc}") from exc
    try:
        chain = SupplyChain(
            location=str(doc["location"]).strip().lower(),
            export_country=str(doc["export_country"]),
            distance_km=float(doc["distance_km"]),
            mode_shares=MappingProxyType(
                {str(k): float(v) for k, v in doc["mode_shares"].items()}
            ),
            emission_factors=MappingProxyType(
                {str(k): float(v) for k, v in doc["emission_factors_g_tkm"].items()}
            ),
            grid_factor_g_kwh=float(doc["grid_factor_g_kwh"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: malformed supply chain: {exc}") from exc
    chain.validate()
    return chain
