"""vfarm: deterministic vertical-farm chamber simulation and assessment.

A year of a sealed lettuce chamber at fixed indoor setpoints: heat, moisture
and CO2 balances step by step, heat-pump conversion to electricity, cost and
carbon accounting, and a 162-scenario grid with distance-correlation
sensitivity ranking.  See README.md for a tour and ``demos/`` for worked
examples.
"""

__version__ = "0.1.0"

from .errors import (
    CapacityError,
    ConfigError,
    DomainError,
    SimulationError,
    VFarmError,
    WeatherDataError,
)
from .psychro import (
    MoistAirState,
    dew_point,
    enthalpy,
    humidity_ratio,
    psychrometric_gamma,
    saturation_pressure,
    vpd,
)
from .weather import (
    Location,
    WeatherSeries,
    parse_weather,
    solar_position,
    surface_irradiance,
)
from .crop import (
    CropParams,
    CropState,
    CropYear,
    et_flux,
    growth_step,
    initial_state,
    load_crop_params,
    simulate_crop_year,
)
from .chamber import (
    AnnualResult,
    ChamberParams,
    Envelope,
    Geometry,
    Setpoints,
    StepLoads,
    StepSeries,
    envelope_flux,
    integrate_year,
    lighting_power,
    step,
)
from .hvac import (
    HeatPumpSpec,
    HvacAnnual,
    annualize,
    cop,
    electric_power,
    load_heatpumps,
    size_capacity,
)
from .econ import (
    CostBook,
    EconResult,
    break_even_electricity,
    capex,
    crf,
    lcol,
    load_cost_book,
    opex,
    real_rate,
)
from .sustain import (
    SupplyChain,
    import_footprint,
    load_supply_chain,
    savings,
    vf_footprint,
)
from .stats import dcorr, dcorr_flagged, distance_matrix, double_center, sensitivity_table
from .config import SimConfig, load_config
from .sweep import (
    ScenarioSpec,
    SweepReport,
    build_grid,
    emit_reports,
    parse_scenario_id,
    run_scenario,
    run_sweep,
    scenario_id,
)

__all__ = [name for name in dir() if not name.startswith("_")]
