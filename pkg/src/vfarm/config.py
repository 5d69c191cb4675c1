"""Master configuration: one YAML file wiring data files, grid axes and
chamber constants into immutable parameter objects.

Relative paths inside the file resolve against the file's own directory, so
a config can travel with its data tree.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType

import yaml

from .chamber import ChamberParams, Envelope, Geometry, Setpoints
from .crop import CropParams, load_crop_params
from .econ import CostBook, load_cost_book
from .errors import ConfigError
from .hvac import HeatPumpSpec, load_heatpumps
from .sustain import SupplyChain, load_supply_chain
from .weather import Location


@dataclass(frozen=True)
class SiteConfig:
    """One location: identity, coordinates and its weather file."""

    name: str
    code: str               # single letter used in scenario ids
    location: Location
    weather_path: Path
    supply: SupplyChain


@dataclass(frozen=True)
class GridAxes:
    """Scenario grid axes in canonical order."""

    locations: tuple        # site names
    insulation: tuple       # booleans
    ppfd: tuple
    t_in_c: tuple
    co2_ppm: tuple

    def __post_init__(self):
        for name in ("locations", "insulation", "ppfd", "t_in_c", "co2_ppm"):
            if len(getattr(self, name)) == 0:
                raise ConfigError(f"grid axis {name!r} is empty")

    @property
    def size(self) -> int:
        return (len(self.locations) * len(self.insulation) * len(self.ppfd)
                * len(self.t_in_c) * len(self.co2_ppm))


@dataclass(frozen=True)
class SimConfig:
    """Everything a scenario run needs, loaded once and shared read-only."""

    geometry: Geometry
    envelope_insulated: Envelope
    envelope_bare: Envelope
    chamber: ChamberParams
    rh_light: float
    rh_dark: float
    photoperiod_h: float
    lights_on_hour: float
    crop: CropParams
    hp_heating: HeatPumpSpec
    hp_cooling: HeatPumpSpec
    cost_book: CostBook
    sites: MappingProxyType     # name -> SiteConfig
    grid: GridAxes
    strict_paper: bool
    config_path: Path
    config_sha256: str

    def site(self, name: str) -> SiteConfig:
        key = name.strip().lower()
        if key not in self.sites:
            known = ", ".join(sorted(self.sites))
            raise ConfigError(f"unknown location {name!r}; config defines: {known}")
        return self.sites[key]

    def envelope(self, insulated: bool) -> Envelope:
        return self.envelope_insulated if insulated else self.envelope_bare

    def setpoints(self, t_in_c: float, co2_ppm: float, ppfd: float) -> Setpoints:
        return Setpoints(
            t_in_c=t_in_c,
            rh_light=self.rh_light,
            rh_dark=self.rh_dark,
            co2_ppm=co2_ppm,
            ppfd=ppfd,
            photoperiod_h=self.photoperiod_h,
            lights_on_hour=self.lights_on_hour,
        )


def _require(doc: dict, key: str, path) -> dict:
    if key not in doc:
        raise ConfigError(f"{path}: missing section {key!r}")
    return doc[key]


def load_config(path, strict_paper: bool = False) -> SimConfig:
    """Read and cross-validate the master configuration."""
    path = Path(path)
    try:
        raw = path.read_bytes()
        doc = yaml.safe_load(raw)
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: expected a mapping at top level")
    base = path.parent

    def resolve(rel) -> Path:
        p = Path(rel)
        return p if p.is_absolute() else (base / p).resolve()

    try:
        paths = _require(doc, "paths", path)
        geom_d = _require(doc, "geometry", path)
        env_d = _require(doc, "envelope", path)
        cham_d = _require(doc, "chamber", path)
        setp_d = _require(doc, "setpoints", path)
        grid_d = _require(doc, "grid", path)
        locs_d = _require(doc, "locations", path)

        geometry = Geometry(
            width_m=float(geom_d.get("width_m", 7.0)),
            depth_m=float(geom_d.get("depth_m", 7.0)),
            height_m=float(geom_d.get("height_m", 3.0)),
            tiers=int(geom_d.get("tiers", 3)),
            crop_area_m2=float(geom_d.get("crop_area_m2", 90.0)),
        )
        common = dict(
            solar_absorptance=float(env_d.get("solar_absorptance", 0.4)),
            lw_emissivity=float(env_d.get("lw_emissivity", 0.85)),
            h_out=float(env_d.get("h_out_w_m2k", 25.0)),
            sky_depression_k=float(env_d.get("sky_depression_k", 15.0)),
        )
        env_ins = Envelope(u_value=float(env_d["insulated_u_w_m2k"]), **common)
        env_bare = Envelope(u_value=float(env_d["bare_u_w_m2k"]), **common)
        chamber = ChamberParams(
            air_changes_per_hour=float(cham_d.get("air_changes_per_hour", 0.08)),
            apparatus_dew_point_c=float(cham_d.get("apparatus_dew_point_c", 10.0)),
            air_speed_m_s=float(cham_d.get("air_speed_m_s", 0.4)),
            led_efficacy_umol_j=float(cham_d.get("led_efficacy_umol_j", 3.0)),
            led_radiant_fraction=float(cham_d.get("led_radiant_fraction", 0.85)),
            ahu_recovery=float(cham_d.get("ahu_recovery", 0.75)),
            dt_s=float(cham_d.get("dt_s", 600.0)),
        )
        crop = load_crop_params(resolve(paths["crop_file"]))
        hp_heat, hp_cool = load_heatpumps(resolve(paths["heatpump_file"]))
        book = load_cost_book(resolve(paths["cost_file"]))

        weather_dir = resolve(paths["weather_dir"])
        supply_dir = resolve(paths["supply_dir"])
        sites = {}
        for name, block in locs_d.items():
            key = str(name).strip().lower()
            loc = Location(
                name=key,
                latitude_deg=float(block["latitude_deg"]),
                longitude_deg=float(block["longitude_deg"]),
                utc_offset_h=float(block["utc_offset_h"]),
            )
            wfile = weather_dir / block["weather_file"]
            sfile = supply_dir / block.get("supply_file", f"{key}.yaml")
            sites[key] = SiteConfig(
                name=key,
                code=str(block["code"]).strip().upper(),
                location=loc,
                weather_path=wfile,
                supply=load_supply_chain(sfile),
            )

        ins_axis = []
        for label in grid_d["insulation"]:
            text = str(label).strip().lower()
            if text in ("insulated", "i", "true"):
                ins_axis.append(True)
            elif text in ("bare", "o", "uninsulated", "false"):
                ins_axis.append(False)
            else:
                raise ConfigError(f"{path}: unknown insulation level {label!r}")
        grid = GridAxes(
            locations=tuple(str(v).strip().lower() for v in grid_d["locations"]),
            insulation=tuple(ins_axis),
            ppfd=tuple(float(v) for v in grid_d["ppfd"]),
            t_in_c=tuple(float(v) for v in grid_d["t_in_c"]),
            co2_ppm=tuple(float(v) for v in grid_d["co2_ppm"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: malformed config: {exc}") from exc

    for name in grid.locations:
        if name not in sites:
            known = ", ".join(sorted(sites))
            raise ConfigError(
                f"{path}: grid location {name!r} has no definition; have: {known}"
            )
        if not sites[name].weather_path.exists():
            raise ConfigError(
                f"{path}: weather file missing for {name}: {sites[name].weather_path}"
            )
        try:
            book.site(name)
        except ConfigError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    codes = [sites[n].code for n in grid.locations]
    if len(set(codes)) != len(codes):
        raise ConfigError(f"{path}: location codes must be unique, got {codes}")

    return SimConfig(
        geometry=geometry,
        envelope_insulated=env_ins,
        envelope_bare=env_bare,
        chamber=chamber,
        rh_light=float(setp_d.get("rh_light", 0.75)),
        rh_dark=float(setp_d.get("rh_dark", 0.85)),
        photoperiod_h=float(setp_d.get("photoperiod_h", 16.0)),
        lights_on_hour=float(setp_d.get("lights_on_hour", 4.0)),
        crop=crop,
        hp_heating=hp_heat,
        hp_cooling=hp_cool,
        cost_book=book,
        sites=MappingProxyType(sites),
        grid=grid,
        strict_paper=bool(strict_paper or doc.get("strict_paper", False)),
        config_path=path,
        config_sha256=hashlib.sha256(raw).hexdigest(),
    )
