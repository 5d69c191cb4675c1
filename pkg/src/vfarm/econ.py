"""Capital and operating cost accounting and the levelized cost of lettuce.

All money is nominal USD.  The cost book ships as a YAML file under
``data/costs/`` with a shared section for equipment and finance plus one
block of site prices per location.  The levelized cost annualizes the
investment (and two future lighting replacements, discounted to present
value) with a capital recovery factor at the real interest rate, adds the
annual operating bill, and divides by the annual yield.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType

import yaml

from .errors import ConfigError, DomainError


@dataclass(frozen=True)
class SiteCosts:
    """Location-dependent unit prices."""

    electricity_usd_kwh: float
    water_usd_m3: float
    labour_usd_h: float
    lease_usd_m2_y: float


@dataclass(frozen=True)
class CostBook:
    """Equipment, finance and consumable prices shared across scenarios."""

    light_usd_w: float
    wiring_usd_w: float
    hvacd_usd_w: float
    farm_usd_m2_crop: float
    insulation_usd_m2: float
    crop_inputs_usd_kg: float
    co2_usd_kg: float
    labour_h_per_kg: float
    lifetime_y: int
    nominal_rate: float
    inflation_rate: float
    led_replacement_years: tuple
    sites: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))

    def site(self, location: str) -> SiteCosts:
        key = location.strip().lower()
        if key not in self.sites:
            known = ", ".join(sorted(self.sites))
            raise ConfigError(f"unknown location {location!r}; cost book has: {known}")
        return self.sites[key]


def real_rate(book: CostBook, strict_paper: bool = False) -> float:
    """Real interest rate from the nominal rate and inflation.

    The default composes the two rates multiplicatively.  ``strict_paper``
    switches both signs in the quotient, an audit variant kept selectable
    because it materially lowers the annualization (it returns a negative
    rate for the default inputs).
    """
    if strict_paper:
        return (1.0 - book.nominal_rate) / (1.0 - book.inflation_rate) - 1.0
    return (1.0 + book.nominal_rate) / (1.0 + book.inflation_rate) - 1.0


def crf(rate: float, years: int) -> float:
    """Capital recovery factor: the constant annuity repaying 1 over ``years``."""
    if years <= 0:
        raise DomainError(f"lifetime must be positive, got {years}")
    if rate == 0.0:
        return 1.0 / years
    growth = (1.0 + rate) ** years
    return rate * growth / (growth - 1.0)


@dataclass(frozen=True)
class CapexBreakdown:
    lighting: float
    wiring: float
    hvacd: float
    farm: float
    insulation: float

    @property
    def total(self) -> float:
        return self.lighting + self.wiring + self.hvacd + self.farm + self.insulation


def capex(book: CostBook, p_light_w: float, p_hvacd_w: float,
          crop_area_m2: float, env_area_m2: float,
          insulated: bool) -> CapexBreakdown:
    """Investment cost; ``p_hvacd_w`` is the installed thermal capacity."""
    if p_light_w < 0.0 or p_hvacd_w < 0.0:
        raise DomainError("installed powers must be non-negative")
    return CapexBreakdown(
        lighting=book.light_usd_w * p_light_w,
        wiring=book.wiring_usd_w * (p_light_w + p_hvacd_w),
        hvacd=book.hvacd_usd_w * p_hvacd_w,
        farm=book.farm_usd_m2_crop * crop_area_m2,
        insulation=book.insulation_usd_m2 * env_area_m2 if insulated else 0.0,
    )


@dataclass(frozen=True)
class OpexBreakdown:
    crop_inputs: float
    electricity: float
    water: float
    co2: float
    labour: float
    leasing: float

    @property
    def total(self) -> float:
        return (self.crop_inputs + self.electricity + self.water + self.co2
                + self.labour + self.leasing)

    @property
    def labour_share(self) -> float:
        return self.labour / self.total if self.total > 0.0 else 0.0


def opex(book: CostBook, location: str, yield_kg: float, electricity_kwh: float,
         water_l: float, co2_kg: float, lease_area_m2: float) -> OpexBreakdown:
    """Annual operating bill for one scenario at one site."""
    site = book.site(location)
    return OpexBreakdown(
        crop_inputs=book.crop_inputs_usd_kg * yield_kg,
        electricity=site.electricity_usd_kwh * electricity_kwh,
        water=site.water_usd_m3 * water_l / 1000.0,
        co2=book.co2_usd_kg * co2_kg,
        labour=site.labour_usd_h * book.labour_h_per_kg * yield_kg,
        leasing=site.lease_usd_m2_y * lease_area_m2,
    )


def led_replacement_cost(book: CostBook, p_light_w: float, rate: float) -> float:
    """Present value of the future lighting replacements."""
    base = book.light_usd_w * p_light_w
    return base * sum((1.0 + rate) ** -y for y in book.led_replacement_years)


@dataclass(frozen=True)
class EconResult:
    capex: CapexBreakdown
    opex: OpexBreakdown
    c_rep_usd: float
    r_real: float
    crf: float
    lcol_usd_kg: float


def lcol(book: CostBook, capex_bd: CapexBreakdown, opex_bd: OpexBreakdown,
         p_light_w: float, yield_kg: float,
         strict_paper: bool = False) -> EconResult:
    """Levelized cost of lettuce, USD per kg of annual yield."""
    if yield_kg <= 0.0:
        raise DomainError(f"yield must be positive, got {yield_kg}")
    rate = real_rate(book, strict_paper)
    factor = crf(rate, book.lifetime_y)
    c_rep = led_replacement_cost(book, p_light_w, rate)
    value = ((capex_bd.total + c_rep) * factor + opex_bd.total) / yield_kg
    return EconResult(capex=capex_bd, opex=opex_bd, c_rep_usd=c_rep,
                      r_real=rate, crf=factor, lcol_usd_kg=value)


def break_even_electricity(fixed_a: float, el_kwh_a: float, yield_a: float,
                           fixed_b: float, el_kwh_b: float, yield_b: float,
                           lo: float = 0.0, hi: float = 5.0,
                           tol: float = 1e-4) -> float:
    """Electricity price equalizing two scenarios' levelized costs.

    ``fixed_*`` is each scenario's annualized cost with electricity billed at
    zero (annuity plus all other operating lines); the electricity line then
    scales linearly with the price.  Solved by bisection to ``tol`` dollars.
    Returns ``nan`` when the curves do not cross inside ``[lo, hi]``.
    """
    if yield_a <= 0.0 or yield_b <= 0.0:
        raise DomainError("yields must be positive")

    def gap(price: float) -> float:
        return ((fixed_a + el_kwh_a * price) / yield_a
                - (fixed_b + el_kwh_b * price) / yield_b)

    g_lo, g_hi = gap(lo), gap(hi)
    if g_lo == 0.0:
        return lo
    if g_lo * g_hi > 0.0:
        return float("nan")
    a, b = lo, hi
    while b - a > tol:
        mid = 0.5 * (a + b)
        if gap(a) * gap(mid) <= 0.0:
            b = mid
        else:
            a = mid
    return 0.5 * (a + b)


def load_cost_book(path) -> CostBook:
    """Read the cost book YAML; validates presence and signs."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read cost book {path}: {exc}") from exc
    try:
        cx, fin, op = doc["capex"], doc["finance"], doc["opex"]
        sites = {
            name.strip().lower(): SiteCosts(
                electricity_usd_kwh=float(block["electricity_usd_kwh"]),
                water_usd_m3=float(block["water_usd_m3"]),
                labour_usd_h=float(block["labour_usd_h"]),
                lease_usd_m2_y=float(block["lease_usd_m2_y"]),
            )
            for name, block in doc["sites"].items()
        }
        book = CostBook(
            light_usd_w=float(cx["light_usd_w"]),
            wiring_usd_w=float(cx["wiring_usd_w"]),
            hvacd_usd_w=float(cx["hvacd_usd_w"]),
            farm_usd_m2_crop=float(cx["farm_usd_m2_crop"]),
            insulation_usd_m2=float(cx["insulation_usd_m2"]),
            crop_inputs_usd_kg=float(op["crop_inputs_usd_kg"]),
            co2_usd_kg=float(op["co2_usd_kg"]),
            labour_h_per_kg=float(op["labour_h_per_kg"]),
            lifetime_y=int(fin["lifetime_y"]),
            nominal_rate=float(fin["nominal_rate"]),
            inflation_rate=float(fin["inflation_rate"]),
            led_replacement_years=tuple(int(y) for y in fin["led_replacement_years"]),
            sites=MappingProxyType(sites),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: malformed cost book: {exc}") from exc

    numeric = [book.light_usd_w, book.wiring_usd_w, book.hvacd_usd_w,
               book.farm_usd_m2_crop, book.insulation_usd_m2,
               book.crop_inputs_usd_kg, book.co2_usd_kg, book.labour_h_per_kg]
    if any(v < 0.0 for v in numeric):
        raise ConfigError(f"{path}: unit costs must be non-negative")
    if book.lifetime_y <= max(book.led_replacement_years, default=0):
        raise ConfigError(f"{path}: lifetime must exceed the last LED replacement")
    if not sites:
        raise ConfigError(f"{path}: at least one site block required")
    return book
