"""
Per-step boundary conditions derived from the weather series.

Both solvers consume the same StepBoundary: ambient, ground, and sky
temperatures plus plane-of-array irradiance per facade. Weather records
are held constant between timestamps.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import Optional, Sequence

import numpy as np

from .solar import PoaIrradiance, poa_for_orientations, solar_position
from .weather import SitePosition, WeatherRecord, record_at, sky_temperature


@dataclass(frozen=True)
class StepBoundary:
    """Boundary conditions for one simulation step."""

    t_inf: float  # ambient air [K]
    t_gnd: float  # ground [K]
    t_sky: float  # effective sky [K]
    poa: PoaIrradiance
    q_x: Optional[np.ndarray] = None  # external heat source [W per cell]


def boundary_for_time(
    records: Sequence[WeatherRecord],
    site: Optional[SitePosition],
    when: datetime,
    want_solar: bool = True,
    q_x: Optional[np.ndarray] = None,
) -> StepBoundary:
    """Assemble the boundary for the record active at ``when``.

    POA irradiance needs a site; with solar disabled the facades are
    simply dark and no site is required.
    """
    record = record_at(records, when)
    if want_solar:
        if site is None:
            raise ValueError("solar gains enabled but no site position given")
        geometry = solar_position(site, when)
        poa = poa_for_orientations(record, geometry, site.albedo)
    else:
        poa = PoaIrradiance.dark()
    return StepBoundary(
        t_inf=record.t_air,
        t_gnd=record.t_gnd,
        t_sky=sky_temperature(record),
        poa=poa,
        q_x=q_x,
    )
