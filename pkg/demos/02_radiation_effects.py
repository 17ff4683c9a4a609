"""Show what each radiative mechanism contributes to the daily profile.

Runs the same building and weather four times, adding one mechanism at a
time: conduction-convection only, exterior long-wave, solar gains routed to
the interior mass nodes, and finally interior long-wave exchange. Prints
zone air temperatures at three clock hours for each configuration.
"""

from dataclasses import replace

import heatgrid as hg
from heatgrid.cli import default_building_path, default_weather_path

grid, mats, base_config = hg.load_building_file(default_building_path())
records = hg.load_weather_file(default_weather_path())

variants = {
    "conduction + convection": dict(
        enable_exterior_lw=False, enable_interior_lw=False,
        enable_solar=False, enable_interior_mass=False,
    ),
    "+ exterior long-wave": dict(
        enable_exterior_lw=True, enable_interior_lw=False,
        enable_solar=False, enable_interior_mass=False,
    ),
    "+ solar gains into mass": dict(
        enable_exterior_lw=True, enable_interior_lw=False,
        enable_solar=True, enable_interior_mass=True,
    ),
    "full (interior LW too)": dict(
        enable_exterior_lw=True, enable_interior_lw=True,
        enable_solar=True, enable_interior_mass=True,
    ),
}

steps_per_hour = int(3600 / base_config.dt)
n_steps = 24 * steps_per_hour
air = grid.zone_id >= 0
digest_hours = (4, 14, 23)

print(f"{'configuration':<26}" + "".join(f"{h:02d}:00 [C]".rjust(11) for h in digest_hours))
for name, flags in variants.items():
    config = replace(base_config, **flags)
    snapshots, _ = hg.run_episode(grid, mats, config, records, n_steps)
    by_clock = {snap.sim_clock.hour: snap for snap in snapshots}
    means = [by_clock[h].t[air].mean() - 273.15 for h in digest_hours]
    print(f"{name:<26}" + "".join(f"{m:>11.2f}" for m in means))

print("\nExterior long-wave cools the envelope against the cold night sky;")
print("solar lifts the day and the mass nodes carry the gain into the")
print("evening; interior exchange evens out wall-to-wall contrasts.")
