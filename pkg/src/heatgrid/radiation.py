"""
Radiative flux assembly: exterior long-wave, interior exchange, and solar.

Exterior surfaces exchange long-wave radiation with ground, sky, and air,
weighted by tilt-dependent view factors with a sky correction
(beta = sqrt(F_sky)) that shifts part of the sky exchange to air
temperature. Interior surfaces exchange through a precomputed dense matrix
of gray-body exchange factors; a convenience builder derives one for
rectangular cavities with the 2D crossed-strings method. Solar fluxes are
split into an absorbed part on the envelope and a transmitted part
deposited in the zone behind each window (or routed to the interior mass
nodes when those are enabled).

Every flux tensor is expressed in watts per cell. Envelope cells scale the
surface flux density [W/m^2] by their exposed face area: one face length
times floor height on straight runs, the sum of both face lengths at
corners.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np
from scipy.special import cosdg

from .building import (
    CvType,
    BuildingGrid,
    DIR_OFFSETS,
    DIR_ORIENTATION,
    MaterialField,
    face_length,
)
from .solar import PoaIrradiance

STEFAN_BOLTZMANN = 5.670374419e-8  # W/(m^2 K^4)

_FACE_NAMES = ("east", "north", "west", "south")


class OpenCavityError(ValueError):
    """Raised when a zone is not fully enclosed by wall or window cells."""


# =============================================================================
# EXTERIOR LONG-WAVE
# =============================================================================


@dataclass(frozen=True)
class ViewFactorSet:
    """Tilt-dependent view factors and sky correction for one surface.

    For tilt angle phi from horizontal:
    ``F_gnd = (1 - cos phi)/2``, ``F_sky = (1 + cos phi)/2``,
    ``beta = sqrt(F_sky)``, ``F_air = F_sky (1 - beta)``.
    The weights satisfy ``F_gnd + beta F_sky + F_air = 1`` for every tilt.
    """

    f_gnd: float
    f_sky: float
    beta: float
    f_air: float
    tilt: float


def view_factors(tilt) -> ViewFactorSet:
    """View-factor set for a surface tilted ``tilt`` degrees from horizontal.

    Accepts a scalar or an ndarray of tilts. Uses a degree-exact cosine so
    vertical surfaces come out at F_gnd = F_sky = 0.5 exactly.
    """
    tilt_arr = np.asarray(tilt, dtype=float)
    if np.any((tilt_arr < 0.0) | (tilt_arr > 180.0)):
        raise ValueError(f"tilt {tilt!r} outside [0, 180] degrees")
    cos_tilt = cosdg(tilt_arr)
    f_gnd = 0.5 * (1.0 - cos_tilt)
    f_sky = 0.5 * (1.0 + cos_tilt)
    beta = np.sqrt(f_sky)
    f_air = f_sky * (1.0 - beta)
    if np.isscalar(tilt) or tilt_arr.ndim == 0:
        return ViewFactorSet(
            float(f_gnd), float(f_sky), float(beta), float(f_air), float(tilt)
        )
    return ViewFactorSet(f_gnd, f_sky, beta, f_air, tilt_arr)


def exterior_lw_flux(eps, vf: ViewFactorSet, t_surf, t_gnd, t_sky, t_air):
    """Net exterior long-wave flux density [W/m^2] on a surface.

    ``q = eps sigma [F_gnd (T_gnd^4 - T_surf^4) + beta F_sky (T_sky^4 - T_surf^4)
    + F_air (T_air^4 - T_surf^4)]``. Positive means a net gain by the
    surface. Works element-wise on arrays.
    """
    if np.any(np.asarray(eps) < 0.0) or np.any(np.asarray(eps) > 1.0):
        raise ValueError(f"emissivity {eps!r} outside [0, 1]")
    for name, t in (("t_surf", t_surf), ("t_gnd", t_gnd), ("t_sky", t_sky), ("t_air", t_air)):
        if np.any(np.asarray(t) <= 0.0):
            raise ValueError(f"{name} must be > 0 K, got {t!r}")
    surf4 = np.asarray(t_surf, dtype=float) ** 4
    return (
        eps
        * STEFAN_BOLTZMANN
        * (
            vf.f_gnd * (np.asarray(t_gnd, dtype=float) ** 4 - surf4)
            + vf.beta * vf.f_sky * (np.asarray(t_sky, dtype=float) ** 4 - surf4)
            + vf.f_air * (np.asarray(t_air, dtype=float) ** 4 - surf4)
        )
    )


def exposure_scale(grid: BuildingGrid, layer_divisor: int = 1) -> np.ndarray:
    """Exterior-flux area scale [m^2] per cell.

    Exposed envelope cells scale by their total exposed face length times
    floor height (corners therefore get twice the edge-cell scale on square
    grids). With ``layer_divisor`` > 1, unexposed envelope cells (inner
    layers of a multi-layer wall) receive a nominal face length divided by
    the layer count; with the default single-layer setting they receive
    nothing.
    """
    scale = grid.delta_x * grid.z
    if layer_divisor > 1:
        inner = grid.is_envelope() & (grid.exposed_faces == 0)
        nominal = 0.5 * (grid.u + grid.v)
        scale = scale + np.where(inner, nominal / layer_divisor * grid.z, 0.0)
    return scale


def assemble_exterior_lw_tensor(
    grid: BuildingGrid,
    mats: MaterialField,
    temperatures: np.ndarray,
    t_gnd: float,
    t_sky: float,
    t_air: float,
    layer_divisor: int = 1,
) -> np.ndarray:
    """Exterior long-wave tensor [W per cell] over the whole grid.

    Each envelope cell's surface temperature is its current cell
    temperature; non-envelope cells get zero.
    """
    envelope = grid.is_envelope()
    vf = view_factors(mats.tilt)
    flux = exterior_lw_flux(
        mats.emissivity, vf, temperatures, t_gnd, t_sky, t_air
    )
    return np.where(envelope, exposure_scale(grid, layer_divisor) * flux, 0.0)


# =============================================================================
# INTERIOR EXCHANGE
# =============================================================================


@dataclass
class RadiationExchangeMatrix:
    """Dense interior exchange factors between cavity surfaces.

    ``coefficients[i, j]`` is the gray-body exchange factor from surface i
    to surface j; the net flux density on surface i for temperatures T is
    ``sigma * sum_j coefficients[i, j] (T_j^4 - T_i^4)``. Surfaces are
    wall or window cell faces; ``surfaces[i] = (row, col, direction)``
    names the face (direction points from the cell into the cavity) and
    ``areas[i]`` is its face area [m^2].
    """

    n_surfaces: int
    coefficients: np.ndarray
    surfaces: List[Tuple[int, int, int]]
    areas: np.ndarray

    @property
    def surface_index(self) -> Dict[Tuple[int, int], List[int]]:
        """Rows of the matrix belonging to each grid cell."""
        index: Dict[Tuple[int, int], List[int]] = {}
        for i, (r, c, _d) in enumerate(self.surfaces):
            index.setdefault((r, c), []).append(i)
        return index

    def validate(self) -> None:
        n = self.n_surfaces
        if self.coefficients.shape != (n, n):
            raise ValueError(
                f"coefficient matrix shape {self.coefficients.shape} != ({n}, {n})"
            )
        if len(self.surfaces) != n or self.areas.shape != (n,):
            raise ValueError("surface list and area vector must match n_surfaces")
        row_sums = self.coefficients.sum(axis=1)
        if np.any(row_sums > 1.0 + 1e-9):
            i = int(np.argmax(row_sums))
            raise ValueError(f"row {i} of exchange matrix sums to {row_sums[i]} > 1")

    def surface_temperatures(self, temperatures: np.ndarray) -> np.ndarray:
        rows = np.array([s[0] for s in self.surfaces], dtype=np.intp)
        cols = np.array([s[1] for s in self.surfaces], dtype=np.intp)
        return temperatures[rows, cols]


def apply_interior_lw(
    matrix: RadiationExchangeMatrix, surface_temps: np.ndarray
) -> np.ndarray:
    """Net interior long-wave flux density [W/m^2] per surface.

    ``q_i = sigma sum_j F_ij (T_j^4 - T_i^4)``; with reciprocal exchange
    factors the area-weighted fluxes sum to zero over the enclosure.
    """
    surface_temps = np.asarray(surface_temps, dtype=float)
    if surface_temps.shape != (matrix.n_surfaces,):
        raise ValueError(
            f"got {surface_temps.shape[0] if surface_temps.ndim else 0} surface "
            f"temperatures for a {matrix.n_surfaces}-surface matrix"
        )
    if np.any(surface_temps <= 0.0):
        raise ValueError("surface temperatures must be > 0 K")
    t4 = surface_temps**4
    # Differences before weighting, so an isothermal enclosure gives an
    # exactly zero vector.
    pairwise = matrix.coefficients * (t4[None, :] - t4[:, None])
    return STEFAN_BOLTZMANN * pairwise.sum(axis=1)


def scatter_interior_lw(
    matrix: RadiationExchangeMatrix, flux_density: np.ndarray, grid: BuildingGrid
) -> np.ndarray:
    """Scatter per-surface flux densities into a per-cell tensor [W].

    Each surface contributes its flux density times its face area to the
    owning cell, mirroring the exposed-face scaling of the exterior tensor.
    """
    q_lwx = np.zeros((grid.rows, grid.cols))
    rows = np.array([s[0] for s in matrix.surfaces], dtype=np.intp)
    cols = np.array([s[1] for s in matrix.surfaces], dtype=np.intp)
    np.add.at(q_lwx, (rows, cols), flux_density * matrix.areas)
    return q_lwx


def build_exchange_matrix_2d(
    grid: BuildingGrid, mats: MaterialField
) -> RadiationExchangeMatrix:
    """Exchange matrix for every air zone by the 2D crossed-strings method.

    Each zone must be a closed cavity: every face of every air cell either
    meets another air cell of the same zone or a wall/window cell. View
    factors between the cavity's wall segments come from crossed strings,
    rows are renormalized to close exactly, and emissivities are folded in
    with the pairwise two-surface network approximation. Zones do not
    exchange with each other, so the global matrix is block diagonal.
    """
    if not (np.allclose(grid.u, grid.u.flat[0]) and np.allclose(grid.v, grid.v.flat[0])):
        raise ValueError("crossed-strings builder requires a uniform cell size")
    size_u = float(grid.u.flat[0])
    size_v = float(grid.v.flat[0])

    surfaces: List[Tuple[int, int, int]] = []
    segments: List[Tuple[Tuple[float, float], Tuple[float, float]]] = []
    eps_list: List[float] = []
    zone_of_surface: List[int] = []

    wall_types = (int(CvType.EXTERIOR_WALL), int(CvType.INTERIOR_WALL), int(CvType.WINDOW))
    air_cells = np.argwhere(grid.zone_id >= 0)
    for r, c in air_cells:
        r, c = int(r), int(c)
        zone = int(grid.zone_id[r, c])
        for d, (dr, dc) in enumerate(DIR_OFFSETS):
            nr, nc = r + dr, c + dc
            if 0 <= nr < grid.rows and 0 <= nc < grid.cols and grid.zone_id[nr, nc] == zone:
                continue  # internal to the cavity
            if not (
                0 <= nr < grid.rows
                and 0 <= nc < grid.cols
                and int(grid.cv_type[nr, nc]) in wall_types
            ):
                raise OpenCavityError(
                    f"zone {zone} is open at air cell ({r}, {c}) toward {_FACE_NAMES[d]}"
                )
            x0, y0 = c * size_u, r * size_v
            if d == 0:  # east face of the air cell
                seg = ((x0 + size_u, y0), (x0 + size_u, y0 + size_v))
            elif d == 1:  # north
                seg = ((x0, y0), (x0 + size_u, y0))
            elif d == 2:  # west
                seg = ((x0, y0), (x0, y0 + size_v))
            else:  # south
                seg = ((x0, y0 + size_v), (x0 + size_u, y0 + size_v))
            surfaces.append((nr, nc, (d + 2) % 4))  # wall face looks back into the cavity
            segments.append(seg)
            eps_list.append(float(mats.emissivity[nr, nc]))
            zone_of_surface.append(zone)

    n = len(surfaces)
    if n == 0:
        raise OpenCavityError("no air zones found; nothing to enclose")

    a1 = np.array([seg[0] for seg in segments])
    a2 = np.array([seg[1] for seg in segments])
    lengths = np.linalg.norm(a2 - a1, axis=1)

    def dist(p: np.ndarray, q: np.ndarray) -> np.ndarray:
        return np.linalg.norm(p[:, None, :] - q[None, :, :], axis=2)

    # Crossed strings: the crossing pairing is always the longer one, so the
    # endpoint labeling never matters.
    straight = dist(a1, a1) + dist(a2, a2)
    crossed = dist(a1, a2) + dist(a2, a1)
    f = np.abs(crossed - straight) / (2.0 * lengths[:, None])

    same_zone = np.equal.outer(zone_of_surface, zone_of_surface)
    f = np.where(same_zone, f, 0.0)
    np.fill_diagonal(f, 0.0)

    row_sums = f.sum(axis=1)
    if np.any(row_sums <= 0.0):
        i = int(np.argmin(row_sums))
        raise OpenCavityError(f"surface {surfaces[i]} sees no other surface")
    f /= row_sums[:, None]

    areas = lengths * grid.z
    eps = np.array(eps_list)
    coefficients = _fold_emissivity(f, eps, areas)

    matrix = RadiationExchangeMatrix(
        n_surfaces=n, coefficients=coefficients, surfaces=surfaces, areas=areas
    )
    matrix.validate()
    _check_reciprocity(matrix)
    return matrix


def _fold_emissivity(f: np.ndarray, eps: np.ndarray, areas: np.ndarray) -> np.ndarray:
    """Pairwise two-surface-network gray factors from raw view factors.

    ``Fhat_ij = 1 / [(1 - e_i)/e_i + 1/F_ij + (A_i/A_j)(1 - e_j)/e_j]``;
    reduces to F for black surfaces and preserves reciprocity.
    """
    n = f.shape[0]
    with np.errstate(divide="ignore", invalid="ignore"):
        r_self = np.where(eps > 0.0, (1.0 - eps) / np.where(eps > 0.0, eps, 1.0), np.inf)
        inv_f = np.where(f > 0.0, 1.0 / np.where(f > 0.0, f, 1.0), np.inf)
        area_ratio = areas[:, None] / areas[None, :]
        denom = r_self[:, None] + inv_f + area_ratio * r_self[None, :]
        folded = np.where(np.isfinite(denom), 1.0 / denom, 0.0)
    np.fill_diagonal(folded, 0.0)
    return folded


def _check_reciprocity(matrix: RadiationExchangeMatrix, tol: float = 1e-9) -> None:
    weighted = matrix.areas[:, None] * matrix.coefficients
    asymmetry = np.abs(weighted - weighted.T).max()
    scale = max(np.abs(weighted).max(), 1e-30)
    if asymmetry > tol * scale:
        raise ValueError(
            f"exchange matrix violates reciprocity: max asymmetry {asymmetry:.3e}"
        )


def save_exchange_matrix(matrix: RadiationExchangeMatrix) -> str:
    """Serialize to delimited text: a surface-index header, then the matrix."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["n_surfaces", matrix.n_surfaces])
    writer.writerow(["surface", "row", "col", "face", "area"])
    for i, (r, c, d) in enumerate(matrix.surfaces):
        writer.writerow([i, r, c, _FACE_NAMES[d], repr(float(matrix.areas[i]))])
    writer.writerow(["matrix"])
    for i in range(matrix.n_surfaces):
        writer.writerow([repr(float(x)) for x in matrix.coefficients[i]])
    return out.getvalue()


def load_exchange_matrix(text: str) -> RadiationExchangeMatrix:
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if not rows or rows[0][0] != "n_surfaces":
        raise ValueError("exchange matrix text must start with an n_surfaces row")
    n = int(rows[0][1])
    if len(rows) < 2 + n + 1 + n:
        raise ValueError(f"exchange matrix text truncated for n_surfaces={n}")
    surfaces: List[Tuple[int, int, int]] = []
    areas = np.zeros(n)
    for i in range(n):
        row = rows[2 + i]
        surfaces.append((int(row[1]), int(row[2]), _FACE_NAMES.index(row[3])))
        areas[i] = float(row[4])
    if rows[2 + n][0] != "matrix":
        raise ValueError("missing matrix marker row")
    coefficients = np.array(
        [[float(x) for x in rows[3 + n + i]] for i in range(n)], dtype=float
    )
    matrix = RadiationExchangeMatrix(
        n_surfaces=n, coefficients=coefficients, surfaces=surfaces, areas=areas
    )
    matrix.validate()
    return matrix


# =============================================================================
# SOLAR TENSORS
# =============================================================================


def assemble_solar_tensors(
    grid: BuildingGrid,
    mats: MaterialField,
    poa: PoaIrradiance,
    mass_enabled: bool,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Absorbed and transmitted solar tensors for one step's irradiance.

    Returns ``(q_sol_alpha, q_sol_tau, q_tau_mass)``. The absorbed tensor
    [W] lands on envelope cells with the exposed-face area scaling. The
    power transmitted through each window is pooled per zone and spread
    uniformly over that zone's air cells: into ``q_sol_tau`` [W] when mass
    is disabled, or into ``q_tau_mass`` [W/m^2 of plan area] for the mass
    nodes when enabled (the air-balance tensor then stays zero).
    """
    shape = (grid.rows, grid.cols)
    q_alpha = np.zeros(shape)
    tau_power = np.zeros(shape)
    window = grid.cv_type == int(CvType.WINDOW)
    envelope = grid.is_envelope()

    for d in range(4):
        g = poa[DIR_ORIENTATION[d]]
        area = face_length(grid.u, grid.v, d) * grid.z
        exposed = grid.exposed_mask[d] & envelope
        q_alpha += np.where(exposed, mats.absorptivity * g * area, 0.0)
        tau_power += np.where(exposed & window, mats.transmissivity * g * area, 0.0)

    zone_total = np.zeros(max(grid.n_zones, 1))
    for (r, c), zone in grid.window_zone.items():
        zone_total[zone] += tau_power[r, c]

    q_tau = np.zeros(shape)
    q_tau_mass = np.zeros(shape)
    for zone in range(grid.n_zones):
        members = grid.zone_id == zone
        count = int(members.sum())
        share = zone_total[zone] / count
        if mass_enabled:
            q_tau_mass[members] = share / (grid.u[members] * grid.v[members])
        else:
            q_tau[members] = share
    return q_alpha, q_tau, q_tau_mass


@dataclass
class FluxTensors:
    """Per-cell flux tensors [W] entering the update numerator."""

    q_lwr: np.ndarray
    q_lwx: np.ndarray
    q_sol_alpha: np.ndarray
    q_sol_tau: np.ndarray

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "FluxTensors":
        shape = (rows, cols)
        return cls(
            q_lwr=np.zeros(shape),
            q_lwx=np.zeros(shape),
            q_sol_alpha=np.zeros(shape),
            q_sol_tau=np.zeros(shape),
        )
