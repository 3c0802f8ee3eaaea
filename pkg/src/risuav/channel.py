"""Channel gains for the RIS-assisted UAV downlink.

Three links per GU: a Rician direct UAV-GU scalar, a pure-LOS UAV-RIS vector built
from the planar-array steering response, and a Rician RIS-GU vector whose LOS part
is the matching steering response on the GU side. ``effective_channel`` composes
them with the per-element phase shifts and on-off states.

Scattering components are drawn once per run (see :class:`ScatteringDraw`) and held
fixed, so every gain is a deterministic function of the decision variables. That
determinism is what makes finite-difference placement gradients meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scenario import RngStream, Scenario, _as_generator

# Tolerance on direction cosines: absorbs roundoff in ratios of distances.
_COS_TOL = 1.0e-9


class GeometryError(ValueError):
    """Node geometry makes a path loss or steering angle undefined."""


def distance_3d(a_horizontal, a_alt: float, b_horizontal, b_alt: float) -> float:
    """Euclidean distance between two points given horizontally plus altitude."""
    a = np.asarray(a_horizontal, dtype=float)
    b = np.asarray(b_horizontal, dtype=float)
    dz = float(a_alt) - float(b_alt)
    return float(np.sqrt(np.sum((a - b) ** 2) + dz * dz))


def steering_vector(m_r: int, m_c: int, d_r: float, d_c: float, wavelength: float,
                    phi: float, varphi: float, psi: float) -> np.ndarray:
    """Planar-array response, length m_r*m_c, row factor first in the Kronecker order.

    phi, varphi, psi are direction sines/cosines and must lie in [-1, 1] up to
    roundoff. Every entry has magnitude 1.
    """
    for name, val in (("phi", phi), ("varphi", varphi), ("psi", psi)):
        if abs(val) > 1.0 + _COS_TOL:
            raise ValueError(f"direction component {name}={val} outside [-1, 1]")
    row = np.exp(-1j * 2.0 * np.pi * (d_r / wavelength) * np.arange(m_r) * phi * psi)
    col = np.exp(-1j * 2.0 * np.pi * (d_c / wavelength) * np.arange(m_c) * varphi * psi)
    return np.kron(row, col)


@dataclass(frozen=True)
class ScatteringDraw:
    """Frozen scattering components for one run.

    direct: (K,) complex, the non-LOS part of each UAV-GU link.
    ris_gu: (K, M) complex, the non-LOS part of each RIS-GU link.
    All entries are standard circularly-symmetric complex Gaussians (variance 1,
    split evenly between real and imaginary parts).
    """

    direct: np.ndarray
    ris_gu: np.ndarray


def sample_scattering(rng: RngStream | np.random.Generator, num_gus: int,
                      num_elements: int) -> ScatteringDraw:
    gen = _as_generator(rng)
    scale = np.sqrt(0.5)
    direct = scale * (gen.standard_normal(num_gus) + 1j * gen.standard_normal(num_gus))
    ris = scale * (gen.standard_normal((num_gus, num_elements))
                   + 1j * gen.standard_normal((num_gus, num_elements)))
    return ScatteringDraw(direct=direct, ris_gu=ris)


@dataclass(frozen=True)
class ChannelSet:
    """All channel gains for one UAV position.

    direct: (K,) complex UAV-GU scalars; uav_ris: (M,) complex; ris_gu: (K, M)
    complex. ris_gu does not depend on the UAV position, so callers moving the UAV
    may reuse it (see :func:`build_channel_set`).
    """

    direct: np.ndarray
    uav_ris: np.ndarray
    ris_gu: np.ndarray


def channel_uav_gu(scn: Scenario, w_u, k: int, scatter: ScatteringDraw) -> complex:
    """Rician direct link to GU k. The LOS term is the constant 1, no phase ramp."""
    gu = scn.gu_array()[k]
    d = distance_3d(w_u, scn.uav_altitude, gu, 0.0)
    if d == 0.0:
        raise GeometryError(f"UAV coincides with GU {k}")
    amp = np.sqrt(scn.ref_path_loss / d ** scn.pathloss_exp_ug)
    kap = scn.rician_ug
    los_w = np.sqrt(kap / (kap + 1.0))
    sc_w = np.sqrt(1.0 / (kap + 1.0))
    return complex(amp * (los_w + sc_w * scatter.direct[k]))


def channel_uav_ris(scn: Scenario, w_u) -> np.ndarray:
    """Pure-LOS UAV to RIS vector, free-space exponent 2."""
    w = np.asarray(w_u, dtype=float)
    ris = np.asarray(scn.ris_position, dtype=float)
    hnorm = float(np.linalg.norm(ris - w))
    if hnorm == 0.0:
        raise GeometryError("UAV horizontally coincident with the RIS")
    d = float(np.hypot(hnorm, scn.uav_altitude - scn.ris_altitude))
    phi = (w[1] - ris[1]) / hnorm
    varphi = (ris[0] - w[0]) / hnorm
    psi = (scn.uav_altitude - scn.ris_altitude) / d
    sv = steering_vector(scn.ris_rows, scn.ris_cols, scn.row_spacing, scn.col_spacing,
                         scn.wavelength, phi, varphi, psi)
    return (np.sqrt(scn.ref_path_loss) / d) * sv


def channel_ris_gu(scn: Scenario, k: int, scatter: ScatteringDraw) -> np.ndarray:
    """Rician RIS to GU k vector; LOS part is the GU-side steering response."""
    gu = scn.gu_array()[k]
    ris = np.asarray(scn.ris_position, dtype=float)
    hnorm = float(np.linalg.norm(gu - ris))
    if hnorm == 0.0:
        raise GeometryError(f"GU {k} horizontally coincident with the RIS")
    d = float(np.hypot(hnorm, scn.ris_altitude))
    phi = (gu[1] - ris[1]) / hnorm
    varphi = (gu[0] - ris[0]) / hnorm
    psi = scn.ris_altitude / d
    los = steering_vector(scn.ris_rows, scn.ris_cols, scn.row_spacing, scn.col_spacing,
                          scn.wavelength, phi, varphi, psi)
    amp = np.sqrt(scn.ref_path_loss / d ** scn.pathloss_exp_rg)
    kap = scn.rician_rg
    los_w = np.sqrt(kap / (kap + 1.0))
    sc_w = np.sqrt(1.0 / (kap + 1.0))
    return amp * (los_w * los + sc_w * scatter.ris_gu[k])


def build_channel_set(scn: Scenario, w_u, scatter: ScatteringDraw,
                      ris_gu: np.ndarray | None = None) -> ChannelSet:
    """All gains for one UAV position, vectorized over GUs.

    Pass a previously computed ``ris_gu`` block to skip recomputing the only part
    that does not depend on w_u. Agrees with the per-link functions entrywise.
    """
    gus = scn.gu_array()
    w = np.asarray(w_u, dtype=float)

    dvec = gus - w[None, :]
    d_ug = np.sqrt(np.sum(dvec ** 2, axis=1) + scn.uav_altitude ** 2)
    if np.any(d_ug == 0.0):
        raise GeometryError("UAV coincides with a GU")
    amp_ug = np.sqrt(scn.ref_path_loss / d_ug ** scn.pathloss_exp_ug)
    kap = scn.rician_ug
    direct = amp_ug * (np.sqrt(kap / (kap + 1.0))
                       + np.sqrt(1.0 / (kap + 1.0)) * scatter.direct)

    uav_ris = channel_uav_ris(scn, w)

    if ris_gu is None:
        ris_gu = ris_gu_block(scn, scatter)

    cs = ChannelSet(direct=direct, uav_ris=uav_ris, ris_gu=ris_gu)
    if not (np.all(np.isfinite(cs.direct)) and np.all(np.isfinite(cs.uav_ris))
            and np.all(np.isfinite(cs.ris_gu))):
        raise GeometryError("non-finite channel gain")
    return cs


def ris_gu_block(scn: Scenario, scatter: ScatteringDraw) -> np.ndarray:
    """(K, M) RIS to GU gains for all GUs at once; UAV-position independent."""
    gus = scn.gu_array()
    ris = np.asarray(scn.ris_position, dtype=float)
    dvec = gus - ris[None, :]
    hnorm = np.linalg.norm(dvec, axis=1)
    if np.any(hnorm == 0.0):
        raise GeometryError("a GU is horizontally coincident with the RIS")
    d = np.hypot(hnorm, scn.ris_altitude)
    phi = dvec[:, 1] / hnorm
    varphi = dvec[:, 0] / hnorm
    psi = scn.ris_altitude / d

    c_row = -1j * 2.0 * np.pi * (scn.row_spacing / scn.wavelength)
    c_col = -1j * 2.0 * np.pi * (scn.col_spacing / scn.wavelength)
    rows = np.exp(c_row * np.outer(phi * psi, np.arange(scn.ris_rows)))    # (K, M_r)
    cols = np.exp(c_col * np.outer(varphi * psi, np.arange(scn.ris_cols)))  # (K, M_c)
    los = (rows[:, :, None] * cols[:, None, :]).reshape(len(gus), -1)

    amp = np.sqrt(scn.ref_path_loss / d ** scn.pathloss_exp_rg)
    kap = scn.rician_rg
    return amp[:, None] * (np.sqrt(kap / (kap + 1.0)) * los
                           + np.sqrt(1.0 / (kap + 1.0)) * scatter.ris_gu)


def effective_channel(h_ug: complex, h_rg: np.ndarray, h_ur: np.ndarray,
                      theta: np.ndarray, x: np.ndarray) -> complex:
    """Compose one GU's effective gain: direct plus the phase-shifted reflection.

    C = h_ug + sum_m conj(h_rg[m]) * x[m] * exp(j*theta[m]) * h_ur[m]
    """
    h_rg = np.asarray(h_rg)
    h_ur = np.asarray(h_ur)
    theta = np.asarray(theta, dtype=float)
    x = np.asarray(x, dtype=float)
    m = h_rg.shape[-1] if h_rg.ndim else 0
    if not (h_ur.shape[-1] == theta.shape[-1] == x.shape[-1] == m):
        raise ValueError(
            f"length mismatch: h_rg {h_rg.shape}, h_ur {h_ur.shape}, "
            f"theta {theta.shape}, x {x.shape}")
    if m and not np.all((x == 0.0) | (x == 1.0)):
        raise ValueError("on-off entries must be 0 or 1")
    return complex(h_ug + np.sum(np.conj(h_rg) * x * np.exp(1j * theta) * h_ur))


def effective_channels(chans: ChannelSet, theta: np.ndarray, x: np.ndarray) -> np.ndarray:
    """(K,) effective gains for every GU from a prebuilt ChannelSet."""
    reflect = (np.conj(chans.ris_gu) * chans.uav_ris[None, :]) @ (
        np.asarray(x, dtype=float) * np.exp(1j * np.asarray(theta, dtype=float)))
    return chans.direct + reflect
