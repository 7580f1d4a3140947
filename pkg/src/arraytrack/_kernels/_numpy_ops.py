"""Pure-numpy grid kernels (fallback backend).

Same contracts as the compiled backend in ``_grid_ops.pyx``; see
``arraytrack._kernels`` for the shared signatures.
"""

import numpy as np


def response_power_grid(pos_x, pos_y, weights, wavenumber, az_rad, el_rad,
                        element_kind, element_exponent):
    "|element amplitude * sum_n w_n exp(j k (x_n u + y_n v))|^2 on the az x el grid."
    az = np.asarray(az_rad, dtype=np.float64)
    el = np.asarray(el_rad, dtype=np.float64)
    sin_az = np.sin(az)[:, None]
    cos_az = np.cos(az)[:, None]
    cos_el = np.cos(el)[None, :]
    u = cos_el * sin_az
    v = np.broadcast_to(np.sin(el)[None, :], u.shape)
    w = cos_el * cos_az

    phase = wavenumber * (
        np.asarray(pos_x)[:, None] * u.reshape(1, -1)
        + np.asarray(pos_y)[:, None] * v.reshape(1, -1)
    )
    field = np.asarray(weights) @ np.exp(1j * phase)
    af_power = np.abs(field.reshape(u.shape)) ** 2

    if element_kind == 0:
        amp2 = np.where(w >= 0.0, 1.0, 0.0)
    else:
        amp2 = np.where(w >= 0.0, np.maximum(w, 0.0) ** (2.0 * element_exponent), 0.0)
    return amp2 * af_power


def music_inverse_power_grid(pos_x, pos_y, projector, wavenumber, az_rad, el_rad):
    "Re(a^H P a) on the az x el grid for a Hermitian projector P."
    az = np.asarray(az_rad, dtype=np.float64)
    el = np.asarray(el_rad, dtype=np.float64)
    u = (np.cos(el)[None, :] * np.sin(az)[:, None]).reshape(-1)
    v = np.broadcast_to(np.sin(el)[None, :], (az.size, el.size)).reshape(-1)

    a = np.exp(
        1j * wavenumber * (np.asarray(pos_x)[:, None] * u[None, :]
                           + np.asarray(pos_y)[:, None] * v[None, :])
    )
    denom = np.einsum("np,np->p", a.conj(), np.asarray(projector) @ a).real
    return denom.reshape(az.size, el.size)
