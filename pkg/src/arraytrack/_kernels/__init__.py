"""Grid-evaluation kernels: compiled extension with a numpy fallback.

Both backends expose the same two functions:

``response_power_grid(pos_x, pos_y, weights, wavenumber, az_rad, el_rad,
element_kind, element_exponent)``
    Radiated power |amp(el_model) * sum_n w_n exp(j k (x_n u + y_n v))|^2
    over the outer product of the angle grids, shape (len(az), len(el)).
    ``element_kind``: 0 isotropic, 1 cosine-power; amplitude is 0 behind
    the array plane (w < 0).

``music_inverse_power_grid(pos_x, pos_y, projector, wavenumber, az_rad, el_rad)``
    Re(a^H P a) over the grid for a Hermitian N x N projector, where a is
    the array steering vector at each grid direction.

The compiled backend is preferred when importable. Set
``ARRAYTRACK_KERNELS=numpy`` or ``=compiled`` to force one.
"""

import os

_requested = os.environ.get("ARRAYTRACK_KERNELS", "auto").strip().lower()

if _requested not in ("auto", "compiled", "numpy"):
    raise ImportError(
        f"ARRAYTRACK_KERNELS must be 'auto', 'compiled' or 'numpy', got {_requested!r}"
    )

if _requested == "numpy":
    from arraytrack._kernels._numpy_ops import music_inverse_power_grid, response_power_grid

    backend = "numpy"
else:
    try:
        from arraytrack._kernels._grid_ops import music_inverse_power_grid, response_power_grid

        backend = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        from arraytrack._kernels._numpy_ops import music_inverse_power_grid, response_power_grid

        backend = "numpy"

__all__ = ["backend", "music_inverse_power_grid", "response_power_grid"]
