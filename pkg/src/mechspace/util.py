import numpy as np

#: Significant digits of every number written to a file or stdout.
SIGNIFICANT_DIGITS = 17


def format_float(value: float | np.floating) -> str:
    """Shortest stable text form with 17 significant digits.

    >>> format_float(0.1)
    '0.10000000000000001'
    >>> format_float(-0.0)
    '0'
    """
    value = float(value)
    if value == 0.0:
        return "0"
    return f"{value:.{SIGNIFICANT_DIGITS}g}"


def format_vector(values) -> str:
    return ",".join(format_float(v) for v in np.asarray(values, dtype=float).ravel())


# Fourth order first derivative stencils on a uniform grid
_FORWARD = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
_SKEWED = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0


def five_point_derivative(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth order derivative along axis 0 of samples with uniform step ``h``.

    Interior points use the central stencil; the first and last two points use
    one-sided stencils.
    """
    f = np.asarray(values, dtype=float)
    n = f.shape[0]
    if n < 5:
        raise ValueError(f"Expected at least 5 samples but received {n}")
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / 12.0
    d[0] = np.tensordot(_FORWARD, f[:5], axes=1)
    d[1] = np.tensordot(_SKEWED, f[:5], axes=1)
    d[-1] = -np.tensordot(_FORWARD, f[-1:-6:-1], axes=1)
    d[-2] = -np.tensordot(_SKEWED, f[-1:-6:-1], axes=1)
    return d / h
