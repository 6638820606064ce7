"""Adaptive embedded Runge-Kutta stepping for complex matrix ODEs.

A Dormand-Prince 5(4) pair drives every master-equation integration in
this package.  The 5th-order solution is propagated; the embedded
4th-order difference controls the step.  Error control uses the max-norm
of the state (density matrices have entries bounded by one, so a uniform
elementwise scale is appropriate).

Steps are clipped to user-supplied breakpoints (piecewise definitions of
the right-hand side, e.g. field-ramp kinks or Hamiltonian switches) so no
stage ever straddles a non-smooth point, and to the reporting grid, which
keeps the output bitwise reproducible run to run.
"""

from __future__ import annotations

from typing import Callable, Iterable

import numpy as np

__all__ = ["NumericalError", "solve_adaptive"]


class NumericalError(RuntimeError):
    """Raised when step control cannot satisfy the requested tolerance."""


# Dormand-Prince 5(4) extended Butcher tableau (FSAL)
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)
_ERR = _B5 - _B4

_MIN_STEP = 1e-9  # us; below this the integration aborts
_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


def solve_adaptive(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    y0: np.ndarray,
    t_span: tuple[float, float],
    t_report: np.ndarray,
    rtol: float = 1e-8,
    atol: float = 1e-10,
    max_step: float = 0.1,
    breakpoints: Iterable[float] = (),
) -> tuple[np.ndarray, dict]:
    """Integrate ``dy/dt = rhs(t, y)`` and sample ``y`` on ``t_report``.

    ``y0`` may be any complex array (matrices included); the rhs must
    return the same shape.  ``t_report`` must be ascending and contained
    in ``t_span``.  Returns ``(samples, stats)`` where ``samples`` has
    shape ``(len(t_report), *y0.shape)`` and ``stats`` records accepted /
    rejected step counts.

    Raises :class:`NumericalError` on step underflow (the tolerance cannot
    be met with steps above 1e-9 us).
    """
    t0, t1 = float(t_span[0]), float(t_span[1])
    if t1 <= t0:
        raise ValueError("t_span must have positive duration")
    if rtol <= 0 or atol <= 0:
        raise ValueError("tolerances must be positive")
    if max_step <= 0:
        raise ValueError("max_step must be positive")
    t_report = np.asarray(t_report, dtype=float)
    if t_report.size == 0:
        raise ValueError("empty reporting grid")
    if t_report[0] < t0 - 1e-12 or t_report[-1] > t1 + 1e-12:
        raise ValueError("reporting grid must lie inside t_span")

    # merged sorted list of times a step may not straddle
    stops = np.unique(
        np.concatenate(
            [t_report, np.asarray(list(breakpoints), dtype=float), [t0, t1]]
        )
    )
    stops = stops[(stops >= t0) & (stops <= t1)]

    y = np.array(y0, dtype=complex)
    t = t0
    samples = np.empty((t_report.size, *y.shape), dtype=complex)
    i_report = 0
    if abs(t_report[0] - t0) <= 1e-12:
        samples[0] = y
        i_report = 1
    i_stop = int(np.searchsorted(stops, t0, side="right"))

    k = np.empty((7, *y.shape), dtype=complex)
    k[0] = rhs(t, y)
    n_accept = 0
    n_reject = 0
    dt = _initial_step(rhs, t, y, k[0], rtol, atol, max_step)

    while t < t1 - 1e-14:
        # stops strictly ahead of t (with a minimum-step margin, so a
        # clipped step is never shorter than _MIN_STEP)
        while i_stop < stops.size and stops[i_stop] <= t + _MIN_STEP:
            i_stop += 1
        next_stop = stops[i_stop] if i_stop < stops.size else t1
        dt = min(dt, max_step)
        if dt < _MIN_STEP:
            raise NumericalError(
                f"step underflow at t = {t:.6f} us (dt = {dt:.3e} us); "
                "tolerance cannot be met"
            )
        if t + dt >= next_stop - _MIN_STEP:
            dt_step = next_stop - t
            clipped = True
        else:
            dt_step = dt
            clipped = False

        for s in range(1, 7):
            y_stage = y + dt_step * np.tensordot(_A[s], k[:s], axes=(0, 0))
            k[s] = rhs(t + _C[s] * dt_step, y_stage)
        y_new = y + dt_step * np.tensordot(_B5, k, axes=(0, 0))
        err_vec = dt_step * np.tensordot(_ERR, k, axes=(0, 0))
        scale = atol + rtol * max(np.abs(y).max(), np.abs(y_new).max())
        err = np.abs(err_vec).max() / scale

        if err <= 1.0:
            t = next_stop if clipped else t + dt_step
            y = y_new
            k[0] = k[6]  # FSAL
            n_accept += 1
            while i_report < t_report.size and t_report[i_report] <= t + 1e-12:
                samples[i_report] = y
                i_report += 1
            if not clipped:
                grow = _MAX_FACTOR if err == 0.0 else _SAFETY * err ** (-0.2)
                dt = dt_step * min(_MAX_FACTOR, max(_MIN_FACTOR, grow))
            # after a clipped accept keep the error-controlled candidate
        else:
            n_reject += 1
            dt = dt_step * max(_MIN_FACTOR, _SAFETY * err ** (-0.2))

    if i_report != t_report.size:
        raise NumericalError("integration ended before covering the reporting grid")

    stats = {"n_accepted": n_accept, "n_rejected": n_reject}
    return samples, stats


def _initial_step(rhs, t0, y0, f0, rtol, atol, max_step) -> float:
    """Conservative first-step heuristic from the scaled rhs magnitude."""
    scale = atol + rtol * max(np.abs(y0).max(), 1e-30)
    d0 = np.abs(y0).max() / scale
    d1 = np.abs(f0).max() / scale
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    return min(h0, max_step)
