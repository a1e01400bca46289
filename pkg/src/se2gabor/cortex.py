"""Generative model of orientation-tuned cortical activity maps.

A seeded bank of random phases drives a superposition of plane waves at a
single spatial frequency.  The coherent-state transform of the phase
signal yields a complex field on the group, whose real combinations at
orthogonal angles are the activity maps; the half-angle argument of the
orientation-weighted vector sum is the orientation preference map (OPM),
with pinwheel centers flagged where the resultant vanishes.

All generators are pure functions of ``(seed, parameters)``; the phase
bank uses numpy's PCG64 so identical seeds give bit-identical maps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angular import AngularSignal, angle_grid
from .bargmann import SE2Field, normalization, transform
from .grid2d import Field2D, GridSpec, check_ring_radius, plane_wave_basis, ring_power_fraction

__all__ = [
    "PhaseNoise",
    "sample_phases",
    "OrientationMap",
    "ActivityStack",
    "random_wave_image",
    "coherent_field",
    "v_potential",
    "activity_map",
    "activity_map_direct",
    "empirical_activity",
    "orientation_from_activities",
    "activities_from_orientation",
    "orientation_random_phase",
    "spectrum_ring_fraction",
    "orientation_rgb",
]


@dataclass(frozen=True)
class PhaseNoise:
    """Seeded uniform phases on ``[0, 2pi)`` at angles ``phi_j = pi*j/n``.

    The half-period bank extends antisymmetrically to the full circle:
    the phase at ``phi + pi`` is minus the phase at ``phi``.
    """

    seed: int
    phases: np.ndarray

    def __post_init__(self):
        phases = np.asarray(self.phases, dtype=float)
        if phases.ndim != 1 or phases.size < 16:
            raise ValueError(f"need at least 16 phases, got shape {phases.shape}")
        phases = phases.copy()
        phases.setflags(write=False)
        object.__setattr__(self, "phases", phases)

    @property
    def n(self) -> int:
        return self.phases.size

    @property
    def angles(self) -> np.ndarray:
        return np.pi * np.arange(self.n) / self.n

    def extended_phases(self) -> np.ndarray:
        """Phases on the full circle with the antisymmetric rule."""
        return np.concatenate([self.phases, -self.phases])

    def circle_signal(self) -> AngularSignal:
        """The unit-modulus signal ``e^{i phase(phi)}`` on ``2n`` circle samples."""
        return AngularSignal(np.exp(1j * self.extended_phases()))


def sample_phases(seed: int, n: int) -> PhaseNoise:
    """Draw ``n`` i.i.d. uniform-[0, 2pi) phases from PCG64 with the given seed."""
    if n < 16:
        raise ValueError(f"need n >= 16, got {n}")
    rng = np.random.default_rng(seed)
    return PhaseNoise(seed, rng.uniform(0.0, 2.0 * np.pi, n))


@dataclass(frozen=True)
class OrientationMap:
    """Preferred orientation in ``[0, pi)`` per pixel, plus a pinwheel mask.

    ``confidence`` is False where the orientation vector sum had near-zero
    resultant (pinwheel centers), in which case the orientation is set to 0.
    """

    values: np.ndarray
    omega: float
    confidence: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        conf = np.asarray(self.confidence, dtype=bool)
        if vals.shape != conf.shape or vals.ndim != 2:
            raise ValueError("values and confidence must be equal-shape 2-d arrays")
        vals = np.mod(vals, np.pi)
        vals.setflags(write=False)
        conf = conf.copy()
        conf.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "confidence", conf)


@dataclass(frozen=True)
class ActivityStack:
    """Real maps ``A_alpha`` at grating angles ``alpha_j = pi*j/n_alpha``."""

    maps: np.ndarray
    lam: float
    omega: float

    def __post_init__(self):
        maps = np.asarray(self.maps, dtype=float)
        if maps.ndim != 3:
            raise ValueError(f"need shape (n_alpha, n, n), got {maps.shape}")
        maps = maps.copy()
        maps.setflags(write=False)
        object.__setattr__(self, "maps", maps)

    @property
    def n_alpha(self) -> int:
        return self.maps.shape[0]

    @property
    def alphas(self) -> np.ndarray:
        return np.pi * np.arange(self.n_alpha) / self.n_alpha


def _half_circle_cos_sum(
    pn: PhaseNoise,
    extra: np.ndarray,
    omega: float,
    grid: GridSpec,
) -> np.ndarray:
    """``(pi/n) sum_j extra_j cos(omega q.n(phi_j) + phase_j)`` over the grid.

    The cosine splits into two separable complex plane-wave sums, which is
    what keeps map generation at matrix-multiply cost.
    """
    basis = plane_wave_basis(omega, 2 * pn.n, grid)
    a = basis[0][: pn.n]
    b = basis[1][: pn.n]
    pos = 0.5 * extra * np.exp(1j * pn.phases)
    vals = (pos[:, None] * a).T @ b
    return (np.pi / pn.n) * 2.0 * vals.real


def random_wave_image(pn: PhaseNoise, omega: float, grid: GridSpec) -> Field2D:
    """Real retinal image: equal-weight superposition of random-phase waves.

    ``f(x) = integral_0^pi cos(omega x.n(phi) + phase(phi)) dphi``; the
    spectrum concentrates on the ring ``|k| = omega``.
    """
    check_ring_radius(omega, grid)
    return Field2D(_half_circle_cos_sum(pn, np.ones(pn.n), omega, grid), h=grid.h)


def coherent_field(
    pn: PhaseNoise,
    lam: float,
    omega: float,
    grid: GridSpec,
    n_theta: int = 64,
) -> SE2Field:
    """Coherent-state transform of the unit-modulus phase signal.

    The antisymmetric extension supplies the full-circle signal
    ``e^{i phase(phi)}``; the fiducial normalization is included (every
    downstream use is scale-invariant).  The result inherits the
    first-order structure of genuine transforms.
    """
    return transform(pn.circle_signal(), lam, omega, grid, n_theta)


def v_potential(phi, lam_omega: float):
    """Orientation-tuning kernel ``cosh(lam*omega*cos phi) - cosh(lam*omega*sin phi)``.

    Antisymmetric under quarter turns and, for ``lam*omega <~ 1``, close to
    ``cos(2 phi)`` up to a constant.
    """
    phi = np.asarray(phi, dtype=float)
    out = np.cosh(lam_omega * np.cos(phi)) - np.cosh(lam_omega * np.sin(phi))
    return out if out.ndim else float(out)


def _theta_index(field: SE2Field, theta: float) -> int | None:
    step = 2.0 * np.pi / field.n_theta
    idx = theta / step
    r = int(round(idx))
    if abs(idx - r) < 1e-9:
        return r % field.n_theta
    return None


def _slice_at(field: SE2Field, theta: float) -> np.ndarray:
    idx = _theta_index(field, theta)
    if idx is not None:
        return field.values[idx]
    # trigonometric interpolation along the theta axis
    m = np.fft.fftfreq(field.n_theta, d=1.0 / field.n_theta)
    hat = np.fft.fft(field.values, axis=0)
    mult = np.exp(1j * m * theta)
    mult[field.n_theta // 2] = np.cos(field.n_theta * theta / 2.0)
    return np.tensordot(mult, hat, axes=(0, 0)) / field.n_theta


def activity_map(field: SE2Field, theta: float) -> Field2D:
    """Real activity at orientation ``theta``: ``Re(F(q, theta) - F(q, theta + pi/2))``.

    Pi-periodic in ``theta`` with ``A_{theta+pi/2} = -A_theta``; built from
    on-grid slices when ``theta`` and ``theta + pi/2`` land on the theta
    lattice, otherwise by trigonometric interpolation.
    """
    a = _slice_at(field, theta)
    b = _slice_at(field, theta + np.pi / 2.0)
    return Field2D((a - b).real, h=field.h)


def activity_map_direct(
    pn: PhaseNoise,
    lam: float,
    omega: float,
    theta: float,
    grid: GridSpec,
) -> Field2D:
    """Activity at ``theta`` by direct half-circle quadrature against the kernel.

    ``A_theta(q) = N * integral_0^pi cos(omega q.n(phi) + phase(phi)) V(phi - theta) dphi``.
    The fiducial normalization ``N`` matches :func:`coherent_field`, so the
    transform route equals exactly twice this map (the factor 2 comes from
    folding the antisymmetric phase extension onto the half circle).
    """
    check_ring_radius(omega, grid)
    kern = normalization(lam, omega) * v_potential(pn.angles - theta, lam * omega)
    return Field2D(_half_circle_cos_sum(pn, kern, omega, grid), h=grid.h)


def empirical_activity(
    pn: PhaseNoise,
    omega: float,
    alpha: float,
    grid: GridSpec,
) -> Field2D:
    """Activity with the cosine grating kernel ``cos(2(phi - alpha))``.

    The kernel is the ``lam*omega -> 0`` shape of :func:`v_potential`, so
    these maps correlate with the model maps above 0.99 at
    ``lam*omega = 1``.
    """
    check_ring_radius(omega, grid)
    kern = np.cos(2.0 * (pn.angles - alpha))
    return Field2D(_half_circle_cos_sum(pn, kern, omega, grid), h=grid.h)


# resultant magnitudes below this fraction of the stack scale mark pinwheels
_PINWHEEL_REL_TOL = 1e-12


def orientation_from_activities(stack: ActivityStack) -> OrientationMap:
    """Half-angle argument of the orientation vector sum of a stack.

    ``theta(q) = (1/2) arg integral_0^pi e^{2 i alpha} A_alpha(q) dalpha``,
    reduced to ``[0, pi)``.  Pixels with near-zero resultant (pinwheel
    centers, or degenerate stacks) are flagged in the confidence mask and
    assigned orientation 0.
    """
    if stack.n_alpha < 8:
        raise ValueError(f"need at least 8 grating angles, got {stack.n_alpha}")
    weights = np.exp(2j * stack.alphas) * (np.pi / stack.n_alpha)
    resultant = np.tensordot(weights, stack.maps, axes=(0, 0))
    scale = np.abs(resultant).max()
    floor = _PINWHEEL_REL_TOL * (scale if scale > 0 else 1.0)
    confident = np.abs(resultant) > floor
    theta = np.where(confident, 0.5 * np.angle(resultant), 0.0)
    return OrientationMap(np.mod(theta, np.pi), stack.omega, confident)


def activities_from_orientation(om: OrientationMap, alpha: float) -> Field2D:
    """Grating response compatible with the color coding: ``cos(2(theta(q) - alpha))``."""
    return Field2D(np.cos(2.0 * (om.values - alpha)), h=1.0)


def orientation_random_phase(pn: PhaseNoise, omega: float, grid: GridSpec) -> OrientationMap:
    """OPM straight from the random phases.

    ``theta(q) = (1/2) arg integral_0^pi e^{2 i phi} cos(omega q.n(phi) + phase(phi)) dphi``.
    """
    check_ring_radius(omega, grid)
    basis = plane_wave_basis(omega, 2 * pn.n, grid)
    a = basis[0][: pn.n]
    b = basis[1][: pn.n]
    e2 = np.exp(2j * pn.angles)
    pos = 0.5 * e2 * np.exp(1j * pn.phases)
    neg = 0.5 * e2 * np.exp(-1j * pn.phases)
    resultant = (np.pi / pn.n) * (
        (pos[:, None] * a).T @ b + (neg[:, None] * a.conj()).T @ b.conj()
    )
    scale = np.abs(resultant).max()
    floor = _PINWHEEL_REL_TOL * (scale if scale > 0 else 1.0)
    confident = np.abs(resultant) > floor
    theta = np.where(confident, 0.5 * np.angle(resultant), 0.0)
    return OrientationMap(np.mod(theta, np.pi), omega, confident)


def spectrum_ring_fraction(f: Field2D, omega: float, rel_width: float) -> float:
    """Windowed spectral power fraction in the annulus ``|k| in omega*(1 +- rel_width)``.

    See :func:`se2gabor.grid2d.ring_power_fraction`; DC is excluded and a
    periodic Hann window suppresses box-leakage tails.
    """
    return ring_power_fraction(f, omega, rel_width)


def orientation_rgb(om: OrientationMap) -> np.ndarray:
    """Periodic color coding: hue ``2*theta/(2pi)``, full saturation.

    Flagged (pinwheel) pixels get zero value.  Returns uint8 RGB of shape
    ``(n, n, 3)``.
    """
    hue = np.mod(om.values / np.pi, 1.0)
    value = np.where(om.confidence, 1.0, 0.0)
    # manual HSV -> RGB at s = 1
    k = (hue * 6.0).astype(int) % 6
    frac = hue * 6.0 - np.floor(hue * 6.0)
    p = np.zeros_like(hue)
    q = 1.0 - frac
    t = frac
    r = np.choose(k, [1.0 + p, q, p, p, t, 1.0 + p])
    g = np.choose(k, [t, 1.0 + p, 1.0 + p, q, p, p])
    b = np.choose(k, [p, p, t, 1.0 + p, 1.0 + p, q])
    rgb = np.stack([r, g, b], axis=-1) * value[..., None]
    return np.clip(np.round(rgb * 255.0), 0, 255).astype(np.uint8)
