"""The Euclidean motion group of the plane and its circle representation.

Group elements are pairs ``(q, theta)`` composing as
``(q', theta') . (q, theta) = (q' + r_{theta'} q, theta' + theta)``.
The unitary representation with frequency parameter ``omega`` acts on
circle signals as

    (rep(g) u)(phi) = e^{-i omega (q1 cos(phi - phi0) + q2 sin(phi - phi0))} u(phi - theta)

and the minimal-uncertainty fiducial states are the von-Mises-shaped bumps
``N e^{lam*omega*cos(phi - phi0)}`` solving
``(d/dphi + lam*omega*sin(phi - phi0)) u = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angular import (
    AngularSignal,
    angle_grid,
    bessel_j0,
    norm,
    rotate,
    spectral_derivative,
)

__all__ = [
    "GroupElement",
    "IDENTITY",
    "compose",
    "inverse",
    "exp_flow",
    "represent",
    "FiducialState",
    "fiducial",
    "algebra_x1",
    "algebra_x2",
    "uncertainty_residual",
]


@dataclass(frozen=True)
class GroupElement:
    """A rigid motion: translation ``q = (q1, q2)`` and rotation ``theta``."""

    q: tuple[float, float]
    theta: float

    def __post_init__(self):
        q = (float(self.q[0]), float(self.q[1]))
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "theta", float(np.mod(self.theta, 2.0 * np.pi)))


IDENTITY = GroupElement((0.0, 0.0), 0.0)


def _rot(theta: float, v: tuple[float, float]) -> tuple[float, float]:
    c, s = np.cos(theta), np.sin(theta)
    return (c * v[0] - s * v[1], s * v[0] + c * v[1])


def compose(a: GroupElement, b: GroupElement) -> GroupElement:
    """Group law ``a . b``: rotate b's translation by a's angle, then add."""
    rq = _rot(a.theta, b.q)
    return GroupElement((a.q[0] + rq[0], a.q[1] + rq[1]), a.theta + b.theta)


def inverse(g: GroupElement) -> GroupElement:
    rq = _rot(-g.theta, g.q)
    return GroupElement((-rq[0], -rq[1]), -g.theta)


def exp_flow(base: GroupElement, t: float, k: float) -> GroupElement:
    """Integral curve of ``X1 + k*X2`` from ``base``, in closed form.

    ``X1 = -sin(theta) d_q1 + cos(theta) d_q2`` and ``X2 = d_theta``, so the
    curve turns at rate ``k`` while translating at unit speed along the
    current ``(-sin theta, cos theta)`` direction; ``k = 0`` degenerates to a
    straight segment of length ``t``.
    """
    q1, q2 = base.q
    th0 = base.theta
    if k == 0.0:
        return GroupElement((q1 - t * np.sin(th0), q2 + t * np.cos(th0)), th0)
    th = th0 + k * t
    return GroupElement(
        (q1 + (np.cos(th) - np.cos(th0)) / k, q2 + (np.sin(th) - np.sin(th0)) / k),
        th,
    )


def represent(
    omega: float,
    phi0: float,
    g: GroupElement,
    u: AngularSignal,
) -> AngularSignal:
    """Apply the unitary representation ``rep(g)`` to a circle signal.

    Rotations off the angular grid are realized by Fourier interpolation
    (see :func:`se2gabor.angular.rotate`), so arbitrary ``theta`` columns
    can be produced; unitarity holds to ~1e-11 for band-limited signals.
    """
    phi = angle_grid(u.n)
    phase = np.exp(
        -1j * omega * (g.q[0] * np.cos(phi - phi0) + g.q[1] * np.sin(phi - phi0))
    )
    return AngularSignal(phase * rotate(u, g.theta).values)


@dataclass(frozen=True)
class FiducialState:
    """Unit-norm minimal-uncertainty state ``N e^{lam*omega*cos(phi - phi0)}``."""

    lam: float
    omega: float
    phi0: float
    signal: AngularSignal


def fiducial(lam: float, omega: float, phi0: float = 0.0, n: int = 256) -> FiducialState:
    """Build the normalized fiducial state with ``N = j0(-2i*lam*omega)^{-1/2}``.

    ``lam = 0`` is allowed and gives the flat state ``(2pi)^{-1/2}``, outside
    the concentration regime but a useful degenerate case.
    """
    if lam < 0 or omega <= 0:
        raise ValueError(f"need lam >= 0 and omega > 0, got lam={lam}, omega={omega}")
    nrm = 1.0 / np.sqrt(bessel_j0(-2j * lam * omega).real)
    values = nrm * np.exp(lam * omega * np.cos(angle_grid(n) - phi0))
    return FiducialState(lam, omega, phi0, AngularSignal(values))


def algebra_x1(omega: float, phi0: float, u: AngularSignal) -> AngularSignal:
    """Algebra operator of the translation direction: ``i*omega*sin(phi - phi0) * u``."""
    phi = angle_grid(u.n)
    return AngularSignal(1j * omega * np.sin(phi - phi0) * u.values)


def algebra_x2(u: AngularSignal) -> AngularSignal:
    """Algebra operator of the rotation direction: ``d/dphi``."""
    return spectral_derivative(u)


def uncertainty_residual(
    signal: AngularSignal | FiducialState,
    lam_omega: float | None = None,
    phi0: float = 0.0,
) -> float:
    """L2 norm of ``(d/dphi + lam*omega*sin(phi - phi0)) signal``.

    Near zero exactly for the fiducial states (limited by spectral-derivative
    truncation); accepts either a :class:`FiducialState` or a raw signal with
    explicit ``lam_omega``.
    """
    if isinstance(signal, FiducialState):
        lam_omega = signal.lam * signal.omega
        phi0 = signal.phi0
        signal = signal.signal
    elif lam_omega is None:
        raise ValueError("lam_omega is required for a raw AngularSignal")
    phi = angle_grid(signal.n)
    resid = (
        spectral_derivative(signal).values
        + lam_omega * np.sin(phi - phi0) * signal.values
    )
    return norm(AngularSignal(resid))
