"""Tolerance-checked property suite behind the ``verify`` commands.

Each check produces a row (name, measured value, comparator, tolerance);
the CLI renders rows as a fixed-format table and the acceptance tests
assert them individually.  Informational rows (no comparator) report
measured characterizations that are not hard-asserted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import bargmann, cortex, heisenberg
from .angular import AngularSignal, angle_grid, harmonic, inner_product
from .grid2d import Field2D, GridSpec
from .se2 import GroupElement, compose, fiducial, represent, uncertainty_residual

__all__ = ["CheckRow", "VerifyConfig", "run_suite", "bargmann_suite", "bridge_suite"]


@dataclass(frozen=True)
class CheckRow:
    name: str
    value: float
    cmp: str | None = "<="        # "<=", ">=", or None for an INFO row
    tol: float | None = None

    @property
    def passed(self) -> bool | None:
        if self.cmp is None or self.tol is None:
            return None
        if self.cmp == "<=":
            return bool(self.value <= self.tol)
        return bool(self.value >= self.tol)


@dataclass
class VerifyConfig:
    n: int = 256
    ring_bins: int = 16
    lambda_omega: float = 1.0
    sigma: float = 8.0
    seed: int = 0
    n_phi: int = 256
    n_theta: int = 64
    n_alpha: int = 16
    tolerances: dict = field(default_factory=dict)

    def tol(self, key: str, default: float) -> float:
        return float(self.tolerances.get(key, default))

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.n, 1.0)

    @property
    def omega(self) -> float:
        return 2.0 * np.pi * self.ring_bins / self.grid.length

    @property
    def lam(self) -> float:
        return self.lambda_omega / self.omega


def _random_bandlimited(rng: np.random.Generator, n: int, order: int = 10) -> AngularSignal:
    coeffs = rng.normal(size=2 * order + 1) + 1j * rng.normal(size=2 * order + 1)
    phis = angle_grid(n)
    vals = np.zeros(n, dtype=complex)
    for m in range(-order, order + 1):
        vals += coeffs[m + order] * np.exp(1j * m * phis)
    return AngularSignal(vals)


def _smooth_ring_field(rng: np.random.Generator, grid: GridSpec, omega: float,
                       rel_width: float = 0.2, order: int = 6) -> Field2D:
    # random field whose spectrum is smooth at the bin scale (bicubic-friendly)
    k = 2.0 * np.pi * np.fft.fftfreq(grid.n, d=grid.h)
    kk = np.sqrt(k[:, None] ** 2 + k[None, :] ** 2)
    ang = np.arctan2(k[None, :], k[:, None])
    coeffs = rng.normal(size=2 * order + 1) + 1j * rng.normal(size=2 * order + 1)
    angular = np.zeros((grid.n, grid.n), dtype=complex)
    for m in range(-order, order + 1):
        angular += coeffs[m + order] * np.exp(1j * m * ang)
    spec = np.exp(-(((kk - omega) / (rel_width * omega)) ** 2)) * angular
    vals = np.fft.ifft2(spec)
    return Field2D(vals / np.linalg.norm(vals), h=grid.h)


# ---------------------------------------------------------------- isometry


def isometry_battery(cfg: VerifyConfig, n_signals: int = 20) -> float:
    """Worst isometry defect over harmonics and random band-limited signals."""
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for lam_om in (0.5, 1.0, 2.0):
        lam = lam_om / cfg.omega
        for i in range(n_signals):
            if i < 10:
                sig = harmonic(i + 1, 64)
            else:
                sig = _random_bandlimited(rng, 64)
            worst = max(worst, bargmann.isometry_defect(sig, lam, cfg.omega, 64))
    return worst


def inversion_battery(cfg: VerifyConfig, n_signals: int = 10) -> float:
    """Worst relative L2 round-trip error over random band-limited signals."""
    rng = np.random.default_rng(cfg.seed + 1)
    worst = 0.0
    for _ in range(n_signals):
        sig = _random_bandlimited(rng, cfg.n_phi)
        fld = bargmann.transform(sig, cfg.lam, cfg.omega, cfg.grid, cfg.n_theta)
        rec = bargmann.inverse_transform(fld, n_phi=cfg.n_phi)
        err = np.linalg.norm(rec.values - sig.values) / np.linalg.norm(sig.values)
        worst = max(worst, float(err))
    return worst


def cr_convergence(cfg: VerifyConfig, ring_bins: int = 8):
    """(residual at n, residual at 2n, ratio) for one transform at fixed L."""
    rng = np.random.default_rng(cfg.seed + 2)
    length = float(cfg.n)
    omega = 2.0 * np.pi * ring_bins / length
    lam = cfg.lambda_omega / omega
    sig = _random_bandlimited(rng, 128)
    res = {}
    for n in (cfg.n // 2, cfg.n):
        grid = GridSpec(n, length / n)
        fld = bargmann.transform(sig, lam, omega, grid, cfg.n_theta)
        res[n] = bargmann.cr_residual(fld)
    return res[cfg.n // 2], res[cfg.n], res[cfg.n // 2] / res[cfg.n]


def cr_negative_control(cfg: VerifyConfig) -> float:
    rng = np.random.default_rng(cfg.seed + 3)
    vals = rng.normal(size=(cfg.n_theta, 128, 128)) + 1j * rng.normal(
        size=(cfg.n_theta, 128, 128)
    )
    noise = bargmann.SE2Field(vals, lam=cfg.lam, omega=cfg.omega, h=1.0)
    return bargmann.cr_residual(noise)


# ---------------------------------------------------------------- cortex


def lemma_route_gap(cfg: VerifyConfig, n_seeds: int = 5) -> float:
    """Max pointwise gap between the transform route over two and the kernel route."""
    worst = 0.0
    grid = GridSpec(cfg.n // 2, 1.0)
    omega = 2.0 * np.pi * 8 / grid.length
    lam = cfg.lambda_omega / omega
    for seed in range(cfg.seed, cfg.seed + n_seeds):
        pn = cortex.sample_phases(seed, 64)
        fld = cortex.coherent_field(pn, lam, omega, grid, n_theta=8)
        via_field = cortex.activity_map(fld, 0.0).values
        direct = cortex.activity_map_direct(pn, lam, omega, 0.0, grid).values
        gap = np.abs(via_field / 2.0 - direct).max() / np.abs(direct).max()
        worst = max(worst, float(gap))
    return worst


def symmetry_gaps(cfg: VerifyConfig):
    """(antisymmetry gap, pi-periodicity gap) of model activity maps."""
    grid = GridSpec(cfg.n // 2, 1.0)
    omega = 2.0 * np.pi * 8 / grid.length
    lam = cfg.lambda_omega / omega
    pn = cortex.sample_phases(cfg.seed, 64)
    fld = cortex.coherent_field(pn, lam, omega, grid, n_theta=16)
    anti = 0.0
    peri = 0.0
    for theta in (0.0, np.pi / 8.0, np.pi / 4.0):
        a = cortex.activity_map(fld, theta).values
        scale = np.abs(a).max()
        anti = max(anti, np.abs(cortex.activity_map(fld, theta + np.pi / 2).values + a).max() / scale)
        peri = max(peri, np.abs(cortex.activity_map(fld, theta + np.pi).values - a).max() / scale)
    return float(anti), float(peri)


def colorcode_roundtrip_gap(cfg: VerifyConfig) -> float:
    """Orientation error of encode -> stack -> decode on a random smooth map."""
    rng = np.random.default_rng(cfg.seed + 4)
    n = 64
    base = rng.uniform(0.0, np.pi, size=(n, n))
    om = cortex.OrientationMap(base, cfg.omega, np.ones((n, n), dtype=bool))
    alphas = np.pi * np.arange(cfg.n_alpha) / cfg.n_alpha
    maps = np.stack([cortex.activities_from_orientation(om, a).values for a in alphas])
    stack = cortex.ActivityStack(maps, lam=cfg.lam, omega=cfg.omega)
    rec = cortex.orientation_from_activities(stack)
    diff = np.abs(np.mod(rec.values - om.values + np.pi / 2, np.pi) - np.pi / 2)
    return float(diff.max())


def v_kernel_correlation(lam_omega: float = 1.0, n: int = 256) -> float:
    phis = angle_grid(n)
    v = cortex.v_potential(phis, lam_omega)
    c = np.cos(2.0 * phis)
    return float(np.dot(v, c) / (np.linalg.norm(v) * np.linalg.norm(c)))


def empirical_correlation(cfg: VerifyConfig) -> float:
    """Pearson correlation of grating-kernel and model-kernel activity maps."""
    grid = GridSpec(cfg.n // 2, 1.0)
    omega = 2.0 * np.pi * 8 / grid.length
    lam = 1.0 / omega
    pn = cortex.sample_phases(cfg.seed, 64)
    alpha = np.pi / 5.0
    a = cortex.empirical_activity(pn, omega, alpha, grid).values.ravel()
    b = cortex.activity_map_direct(pn, lam, omega, alpha, grid).values.ravel()
    a = a - a.mean()
    b = b - b.mean()
    return float(np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b)))


def opm_ring_fraction_median(cfg: VerifyConfig, n_seeds: int = 10) -> float:
    fractions = []
    for seed in range(cfg.seed, cfg.seed + n_seeds):
        pn = cortex.sample_phases(seed, cfg.n_phi // 2)
        om = cortex.orientation_random_phase(pn, cfg.omega, cfg.grid)
        e2 = Field2D(np.exp(2j * om.values), h=1.0)
        fractions.append(cortex.spectrum_ring_fraction(e2, cfg.omega, 0.15))
    return float(np.median(fractions))


def stability_median_shift(cfg: VerifyConfig) -> float:
    """Median orientation change between lam*omega = 0.8 and 1.2 (same seed)."""
    grid = GridSpec(cfg.n // 2, 1.0)
    omega = 2.0 * np.pi * 8 / grid.length
    pn = cortex.sample_phases(cfg.seed, 64)
    maps = []
    for lam_om in (0.8, 1.2):
        lam = lam_om / omega
        alphas = np.pi * np.arange(cfg.n_alpha) / cfg.n_alpha
        stack = np.stack(
            [cortex.activity_map_direct(pn, lam, omega, a, grid).values for a in alphas]
        )
        om_map = cortex.orientation_from_activities(
            cortex.ActivityStack(stack, lam=lam, omega=omega)
        )
        maps.append(om_map.values)
    diff = np.abs(np.mod(maps[0] - maps[1] + np.pi / 2, np.pi) - np.pi / 2)
    return float(np.median(diff))


def opm_bytes(cfg: VerifyConfig) -> bytes:
    """The gen-opm pipeline rendered to PPM bytes (determinism probe)."""
    from . import cli

    return cli.render_opm_ppm(cfg.seed, cfg.grid, cfg.omega, cfg.lam, cfg.n_phi // 2,
                              cfg.n_alpha)


# ---------------------------------------------------------------- representation


def representation_checks(cfg: VerifyConfig):
    """(unitarity gap, homomorphism gap) on random band-limited signals."""
    rng = np.random.default_rng(cfg.seed + 5)
    sig = _random_bandlimited(rng, 128)
    base = np.sqrt(inner_product(sig, sig).real)
    g1 = GroupElement((rng.normal(), rng.normal()), rng.uniform(0, 2 * np.pi))
    g2 = GroupElement((rng.normal(), rng.normal()), rng.uniform(0, 2 * np.pi))
    moved = represent(cfg.omega, 0.0, g1, sig)
    unit_gap = abs(np.sqrt(inner_product(moved, moved).real) - base) / base
    lhs = represent(cfg.omega, 0.0, g1, represent(cfg.omega, 0.0, g2, sig))
    rhs = represent(cfg.omega, 0.0, compose(g1, g2), sig)
    hom_gap = np.abs(lhs.values - rhs.values).max() / np.abs(rhs.values).max()
    return float(unit_gap), float(hom_gap)


# ---------------------------------------------------------------- suites


def run_suite(cfg: VerifyConfig) -> list[CheckRow]:
    rows: list[CheckRow] = []

    rows.append(CheckRow("isometry-defect-max", isometry_battery(cfg),
                         "<=", cfg.tol("isometry", 1e-10)))
    rows.append(CheckRow("inversion-roundtrip-max", inversion_battery(cfg),
                         "<=", cfg.tol("inversion", 1e-3)))

    coarse, fine, ratio = cr_convergence(cfg)
    rows.append(CheckRow("cr-residual-fine", fine, "<=", cfg.tol("cr", 1e-2)))
    rows.append(CheckRow("cr-halving-ratio-gap", abs(ratio - 4.0), "<=",
                         cfg.tol("cr-ratio", 0.5)))
    rows.append(CheckRow("cr-noise-control", cr_negative_control(cfg), ">=",
                         cfg.tol("cr-noise", 0.5)))

    rng = np.random.default_rng(cfg.seed + 6)
    f = _smooth_ring_field(rng, cfg.grid, cfg.omega)
    bridge = heisenberg.teo_bridge_report(f, cfg.sigma, cfg.omega,
                                          n_phi=cfg.n_phi, n_theta=cfg.n_theta)
    rows.append(CheckRow("bridge-defect", bridge.defect, "<=", cfg.tol("bridge", 5e-2)))
    rows.append(CheckRow("bridge-scale-error",
                         abs(abs(bridge.measured_scale) / bridge.expected_scale - 1.0),
                         "<=", cfg.tol("bridge-scale", 2e-2)))
    p = (cfg.omega * np.cos(0.5), cfg.omega * np.sin(0.5))
    diagram = heisenberg.diagram_report(f, cfg.sigma, cfg.omega, p, n_phi=cfg.n_phi)
    rows.append(CheckRow("diagram-defect", diagram.defect, "<=", cfg.tol("diagram", 5e-2)))
    rows.append(CheckRow("diagram-ratio-error",
                         abs(abs(diagram.measured_ratio) / diagram.expected_ratio - 1.0),
                         "<=", cfg.tol("diagram-ratio", 2e-2)))

    rows.append(CheckRow("activity-route-gap", lemma_route_gap(cfg), "<=",
                         cfg.tol("routes", 1e-9)))
    anti, peri = symmetry_gaps(cfg)
    rows.append(CheckRow("activity-antisymmetry", anti, "<=", cfg.tol("symmetry", 1e-10)))
    rows.append(CheckRow("activity-pi-period", peri, "<=", cfg.tol("symmetry", 1e-10)))
    rows.append(CheckRow("colorcode-roundtrip", colorcode_roundtrip_gap(cfg), "<=",
                         cfg.tol("colorcode", 1e-10)))
    rows.append(CheckRow("v-kernel-correlation", v_kernel_correlation(), ">=",
                         cfg.tol("vcorr", 0.99)))
    rows.append(CheckRow("empirical-correlation", empirical_correlation(cfg), ">=",
                         cfg.tol("empirical", 0.99)))
    rows.append(CheckRow("opm-ring-fraction-median", opm_ring_fraction_median(cfg),
                         ">=", cfg.tol("ringfrac", 0.8)))

    unit_gap, hom_gap = representation_checks(cfg)
    rows.append(CheckRow("representation-unitarity", unit_gap, "<=",
                         cfg.tol("unitarity", 1e-11)))
    rows.append(CheckRow("representation-homomorphism", hom_gap, "<=",
                         cfg.tol("homomorphism", 1e-10)))

    first = opm_bytes(cfg)
    second = opm_bytes(cfg)
    rows.append(CheckRow("gen-opm-determinism", 0.0 if first == second else 1.0,
                         "<=", 0.0))

    rows.append(CheckRow("stability-median-shift", stability_median_shift(cfg),
                         None, None))
    return rows


def bargmann_suite(cfg: VerifyConfig) -> list[CheckRow]:
    """Transform-focused battery for the ``verify-bargmann`` subcommand."""
    rows: list[CheckRow] = []
    rng = np.random.default_rng(cfg.seed)
    rows.append(CheckRow("isometry-defect-max", isometry_battery(cfg, n_signals=10),
                         "<=", cfg.tol("isometry", 1e-10)))

    sig = _random_bandlimited(rng, cfg.n_phi)
    fld = bargmann.transform(sig, cfg.lam, cfg.omega, cfg.grid, cfg.n_theta)
    rec = bargmann.inverse_transform(fld, n_phi=cfg.n_phi)
    rows.append(CheckRow(
        "inversion-roundtrip",
        float(np.linalg.norm(rec.values - sig.values) / np.linalg.norm(sig.values)),
        "<=", cfg.tol("inversion", 1e-3)))

    rows.append(CheckRow("cr-residual", bargmann.cr_residual(fld), "<=",
                         cfg.tol("cr", 5e-2)))

    # linearity of the transform
    sig2 = _random_bandlimited(rng, cfg.n_phi)
    mix = AngularSignal(0.7 * sig.values - 1.3j * sig2.values)
    fld2 = bargmann.transform(sig2, cfg.lam, cfg.omega, cfg.grid, cfg.n_theta)
    fld_mix = bargmann.transform(mix, cfg.lam, cfg.omega, cfg.grid, cfg.n_theta)
    lin_gap = np.abs(
        fld_mix.values - (0.7 * fld.values - 1.3j * fld2.values)
    ).max() / np.abs(fld_mix.values).max()
    rows.append(CheckRow("linearity", float(lin_gap), "<=", cfg.tol("linearity", 1e-12)))

    # quadrature route against the inner-product route at probe points
    fid = fiducial(cfg.lam, cfg.omega, 0.0, cfg.n_phi)
    worst = 0.0
    thetas = fld.thetas
    for t in (0, cfg.n_theta // 3):
        for (i, j) in ((3, 5), (70, 11)):
            g = GroupElement((i * 1.0, j * 1.0), thetas[t])
            direct = inner_product(represent(cfg.omega, 0.0, g, fid.signal), sig)
            worst = max(worst, abs(fld.values[t, i, j] - direct))
    scale = np.abs(fld.values).max()
    rows.append(CheckRow("two-route-equality", worst / scale, "<=",
                         cfg.tol("two-route", 1e-12)))

    # theta-profiles of the ring kernel solve the minimal-uncertainty equation
    g_kernel = bargmann.fourier_side(sig, cfg.lam, cfg.omega, cfg.n_theta)
    prof = AngularSignal(g_kernel.values[5] / np.abs(g_kernel.values[5]).max())
    phis = angle_grid(cfg.n_phi)
    resid = uncertainty_residual(prof, cfg.lambda_omega, phi0=phis[5])
    rows.append(CheckRow("kernel-theta-profile-ode", resid, "<=",
                         cfg.tol("profile", 1e-8)))
    return rows


def bridge_suite(cfg: VerifyConfig, p_abs: float | None = None) -> list[CheckRow]:
    """Bridge/diagram battery for the ``verify-bridge`` subcommand."""
    rng = np.random.default_rng(cfg.seed)
    f = _smooth_ring_field(rng, cfg.grid, cfg.omega)
    rows: list[CheckRow] = []
    bridge = heisenberg.teo_bridge_report(f, cfg.sigma, cfg.omega, p_abs,
                                          n_phi=cfg.n_phi, n_theta=cfg.n_theta)
    rows.append(CheckRow("bridge-defect", bridge.defect, "<=", cfg.tol("bridge", 5e-2)))
    rows.append(CheckRow("bridge-scale-error",
                         abs(abs(bridge.measured_scale) / bridge.expected_scale - 1.0),
                         "<=", cfg.tol("bridge-scale", 2e-2)))
    rows.append(CheckRow("bridge-scale-measured", abs(bridge.measured_scale), None, None))
    rows.append(CheckRow("bridge-scale-closed-form", bridge.expected_scale, None, None))
    p_val = cfg.omega if p_abs is None else p_abs
    p = (p_val * np.cos(0.5), p_val * np.sin(0.5))
    diagram = heisenberg.diagram_report(f, cfg.sigma, cfg.omega, p, n_phi=cfg.n_phi)
    rows.append(CheckRow("diagram-defect", diagram.defect, "<=", cfg.tol("diagram", 5e-2)))
    rows.append(CheckRow("diagram-ratio-error",
                         abs(abs(diagram.measured_ratio) / diagram.expected_ratio - 1.0),
                         "<=", cfg.tol("diagram-ratio", 2e-2)))
    dp = 0.25 * 2.0 * np.pi / cfg.grid.length   # quarter-bin stencil, O(dp^2)
    rows.append(CheckRow("holomorphy-residual",
                         heisenberg.holomorphy_residual(f, cfg.sigma, p, dp), "<=",
                         cfg.tol("holomorphy", 1e-2)))
    rows.append(CheckRow("cr-restriction-residual",
                         heisenberg.cr_restriction_residual(f, cfg.sigma, cfg.omega,
                                                            cfg.n_theta),
                         "<=", cfg.tol("cr", 5e-2)))
    return rows
