"""Discrete surface grids: ingestion, synthesis, and empirical distributions.

A heightmap is a rectangular grid of local separations S(x, y) in nm.  From
it one extracts the empirical height distribution f(s) (histogram of
separations weighted by cell area) and the mean-squared-gradient
distribution g(s) (same histogram weighted additionally by |grad S|^2),
and fits the truncated-Gaussian roughness model.

Synthetic generators cover the model geometries: spherical cap, pyramid
and dome tilings, Gaussian-correlated random roughness, and additive
compositions of a cap with a modulation field (S = S_c + S_r, re-shifted
to contact).

Heightmaps are immutable after construction; all functions are pure.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import gaussian_filter
from scipy.optimize import least_squares
from scipy.special import erf

from .distributions import HeightDistribution, convolve
from .errors import FitError, InvalidParameterError, ParseError

__all__ = [
    "Heightmap",
    "EmpiricalDistribution",
    "GradientDistribution",
    "GaussianFit",
    "load_heightmap",
    "save_heightmap",
    "shift_to_contact",
    "empirical_distribution",
    "gradient_distribution",
    "fit_gaussian",
    "synthesize_surface",
    "distribution_from_histogram",
    "compose_gradient",
]

# Default histogram resolution: bin width = value range / 512.
DEFAULT_BIN_FRACTION = 512


@dataclass(frozen=True, eq=False)
class Heightmap:
    """Grid of separations; values[j, i] is S at row j (y), column i (x)."""

    dx: float
    dy: float
    values: np.ndarray
    contact_shifted: bool = False

    def __post_init__(self):
        if self.dx <= 0 or self.dy <= 0:
            raise InvalidParameterError("grid spacings must be positive")
        v = np.ascontiguousarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] < 2 or v.shape[1] < 2:
            raise InvalidParameterError("heightmap needs at least a 2x2 grid")
        if not np.all(np.isfinite(v)):
            raise InvalidParameterError("heightmap values must be finite")
        if self.contact_shifted and abs(float(v.min())) > 1e-12:
            raise InvalidParameterError("contact-shifted heightmap must have min 0")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def nx(self) -> int:
        return self.values.shape[1]

    @property
    def ny(self) -> int:
        return self.values.shape[0]

    @property
    def area(self) -> float:
        """Total projected area nx*dx * ny*dy (one cell of area dx*dy per sample)."""
        return self.nx * self.dx * self.ny * self.dy


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """Histogram of separations: area (nm^2) per left-closed bin [k*w, (k+1)*w)."""

    bin_width: float
    weights: np.ndarray

    def __post_init__(self):
        if self.bin_width <= 0:
            raise InvalidParameterError("bin_width must be positive")
        w = np.ascontiguousarray(self.weights, dtype=float)
        if np.any(w < 0):
            raise InvalidParameterError("bin weights must be >= 0")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def total_area(self) -> float:
        return float(self.weights.sum())


@dataclass(frozen=True, eq=False)
class GradientDistribution:
    """Mean-squared-gradient-weighted area per bin (nm^2, slope^2-weighted)."""

    bin_width: float
    weights: np.ndarray

    def __post_init__(self):
        if self.bin_width <= 0:
            raise InvalidParameterError("bin_width must be positive")
        w = np.ascontiguousarray(self.weights, dtype=float)
        if np.any(w < 0):
            raise InvalidParameterError("bin weights must be >= 0")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class GaussianFit:
    """Fitted truncated-Gaussian roughness parameters and relative L2 misfit."""

    sigma: float
    s0: float
    residual: float


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def load_heightmap(path, dx: float | None = None, dy: float | None = None) -> Heightmap:
    """Parse the v1 heightmap text format, or a headerless CSV matrix.

    The headerless form needs ``dx`` and ``dy`` supplied by the caller.
    Parse failures carry the 1-based line number (and cell for non-finite
    entries).
    """
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("line 1: empty heightmap file")

    first = lines[0].strip()
    data_start = 0
    nx = ny = None
    if first.startswith("#"):
        if not first.startswith("# heightmap v1"):
            raise ParseError(f"line 1: unrecognized header {first!r}")
        fields = dict(
            tok.split("=", 1) for tok in first.split()[3:] if "=" in tok
        )
        try:
            nx = int(fields["nx"])
            ny = int(fields["ny"])
            dx = float(fields["dx"])
            dy = float(fields["dy"])
        except (KeyError, ValueError) as exc:
            raise ParseError(f"line 1: malformed header fields ({exc})") from exc
        data_start = 1
    elif dx is None or dy is None:
        raise ParseError("headerless heightmap needs dx and dy supplied")

    rows = []
    for lineno, ln in enumerate(lines[data_start:], start=data_start + 1):
        if not ln.strip():
            continue
        sep = "," if "," in ln else None
        toks = ln.split(sep)
        row = []
        for col, tok in enumerate(toks, start=1):
            try:
                v = float(tok)
            except ValueError as exc:
                raise ParseError(f"line {lineno}, column {col}: not a number: {tok!r}") from exc
            if not math.isfinite(v):
                raise ParseError(f"line {lineno}, column {col}: non-finite value {tok!r}")
            row.append(v)
        if rows and len(row) != len(rows[0]):
            raise ParseError(
                f"line {lineno}: row has {len(row)} values, expected {len(rows[0])}"
            )
        rows.append(row)
    if not rows:
        raise ParseError("no data rows")
    values = np.array(rows)
    if nx is not None and (values.shape != (ny, nx)):
        raise ParseError(
            f"grid is {values.shape[0]}x{values.shape[1]}, header says ny={ny} nx={nx}"
        )
    return Heightmap(dx=float(dx), dy=float(dy), values=values, contact_shifted=False)


def save_heightmap(hm: Heightmap, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"# heightmap v1 nx={hm.nx} ny={hm.ny} dx={'%.17g' % hm.dx} dy={'%.17g' % hm.dy}\n")
        for row in hm.values:
            fh.write(" ".join("%.17g" % v for v in row) + "\n")


def shift_to_contact(hm: Heightmap) -> Heightmap:
    """Shift values so the closest point sits at S = 0."""
    vmin = float(hm.values.min())
    if vmin == 0.0 and hm.contact_shifted:
        return hm
    return Heightmap(hm.dx, hm.dy, hm.values - vmin, contact_shifted=True)


# ---------------------------------------------------------------------------
# histograms
# ---------------------------------------------------------------------------

def _require_shifted(hm: Heightmap, op: str) -> None:
    if not hm.contact_shifted:
        raise InvalidParameterError(f"{op} needs a contact-shifted heightmap")


def _bin_indices(values: np.ndarray, bin_width: float) -> np.ndarray:
    idx = np.floor(values.ravel() / bin_width).astype(np.int64)
    return np.maximum(idx, 0)


def empirical_distribution(hm: Heightmap, bin_width: float | None = None) -> EmpiricalDistribution:
    """Histogram of separations; each cell contributes dx*dy of area.

    Bins are left-closed [k*w, (k+1)*w); the weights sum to the exact total
    projected area.
    """
    _require_shifted(hm, "empirical_distribution")
    if bin_width is None:
        bin_width = max(float(hm.values.max()), 1.0) / DEFAULT_BIN_FRACTION
    if bin_width <= 0:
        raise InvalidParameterError("bin_width must be positive")
    idx = _bin_indices(hm.values, bin_width)
    counts = np.bincount(idx)
    return EmpiricalDistribution(bin_width, counts * (hm.dx * hm.dy))


def gradient_distribution(hm: Heightmap, bin_width: float | None = None) -> GradientDistribution:
    """Histogram where each cell contributes dx*dy * |grad S|^2.

    Gradients use central differences in the interior and one-sided
    differences at the boundary rows/columns.
    """
    _require_shifted(hm, "gradient_distribution")
    if bin_width is None:
        bin_width = max(float(hm.values.max()), 1.0) / DEFAULT_BIN_FRACTION
    if bin_width <= 0:
        raise InvalidParameterError("bin_width must be positive")
    gy, gx = np.gradient(hm.values, hm.dy, hm.dx)
    grad2 = (gx**2 + gy**2).ravel()
    idx = _bin_indices(hm.values, bin_width)
    weights = np.bincount(idx, weights=grad2) * (hm.dx * hm.dy)
    return GradientDistribution(bin_width, weights)


# ---------------------------------------------------------------------------
# Gaussian roughness fit
# ---------------------------------------------------------------------------

def _gaussian_bin_masses(edges: np.ndarray, sigma: float, s0: float) -> np.ndarray:
    # Exact bin masses of the truncated, renormalized Gaussian.
    z = (edges - s0) / (sigma * math.sqrt(2.0))
    cdf = 0.5 * (1.0 + erf(z))
    norm = 1.0 - 0.5 * (1.0 + erf(-s0 / (sigma * math.sqrt(2.0))))
    return np.diff(cdf) / norm


def fit_gaussian(emp: EmpiricalDistribution) -> GaussianFit:
    """Least-squares (sigma, s0) of the truncated Gaussian roughness model.

    The histogram is normalized to unit mass and compared against exact
    model bin masses.  A degenerate histogram (< 8 non-empty bins) raises
    FitError; a poor model fit is reported through the residual, not an
    error.
    """
    w = np.asarray(emp.weights, dtype=float)
    if int(np.count_nonzero(w)) < 8:
        raise FitError(f"need >= 8 non-empty bins to fit, have {int(np.count_nonzero(w))}")
    y = w / w.sum()
    delta = emp.bin_width
    edges = np.arange(len(w) + 1) * delta
    centers = (edges[:-1] + edges[1:]) / 2.0

    mean = float((y * centers).sum())
    std = float(np.sqrt(max((y * (centers - mean) ** 2).sum(), delta**2 / 12.0)))

    def resid(p):
        sigma, s0 = p
        return _gaussian_bin_masses(edges, sigma, s0) - y

    sol = least_squares(
        resid, x0=[std, max(mean, 0.0)], bounds=([1e-9, 0.0], [np.inf, np.inf])
    )
    sigma, s0 = sol.x
    residual = float(np.linalg.norm(sol.fun) / np.linalg.norm(y))
    return GaussianFit(float(sigma), float(s0), residual)


# ---------------------------------------------------------------------------
# synthesis
# ---------------------------------------------------------------------------

def _tile_coords(x: np.ndarray, tile: float) -> np.ndarray:
    # Chebyshev distance to the nearest tile center, tiles centered on a
    # lattice with period `tile`.
    return np.abs(np.mod(x + 0.5 * tile, tile) - 0.5 * tile)


def _layer_values(layer: dict, X: np.ndarray, Y: np.ndarray, extent: float, rng) -> np.ndarray:
    kind = layer.get("type")
    if kind in ("cap", "spherical-cap"):
        R = float(layer["radius"])
        if R <= 0:
            raise InvalidParameterError("cap radius must be positive")
        r2 = X**2 + Y**2
        if float(r2.max()) >= R**2:
            raise InvalidParameterError(
                f"cap extent invalid: corner radius {math.sqrt(float(r2.max())):.6g} nm "
                f"reaches past the sphere radius {R:.6g} nm"
            )
        return R - np.sqrt(R**2 - r2)
    if kind in ("pyramid", "pyramid-tiling"):
        h, l = float(layer["height"]), float(layer["tile"])
        if h <= 0 or l <= 0:
            raise InvalidParameterError("pyramid height and tile must be positive")
        rho = np.maximum(_tile_coords(X, l), _tile_coords(Y, l))
        return h * (2.0 * rho / l)
    if kind in ("dome", "dome-tiling"):
        h, l = float(layer["height"]), float(layer["tile"])
        if h <= 0 or l <= 0:
            raise InvalidParameterError("dome height and tile must be positive")
        rho = np.maximum(_tile_coords(X, l), _tile_coords(Y, l))
        u = np.clip(2.0 * rho / l, 0.0, 1.0)
        return h * (1.0 - np.sqrt(1.0 - u**2))
    if kind in ("rough", "gaussian-rough"):
        sigma, xi = float(layer["sigma"]), float(layer["xi"])
        if sigma <= 0 or xi <= 0:
            raise InvalidParameterError("roughness sigma and xi must be positive")
        noise = rng.standard_normal(X.shape)
        dx = extent / X.shape[1]
        field = gaussian_filter(noise, sigma=xi / dx, mode="wrap")
        std = float(field.std())
        if std == 0.0:
            raise InvalidParameterError("roughness field degenerate (xi too large for grid)")
        return field * (sigma / std)
    raise InvalidParameterError(f"unknown layer type {kind!r}")


def synthesize_surface(
    layers,
    n: int = 512,
    extent: float | None = None,
    seed: int = 0,
) -> Heightmap:
    """Deterministic synthetic heightmap from a stack of layer descriptors.

    ``layers`` is a sequence of dicts: {"type": "cap", "radius": R},
    {"type": "pyramid"|"dome", "height": h, "tile": l}, or
    {"type": "rough", "sigma": s, "xi": xi}.  Heights add pointwise
    (S = S_c + S_r) and the result is shifted to contact.  ``extent`` is the
    physical side length in nm (default: one tile for pure tilings).

    Coordinates are cell-centered on an n x n grid, so dx = dy = extent / n.
    """
    layers = [dict(layer) for layer in layers]
    if not layers:
        raise InvalidParameterError("need at least one layer")
    if extent is None:
        tiles = [float(l["tile"]) for l in layers if "tile" in l]
        if not tiles:
            raise InvalidParameterError("extent is required unless a tiling sets the scale")
        extent = max(tiles)
    if n < 2 or extent <= 0:
        raise InvalidParameterError("need n >= 2 and positive extent")
    dx = extent / n
    coords = (np.arange(n) + 0.5) * dx - extent / 2.0
    X, Y = np.meshgrid(coords, coords)
    rng = np.random.default_rng(seed)
    S = np.zeros_like(X)
    for layer in layers:
        S = S + _layer_values(layer, X, Y, extent, rng)
    S -= S.min()
    return Heightmap(dx, dx, S, contact_shifted=True)


# ---------------------------------------------------------------------------
# bridges between histograms and height distributions
# ---------------------------------------------------------------------------

def distribution_from_histogram(
    hist, area: float | None = None
) -> HeightDistribution:
    """Sampled density view of a bin-mass histogram.

    Node k (at s = k * bin_width) takes the average of the adjacent cell
    densities, which reproduces linear densities exactly.  With ``area``
    given, the result is per unit projected area.
    """
    w = np.asarray(hist.weights, dtype=float)
    delta = hist.bin_width
    dens = w / delta
    if area is not None:
        if area <= 0:
            raise InvalidParameterError("area must be positive")
        dens = dens / area
    nodes = np.zeros(len(w) + 1)
    nodes[1:-1] = (dens[:-1] + dens[1:]) / 2.0
    # One-sided extrapolation at the support edges (cell averages sit at the
    # cell centers); exact for linear densities, keeps f(0) of densities
    # that jump at the origin.
    if len(dens) >= 2:
        nodes[0] = max(1.5 * dens[0] - 0.5 * dens[1], 0.0)
        nodes[-1] = max(1.5 * dens[-1] - 0.5 * dens[-2], 0.0)
    else:
        nodes[0] = nodes[-1] = dens[0]
    return HeightDistribution.sampled(delta, nodes, unit_area_normalized=False)


def compose_gradient(
    f_c: HeightDistribution, g_r: GradientDistribution, area: float
) -> GradientDistribution:
    """Gradient distribution of a composed surface.

    Like the height distribution, g of base + fine modulation is the
    convolution of the base height distribution with the modulation's
    per-unit-area gradient distribution (the base's own gradient is
    negligible on the modulation scale).
    """
    g_density = distribution_from_histogram(g_r, area=area)
    with warnings.catch_warnings():
        # g is intentionally not unit-area normalized (it integrates to the
        # mean squared slope).
        warnings.simplefilter("ignore")
        conv = convolve(f_c, g_density)
    vals = np.asarray(conv.values)
    masses = 0.5 * (vals[:-1] + vals[1:]) * conv.bin_width
    return GradientDistribution(conv.bin_width, np.maximum(masses, 0.0))
