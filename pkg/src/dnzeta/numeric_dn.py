"""Fourier-truncated DN operators and the conformal derivative identity.

A conformal change of boundary data transforms the Dirichlet-to-Neumann
map of a surface by symmetric conjugation,

    N_t = e^{-t omega0 / 2} N_0 e^{-t omega0 / 2},

while the boundary length moves as ell_t = integral of e^{t omega0} dl.
Along this family the zeta-regularized quantity log det'(N_t) - log ell_t
is constant in t.  This module realizes the family on (2K+1)-dimensional
Fourier truncations and checks the derivative form of that statement:
central differences of log pdet(N_t) - log ell_t over a t-grid, where
pdet is the product of the nonzero eigenvalues of the truncated matrix.

Only the t-derivative is ever tested.  Truncated determinants differ
from zeta-regularized ones by K-dependent constants, and those constants
cancel in the derivative exactly when omega0 has zero mean (the trace of
the truncated multiplication matrix then vanishes identically, which is
the finite-dimensional shadow of the regularized trace of omega0 being
zero).  Nonzero-mean factors are covered separately by the constant-case
scaling law, which is exact through the spectral zeta function: the
circle family {n/R, multiplicity 2} has zeta*(0) = 2 zeta(0) = -1, so
det'(mu N) = det'(N) / mu while ell scales by mu, leaving det'/ell
fixed without any truncation argument.

Orthonormal boundary basis on a circle of radius R (arc length ds):

    e_0 = 1/sqrt(2 pi R),   c_n = cos(n theta)/sqrt(pi R),
                            s_n = sin(n theta)/sqrt(pi R),

ordered [e_0, c_1, s_1, ..., c_K, s_K].  Multiplication by a real
trigonometric polynomial is assembled from exact product-to-sum rules in
this basis (the same operator is Toeplitz in the complex exponential
basis, with the mean on its diagonal); the radius cancels from every
matrix element, and for a zero-mean factor the diagonal carries the
pair +a_{2n}/2, -a_{2n}/2 at (c_n, s_n).  Each entry of the pair is the
exact float negation of the other, so the diagonal summed in basis
order cancels to exactly 0.0; reductions that reorder the sum (blocked
accumulators) see only their own rounding noise, not a defect of the
matrix.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .dn_explicit import AnnulusGeometry, annulus_block
from .errors import DomainError, TruncationError

_TWO_PI = 2.0 * math.pi
_SYMMETRY_TOL = 1e-13
_KERNEL_THRESHOLD = 1e-9
_CONTINUITY_FLOOR = 0.9
_QUAD_NODES = 2048


@dataclass(frozen=True)
class DiscGeometry:
    """Flat disc |z| < radius; DN spectrum {|n|/radius} on the boundary."""

    radius: float
    boundary_length: float = field(init=False)

    def __post_init__(self) -> None:
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise DomainError(f"disc needs radius > 0, got {self.radius}")
        object.__setattr__(self, "boundary_length", _TWO_PI * self.radius)


@dataclass(frozen=True)
class ConformalFactor:
    """Real trigonometric polynomial omega0 on the boundary circle.

    coefficients = (c0, a1, b1, ..., a_m, b_m) encodes

        omega0(theta) = c0 + sum_m a_m cos(m theta) + b_m sin(m theta),

    so the length is odd and the mean is the leading coefficient.
    """

    coefficients: tuple[float, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(float(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if len(coeffs) == 0 or len(coeffs) % 2 == 0:
            raise DomainError(
                f"coefficients must have odd length (c0, a1, b1, ...), got {len(coeffs)}"
            )
        for c in coeffs:
            if not math.isfinite(c):
                raise DomainError(f"coefficients must be finite, got {c}")

    @property
    def mean(self) -> float:
        return self.coefficients[0]

    @property
    def degree(self) -> int:
        return (len(self.coefficients) - 1) // 2

    @property
    def is_constant(self) -> bool:
        return all(c == 0.0 for c in self.coefficients[1:])

    def evaluate(self, theta):
        """Pointwise values; accepts a scalar or an ndarray of angles."""
        th = np.asarray(theta, dtype=float)
        out = np.full(th.shape, self.coefficients[0])
        for m in range(1, self.degree + 1):
            out += self.coefficients[2 * m - 1] * np.cos(m * th)
            out += self.coefficients[2 * m] * np.sin(m * th)
        if th.shape == ():
            return float(out)
        return out


def factor_to_json(factor: ConformalFactor) -> str:
    """Serialize as a bare JSON list [c0, a1, b1, ...]."""
    return json.dumps(list(factor.coefficients))


def factor_from_json(text: str) -> ConformalFactor:
    """Parse a JSON list of Fourier coefficients."""
    data = json.loads(text)
    if not isinstance(data, list):
        raise DomainError("conformal factor JSON must be a list of numbers")
    for c in data:
        if isinstance(c, bool) or not isinstance(c, (int, float)):
            raise DomainError(f"conformal factor entries must be numbers, got {c!r}")
    return ConformalFactor(tuple(float(c) for c in data))


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """Mode-truncated DN matrix in the orthonormal Fourier basis.

    Disc matrices are (2K+1) x (2K+1); annulus matrices are doubled,
    2(2K+1) per side, with consecutive row pairs holding the (outer,
    inner) components of one scalar basis function.
    """

    k: int
    matrix: np.ndarray
    geometry: str
    basis: str = "fourier"

    def __post_init__(self) -> None:
        if not (isinstance(self.k, int) and self.k >= 1):
            raise DomainError(f"mode cutoff K must be an integer >= 1, got {self.k}")
        if self.geometry not in ("disc", "annulus"):
            raise DomainError(f"unknown geometry tag {self.geometry!r}")
        if self.basis != "fourier":
            raise DomainError(f"only the fourier basis is supported, got {self.basis!r}")
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)
        expected = 2 * self.k + 1 if self.geometry == "disc" else 2 * (2 * self.k + 1)
        if m.shape != (expected, expected):
            raise DomainError(
                f"{self.geometry} truncation at K={self.k} needs shape "
                f"({expected}, {expected}), got {m.shape}"
            )
        if not np.all(np.isfinite(m)):
            raise DomainError("matrix entries must be finite")
        scale = max(1.0, float(np.max(np.abs(m))))
        asym = float(np.max(np.abs(m - m.T)))
        if asym > _SYMMETRY_TOL * scale:
            raise DomainError(f"matrix asymmetry {asym:.3e} exceeds {_SYMMETRY_TOL} * {scale:.3e}")

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def build_dn_truncated(geometry, k: int) -> TruncatedOperator:
    """Assemble the DN matrix of a disc or annulus, modes |n| <= K.

    Block-diagonal by construction: the disc is diag(0, 1, 1, ..., K, K)
    / R, and each annulus mode contributes the closed-form 2x2 block
    conjugated by diag(sqrt(rho), 1), which reweights the two boundary
    traces by arc length and makes the block symmetric.
    """
    if not (isinstance(k, int) and k >= 1):
        raise DomainError(f"mode cutoff K must be an integer >= 1, got {k}")
    if isinstance(geometry, DiscGeometry):
        modes = np.repeat(np.arange(k + 1, dtype=float), 2)[1:]
        return TruncatedOperator(k=k, matrix=np.diag(modes / geometry.radius), geometry="disc")
    if isinstance(geometry, AnnulusGeometry):
        root = math.sqrt(geometry.rho)
        size = 2 * (2 * k + 1)
        mat = np.zeros((size, size))
        for b in range(2 * k + 1):
            n = (b + 1) // 2  # basis slot b holds e_0, c_1, s_1, c_2, s_2, ...
            raw = annulus_block(geometry, n).entries
            sym = np.array(
                [[raw[0, 0], raw[0, 1] * root], [raw[1, 0] / root, raw[1, 1]]]
            )
            # exp(log rho) != rho at the last bit; average away the ulp.
            sym = 0.5 * (sym + sym.T)
            mat[2 * b : 2 * b + 2, 2 * b : 2 * b + 2] = sym
        return TruncatedOperator(k=k, matrix=mat, geometry="annulus")
    raise DomainError(f"geometry must be DiscGeometry or AnnulusGeometry, got {type(geometry).__name__}")


def multiplication_matrix(omega0: ConformalFactor, k: int) -> np.ndarray:
    """Matrix of pointwise multiplication by omega0, modes |n| <= K.

    Assembled from exact product-to-sum identities rather than
    quadrature, so every entry is a sum of half-coefficients: the
    operator is symmetric to the bit, and for zero-mean factors the
    diagonal cancels in adjacent (c_n, s_n) pairs, making the trace
    exactly 0.0 when summed in basis order.
    """
    if not (isinstance(k, int) and k >= 1):
        raise DomainError(f"mode cutoff K must be an integer >= 1, got {k}")
    size = 2 * k + 1
    mat = np.zeros((size, size))
    c0 = omega0.coefficients[0]
    if c0 != 0.0:
        np.fill_diagonal(mat, c0)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for m in range(1, omega0.degree + 1):
        a_m = omega0.coefficients[2 * m - 1]
        b_m = omega0.coefficients[2 * m]
        half_a = 0.5 * a_m
        half_b = 0.5 * b_m
        if m <= k:
            mat[0, 2 * m - 1] += a_m * inv_sqrt2
            mat[2 * m - 1, 0] += a_m * inv_sqrt2
            mat[0, 2 * m] += b_m * inv_sqrt2
            mat[2 * m, 0] += b_m * inv_sqrt2
        # sum rule p + q = m: cos cos gains, sin sin loses, cos_p sin_q gains.
        for p in range(max(1, m - k), min(k, m - 1) + 1):
            q = m - p
            mat[2 * p - 1, 2 * q - 1] += half_a
            mat[2 * p, 2 * q] -= half_a
            mat[2 * p - 1, 2 * q] += half_b
            mat[2 * q, 2 * p - 1] += half_b
        # difference rule p - q = m: all gain except sin_p paired with cos_q.
        for d in range(1, k - m + 1):
            p = m + d
            mat[2 * p - 1, 2 * d - 1] += half_a
            mat[2 * d - 1, 2 * p - 1] += half_a
            mat[2 * p, 2 * d] += half_a
            mat[2 * d, 2 * p] += half_a
            mat[2 * p - 1, 2 * d] -= half_b
            mat[2 * d, 2 * p - 1] -= half_b
            mat[2 * d - 1, 2 * p] += half_b
            mat[2 * p, 2 * d - 1] += half_b
    return mat


def conformal_family(op: TruncatedOperator, omega0: ConformalFactor, t: float) -> TruncatedOperator:
    """N_t = e^{-t omega0/2} N_0 e^{-t omega0/2} on the truncation.

    The multiplication operator is truncated to the same K as the DN
    matrix, which requires the margin K >= 2 * degree(omega0): products
    omega0 * v spill degree(omega0) modes past the window, so one full
    factor degree of slack keeps the spill of the dominant kernel
    coefficients representable.  Smaller K raises TruncationError
    instead of returning a silently polluted family member.

    Constant factors bypass the matrix exponential: N_t = e^{-t c} N_0,
    exact for either geometry.  Nonconstant factors are supported on the
    disc only; a single boundary series does not determine data on the
    two annulus boundaries.
    """
    if not isinstance(op, TruncatedOperator):
        raise DomainError(f"op must be a TruncatedOperator, got {type(op).__name__}")
    if not isinstance(omega0, ConformalFactor):
        raise DomainError(f"omega0 must be a ConformalFactor, got {type(omega0).__name__}")
    t = float(t)
    if not math.isfinite(t):
        raise DomainError(f"t must be finite, got {t}")
    if t == 0.0:
        return op
    if omega0.is_constant:
        scaled = math.exp(-t * omega0.mean) * op.matrix
        return TruncatedOperator(k=op.k, matrix=scaled, geometry=op.geometry)
    if op.geometry != "disc":
        raise DomainError("nonconstant conformal factors are supported on the disc only")
    if op.k < 2 * omega0.degree:
        raise TruncationError(
            f"K = {op.k} is below the required margin 2 * degree = {2 * omega0.degree}"
        )
    w, vecs = np.linalg.eigh(multiplication_matrix(omega0, op.k))
    envelope = (vecs * np.exp(-0.5 * t * w)) @ vecs.T
    envelope = 0.5 * (envelope + envelope.T)
    mat = envelope @ op.matrix @ envelope
    mat = 0.5 * (mat + mat.T)
    return TruncatedOperator(k=op.k, matrix=mat, geometry="disc")


def kernel_vector(op: TruncatedOperator, threshold: float = _KERNEL_THRESHOLD) -> np.ndarray:
    """Unit eigenvector of the unique eigenvalue below threshold.

    The conformal family preserves a one-dimensional kernel (the
    constant direction deformed to the coefficients of e^{t omega0/2});
    anything other than exactly one near-zero eigenvalue means the
    truncation has polluted it.
    """
    w, vecs = np.linalg.eigh(op.matrix)
    small = np.flatnonzero(np.abs(w) < threshold)
    if small.size != 1:
        raise TruncationError(
            f"expected a one-dimensional numerical kernel below {threshold}, "
            f"found {small.size} eigenvalues"
        )
    return np.ascontiguousarray(vecs[:, small[0]])


def kernel_projector(op: TruncatedOperator, threshold: float = _KERNEL_THRESHOLD) -> np.ndarray:
    """Rank-one orthogonal projector onto the numerical kernel."""
    v = kernel_vector(op, threshold)
    return np.outer(v, v)


def boundary_length(geometry, omega0: ConformalFactor, t: float, n_nodes: int = _QUAD_NODES) -> float:
    """ell_t = integral of e^{t omega0} over the boundary arc.

    Periodic trapezoid rule on n_nodes uniform angles; spectrally
    accurate for trigonometric-polynomial exponents, so 2048 nodes put
    the quadrature error far below 1e-12 relative.  Constant factors
    reduce to e^{t c} * ell_0 on either geometry; nonconstant factors
    are disc-only, as in conformal_family.
    """
    t = float(t)
    if not math.isfinite(t):
        raise DomainError(f"t must be finite, got {t}")
    if not (isinstance(n_nodes, int) and n_nodes >= 16):
        raise DomainError(f"n_nodes must be an integer >= 16, got {n_nodes}")
    if omega0.is_constant:
        if isinstance(geometry, (DiscGeometry, AnnulusGeometry)):
            return math.exp(t * omega0.mean) * geometry.boundary_length
        raise DomainError(f"geometry must be DiscGeometry or AnnulusGeometry, got {type(geometry).__name__}")
    if not isinstance(geometry, DiscGeometry):
        raise DomainError("nonconstant conformal factors are supported on the disc only")
    theta = np.arange(n_nodes) * (_TWO_PI / n_nodes)
    return float(np.mean(np.exp(t * omega0.evaluate(theta)))) * geometry.boundary_length


def _pseudo_log_det(op: TruncatedOperator, prev_kernel: np.ndarray | None) -> tuple[float, np.ndarray]:
    """(sum of log nonzero eigenvalues, kernel vector), tracked in t."""
    w, vecs = np.linalg.eigh(op.matrix)
    small = np.flatnonzero(np.abs(w) < _KERNEL_THRESHOLD)
    if small.size != 1:
        raise TruncationError(
            f"kernel tracking failure: {small.size} eigenvalues below "
            f"{_KERNEL_THRESHOLD} (need exactly 1)"
        )
    kernel = np.ascontiguousarray(vecs[:, small[0]])
    if prev_kernel is not None and abs(float(kernel @ prev_kernel)) < _CONTINUITY_FLOOR:
        raise TruncationError(
            "kernel tracking failure: eigenvector direction jumped between grid points"
        )
    nonzero = np.delete(w, small[0])
    if np.any(nonzero <= 0.0):
        raise TruncationError(
            "kernel tracking failure: nonpositive eigenvalue outside the kernel"
        )
    return float(np.sum(np.log(nonzero))), kernel


def derivative_identity_check(geometry, omega0: ConformalFactor, t_grid, k: int) -> float:
    """Max |d/dt [log pdet(N_t) - log ell_t]| by central differences.

    pdet drops exactly one eigenvalue below 1e-9 per grid point, with
    the kernel eigenvector tracked for continuity across the grid.  The
    t-derivative of the dropped family is the quantity that the
    conformal transformation law pins to zero; the residual measures
    truncation spill plus rounding and must shrink (or sit at the noise
    floor) as K grows.

    Requires an exactly zero-mean factor (the multiplication-matrix
    trace then vanishes identically) and K >= 4 * degree(omega0), twice
    the conformal_family margin, so the kernel coefficients of
    e^{t omega0/2} are resolved well past their decay scale.
    """
    if not isinstance(geometry, DiscGeometry):
        raise DomainError("derivative identity check runs on the disc only")
    if not isinstance(omega0, ConformalFactor):
        raise DomainError(f"omega0 must be a ConformalFactor, got {type(omega0).__name__}")
    if omega0.mean != 0.0:
        raise DomainError(f"omega0 must have exactly zero mean, got {omega0.mean}")
    if not (isinstance(k, int) and k >= 1):
        raise DomainError(f"mode cutoff K must be an integer >= 1, got {k}")
    if k < 4 * omega0.degree:
        raise TruncationError(
            f"K = {k} is below the required 4 * degree = {4 * omega0.degree}"
        )
    grid = np.asarray(t_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 3:
        raise DomainError(f"t_grid needs at least 3 points, got shape {grid.shape}")
    if not np.all(np.isfinite(grid)):
        raise DomainError("t_grid entries must be finite")
    steps = np.diff(grid)
    h = float(steps[0])
    if h <= 0.0 or np.any(np.abs(steps - h) > 1e-12 * max(1.0, abs(h))):
        raise DomainError("t_grid must be uniformly increasing")

    base = build_dn_truncated(geometry, k)
    values = np.empty(grid.size)
    kernel = None
    for i, t in enumerate(grid):
        member = conformal_family(base, omega0, float(t))
        log_pdet, kernel = _pseudo_log_det(member, kernel)
        values[i] = log_pdet - math.log(boundary_length(geometry, omega0, float(t)))
    derivatives = (values[2:] - values[:-2]) / (2.0 * h)
    return float(np.max(np.abs(derivatives))) if derivatives.size else 0.0


def k_convergence_table(geometry, omega0: ConformalFactor, t_grid, k_values) -> tuple[tuple[int, float], ...]:
    """Residuals of the derivative identity over a ladder of cutoffs."""
    ks = [int(k) for k in k_values]
    if not ks:
        raise DomainError("k_values must be nonempty")
    return tuple((k, derivative_identity_check(geometry, omega0, t_grid, k)) for k in ks)


def convergence_table_to_csv(rows) -> str:
    """CSV text (header k,residual) for a k_convergence_table result."""
    lines = ["k,residual"]
    for k, residual in rows:
        lines.append(f"{int(k)},{float(residual):.17g}")
    return "\n".join(lines) + "\n"
