"""Dense complex Hermitian linear algebra on small matrices.

Everything downstream (density matrices, joint spectra, divergence
values) is built on the primitives here: a self-contained cyclic Jacobi
eigensolver, matrix functions through the eigendecomposition, traces and
the Schatten 1- and 2-norms, plus checkable forms of the classical trace
inequalities (Gruss-type gap, variance bound, trace Hoelder).

Matrices are plain complex ndarrays.  The JSON exchange format is
``{"dim": d, "re": [[...]], "im": [[...]]}`` with "im" optional.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputFormatError, PreconditionError

__all__ = [
    "PreconditionError",
    "InputFormatError",
    "EigenDecomposition",
    "CheckReport",
    "hermitian_part",
    "eigh",
    "matrix_function",
    "trace",
    "operator_abs",
    "singular_values",
    "trace_norm",
    "hs_norm",
    "hs_inner",
    "gruss_gap_check",
    "variance_bound_check",
    "trace_hoelder_check",
    "matrix_to_json",
    "matrix_from_json",
    "load_matrix",
    "save_matrix",
]

# Off-diagonal mass threshold is relative to the input Frobenius norm.
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
# Eigenvalues at or below this (times ||A||_F) count as exactly zero.
ZERO_EIGENVALUE_TOL = 1e-13
HERMITICITY_TOL = 1e-12


def _as_square_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputFormatError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise InputFormatError("matrix entries must be finite")
    return m


def hermitian_part(a, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Symmetrize ``a`` to (A + A*)/2, rejecting inputs that are not
    Hermitian within ``tol * max|entry|``."""
    m = _as_square_matrix(a)
    scale = max(np.abs(m).max(), 1e-300)
    defect = np.abs(m - m.conj().T).max()
    if defect > tol * scale:
        raise PreconditionError(
            f"matrix is not Hermitian: defect {defect:.3e} exceeds {tol:.1e} * max|entry|"
        )
    return (m + m.conj().T) / 2.0


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues ascending, eigenvectors as orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Zero out a[p, q] with a unitary plane rotation, in place.

    The rotation is the real Jacobi angle applied after stripping the
    phase of a[p, q]; v accumulates the product of rotations.
    """
    apq = a[p, q]
    mod = abs(apq)
    if mod == 0.0:
        return
    phase = apq / mod
    # Real symmetric Jacobi angle for [[a_pp, |a_pq|], [|a_pq|, a_qq]].
    tau = (a[q, q].real - a[p, p].real) / (2.0 * mod)
    if tau >= 0.0:
        t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c

    sp = s * phase
    spc = s * np.conj(phase)

    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = c * row_p - sp * row_q
    a[q, :] = spc * row_p + c * row_q

    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = c * col_p - spc * col_q
    a[:, q] = sp * col_p + c * col_q

    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real

    vcol_p = v[:, p].copy()
    vcol_q = v[:, q].copy()
    v[:, p] = c * vcol_p - spc * vcol_q
    v[:, q] = sp * vcol_p + c * vcol_q


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def eigh(a, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Row-cyclic complex rotations run until the off-diagonal Frobenius
    mass drops below ``tol * ||A||_F`` or the sweep budget is exhausted.
    Deterministic for identical input.

    Returns:
        EigenDecomposition with eigenvalues sorted ascending and the
        matching orthonormal eigenvector columns.

    Raises:
        PreconditionError: input not Hermitian within tolerance.
        ArithmeticError: no convergence within ``max_sweeps`` sweeps.
    """
    work = hermitian_part(a).copy()
    d = work.shape[0]
    norm = float(np.linalg.norm(work))
    if d == 1 or norm == 0.0:
        vals = np.array([work[0, 0].real]) if d == 1 else np.zeros(d)
        return EigenDecomposition(vals, np.eye(d, dtype=np.complex128))

    threshold = tol * norm
    # Rotations on entries below this cannot push the off-mass back over
    # the threshold: d(d-1) entries of size threshold/(2d) have combined
    # Frobenius mass < threshold.
    skip = threshold / (2.0 * d)
    v = np.eye(d, dtype=np.complex128)

    converged = _offdiag_norm(work) <= threshold
    for _ in range(max_sweeps):
        if converged:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                if abs(work[p, q]) > skip:
                    _jacobi_rotate(work, v, p, q)
        converged = _offdiag_norm(work) <= threshold
    if not converged:
        raise ArithmeticError(f"Jacobi sweep budget exhausted ({max_sweeps} sweeps)")

    vals = np.diag(work).real.copy()
    # Clamp numerically-zero eigenvalues so downstream zero dispatch is exact.
    vals[np.abs(vals) <= ZERO_EIGENVALUE_TOL * norm] = 0.0
    order = np.argsort(vals, kind="stable")
    return EigenDecomposition(vals[order], np.ascontiguousarray(v[:, order]))


def matrix_function(a, g) -> np.ndarray:
    """Apply the scalar function ``g`` to a Hermitian matrix: U g(L) U*.

    ``g`` must be defined on every eigenvalue of ``a``; it may be scalar
    or numpy-vectorized.  The result is Hermitian by construction.
    """
    dec = a if isinstance(a, EigenDecomposition) else eigh(a)
    try:
        vals = np.asarray([float(g(x)) for x in dec.eigenvalues], dtype=np.float64)
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise PreconditionError(f"function undefined on an eigenvalue: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        bad = dec.eigenvalues[~np.isfinite(vals)]
        raise PreconditionError(f"function undefined or infinite on eigenvalues {bad}")
    u = dec.eigenvectors
    out = (u * vals) @ u.conj().T
    return (out + out.conj().T) / 2.0


def trace(a) -> complex:
    """Sum of the diagonal of a square matrix."""
    return complex(np.trace(_as_square_matrix(a)))


def singular_values(a) -> np.ndarray:
    """Singular values of ``a`` in descending order, via eigh of A*A."""
    m = _as_square_matrix(a)
    gram = m.conj().T @ m
    vals = eigh(gram).eigenvalues
    return np.sqrt(np.clip(vals, 0.0, None))[::-1]


def operator_abs(a) -> np.ndarray:
    """The modulus |A| = (A*A)^(1/2); PSD for every square A."""
    m = _as_square_matrix(a)
    gram = m.conj().T @ m
    dec = eigh(gram)
    roots = np.sqrt(np.clip(dec.eigenvalues, 0.0, None))
    u = dec.eigenvectors
    out = (u * roots) @ u.conj().T
    return (out + out.conj().T) / 2.0


def trace_norm(a) -> float:
    """Schatten 1-norm tr|A|."""
    return float(np.sum(singular_values(a)))


def hs_norm(a) -> float:
    """Hilbert-Schmidt (Frobenius) norm sqrt(tr(A*A))."""
    return float(np.linalg.norm(_as_square_matrix(a)))


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product <A, B> = tr(B*A)."""
    ma = _as_square_matrix(a)
    mb = _as_square_matrix(b)
    if ma.shape != mb.shape:
        raise InputFormatError("dimension mismatch in hs_inner")
    return complex(np.sum(mb.conj() * ma))


@dataclass(frozen=True)
class CheckReport:
    """Evaluated inequality chain: ordered (label, value) terms.

    ``ok`` means every consecutive pair satisfies left <= right + tol.
    ``note`` flags degenerate outcomes such as vacuously-true chains.
    """

    name: str
    terms: tuple
    tol: float
    ok: bool
    note: str = ""

    @property
    def values(self) -> tuple:
        return tuple(v for _, v in self.terms)


def _chain_report(name: str, terms, tol: float) -> CheckReport:
    values = [v for _, v in terms]
    ok = all(left <= right + tol for left, right in zip(values, values[1:]))
    return CheckReport(name=name, terms=tuple(terms), tol=tol, ok=ok)


def _unit_vector(x) -> np.ndarray:
    vec = np.asarray(x, dtype=np.complex128).ravel()
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > 1e-10:
        raise PreconditionError(f"expected a unit vector, got norm {norm}")
    return vec


def _quad_form(op: np.ndarray, x: np.ndarray) -> float:
    return float(np.real(np.vdot(x, op @ x)))


def gruss_gap_check(s, g, lam: float, rho: float, x, tol: float = 1e-10) -> CheckReport:
    """Covariance-gap chain for a selfadjoint S, scalar g, and unit x.

    Requires |g(t) - lam| <= rho on the spectrum interval [gamma, Gamma]
    of S.  Checks

        |<S g(S)x,x> - <Sx,x><g(S)x,x>|
            <= rho <|S - <Sx,x> I| x, x>
            <= rho [<S^2 x,x> - <Sx,x>^2]^(1/2)

    within ``tol`` absolute.
    """
    xv = _unit_vector(x)
    dec = eigh(s)
    lo, hi = float(dec.eigenvalues[0]), float(dec.eigenvalues[-1])
    # The hypothesis must hold on the whole spectral interval, not just
    # at eigenvalues; probe a fine grid plus the eigenvalues themselves.
    probes = np.union1d(np.linspace(lo, hi, 513), dec.eigenvalues)
    gvals = np.asarray([float(g(t)) for t in probes])
    worst = float(np.abs(gvals - lam).max())
    if worst > rho + 1e-12 * max(1.0, abs(rho)):
        raise PreconditionError(
            f"|g(t) - lam| reaches {worst:.6e} > rho = {rho:.6e} on [{lo}, {hi}]"
        )

    u = dec.eigenvectors
    smat = dec.reconstruct()
    gmat = (u * np.asarray([float(g(t)) for t in dec.eigenvalues])) @ u.conj().T
    mean_s = _quad_form(smat, xv)
    mean_g = _quad_form(gmat, xv)
    cross = float(np.real(np.vdot(xv, smat @ (gmat @ xv))))
    lhs = abs(cross - mean_s * mean_g)

    absdev = (u * np.abs(dec.eigenvalues - mean_s)) @ u.conj().T
    mid = rho * _quad_form(absdev, xv)
    variance = _quad_form(smat @ smat, xv) - mean_s**2
    rhs = rho * math.sqrt(max(variance, 0.0))
    return _chain_report("gruss-gap", [("gap", lhs), ("abs-deviation", mid), ("std-dev", rhs)], tol)


def variance_bound_check(s, x, tol: float = 1e-10) -> CheckReport:
    """Variance chain 0 <= var <= (Gamma-gamma)/2 * <|S - mean|x,x>
    <= (Gamma-gamma)^2 / 4 for a selfadjoint S and unit x."""
    xv = _unit_vector(x)
    dec = eigh(s)
    lo, hi = float(dec.eigenvalues[0]), float(dec.eigenvalues[-1])
    smat = dec.reconstruct()
    mean_s = _quad_form(smat, xv)
    variance = _quad_form(smat @ smat, xv) - mean_s**2
    u = dec.eigenvectors
    absdev = (u * np.abs(dec.eigenvalues - mean_s)) @ u.conj().T
    mid = 0.5 * (hi - lo) * _quad_form(absdev, xv)
    cap = 0.25 * (hi - lo) ** 2
    return _chain_report(
        "variance-bound",
        [("zero", 0.0), ("variance", variance), ("half-range-absdev", mid), ("quarter-range-sq", cap)],
        tol,
    )


def trace_hoelder_check(a, b, alpha: float, tol: float = 1e-10) -> CheckReport:
    """Trace Hoelder chain |tr(AB)| <= tr|AB| <= (tr|A|^(1/alpha))^alpha
    (tr|B|^(1/(1-alpha)))^(1-alpha), with ``tol`` relative slack."""
    if not 0.0 < alpha < 1.0:
        raise PreconditionError(f"alpha must lie in (0, 1), got {alpha}")
    ma = _as_square_matrix(a)
    mb = _as_square_matrix(b)
    if ma.shape != mb.shape:
        raise InputFormatError("dimension mismatch in trace_hoelder_check")
    prod = ma @ mb
    lhs = abs(trace(prod))
    mid = trace_norm(prod)
    sa = singular_values(ma)
    sb = singular_values(mb)
    rhs = float(np.sum(sa ** (1.0 / alpha)) ** alpha * np.sum(sb ** (1.0 / (1.0 - alpha))) ** (1.0 - alpha))
    scale = tol * max(1.0, abs(rhs))
    return _chain_report("trace-hoelder", [("abs-trace", lhs), ("trace-norm", mid), ("hoelder", rhs)], scale)


def matrix_to_json(a) -> dict:
    """Serialize a matrix to the {"dim", "re", "im"} exchange form."""
    m = _as_square_matrix(a)
    out = {"dim": int(m.shape[0]), "re": m.real.tolist()}
    if np.any(m.imag != 0.0):
        out["im"] = m.imag.tolist()
    return out


def matrix_from_json(obj: dict) -> np.ndarray:
    """Parse the {"dim", "re", "im"} exchange form into a complex matrix."""
    if not isinstance(obj, dict):
        raise InputFormatError("matrix JSON must be an object")
    try:
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"bad matrix JSON: {exc}") from exc
    if dim <= 0:
        raise InputFormatError(f"dim must be positive, got {dim}")
    if re.shape != (dim, dim):
        raise InputFormatError(f'"re" must be {dim}x{dim}, got shape {re.shape}')
    if "im" in obj:
        im = np.asarray(obj["im"], dtype=np.float64)
        if im.shape != (dim, dim):
            raise InputFormatError(f'"im" must be {dim}x{dim}, got shape {im.shape}')
    else:
        im = np.zeros((dim, dim))
    return _as_square_matrix(re + 1j * im)


def load_matrix(path: str) -> np.ndarray:
    """Read a matrix JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"malformed JSON in {path}: {exc}") from exc
    return matrix_from_json(obj)


def save_matrix(a, path: str) -> None:
    """Write a matrix JSON file."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_json(a), fh)
        fh.write("\n")
