"""Complex root finding for the numeric layers: Aberth-Ehrlich iteration with
deterministic initial guesses, Newton polishing, and multiplicity clustering.

Symbolic code never calls this; it only backs fiber enumeration, curve
slicing, and distance certification.
"""

from __future__ import annotations

import cmath

import numpy as np

from . import _kernels


class RootFindingError(RuntimeError):
    pass


#: default tolerances (see the curve-slicing layer for how they are consumed)
TOL = 1e-13
MAX_ITER = 200


def find_roots(coeffs, tol=TOL, max_iter=MAX_ITER):
    """All complex roots of the polynomial with descending complex
    coefficients.  Deterministic: initial guesses sit on a Cauchy-bound circle
    at golden-angle spacing.  Raises RootFindingError when the iteration fails
    to settle and the residuals stay large."""
    c = np.asarray(coeffs, dtype=np.complex128)
    # strip leading zeros
    nz = np.flatnonzero(np.abs(c) > 0)
    if nz.size == 0:
        raise RootFindingError("zero polynomial has no finite root set")
    c = c[nz[0]:]
    # trailing zero coefficients are roots at the origin
    origin = 0
    while c.shape[0] > 1 and c[-1] == 0:
        origin += 1
        c = c[:-1]
    deg = c.shape[0] - 1
    if deg == 0:
        return np.zeros(origin, dtype=np.complex128)
    scale = c[0]
    cn = c / scale
    radius = 1.0 + float(np.max(np.abs(cn[1:]))) if deg else 1.0
    golden = 2.399963229728653  # golden angle, keeps guesses asymmetric
    z = np.array(
        [radius * cmath.exp(1j * (0.41 + golden * k)) for k in range(deg)],
        dtype=np.complex128,
    )
    _kernels.aberth(cn, z, tol, max_iter)
    _kernels.newton_polish(cn, z, tol, 50)
    residual = np.abs(_kernels.polyval(cn, z))
    bound = 1e-6 * max(1.0, float(np.max(np.abs(z))) ** deg)
    if np.any(residual > bound):
        raise RootFindingError(
            f"root iteration did not converge (max residual {residual.max():.3g})"
        )
    if origin:
        z = np.concatenate([z, np.zeros(origin, dtype=np.complex128)])
    return z


def cluster_roots(roots, tol=1e-6):
    """Group numerically coincident roots: list of (representative,
    multiplicity), sorted by (re, im) of the representative."""
    out = []
    for r in sorted(roots, key=lambda t: (t.real, t.imag)):
        for i, (rep, mult) in enumerate(out):
            if abs(r - rep) <= tol * (1.0 + abs(rep)):
                out[i] = ((rep * mult + r) / (mult + 1), mult + 1)
                break
        else:
            out.append((complex(r), 1))
    return out


def poly_roots(poly, var, values=None, tol=TOL):
    """Roots of an exact Poly specialized to a single variable.

    values: exact or complex substitutions for every other variable.  Returns
    a complex ndarray (empty when the specialized polynomial is a nonzero
    constant); returns None when it vanishes identically.
    """
    spec = poly.evaluate(values) if values else poly
    if hasattr(spec, "is_zero"):
        if spec.is_zero():
            return None
        coeffs = spec.complex_coeff_list(var)
    else:  # full substitution collapsed to a scalar
        return None if spec == 0 else np.array([], dtype=np.complex128)
    if len(coeffs) <= 1:
        return np.array([], dtype=np.complex128)
    return find_roots(coeffs, tol=tol)
