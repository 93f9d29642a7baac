"""Extended-precision eigensolver for the intelligent-state operators.

``eta*G2 + i*G3`` is tridiagonal in the weight basis of both groups, and
strongly non-normal: eigenvalue condition numbers grow roughly like
``exp(2 j artanh|eta|)``. Double-precision LAPACK loses every digit by
j ~ 20, so the eigen-oracles go through Arb ball arithmetic (python-flint)
with exactly represented matrix entries, raising the working precision
until all eigenvalues are isolated.
"""
import numpy as np
from flint import acb, acb_mat, arb, ctx

__all__ = ["ladder_eig"]

MAX_PREC = 1 << 13


def _build(diag, offdiag_sq, eta):
    d = len(diag)
    e = arb(float(eta))
    rows = [[acb(0)] * d for _ in range(d)]
    for i, m in enumerate(diag):
        rows[i][i] = acb(0, arb(float(m)))
    for i, c2 in enumerate(offdiag_sq):
        half = e * arb(float(c2)).sqrt() / 2
        # generator-2 convention: <i+1|G2|i> = -i c/2, <i|G2|i+1> = +i c/2
        rows[i + 1][i] = acb(0, -half)
        rows[i][i + 1] = acb(0, half)
    return acb_mat(rows)


def ladder_eig(diag, offdiag_sq, eta, vectors=False, prec=None):
    """Eigen-decompose ``eta*G2 + i*G3`` for a ladder-structured generator set.

    Parameters
    ----------
    diag : sequence of float
        Diagonal of G3 (weights ``m`` or ``k+n``); must be exact binary floats.
    offdiag_sq : sequence of float
        Squared ladder matrix elements ``|<i+1|G+|i>|**2`` (exact rationals
        with power-of-two denominators for both groups).
    eta : float
    vectors : bool
        Also return right eigenvectors as columns.

    Returns
    -------
    eigenvalues : complex ndarray
    eigenvectors : complex ndarray, only when ``vectors`` is true
    """
    dim = len(diag)
    prec = prec or 64 + 2 * dim
    while True:
        old = ctx.prec
        ctx.prec = prec
        try:
            mat = _build(diag, offdiag_sq, eta)
            out = mat.eig(right=vectors)
        except ValueError:
            if prec >= MAX_PREC:
                raise
            prec *= 2
            continue
        finally:
            ctx.prec = old
        break
    if vectors:
        values, right = out
        vecs = np.array([[complex(right[i, c]) for c in range(dim)]
                         for i in range(dim)])
    else:
        values = out
    vals = np.array([complex(v) for v in values])
    return (vals, vecs) if vectors else vals
