"""Dense linear-algebra helpers: matrix exponential and Cholesky log-determinant."""

import math

import numpy as np
from scipy.linalg import LinAlgError, cholesky, lu_factor, lu_solve

# Pade numerator coefficients b_0..b_k and 1-norm thresholds theta_k
# (Higham, "The scaling and squaring method for the matrix exponential revisited", 2005).
_PADE = {
    3: (1.495585217958292e-2, (120.0, 60.0, 12.0, 1.0)),
    5: (2.539398330063230e-1, (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0)),
    7: (9.504178996162932e-1,
        (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0)),
    9: (2.097847961257068e0,
        (17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
         2162160.0, 110880.0, 3960.0, 90.0, 1.0)),
}
_THETA13 = 5.371920351148152
_B13 = (64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0, 129060195264000.0, 10559470521600.0, 670442572800.0,
        33522128640.0, 1323241920.0, 40840800.0, 960960.0, 16380.0, 182.0, 1.0)


def _pade_low(A, b):
    n = A.shape[0]
    ident = np.eye(n)
    A2 = A @ A
    powers = [ident, A2]
    while 2 * len(powers) < len(b):
        powers.append(powers[-1] @ A2)
    U = sum(b[2 * k + 1] * P for k, P in enumerate(powers) if 2 * k + 1 < len(b))
    V = sum(b[2 * k] * P for k, P in enumerate(powers))
    return A @ U, V


def _pade13(A):
    b = _B13
    ident = np.eye(A.shape[0])
    A2 = A @ A
    A4 = A2 @ A2
    A6 = A4 @ A2
    U = A @ (A6 @ (b[13] * A6 + b[11] * A4 + b[9] * A2)
             + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * ident)
    V = (A6 @ (b[12] * A6 + b[10] * A4 + b[8] * A2)
         + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * ident)
    return U, V


def expm(A):
    """Matrix exponential by scaling and squaring with a diagonal Pade approximant.

    The Pade degree (3, 5, 7, 9 or 13) and the number of squarings are picked
    from the 1-norm of ``A``. Raises ``OverflowError`` when the result is not
    finite.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("expm expects a square matrix")
    if A.shape[0] == 1:
        with np.errstate(over="ignore"):
            R = np.exp(A)
        if not np.isfinite(R[0, 0]):
            raise OverflowError(f"matrix exponential overflows: {A[0, 0]:.3g}")
        return R
    norm1 = np.linalg.norm(A, 1)
    if not np.isfinite(norm1):
        raise OverflowError("matrix exponential of a non-finite matrix")

    squarings = 0
    for degree in (3, 5, 7, 9):
        theta, b = _PADE[degree]
        if norm1 <= theta:
            U, V = _pade_low(A, b)
            break
    else:
        if norm1 > _THETA13:
            squarings = int(math.ceil(math.log2(norm1 / _THETA13)))
        U, V = _pade13(A / 2.0 ** squarings)

    R = lu_solve(lu_factor(V - U), V + U)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(squarings):
            R = R @ R
    if not np.all(np.isfinite(R)):
        raise OverflowError(f"matrix exponential overflows (||A||_1 = {norm1:.3g})")
    return R


def cholesky_lower(X):
    """Lower Cholesky factor; ``LinAlgError`` if ``X`` is not positive definite."""
    return cholesky(X, lower=True, check_finite=True)


def logdet_spd(X=None, L=None):
    """``ln det X`` of a positive definite matrix from its Cholesky factor."""
    if L is None:
        L = cholesky_lower(X)
    return 2.0 * float(np.sum(np.log(np.diag(L))))


def is_positive_definite(X):
    try:
        cholesky_lower(X)
    except (LinAlgError, ValueError):
        return False
    return True


def symmetrize(M):
    return 0.5 * (M + M.T)
