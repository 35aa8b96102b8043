"""Pure numpy/scipy version of the walk inner loop.

Used when the compiled ``_walk_kernel`` extension is not available.
"""

import numpy as np
import scipy.sparse as sp


def advance(indptr, indices, data, psi, acc, t, nsteps, eps, m, directed, trace):
    """Advance the walk by up to ``nsteps`` steps, in place.

    On entry ``psi`` (shape ``(ncomp, 2m)``, real components of the state)
    holds the state at time ``t`` and ``acc`` holds the running sum of the
    squared amplitudes over times ``0..t``. Each step applies the operator,
    adds the new squared amplitudes into ``acc`` and measures the Euclidean
    change of the running average, over the directed entries or over the
    ``m`` undirected sums. Stops early once the change drops below ``eps``.
    When ``trace`` has rows, row ``i`` receives the undirected average after
    the ``i``-th step of this call.

    Returns
    -------
    (t, residual, converged)
    """
    dim = psi.shape[1]
    op = sp.csr_array((data, indices, indptr), shape=(dim, dim))
    keep_trace = trace.shape[0] > 0
    residual = 0.0
    converged = False
    for row in range(nsteps):
        for c in range(psi.shape[0]):
            psi[c] = op @ psi[c]
        amp2 = np.einsum("ci,ci->i", psi, psi)
        t += 1
        inv_new = 1.0 / (t + 1)
        inv_old = 1.0 / t
        if directed:
            new = acc + amp2
            diff = new * inv_new - acc * inv_old
        else:
            prev = acc[:m] + acc[m:]
            diff = (prev + amp2[:m] + amp2[m:]) * inv_new - prev * inv_old
            new = acc + amp2
        acc[:] = new
        residual = float(np.sqrt(np.dot(diff, diff)))
        if keep_trace:
            trace[row] = (acc[:m] + acc[m:]) * inv_new
        if residual < eps:
            converged = True
            break
    return t, residual, converged
