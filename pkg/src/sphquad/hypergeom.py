"""Gauss hypergeometric series 2F1(a, b; c; x) for |x| < 1."""
import numpy as np

from .errors import NonConvergedError


def hyp2f1_series(a, b, c, x, rtol=1e-16, max_terms=10**6):
    """Sum the Gauss series term by term.

    Stops once every term is below ``rtol`` times its partial sum, or when the
    series terminates (``a`` or ``b`` a non-positive integer). Intended for
    ``|x| <= 1/2`` where convergence is geometric.
    """
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) >= 1.0):
        raise ValueError("Gauss series requires |x| < 1")
    total = np.ones_like(x)
    term = np.ones_like(x)
    for n in range(max_terms):
        term = term * ((a + n) * (b + n) / ((c + n) * (n + 1.0))) * x
        total = total + term
        if np.all(np.abs(term) <= rtol * np.abs(total)):
            break
    else:
        raise NonConvergedError(
            f"2F1({a}, {b}; {c}; x) not converged after {max_terms} terms",
            iterations=max_terms,
        )
    return float(total) if total.ndim == 0 else total
