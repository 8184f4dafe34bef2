"""Shared fixtures-in-spirit for the test suite: the reference 2x2
example with known chi, and random matrix generators."""

import numpy as np

from crawford.linalg import ComplexMatrix, GaussianRational


def gr(re, im=0):
    return GaussianRational(re, im)


# 2x2 reference case used throughout: chi(center, EXAMPLE_TILDE) with the
# center below equals chi(EXAMPLE) and is known to ~1.9230539.
EXAMPLE_TILDE = ComplexMatrix([[gr(0, 0), gr(0, -4)], [gr(2, 0), gr(0, 0)]])
EXAMPLE_CENTER = gr(-3, -1)
EXAMPLE = EXAMPLE_TILDE.translate(EXAMPLE_CENTER)

# frozen from the support sweep at delta = 1e-8 plus golden-section
# refinement; nearest point approx 1.5334 + 1.1605i at theta 0.6478506
CHI_EXAMPLE = 1.9230539413330539

IDENTITY2 = ComplexMatrix([[gr(1), gr(0)], [gr(0), gr(1)]])
DIAG_PM = ComplexMatrix([[gr(1), gr(0)], [gr(0), gr(-1)]])


def identity(n):
    return ComplexMatrix.identity(n)


def random_gaussian_integer(rng, n, lo=-5, hi=5):
    re = rng.integers(lo, hi + 1, (n, n))
    im = rng.integers(lo, hi + 1, (n, n))
    return ComplexMatrix(
        [[gr(int(a), int(b)) for a, b in zip(ra, rb)] for ra, rb in zip(re, im)]
    )


def random_hermitian_gaussian_integer(rng, n, lo=-5, hi=5):
    c = random_gaussian_integer(rng, n, lo, hi)
    from fractions import Fraction

    return (c + c.adjoint()).scale(Fraction(1, 2))


def random_density(rng, n):
    """Random complex PSD trace-1 matrix."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    x = g @ g.conj().T
    return x / np.trace(x).real
