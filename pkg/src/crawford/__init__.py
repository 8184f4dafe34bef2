"""Crawford number of a complex square matrix: certified SDP / ellipsoid
computation with an independent support-function cross-check.

chi(c, C) is the distance from the point c to the numerical range
W(C) = {x* C x : ||x|| = 1}.  The SDP route builds an exact standard-form
instance whose optimum equals chi, seeds the ellipsoid method with an
explicit strictly-feasible ball, and certifies the value from both sides.
The oracle route sweeps support directions with a Lipschitz-certified
grid.  The two share no solving logic.
"""

from .api import (
    CrawfordQuery,
    CrawfordResult,
    Method,
    crawford,
    crawford_number,
    numerical_radius_upper,
)
from .ellipsoid import (
    AffineChart,
    CertifiedBall,
    EllipsoidCapExceeded,
    SolveResult,
    build_chart,
    certified_ball,
    separation_oracle,
    solve,
)
from .linalg import (
    ComplexMatrix,
    ConvergenceError,
    EigenDecomposition,
    GaussianRational,
    HermitianPencil,
    clear_denominators,
    frobenius_ceiling,
    hat_embed,
    hermitian_split,
    symmetric_eig,
)
from .oracle import (
    SupportProfile,
    chi_oracle,
    sample_boundary,
    support_profile,
    zero_membership,
)
from .sdp import (
    BlockDiagSymmetric,
    SdpInstance,
    build_instance,
    export_sdpa,
    modulus_psd_block,
    read_sdpa,
    subspace_basis,
)

__version__ = "0.1.0"

__all__ = [
    "AffineChart",
    "BlockDiagSymmetric",
    "CertifiedBall",
    "ComplexMatrix",
    "ConvergenceError",
    "CrawfordQuery",
    "CrawfordResult",
    "EigenDecomposition",
    "EllipsoidCapExceeded",
    "GaussianRational",
    "HermitianPencil",
    "Method",
    "SdpInstance",
    "SolveResult",
    "SupportProfile",
    "build_chart",
    "build_instance",
    "certified_ball",
    "chi_oracle",
    "clear_denominators",
    "crawford",
    "crawford_number",
    "export_sdpa",
    "frobenius_ceiling",
    "hat_embed",
    "hermitian_split",
    "modulus_psd_block",
    "numerical_radius_upper",
    "read_sdpa",
    "sample_boundary",
    "separation_oracle",
    "solve",
    "subspace_basis",
    "support_profile",
    "symmetric_eig",
    "zero_membership",
]
