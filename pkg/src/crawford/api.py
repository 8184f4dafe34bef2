"""High-level entry point: chi(c, C) by translation, denominator
clearing, SDP construction + ellipsoid solving, with the support-function
sweep available as an independent method and cross-check."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import ellipsoid, oracle, sdp
from .linalg import (
    ComplexMatrix,
    GaussianRational,
    clear_denominators,
    frobenius_ceiling,
    hermitian_split,
)


class Method(enum.Enum):
    SDP_ELLIPSOID = "sdp"
    ORACLE_SWEEP = "oracle"
    BOTH = "both"


@dataclass(frozen=True)
class CrawfordQuery:
    matrix: ComplexMatrix
    center: GaussianRational = GaussianRational(0, 0)
    epsilon: float = 1e-6
    method: Method = Method.SDP_ELLIPSOID
    # optional preconditioner: rotate so tr C is (nearly) real positive
    # before solving; |z| is rotation-equivariant, so chi is unaffected
    rotate: bool = False

    def __post_init__(self):
        if not self.epsilon > 0.0:
            raise ValueError("epsilon must be positive")


@dataclass(frozen=True)
class CrawfordResult:
    chi: float
    nearest_point: complex            # in the translated frame, |z| ~ chi
    nearest_point_original: complex   # nearest_point + center
    witness_X: Optional[np.ndarray]   # density matrix, None only for the
                                      # oracle path when chi clamps to 0
    method_used: Method
    solver_stats: dict
    scale_factor: int


def numerical_radius_upper(c: ComplexMatrix) -> float:
    """||C||_F, an upper bound for the numerical radius and hence for chi."""
    return math.sqrt(float(c.frobenius_sq()))


def _witness_from_solution(y_block: np.ndarray) -> np.ndarray:
    """Invert the real embedding: X = P + iK with P the mean of the two
    diagonal quadrants and K the antisymmetric part of the off-diagonal."""
    n = y_block.shape[0] // 2
    p = 0.5 * (y_block[:n, :n] + y_block[n:, n:])
    k = 0.5 * (y_block[n:, :n] - y_block[:n, n:])
    return p + 1j * k


def _rotation_factor(t_mat: ComplexMatrix) -> GaussianRational:
    """Gaussian-integer q ~ 64 e^{-i arg(tr)}: multiplying by q keeps
    entries Gaussian-integer (modest growth) and chi scales by |q|."""
    tr = t_mat.trace()
    if tr.is_zero():
        return GaussianRational(1, 0)
    th = math.atan2(float(tr.im), float(tr.re))
    return GaussianRational(round(math.cos(th) * 64), round(-math.sin(th) * 64))


def crawford(query: CrawfordQuery) -> CrawfordResult:
    """Compute chi(center, C) to within epsilon.

    SDP path: build the exact instance for the cleared-denominator
    translate, solve with the ellipsoid method at accuracy l*epsilon,
    divide by l.  Oracle path: certified support sweep at delta = epsilon.
    BOTH runs the two and reports the SDP value, with the oracle value
    and discrepancy in solver_stats.
    """
    t_mat = query.matrix.translate(query.center)
    eps = query.epsilon
    center_c = complex(query.center)

    if t_mat.is_zero():
        n = t_mat.n
        return CrawfordResult(
            chi=0.0,
            nearest_point=0j,
            nearest_point_original=center_c,
            witness_X=np.eye(n, dtype=complex) / n,
            method_used=query.method,
            solver_stats={"short_circuit": "zero matrix", "iterations": 0},
            scale_factor=1,
        )

    stats: dict = {}
    chi_val = None
    nearest = None
    witness = None
    scale = 1

    if query.method in (Method.SDP_ELLIPSOID, Method.BOTH):
        cint, scale = clear_denominators(t_mat)
        rot_c, rot_mag = 1.0 + 0.0j, 1.0
        if query.rotate:
            q = _rotation_factor(cint)
            cint = cint.scale(q)
            rot_c = complex(q)
            rot_mag = math.sqrt(float(q.abs2()))
        pencil = hermitian_split(cint)
        inst = sdp.build_instance(pencil, frobenius_ceiling(cint))
        ball = ellipsoid.certified_ball(inst, cint)
        res = ellipsoid.solve(inst, ball, eps * scale * rot_mag)
        chi_val = res.value / (scale * rot_mag)
        u, w, v = res.Z.uv[0, 0], res.Z.uv[1, 1], res.Z.uv[0, 1]
        nearest = complex(0.5 * (u - w), v) / (scale * rot_c)
        witness = _witness_from_solution(res.Z.y)
        stats.update(
            iterations=res.iterations,
            cuts_feasibility=res.cuts_feasibility,
            cuts_objective=res.cuts_objective,
            lower_bound=res.lower_bound / (scale * rot_mag),
            max_feasible_distance=res.max_feasible_distance,
            outer_R=float(ball.outer_R),
            epsilon_solver=eps * scale * rot_mag,
            scale_factor=scale,
        )
        if query.rotate:
            stats["rotation"] = rot_c

    if query.method in (Method.ORACLE_SWEEP, Method.BOTH):
        search = oracle.support_search(t_mat, eps)
        orc_stats = {"grid_size": search.grid_size, "theta": search.theta}
        if query.method is Method.ORACLE_SWEEP:
            chi_val = search.chi
            scale = 1
            if search.chi > 0.0:
                pen = hermitian_split(t_mat)
                x = oracle.minimizing_witness(
                    pen.a.to_complex(), pen.b.to_complex(), search.theta
                )
                nearest = complex(x.conj() @ t_mat.to_complex() @ x)
                witness = np.outer(x, x.conj())
            else:
                nearest = 0j
                witness = None
            stats.update(orc_stats)
            stats["iterations"] = search.grid_size
        else:
            stats["oracle_value"] = search.chi
            stats["oracle_theta"] = search.theta
            stats["discrepancy"] = abs(chi_val - search.chi)

    bound = numerical_radius_upper(t_mat)
    if chi_val > bound + eps:
        raise RuntimeError(
            f"reported chi {chi_val:.9g} exceeds the Frobenius bound "
            f"{bound:.9g} + eps; solver certificate is inconsistent"
        )

    return CrawfordResult(
        chi=chi_val,
        nearest_point=nearest,
        nearest_point_original=nearest + center_c,
        witness_X=witness,
        method_used=query.method,
        solver_stats=stats,
        scale_factor=scale,
    )


def crawford_number(
    matrix: ComplexMatrix,
    center: GaussianRational = GaussianRational(0, 0),
    epsilon: float = 1e-6,
    method: Method = Method.SDP_ELLIPSOID,
) -> float:
    """Shorthand when only the value is wanted."""
    return crawford(
        CrawfordQuery(matrix=matrix, center=center, epsilon=epsilon, method=method)
    ).chi
