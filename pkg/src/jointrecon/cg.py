"""Conjugate gradient for self-adjoint positive (semi)definite systems."""
from dataclasses import dataclass, field

import numpy as np

__all__ = ["CgReport", "CgBreakdown", "cg_solve"]

# relative size of imag(<p, Ap>) tolerated before declaring the operator non-self-adjoint
IMAG_TOL = 1e-8
# residuals this far below ||rhs|| are roundoff; further steps only amplify noise
CONVERGED = 1e-14


class CgBreakdown(ArithmeticError):
    """The operator produced a non-real or nonpositive curvature."""

    def __init__(self, iteration, message):
        super().__init__(f"CG breakdown at iteration {iteration}: {message}")
        self.iteration = iteration


@dataclass
class CgReport:
    iterations_run: int = 0
    final_residual_norm: float = 0.0
    residual_history: list = field(default_factory=list)


def _inner(a, b):
    return np.vdot(a, b)


def cg_solve(op, rhs, x0, max_iters, rel_tol=0.0, callback=None):
    """Solve ``op(x) = rhs`` with at most ``max_iters`` CG steps.

    Args:
        op (callable): self-adjoint positive semidefinite linear map on
            arrays shaped like ``rhs``.
        rhs (array): right-hand side.
        x0 (array): starting point (warm start).
        max_iters (int): iteration budget; the solver runs exactly this
            many steps unless the relative residual drops to ``rel_tol``.
        rel_tol (float): early exit on ``||r|| / ||rhs|| <= rel_tol``.
        callback (callable): called as ``callback(k, x)`` after every step.

    Returns:
        tuple: ``(x, CgReport)``.

    Raises:
        CgBreakdown: when ``<p, op(p)>`` has a significant imaginary part or
            is not positive.
    """
    rhs = np.asarray(rhs)
    x = np.array(x0, dtype=np.result_type(rhs, x0, np.complex128), copy=True)
    report = CgReport()

    rhs_norm = np.linalg.norm(rhs)
    if rhs_norm == 0:
        x = np.zeros_like(x)
        report.residual_history.append(0.0)
        return x, report

    r = rhs - op(x)
    rr = _inner(r, r).real
    report.residual_history.append(float(np.sqrt(rr)))
    p = r.copy()

    for k in range(max_iters):
        if np.sqrt(rr) <= max(rel_tol, CONVERGED) * rhs_norm:
            break
        ap = op(p)
        pap = _inner(p, ap)
        # roundoff floor for the self-adjointness check
        floor = 64 * np.finfo(np.float64).eps * np.linalg.norm(p) * np.linalg.norm(ap)
        if abs(pap.imag) > IMAG_TOL * abs(pap.real) + floor:
            raise CgBreakdown(k, f"<p, Ap> = {pap} is not real; operator not self-adjoint")
        if pap.real <= 0:
            raise CgBreakdown(k, f"<p, Ap> = {pap.real:g} is not positive")
        alpha = rr / pap.real
        x += alpha * p
        r -= alpha * ap
        rr_new = _inner(r, r).real
        p = r + (rr_new / rr) * p
        rr = rr_new
        report.iterations_run += 1
        report.residual_history.append(float(np.sqrt(rr)))
        if callback is not None:
            callback(k, x)

    report.final_residual_norm = report.residual_history[-1]
    return x, report
