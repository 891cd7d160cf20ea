"""
Damped Newton solver for semi-discrete optimal transport.

Finds ψ such that every Laguerre cell clipped to Ω₁ carries mass |Ω₁|/N.
The Jacobian of the cell masses is minus the weighted graph Laplacian of
the diagram, so each step solves L·δ = F (one weight pinned) by Jacobi
preconditioned CG and halves the step until the smallest cell keeps at
least half its mass and the max residual shrinks by (1 − τ/2).
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import coo_matrix, diags
from scipy.sparse.linalg import cg

from common.config import config
from common.errors import InvalidParameterError, SolverError
from common.logging import get_logger
from geometry.domain import HoledDomain
from potential.analytic import AnalyticPotential
from potential.discrete import DiscretePotential
from sdot.laguerre import LaguerreDiagram, build_diagram, domain_window
from sdot.schemas import SolveReport

logger = get_logger(__name__)


def initial_weights(seeds: np.ndarray) -> np.ndarray:
    psi = 0.5 * np.einsum("ij,ij->i", seeds, seeds)
    return psi - psi.min()


def spread_weights(dom: HoledDomain, seeds: np.ndarray) -> np.ndarray:
    """ψ_i = (s/2)|y_i|² + (c − s·ȳ)·y_i: initial cells are c + s·(Vor_i − ȳ), each meeting Ω₀."""
    c = dom.outer.barycenter
    normals, offsets = dom.outer.halfplanes()
    inradius = float((offsets - normals @ c).min())
    ybar = seeds.mean(axis=0)
    spread = float(np.linalg.norm(seeds - ybar, axis=1).max()) or 1.0
    s = 0.5 * inradius / spread
    psi = 0.5 * s * np.einsum("ij,ij->i", seeds, seeds) + seeds @ (c - s * ybar)
    return psi - psi.min()


def fading_schedule(dom: HoledDomain, n: int) -> list[float]:
    """Hole densities 0, 0.9, 0.99, ... until the faded hole mass is below a tenth of a cell."""
    hole_area = sum(h.area for h in dom.holes)
    if hole_area == 0:
        return []
    k = int(np.ceil(np.log10(max(10.0 * hole_area * n, 1.0))))
    return [0.0] + [1.0 - 10.0**-j for j in range(1, k + 1)]


def _laplacian(diagram: LaguerreDiagram):
    n = len(diagram)
    w = diagram.laplacian_weights()
    i, j = diagram.pairs[:, 0], diagram.pairs[:, 1]
    off = coo_matrix((np.concatenate([-w, -w]), (np.concatenate([i, j]), np.concatenate([j, i]))), shape=(n, n))
    deg = np.bincount(np.concatenate([i, j]), weights=np.concatenate([w, w]), minlength=n)
    return (off + diags(deg)).tocsr()


def newton_direction(diagram: LaguerreDiagram, residual: np.ndarray) -> np.ndarray:
    """Solve L·δ = F with δ₀ = 0."""
    lap = _laplacian(diagram)[1:, 1:]
    d = lap.diagonal()
    precond = diags(np.where(d > 0, 1.0 / np.where(d > 0, d, 1.0), 1.0))
    sol, info = cg(lap, residual[1:], rtol=config.cg_rtol, maxiter=10 * len(residual), M=precond)
    if info != 0:
        logger.debug(f"[Solve] CG stopped with info={info}")
    return np.concatenate([[0.0], sol])


class _Stage:
    """Newton iteration at a fixed hole density."""

    def __init__(self, dom: HoledDomain, seeds: np.ndarray, hole_weight: float):
        self.dom = dom
        self.seeds = seeds
        self.hole_weight = hole_weight
        self.window = domain_window(dom)
        mass = dom.outer.area - hole_weight * sum(h.area for h in dom.holes)
        self.target = mass / len(seeds)

    def diagram(self, psi: np.ndarray) -> LaguerreDiagram:
        return build_diagram(self.dom, self.seeds, psi, self.hole_weight, self.window)

    def run(self, psi: np.ndarray, tol: float, max_iter: int, report: SolveReport):
        diagram = self.diagram(psi)
        residual = diagram.clipped_areas - self.target
        err = float(np.abs(residual).max())
        report.residual_history.append(err)
        iterations = 0

        while err > tol:
            if iterations >= max_iter:
                report.max_area_residual = err
                report.message = f"max_iter={max_iter} exceeded at hole density {self.hole_weight}"
                raise SolverError(f"Newton did not converge: residual {err:.3e} > {tol:.3e}", report)

            direction = newton_direction(diagram, residual)
            floor = 0.5 * float(diagram.clipped_areas.min())
            tau = 1.0
            for _ in range(config.max_halvings):
                trial = self.diagram(psi + tau * direction)
                trial_residual = trial.clipped_areas - self.target
                trial_err = float(np.abs(trial_residual).max())
                if trial.clipped_areas.min() >= floor and trial_err <= (1.0 - 0.5 * tau) * err:
                    break
                tau *= 0.5
            else:
                report.max_area_residual = err
                report.message = f"step halving exhausted at hole density {self.hole_weight}"
                raise SolverError(f"Damping failed to find an admissible step (residual {err:.3e})", report)

            psi = psi + tau * direction
            psi = psi - psi.min()
            trial.weights = psi
            diagram, residual, err = trial, trial_residual, trial_err
            iterations += 1
            report.residual_history.append(err)
            report.damping_history.append(tau)
            logger.debug(f"[Solve] t={self.hole_weight:g} it={iterations} tau={tau:g} residual={err:.3e}")

        return psi, diagram, iterations


def solve_weights(
    dom: HoledDomain,
    seeds,
    tol: float | None = None,
    max_iter: int | None = None,
    psi0=None,
) -> tuple[np.ndarray, LaguerreDiagram, SolveReport]:
    """Weights ψ (min ψ = 0) with every clipped cell carrying mass 1/N."""
    seeds = np.asarray(seeds, dtype=float).reshape(-1, 2)
    tol = config.solver_tol if tol is None else tol
    max_iter = config.solver_max_iter if max_iter is None else max_iter
    n = len(seeds)
    if n == 0:
        raise InvalidParameterError("No seeds given")
    if not tol > 0:
        raise InvalidParameterError(f"Tolerance must be positive, got {tol}")
    if len(np.unique(seeds, axis=0)) != n:
        raise InvalidParameterError("Seeds must be distinct")

    report = SolveReport(n_seeds=n, max_area_residual=np.inf)
    final = _Stage(dom, seeds, 1.0)
    psi = initial_weights(seeds) if psi0 is None else np.asarray(psi0, dtype=float) - np.min(psi0)

    if n == 1:
        diagram = final.diagram(np.zeros(1))
        report.max_area_residual = float(abs(diagram.clipped_areas[0] - final.target))
        report.converged = True
        return np.zeros(1), diagram, report

    start = final.diagram(psi)
    stages: list[float] = []
    if start.clipped_areas.min() <= 0:
        empty = int((start.clipped_areas <= 0).sum())
        logger.info(f"[Solve] {empty} empty cells at initialization, re-initializing with spread offsets")
        psi = spread_weights(dom, seeds)
        report.reinitialized = True
        stages = fading_schedule(dom, n)
        first = _Stage(dom, seeds, stages[0] if stages else 1.0).diagram(psi)
        if first.clipped_areas.min() <= 0:
            report.message = "empty cells persist after re-initialization"
            raise SolverError("Cells with zero mass after re-initialization", report)

    for t in stages:
        stage = _Stage(dom, seeds, t)
        psi, _, its = stage.run(psi, 0.05 * stage.target, max_iter, report)
        report.continuation.append(t)
        report.total_iterations += its
        logger.info(f"[Solve] Hole density {t:g} reached after {its} iterations")

    psi, diagram, its = final.run(psi, tol, max_iter, report)
    report.iterations = its
    report.total_iterations += its
    report.max_area_residual = float(np.abs(diagram.clipped_areas - final.target).max())
    report.converged = True
    report.message = "converged"
    logger.info(f"[Solve] N={n} converged in {its} iterations, residual {report.max_area_residual:.3e}")
    return psi, diagram, report


def solve_potential(dom: HoledDomain, seeds, **kwargs) -> tuple[DiscretePotential, LaguerreDiagram, SolveReport]:
    psi, diagram, report = solve_weights(dom, seeds, **kwargs)
    return DiscretePotential(diagram.seeds, psi), diagram, report


def transport_error(potential: DiscretePotential, oracle: AnalyticPotential, points) -> float:
    """Mean |∇u_N(x) − ∇u_oracle(x)| over the sample points."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    diff = potential.subgradients(pts) - oracle.subgradients(pts)
    return float(np.linalg.norm(diff, axis=1).mean())
