"""
Sampled checks of the shell inequalities behind the fixed-point argument.

On the inner shell ||X|| = r the operator must satisfy ||T X|| >= max b > r; on
the outer shell ||X|| = R it must satisfy ||T X|| < R. Every image must also lie
in the min-max cone.
"""

import logging

import numpy as np

from ..errors import KernelError, SolverError
from ..models.bounds_schemas import ConeDomain, ProofStepReport
from ..models.grid_schemas import GridFunction
from .operator import OperatorContext, operator_for

logger = logging.getLogger(__name__)

TRIG_MODES = 6
MAX_REJECTIONS = 1000
REL_SLACK = 1e-12
CONE_SLACK = 1e-10


def random_cone_element(
    rng: np.random.Generator, dom: ConeDomain, norm: float
) -> GridFunction:
    """
    Baseline plus a random nonnegative trigonometric polynomial, rescaled to ``norm``.

    Draws are rejected until the min-max cone condition holds.
    """
    b = dom.baseline
    phase = 2.0 * np.pi * b.nodes / dom.omega
    k = np.arange(1, TRIG_MODES + 1)
    for _ in range(MAX_REJECTIONS):
        a = rng.normal(size=TRIG_MODES) / k
        c = rng.normal(size=TRIG_MODES) / k
        p = np.cos(np.outer(phase, k)) @ a + np.sin(np.outer(phase, k)) @ c
        p -= p.min()
        amplitude = rng.uniform(0.0, 4.0) * b.maximum() / max(p.max(), 1e-300)
        values = b.values + amplitude * p
        values *= norm / np.max(values)
        candidate = b.with_values(values)
        if candidate.in_cone(dom.gamma):
            return candidate
    raise SolverError(f"no cone element found in {MAX_REJECTIONS} draws")


def check_proof_steps(ctx: OperatorContext, trials: int = 100, seed: int = 0) -> ProofStepReport:
    """Draw ``trials`` cone elements on each shell and check the norm inequalities."""
    dom = ctx.dom
    if not dom.bounded:
        raise KernelError("proof-step checks need a representable outer radius")
    T = operator_for(ctx)
    rng = np.random.default_rng(seed)
    max_b = dom.r_upper
    inner_margin = outer_margin = cone_margin = float("inf")
    inner_failures = outer_failures = cone_failures = 0
    for _ in range(trials):
        for norm in (dom.r, dom.R):
            TX = T(random_cone_element(rng, dom, norm))
            image = TX.sup_norm()
            cone_gap = TX.minimum() - dom.gamma * TX.maximum()
            cone_margin = min(cone_margin, cone_gap)
            if cone_gap < -CONE_SLACK * max(1.0, image):
                cone_failures += 1
            if norm == dom.r:
                gap = image - max_b
                inner_margin = min(inner_margin, gap)
                if gap < -REL_SLACK * max_b or not image > dom.r:
                    inner_failures += 1
            else:
                gap = dom.R - image
                outer_margin = min(outer_margin, gap)
                if not gap > 0.0:
                    outer_failures += 1

    report = ProofStepReport(
        trials=trials,
        seed=seed,
        inner_failures=inner_failures,
        outer_failures=outer_failures,
        cone_failures=cone_failures,
        inner_margin=inner_margin,
        outer_margin=outer_margin,
        cone_margin=cone_margin,
    )
    if report.passed:
        logger.info(f"Proof-step checks passed for {trials} trials per shell")
    else:
        logger.warning(
            f"Proof-step checks failed: inner {inner_failures}, outer {outer_failures}, "
            f"cone {cone_failures}"
        )
    return report
