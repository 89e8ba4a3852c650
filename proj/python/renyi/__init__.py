"""Sandwiched Renyi entropies, continuity bounds, and verification campaigns.

States are dense complex numpy arrays over A (x) B with the composite index
a * d_B + b; entropies are in bits. See the project README for the formulas
each bound evaluates.
"""

import json as _json

from renyi._core import (  # noqa: F401
    ValidationError,
    afw_limit_expression,
    afw_von_neumann,
    binary_entropy,
    bound_high,
    bound_hmin,
    bound_jabbour_datta,
    bound_low,
    bound_low_classical,
    classical_conditional_renyi,
    conditional_entropy,
    cq_state,
    dual_order,
    duality_residual,
    fidelity,
    hmax,
    hmin,
    leditzky_gap,
    max_entangled,
    perturb,
    renyi_entropy,
    sample_state,
    sandwiched_divergence,
    trace_distance,
    von_neumann_conditional,
)
from renyi._core import run_campaign_kw as _run_campaign_kw

__version__ = "0.1.0"


def run_campaign(
    dims=(),
    orders=(),
    epsilons=(),
    samples_per_cell=0,
    ensemble="hilbert-schmidt",
    mode="mixing",
    seed=20240901,
    checks=(),
    violation_tolerance=1e-6,
    jobs=1,
    classical=False,
):
    """Run a verification campaign and return the report as a dict.

    Empty arguments fall back to the default grid (see README). ``checks``
    selects a subset of {thm1, thm1-classical, cor1, thm3-hmin, duality, dpi,
    mccarthy, jabbour-compare, leditzky}.
    """
    report = _run_campaign_kw(
        dims=[tuple(d) for d in dims],
        orders=list(orders),
        epsilons=list(epsilons),
        samples_per_cell=samples_per_cell,
        ensemble=ensemble,
        mode=mode,
        seed=seed,
        checks=list(checks),
        violation_tolerance=violation_tolerance,
        jobs=jobs,
        classical=classical,
    )
    return _json.loads(report)
