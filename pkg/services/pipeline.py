"""End-to-end construction: H(n,m) embedded in a d-regular k-graph."""
import logging
import time
from fractions import Fraction
from typing import Dict, Optional, Tuple

import numpy as np

from config import settings
from exceptions import ContractViolation, RejectBudgetExceeded
from models import CoupledRun, Params, PipelineResult, PipelineStatus
from services.coupling import check_embedding, coupled_generate, extract_hnm
from services.metrics import trial_duration, trials_total
from services.redswap import swap_red_loops
from services.sequences import classify_edges, expected_phi, membership, to_graph
from services.switching import eliminate_loops

logger = logging.getLogger(__name__)

SINGLE = "single"
RESAMPLE = "resample"


def run_pass(p: Params, rng: np.random.Generator, expected: Fraction, max_rejects: int,
             master_seed: int = 0, trial_index: int = 0) -> Tuple[PipelineResult, CoupledRun]:
    """One pass of the construction, with the coupled run it started from."""
    run = coupled_generate(p, rng)
    hnm = extract_hnm(run, p, rng)
    base = dict(
        params=p.report(),
        hnm=hnm,
        event_A=run.event_A,
        event_B=run.event_B,
        master_seed=master_seed,
        trial_index=trial_index,
    )

    cls = classify_edges(run.Y)
    report = membership(run.Y, expected, cls)
    if not report.in_E:
        logger.debug(f"[PIPELINE_REJECT_E] reason={report.reason} witness={report.witness}")
        return PipelineResult(status=PipelineStatus.REJECTED_E, embedded=False,
                              lambda_y=cls.lam, phi=report.phi, **base), run

    y_swapped, record = swap_red_loops(run.Y, cls, rng)
    swapped_report = membership(y_swapped, expected)
    if not swapped_report.in_tilde_S:
        logger.debug(f"[PIPELINE_REJECT_TILDE_S] phi={swapped_report.phi} expected={float(expected):.3f}")
        return PipelineResult(status=PipelineStatus.REJECTED_TILDE_S, embedded=False,
                              swap_record=record, lambda_y=cls.lam, phi=swapped_report.phi, **base), run

    try:
        y_final, trace = eliminate_loops(y_swapped, rng, max_rejects)
    except RejectBudgetExceeded:
        return PipelineResult(status=PipelineStatus.ABORTED_REJECTS, embedded=False,
                              swap_record=record, lambda_y=cls.lam, phi=swapped_report.phi, **base), run

    red = p.red_prefix_len
    if not np.array_equal(y_swapped.entries[:red], y_final.entries[:red]):
        raise ContractViolation("loop elimination changed the red prefix")
    final_report = membership(y_final, expected)
    if final_report.phi != swapped_report.phi:
        raise ContractViolation(f"phi changed under switching: {swapped_report.phi} -> {final_report.phi}")

    tilde_h = to_graph(y_final)
    embedded, _ = check_embedding(hnm, y_final)
    if embedded and not hnm.edges <= tilde_h.edges:
        raise ContractViolation("embedded H(n,m) is not a subgraph of the output")
    return PipelineResult(
        status=PipelineStatus.OK,
        tilde_h=tilde_h,
        embedded=embedded,
        swap_record=record,
        switchings=trace,
        lambda_y=cls.lam,
        phi=final_report.phi,
        **base,
    ), run


def run_pipeline(p: Params, rng: np.random.Generator, mode: str = SINGLE,
                 master_seed: int = 0, trial_index: int = 0,
                 max_rejects: Optional[int] = None,
                 max_passes: Optional[int] = None) -> PipelineResult:
    """
    Run the construction once, or repeat until a pass succeeds.

    Args:
        p: Instance parameters
        rng: Stream for this trial; resample passes continue on it
        mode: "single" reports the first pass whatever its status;
            "resample" repeats passes until status is ok, counting every
            rejected or aborted pass
        master_seed: Recorded in the result
        trial_index: Recorded in the result
        max_rejects: Forward switching proposal budget per loop
        max_passes: Optional cap on resample passes
    """
    if mode not in (SINGLE, RESAMPLE):
        raise ValueError(f"unknown pipeline mode {mode!r}")
    budget = settings.max_rejects if max_rejects is None else max_rejects
    expected = expected_phi(p)
    rejections: Dict[str, int] = {}
    passes = 0
    start = time.time()
    while True:
        passes += 1
        result, _ = run_pass(p, rng, expected, budget, master_seed, trial_index)
        trials_total.labels(stage="pipeline", status=result.status.value).inc()
        if mode == SINGLE or result.status == PipelineStatus.OK:
            break
        rejections[result.status.value] = rejections.get(result.status.value, 0) + 1
        if max_passes is not None and passes >= max_passes:
            break
    trial_duration.labels(stage="pipeline").observe(time.time() - start)
    logger.debug(
        f"[PIPELINE_DONE] trial={trial_index} status={result.status.value} passes={passes} "
        f"embedded={result.embedded} switchings={len(result.switchings)}"
    )
    return result.model_copy(update={"passes": passes, "rejections": rejections})
