"""Seeded trial runner with optional process-level parallelism."""
import logging
from functools import partial
from multiprocessing import Pool
from typing import Any, Callable, List, Optional

from config import settings
from services.generators import trial_rng

logger = logging.getLogger(__name__)


def _invoke(trial_index: int, worker: Callable, master_seed: int, tag: str, kwargs: dict) -> Any:
    rng = trial_rng(master_seed, trial_index, tag)
    return worker(rng, trial_index, **kwargs)


def run_trials(worker: Callable, master_seed: int, trials: int, tag: str,
               jobs: Optional[int] = None, **kwargs) -> List[Any]:
    """
    Run `worker(rng, trial_index, **kwargs)` for trial_index in range(trials).

    Each trial gets its own stream from (master_seed, tag, trial_index), and
    results come back in trial order, so the output does not depend on jobs.
    The worker must be a module-level function when jobs > 1.
    """
    jobs = settings.jobs if jobs is None else jobs
    task = partial(_invoke, worker=worker, master_seed=master_seed, tag=tag, kwargs=kwargs)
    logger.info(f"[TRIALS_START] tag={tag} trials={trials} seed={master_seed} jobs={jobs}")
    if jobs <= 1 or trials < 2:
        results = [task(i) for i in range(trials)]
    else:
        chunksize = max(1, trials // (jobs * 8))
        with Pool(processes=jobs) as pool:
            results = pool.map(task, range(trials), chunksize=chunksize)
    logger.info(f"[TRIALS_DONE] tag={tag} trials={trials}")
    return results
