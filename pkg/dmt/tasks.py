# tasks.py
from concurrent.futures import ThreadPoolExecutor
import logging

from celery import group, shared_task
from django.conf import settings

from .models import SweepConfig
from .simulation import batch_sizes, count_batch_events

logger = logging.getLogger(__name__)


@shared_task
def simulate_batch(payload, snr_db, batch_index, batch_trials, direct_exponents=False):
    """
    Count outage events in one batch of trials at one SNR point
    """
    try:
        cfg = SweepConfig.from_payload(payload)
        return count_batch_events(cfg, snr_db, batch_index, batch_trials, direct_exponents)
    except Exception as e:
        logger.error(f"Failed to simulate batch {batch_index} at {snr_db} dB: {str(e)}")
        raise


def run_batches(cfg, snr_db, workers=None, direct_exponents=False):
    """
    Total outage events over all batches of one SNR point. Eager mode runs
    the task body on a local thread pool, otherwise the batches go out to
    Celery workers as one group.
    """
    payload = cfg.to_payload()
    jobs = list(enumerate(batch_sizes(cfg.trials_per_point, cfg.batch_size)))

    if settings.CELERY_TASK_ALWAYS_EAGER:
        workers = workers or settings.ICR_DMT_THREADS
        logger.debug(f"Running {len(jobs)} batches at {snr_db} dB on {workers} threads")
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(
                lambda job: simulate_batch(payload, snr_db, job[0], job[1], direct_exponents),
                jobs,
            ))
        return sum(counts)

    logger.debug(f"Dispatching {len(jobs)} batches at {snr_db} dB to Celery workers")
    batch_group = group(
        simulate_batch.s(payload, snr_db, index, trials, direct_exponents) for index, trials in jobs
    )
    return sum(batch_group.apply_async().get())
