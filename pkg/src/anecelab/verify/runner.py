"""
Concurrent execution of independent check groups.

Each task is a plain callable returning a list of CheckResult. Tasks run on
a thread pool under an aiojobs scheduler that bounds how many are in
flight; results are sorted by name so the report never depends on
completion order.
"""

import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Sequence

import aiojobs

from anecelab.model import CheckResult

log = logging.getLogger(__name__)

CheckTask = Callable[[], List[CheckResult]]


async def run_checks(tasks: Sequence[CheckTask], workers: int = 4) -> List[CheckResult]:
    loop = asyncio.get_running_loop()
    results: List[CheckResult] = []

    with ThreadPoolExecutor(max_workers=workers) as pool:

        async def run_one(task: CheckTask) -> List[CheckResult]:
            return await loop.run_in_executor(pool, task)

        scheduler = aiojobs.Scheduler(limit=workers, pending_limit=max(len(tasks), 1))
        try:
            jobs = [await scheduler.spawn(run_one(task)) for task in tasks]
            for job in jobs:
                results.extend(await job.wait())
        finally:
            await scheduler.close()

    results.sort(key=lambda r: r.name)
    log.info(
        "Finished check run",
        extra={
            "tasks": len(tasks),
            "checks": len(results),
            "unexpected": sum(not r.as_expected for r in results),
        },
    )
    return results


def run_suite(tasks: Sequence[CheckTask], workers: int = 4) -> List[CheckResult]:
    return asyncio.run(run_checks(tasks, workers=workers))


def apply_tamper(
    results: Iterable[CheckResult], prefixes: Sequence[str]
) -> List[CheckResult]:
    """Shift the target of every check whose name starts with a prefix by +1."""
    tampered = []
    for result in results:
        if any(result.name.startswith(p) for p in prefixes):
            log.warning("Tampering check target", extra={"check": result.name})
            result = result.retarget(1.0)
        tampered.append(result)
    return tampered


def all_as_expected(results: Iterable[CheckResult]) -> bool:
    ok = True
    for result in results:
        if not result.as_expected:
            log.warning(
                "Check did not behave as expected",
                extra={
                    "check": result.name,
                    "measured": result.measured,
                    "target": result.target,
                    "control": result.control,
                },
            )
            ok = False
    return ok
