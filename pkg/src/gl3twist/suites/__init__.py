"""Verification suites.

Each suite module exposes ``tasks(cfg)`` returning immutable ``Task``
descriptors.  A task names a module-level check function and its keyword
arguments, so it can be shipped to a worker process; results are merged in
task order, which keeps reports identical for any number of workers.
"""
from __future__ import annotations

import importlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any

from ..config import RunConfig
from ..report import CheckRecord, Report

SUITES = ("delta", "charsum", "oscint", "expcalc")


@dataclass(frozen=True)
class Task:
    criterion: int  # acceptance item the records feed
    module: str
    func: str
    kwargs: tuple[tuple[str, Any], ...] = ()

    @classmethod
    def make(cls, criterion: int, module: str, func: str, **kwargs) -> "Task":
        frozen = tuple(sorted((k, _freeze(v)) for k, v in kwargs.items()))
        return cls(criterion, module, func, frozen)

    def run(self) -> list[CheckRecord]:
        mod = importlib.import_module(f"{__name__}.{self.module}")
        return list(getattr(mod, self.func)(**dict(self.kwargs)))


def _freeze(v):
    if isinstance(v, list):
        return tuple(_freeze(x) for x in v)
    if isinstance(v, dict):
        return tuple(sorted((k, _freeze(x)) for k, x in v.items()))
    return v


def _run_task(task: Task) -> list[CheckRecord]:
    return task.run()


def suite_tasks(name: str, cfg: RunConfig) -> list[Task]:
    names = SUITES if name == "all" else (name,)
    out: list[Task] = []
    for n in names:
        if n not in SUITES:
            raise KeyError(n)
        out.extend(importlib.import_module(f"{__name__}.{n}").tasks(cfg))
    return out


def run_tasks(tasks: list[Task], jobs: int = 1) -> list[list[CheckRecord]]:
    """Records per task, in task order whatever the pool does."""
    if jobs <= 1 or len(tasks) <= 1:
        return [t.run() for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_task, tasks))


def run_suite(name: str, cfg: RunConfig) -> Report:
    tasks = suite_tasks(name, cfg)
    report = Report(name)
    for recs in run_tasks(tasks, cfg.jobs):
        report.records.extend(recs)
    return report
