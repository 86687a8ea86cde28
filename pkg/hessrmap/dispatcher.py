# -*- coding: utf-8 -*-
# This file is part of hessrmap

import queue
import logging
import threading

import numpy as np

from .errors import DomainError, HessrmapError
from .identities import Identity
from .report import CheckRecord

__all__ = ['Dispatcher', 'CheckContext']
LOG = logging.getLogger(__name__)
POLL_INTV = 0.1


class CheckContext:
    """Everything an identity needs besides the point: chart, oracle policy and run options."""

    def __init__(self, chart, cfg, command, tolerances=None, spec=None, perturb=0.0,
                 max_invariant_dimension=8):
        self.chart = chart
        self.cfg = cfg
        self.command = command
        self.tolerances = dict(exact=1e-12, roundtrip=1e-10)
        self.tolerances.update(tolerances or {})
        self.spec = spec
        self.perturb = perturb
        self.max_invariant_dimension = max_invariant_dimension

    @property
    def exact_tol(self) -> float:
        return self.tolerances['exact']

    @property
    def roundtrip_tol(self) -> float:
        return self.tolerances['roundtrip']


class _Worker(threading.Thread):
    def __init__(self, jobs: queue.Queue, results: queue.Queue, sigExit: threading.Event,
                 index=0):
        super().__init__(name="%s-%d" % (self.__class__.__name__, index), daemon=True)
        self._jobs = jobs
        self._results = results
        self._sigExit = sigExit

    def run(self):
        while not self._sigExit.is_set():
            try:
                job = self._jobs.get(block=True, timeout=POLL_INTV)
            except queue.Empty:
                continue
            if job is None:
                self._jobs.task_done()
                break
            try:
                for record in Dispatcher.execute(*job):
                    self._results.put(record)
            except BaseException:
                identity, _, index, _ = job
                self._results.put(CheckRecord.failed(identity.name, index, "worker stopped"))
                raise
            finally:
                self._jobs.task_done()


class Dispatcher(threading.Thread):
    """
    Run the registered identities of a command over a set of points.

    Identity classes register at class level (``Dispatcher.register`` works
    as a decorator); a run drains (identity, point) jobs with a pool of
    worker threads and collects the records sorted by (name, point index).

    """
    _identities = {}  # Dict[name, Identity subclass]
    _params = {}
    _runlock = threading.Lock()

    @classmethod
    def register(cls, klass=None, **params):
        if klass is None:
            return lambda k: cls.register(k, **params)
        assert klass is not None
        if not issubclass(klass, Identity) or not klass.name:
            raise TypeError("%s is not a named Identity" % klass)
        with cls._runlock:
            if klass.name in cls._identities and cls._identities[klass.name] is klass:
                LOG.debug("Identity %s is already registered in dispatcher.", klass.name)
            else:
                LOG.debug("Registering identity %s in dispatcher.", klass.name)
                cls._identities[klass.name] = klass
                cls._params[klass.name] = params
        return klass

    @classmethod
    def detach(cls, klass):
        LOG.debug("Attempting to detach %s", str(klass))
        name = getattr(klass, 'name', klass)
        cls._identities.pop(name, None)
        cls._params.pop(name, None)

    @classmethod
    def detach_all(cls):
        cls._identities.clear()
        cls._params = {}

    @classmethod
    def acquire_lock(cls, blocking=True):
        return cls._runlock.acquire(blocking=blocking)

    @classmethod
    def release_lock(cls):
        cls._runlock.release()

    @classmethod
    def __contains__(cls, item):
        name = getattr(item, 'name', item)
        return name in cls._identities

    @classmethod
    def identities(cls, command=None):
        """Registered identity classes (for ``command`` when given) in name order."""
        return [cls._identities[name] for name in sorted(cls._identities)
                if command is None or command in cls._identities[name].commands]

    def __init__(self, context: CheckContext, points=(), bundle_points=(), workers=1,
                 sigExit=None):
        super().__init__(name=self.__class__.__name__)
        self.sigExit = sigExit or threading.Event()
        self._context = context
        self._points = {'base': list(points), 'bundle': list(bundle_points)}
        self._workers = max(1, int(workers))
        self._jobs = queue.Queue()
        self._results = queue.Queue()
        self._threads = set()
        self.records = []

    @property
    def context(self) -> CheckContext:
        return self._context

    def _domain_records(self, target):
        """Points outside the chart domain get one failed record and no jobs."""
        chart = self._context.chart
        ok, records = [], []
        for index, point in enumerate(self._points[target]):
            x = point if target == 'base' else point.x
            if chart.in_domain(x):
                ok.append((index, point))
                continue
            det, cond = chart.domain_estimates(x)
            LOG.warning("Point %d (%s) outside the chart domain: det=%.6e cond=%.6e",
                        index, np.asarray(x).tolist(), det, cond)
            records.append(CheckRecord.failed(
                'domain.%s' % target, index, "Metric is degenerate at this point",
                values={'det': det, 'cond': cond}))
        return ok, records

    @staticmethod
    def execute(identity, context, index, point):
        """Run one identity at one point; errors become failed records."""
        try:
            return list(identity.run(context, index, point))
        except DomainError as e:
            LOG.warning("%s at point %d left the domain: %s", identity.name, index, e)
            return [CheckRecord.failed(identity.name, index, str(e),
                                       values={'det': e.det, 'cond': e.cond})]
        except HessrmapError as e:
            LOG.warning("%s at point %d failed: %s", identity.name, index, e)
            return [CheckRecord.failed(identity.name, index, str(e))]
        except Exception as e:
            LOG.exception("Unexpected error in %s at point %d", identity.name, index)
            return [CheckRecord.failed(identity.name, index, "%s: %s" % (type(e).__name__, e))]

    def run(self):
        self.acquire_lock(blocking=True)
        LOG.debug("Dispatcher run acquired runlock")
        try:
            instances = []
            for klass in self.identities(self._context.command):
                try:
                    instance = klass()
                    instance.configure(**self._params.get(klass.name, {}))
                except (TypeError, ValueError, AttributeError):
                    LOG.exception("Error instantiating identity %s.", klass.name)
                    continue
                instances.append(instance)
        finally:
            self.release_lock()

        records = []
        targets = {instance.target for instance in instances}
        accepted = {}
        for target in sorted(targets):
            accepted[target], rejected = self._domain_records(target)
            records.extend(rejected)
        for instance in instances:
            for index, point in accepted[instance.target]:
                self._jobs.put((instance, self._context, index, point))
        LOG.info("Dispatching %d jobs for %s on %d worker(s)", self._jobs.qsize(),
                 self._context.command, self._workers)

        for i in range(self._workers):
            worker = _Worker(self._jobs, self._results, self.sigExit, i)
            worker.start()
            self._threads.add(worker)
            self._jobs.put(None)
        self._exit_threads(join=True)
        if not self.sigExit.is_set():
            records.extend(self._unfinished())

        while True:
            try:
                records.append(self._results.get_nowait())
            except queue.Empty:
                break
        self.records = sorted(records, key=lambda r: r.sort_key)

    def _unfinished(self):
        """Jobs left in the queue after the workers stopped are reported as failures."""
        records = []
        while True:
            try:
                job = self._jobs.get_nowait()
            except queue.Empty:
                break
            if job is not None:
                identity, _, index, _ = job
                LOG.error("%s at point %d was never run", identity.name, index)
                records.append(CheckRecord.failed(identity.name, index, "check was not run"))
        return records

    def _exit_threads(self, join=False):
        for thread in self._threads:
            if join and thread.is_alive():
                thread.join()
        self._threads.clear()

    def exit(self, join=False):
        self.sigExit.set()
        if join:
            self.join()
