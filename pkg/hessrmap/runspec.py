# -*- coding: utf-8 -*-
# This file is part of hessrmap

"""
Run specifications: the single JSON document a command reads.

Example::

    {
      "chart": {"potential": {"dimension": 3, "terms": [...]}},
      "points": [[1, 1, 1]],
      "bundle_points": [{"x": [1, 1, 1], "u": [0, 0, 0]}],
      "sample": {"count": 5, "box": 0.2},
      "seed": 42,
      "oracle": {"tol_rel": 1e-6},
      "reflection": {"u0": [0, 0, 0], "u0_prime": [0.5, 0, 0]},
      "ricci_direction": {"x": [1, 0, 0], "u": [0, 0, 0]},
      "output": "report.json"
    }

``chart`` may instead be ``{"canonical_cubic": {"S": ..., "b": ...}}`` or
``{"random_cubic": {"dimension": n}}`` (the latter needs a seed).

"""

import json
import logging
import itertools
from pathlib import Path

import numpy as np

from .bundle import BundlePoint
from .errors import InputError
from .hessian import HessianChart
from .oracle import OracleConfig
from .polynomial import MAX_DIMENSION, as_point, canonical_cubic
from .runconfig import rcParams

__all__ = ['RunSpec', 'COMMANDS', 'random_cubic_chart', 'sample_points', 'load_json',
           'load_points']
LOG = logging.getLogger(__name__)

COMMANDS = ('analyze', 'rmap', 'verify', 'roundtrip')
_FIELDS = {'chart', 'points', 'bundle_points', 'commands', 'oracle', 'seed', 'output',
           'sample', 'reflection', 'ricci_direction', 'perturb'}


def load_json(path, what='input'):
    """Read a JSON file; syntax errors carry the file, line and column."""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except (IOError, OSError) as e:
        raise InputError("Unable to read %s file %s: %s" % (what, path, e.strerror or e))
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError("Malformed JSON in %s: %s" % (path, e.msg),
                         "line %d column %d" % (e.lineno, e.colno))


def random_cubic_chart(rng: np.random.Generator, dimension, degeneracy_tol=1e-10) -> HessianChart:
    """
    A special real chart with cubic coefficients drawn from {-1, 0, 1} and ``b = (n + 2) I``.

    The metric is diagonally dominant on the box ``|x_i| <= 0.2``.

    """
    n = int(dimension)
    S = np.zeros((n, n, n), dtype=np.int64)
    for combo in itertools.combinations_with_replacement(range(n), 3):
        value = int(rng.integers(-1, 2))
        for perm in set(itertools.permutations(combo)):
            S[perm] = value
    b = (n + 2) * np.eye(n, dtype=np.int64)
    return HessianChart(canonical_cubic(S, b), degeneracy_tol)


def sample_points(chart: HessianChart, rng: np.random.Generator, count, box, center=None,
                  cond_cap=1e6, max_rejections=1000, where='sample'):
    """
    Uniform samples in ``center + box`` that lie in the chart domain with cond(g) <= cond_cap.

    Parameters
    ----------
    box : float or Sequence[Tuple[float, float]]
        A half-width around ``center`` or explicit per-coordinate bounds.

    Raises
    ------
    InputError
        When more than ``max_rejections`` candidates are rejected.

    """
    n = chart.dimension
    if isinstance(box, (int, float)) and not isinstance(box, bool):
        if not box >= 0:
            raise InputError("Sampling half-width must be non-negative", where + '.box')
        mid = np.zeros(n) if center is None else as_point(center, n)
        low, high = mid - float(box), mid + float(box)
    else:
        try:
            bounds = np.asarray(box, dtype=float)
        except (TypeError, ValueError):
            raise InputError("Sampling box must be a number or a list of [low, high] pairs",
                             where + '.box')
        if bounds.shape != (n, 2) or not np.all(bounds[:, 0] <= bounds[:, 1]):
            raise InputError("Sampling box must have %d [low, high] pairs" % n, where + '.box')
        low, high = bounds[:, 0], bounds[:, 1]
    points, rejected = [], 0
    while len(points) < count:
        p = rng.uniform(low, high)
        if chart.in_domain(p) and chart.domain_estimates(p)[1] <= cond_cap:
            points.append(p)
            continue
        rejected += 1
        if rejected > max_rejections:
            raise InputError("Sampling box yields no well-conditioned points "
                             "(%d rejections)" % rejected, where)
    LOG.debug("Sampled %d points with %d rejections", count, rejected)
    return points


def load_points(obj, dimension, where='points'):
    """
    Parse a points document: a list of base points, or an object with
    ``points`` and/or ``bundle_points``.

    """
    if isinstance(obj, list):
        obj = {'points': obj}
    if not isinstance(obj, dict):
        raise InputError("Points must be a list or an object", where)
    unknown = set(obj) - {'points', 'bundle_points'}
    if unknown:
        raise InputError("Unknown points fields: %s" % ", ".join(sorted(unknown)), where)
    base = obj.get('points', [])
    bundle = obj.get('bundle_points', [])
    if not isinstance(base, list) or not isinstance(bundle, list):
        raise InputError("'points' and 'bundle_points' must be lists", where)
    points = []
    for i, p in enumerate(base):
        try:
            points.append(as_point(p, dimension))
        except InputError as e:
            raise InputError(str(e), "%s.points[%d]" % (where, i))
    bundle_points = [BundlePoint.from_json(bp, dimension, "%s.bundle_points[%d]" % (where, i))
                     for i, bp in enumerate(bundle)]
    return points, bundle_points


class RunSpec:
    """
    A parsed run specification.

    Attributes
    ----------
    chart : HessianChart
    points : List[np.ndarray]
        Base points, explicit ones first, then sampled ones.
    bundle_points : List[BundlePoint]
        Explicit bundle points, or the base points lifted with zero (or
        sampled) fibers when none are given.
    oracle : OracleConfig
    seed : int or None

    """

    def __init__(self, chart, points=(), bundle_points=(), commands=(), oracle=None,
                 seed=None, output=None, reflection=None, ricci_direction=None, perturb=0.0):
        self.chart = chart
        self.points = list(points)
        self._bundle_points = list(bundle_points)
        self.commands = tuple(commands)
        self.oracle = oracle or OracleConfig()
        self.seed = seed
        self.output = output
        n = chart.dimension
        reflection = reflection or {}
        self.u0 = np.asarray(reflection.get('u0', np.zeros(n)), dtype=float)
        self.u0_prime = np.asarray(reflection.get('u0_prime', np.full(n, 0.5)), dtype=float)
        ricci_direction = ricci_direction or {}
        self.ricci_x = np.asarray(ricci_direction.get('x', np.eye(n)[0]), dtype=float)
        self.ricci_u = np.asarray(ricci_direction.get('u', np.zeros(n)), dtype=float)
        self.perturb = float(perturb)
        if not self.points and not self._bundle_points:
            raise InputError("Run specification has no points", 'spec.points')
        if not self.points:
            self.points = [np.array(bp.x) for bp in self._bundle_points]

    @property
    def bundle_points(self):
        if self._bundle_points:
            return list(self._bundle_points)
        return [BundlePoint(p) for p in self.points]

    @classmethod
    def load(cls, path, **overrides) -> 'RunSpec':
        return cls.from_json(load_json(path, 'spec'), **overrides)

    @classmethod
    def from_json(cls, obj, config=None, seed=None, points=None, oracle_overrides=None,
                  perturb=None, output=None, where='spec') -> 'RunSpec':
        """
        Build a run specification with command-line overrides applied.

        Parameters
        ----------
        obj : dict
            The decoded specification document.
        config : _ConfigParams, Optional
            Source of defaults, :data:`rcParams` when omitted.
        seed, points, perturb, output
            Overrides from the command line; ``points`` is a decoded points
            document replacing the spec's own points.
        oracle_overrides : dict, Optional
            Oracle options from the command line.

        """
        config = config or rcParams
        if not isinstance(obj, dict):
            raise InputError("Run specification must be a JSON object", where)
        unknown = set(obj) - _FIELDS
        if unknown:
            raise InputError("Unknown specification fields: %s" % ", ".join(sorted(unknown)),
                             where)
        if seed is None:
            seed = obj.get('seed')
        if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int) or seed < 0):
            raise InputError("Seed must be a non-negative integer", where + '.seed')
        rng = np.random.default_rng(seed) if seed is not None else None

        chart = cls._chart(obj.get('chart'), config, rng, where + '.chart')
        n = chart.dimension

        oracle = OracleConfig.from_json(obj.get('oracle'), where + '.oracle',
                                        defaults=config['oracle'])
        if oracle_overrides:
            oracle = oracle.replace(**oracle_overrides)

        if points is not None:
            base, bundle = load_points(points, n, 'points')
        else:
            base, bundle = load_points({k: obj[k] for k in ('points', 'bundle_points')
                                        if k in obj}, n, where)

        sample = obj.get('sample')
        if sample is not None and points is None:
            if rng is None:
                raise InputError("Random sampling requires a seed", where + '.sample')
            sampled, fibers = cls._sample(chart, sample, rng, config, where + '.sample')
            if fibers is not None and not bundle:
                bundle = [BundlePoint(p) for p in base]
            base.extend(sampled)
            if bundle:
                fibers = fibers if fibers is not None else [None] * len(sampled)
                bundle.extend(BundlePoint(p, u) for p, u in zip(sampled, fibers))

        commands = obj.get('commands', [])
        if not isinstance(commands, list) or set(commands) - set(COMMANDS):
            raise InputError("'commands' must be a list drawn from %s" % (COMMANDS,),
                             where + '.commands')

        reflection = obj.get('reflection')
        if reflection is not None:
            reflection = cls._vectors(reflection, ('u0', 'u0_prime'), n,
                                      where + '.reflection')
        ricci_direction = obj.get('ricci_direction')
        if ricci_direction is not None:
            ricci_direction = cls._vectors(ricci_direction, ('x', 'u'), n,
                                           where + '.ricci_direction')

        if perturb is None:
            perturb = obj.get('perturb', 0.0)
        if isinstance(perturb, bool) or not isinstance(perturb, (int, float)):
            raise InputError("perturb must be a number", where + '.perturb')

        output = output or obj.get('output')
        spec = cls(chart, base, bundle, commands, oracle, seed, output, reflection,
                   ricci_direction, perturb)
        LOG.info("Run specification: n=%d, %d base points, %d bundle points", n,
                 len(spec.points), len(spec.bundle_points))
        return spec

    @staticmethod
    def _chart(obj, config, rng, where) -> HessianChart:
        tol = config['chart.degeneracy_tol'] or 1e-10
        if not isinstance(obj, dict):
            raise InputError("Specification needs a 'chart' object", where)
        if 'random_cubic' in obj:
            params = obj['random_cubic']
            if rng is None:
                raise InputError("A random chart requires a seed", where + '.random_cubic')
            dim = params.get('dimension') if isinstance(params, dict) else None
            if isinstance(dim, bool) or not isinstance(dim, int) or not 1 <= dim <= MAX_DIMENSION:
                raise InputError("random_cubic needs an integer dimension in [1, %d]"
                                 % MAX_DIMENSION, where + '.random_cubic.dimension')
            return random_cubic_chart(rng, dim, obj.get('degeneracy_tol', tol))
        if 'canonical_cubic' in obj:
            params = obj['canonical_cubic']
            if not isinstance(params, dict) or 'S' not in params or 'b' not in params:
                raise InputError("canonical_cubic needs 'S' and 'b'", where + '.canonical_cubic')
            return HessianChart(canonical_cubic(params['S'], params['b']),
                                obj.get('degeneracy_tol', tol))
        return HessianChart.from_json(obj, where, degeneracy_tol=tol)

    @staticmethod
    def _sample(chart, sample, rng, config, where):
        if not isinstance(sample, dict):
            raise InputError("'sample' must be an object", where)
        count = sample.get('count', 1)
        if isinstance(count, bool) or not isinstance(count, int) or count < 1:
            raise InputError("Sample count must be a positive integer", where + '.count')
        box = sample.get('box', config['sampling.box'])
        center = sample.get('center')
        if center is not None:
            try:
                center = as_point(center, chart.dimension)
            except InputError as e:
                raise InputError(str(e), where + '.center')
        cond_cap = sample.get('cond_cap', config['sampling.cond_cap'])
        if isinstance(cond_cap, bool) or not isinstance(cond_cap, (int, float)) \
                or not cond_cap >= 1:
            raise InputError("cond_cap must be a number >= 1", where + '.cond_cap')
        max_rejections = sample.get('max_rejections', config['sampling.max_rejections'])
        if isinstance(max_rejections, bool) or not isinstance(max_rejections, int) \
                or max_rejections < 0:
            raise InputError("max_rejections must be a non-negative integer",
                             where + '.max_rejections')
        points = sample_points(chart, rng, count, box, center, cond_cap=cond_cap,
                               max_rejections=max_rejections, where=where)
        fibers = None
        fiber_box = sample.get('fiber_box')
        if fiber_box is not None:
            if isinstance(fiber_box, bool) or not isinstance(fiber_box, (int, float)):
                raise InputError("fiber_box must be a number", where + '.fiber_box')
            n = chart.dimension
            fibers = [rng.uniform(-fiber_box, fiber_box, size=n) for _ in points]
        return points, fibers

    @staticmethod
    def _vectors(obj, keys, dimension, where):
        if not isinstance(obj, dict) or set(obj) - set(keys):
            raise InputError("Expected an object with keys %s" % (keys,), where)
        out = {}
        for key in keys:
            if key in obj:
                try:
                    out[key] = as_point(obj[key], dimension)
                except InputError as e:
                    raise InputError(str(e), "%s.%s" % (where, key))
        return out

    def summary(self) -> dict:
        return {'dimension': self.chart.dimension,
                'chart': self.chart.to_json(),
                'oracle': self.oracle.to_json(),
                'seed': self.seed,
                'points': [p.tolist() for p in self.points],
                'bundle_points': [bp.to_json() for bp in self.bundle_points]}
