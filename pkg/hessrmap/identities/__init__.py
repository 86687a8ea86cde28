# -*- coding: utf-8 -*-
# This file is part of hessrmap

import abc
import logging
from importlib import import_module

from ..report import CheckRecord

__all__ = ['Identity', 'load_identities', 'DEFAULT_MODULES']
LOG = logging.getLogger(__name__)

DEFAULT_MODULES = ('base', 'bundle')


class Identity(metaclass=abc.ABCMeta):
    """
    A named check evaluated at single points.

    Attributes
    ----------
    name : str
        Record name; sub-checks are reported as ``name/part``.
    commands : Tuple[str]
        Commands that run this identity.
    target : str
        ``base`` (points of the chart) or ``bundle`` (points of TM).
    requires_special_real : bool
        Charts of degree above three get a single skipped record.

    """
    name = None
    commands = ('verify',)
    target = 'base'
    requires_special_real = False
    options = {}

    def configure(self, **options):
        LOG.debug("Configuring identity %s with options: %s", self.name, options)
        for key, value in options.items():
            lkey = str(key).lower()
            if lkey in self.options:
                dtype = self.options[lkey]
                if not isinstance(value, dtype):
                    LOG.warning("Invalid option value for %s.%s: %r", self.name, key, value)
                    continue
                setattr(self, lkey, value)

    def run(self, context, index, point):
        if self.requires_special_real and not context.chart.is_special_real():
            return [CheckRecord.skipped(self.name, index, "not special real")]
        return list(self.check(context, index, point))

    @abc.abstractmethod
    def check(self, context, index, point):
        """Yield the CheckRecords of this identity at ``point``."""

    def part(self, suffix=None) -> str:
        return self.name if suffix is None else "%s/%s" % (self.name, suffix)

    def compare(self, context, index, closed, oracle, suffix=None, values=None):
        """Closed form against oracle with the configured absolute/relative tolerance."""
        cfg = context.cfg
        return CheckRecord.compare(self.part(suffix), index, cfg.residual(closed, oracle),
                                   cfg.tolerance(oracle), closed, oracle, values)

    def bound(self, index, residual, tolerance, suffix=None, values=None, closed=None):
        """A residual that must stay below a fixed tolerance."""
        return CheckRecord.compare(self.part(suffix), index, float(residual), tolerance,
                                   closed=closed, values=values)


def load_identities(names=DEFAULT_MODULES, path=None, register=True):
    """
    Import identity modules and (optionally) register their identities with the dispatcher.

    Each module lists its identity classes in ``__identities__``.

    Raises
    ------
    ImportError
        If a module cannot be imported or does not define ``__identities__``.

    """
    pkg_name = path or "%s.identities" % __package__.split('.')[0]
    loaded = []
    for name in names:
        module = import_module(".%s" % name, package=pkg_name)
        try:
            classes = getattr(module, '__identities__')
        except AttributeError:
            raise ImportError("__identities__ is not defined in identity module %s." % name)
        for klass in classes:
            if isinstance(klass, str):
                klass = getattr(module, klass)
            if not issubclass(klass, Identity):
                raise ImportError("%s in module %s is not an Identity" % (klass, name))
            if register:
                from ..dispatcher import Dispatcher
                Dispatcher.register(klass)
            loaded.append(klass)
    LOG.debug("Loaded %d identities from %s", len(loaded), ", ".join(names))
    return loaded
