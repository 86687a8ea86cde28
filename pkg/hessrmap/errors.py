# -*- coding: utf-8 -*-
# This file is part of hessrmap

"""
Exception hierarchy shared by every hessrmap module.

The command line maps InputError to exit code 2; every other error raised
while checking a point becomes a failed record in the report.

"""

__all__ = ['HessrmapError', 'InputError', 'DomainError', 'UnsupportedModeError',
           'NotInImageError']


class HessrmapError(Exception):
    pass


class InputError(HessrmapError, ValueError):
    """Malformed or inconsistent input.

    Parameters
    ----------
    message : str
    where : str, Optional
        Position annotation, e.g. ``potential.terms[2].den`` or ``line 3 column 7``

    """
    def __init__(self, message, where=None):
        self.where = where
        if where:
            message = "%s (at %s)" % (message, where)
        super().__init__(message)


class DomainError(HessrmapError, ArithmeticError):
    """The metric is degenerate (or too badly conditioned) at a point."""
    def __init__(self, message, point=None, det=None, cond=None):
        self.point = point
        self.det = det
        self.cond = cond
        super().__init__("%s [det=%.6e, cond=%.6e]" % (
            message, float('nan') if det is None else det,
            float('nan') if cond is None else cond))


class UnsupportedModeError(HessrmapError):
    pass


class NotInImageError(HessrmapError):
    """A sampled bundle metric is not an r-map structure in canonical coordinates."""
    def __init__(self, message, residuals=None):
        self.residuals = dict(residuals or {})
        super().__init__(message)
