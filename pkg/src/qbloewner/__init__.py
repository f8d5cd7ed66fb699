"""Fitting quadratic-bilinear surrogates from H1/H2 transfer-function data."""

from .core import (ComplexSample, LinearSystem, QBSystem, eval_H1, eval_H2,
                   quad_apply, resolvent_apply, symmetrize_Q, to_standard_form)
from .loewner import fit_linear
from .qbfit import fit_qb

__version__ = "0.1.0"
