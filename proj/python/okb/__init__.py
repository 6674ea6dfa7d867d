"""Exact discrete Okounkov bodies, stability thresholds and lattice estimates.

Rationals are returned as fractions.Fraction; arguments may be Fraction,
int or "p/q" strings.
"""

from ._okb import *  # noqa: F401,F403
from ._okb import models, InputError, DomainError  # noqa: F401
