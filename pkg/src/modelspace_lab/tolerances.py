"""Named numerical tolerances shared by every module.

Defaults can be overridden for a block of code with :func:`override`; the
active set lives in a context variable, so threads and workers each see their
own values.
"""

from __future__ import annotations

import contextlib
import contextvars
import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    tol_pair: float = 1e-7    # zero pairing / clustering radius
    tol_root: float = 1e-9    # root residual, relative to max coefficient
    tol_eval: float = 1e-9    # pointwise function agreement
    tol_fr: float = 1e-8      # spectral factorization |s|^2 vs input
    tol_gram: float = 1e-8    # Gram matrix vs identity
    tol_op: float = 1e-8      # operator identities
    tol_rank: float = 1e-8    # relative singular value cutoff
    tol_match: float = 1e-7   # calculus match residual (Frobenius)

    def replace(self, **changes: float) -> "Tolerances":
        unknown = set(changes) - {f.name for f in dataclasses.fields(self)}
        if unknown:
            raise KeyError(f"unknown tolerance(s): {sorted(unknown)}")
        return dataclasses.replace(self, **{k: float(v) for k, v in changes.items()})

    def as_dict(self) -> dict[str, float]:
        return dataclasses.asdict(self)


DEFAULT = Tolerances()
_active: contextvars.ContextVar[Tolerances] = contextvars.ContextVar(
    "modelspace_lab_tolerances", default=DEFAULT
)


def current() -> Tolerances:
    return _active.get()


@contextlib.contextmanager
def override(**changes: float):
    """Temporarily replace some tolerances, e.g. ``override(tol_pair=1e-6)``."""
    token = _active.set(current().replace(**changes))
    try:
        yield current()
    finally:
        _active.reset(token)


def get(name: str, value: float | None = None) -> float:
    """Return ``value`` if given, else the active tolerance called ``name``."""
    return getattr(current(), name) if value is None else value
