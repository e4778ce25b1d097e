"""Small glue around mpmath's interval context."""
from contextlib import contextmanager
from fractions import Fraction
from threading import Lock

from mpmath import iv
from mpmath.libmp import to_rational

_lock = Lock()


@contextmanager
def precision(bits: int):
    """Run with the interval context at ``bits`` of working precision.

    The mpmath context is global, so callers are serialised.
    """
    with _lock:
        saved = iv.prec
        iv.prec = bits
        try:
            yield iv
        finally:
            iv.prec = saved


def lower(x) -> Fraction:
    p, q = to_rational(x._mpi_[0])
    return Fraction(int(p), int(q))


def upper(x) -> Fraction:
    p, q = to_rational(x._mpi_[1])
    return Fraction(int(p), int(q))
