"""Deliberate fault injection for sensitivity testing.

The verification pipeline is expected to pass everywhere, which makes a
vacuous pass (a pipeline that cannot fail) indistinguishable from a real
one.  Each named fault below corrupts one load-bearing step; the test
suite checks that every fault makes some batch instance fail.

Faults are process-global flags.  They are only ever toggled from tests,
scripts, and the hidden CLI flag; library code never activates them.
"""

from contextlib import contextmanager

NEGATE_FAST_PATH = "negate-fast-path"
SKIP_EVEN_SCALING = "skip-even-scaling"
DROP_UNIT_REP = "drop-unit-rep"

FAULT_NAMES = (NEGATE_FAST_PATH, SKIP_EVEN_SCALING, DROP_UNIT_REP)

_active = set()


def activate(name: str) -> None:
    if name not in FAULT_NAMES:
        raise ValueError(f"unknown fault {name!r}; known: {', '.join(FAULT_NAMES)}")
    _active.add(name)


def deactivate(name: str) -> None:
    _active.discard(name)


def clear() -> None:
    _active.clear()


def is_active(name: str) -> bool:
    return name in _active


def active_names():
    return tuple(sorted(_active))


@contextmanager
def injected(*names):
    for name in names:
        activate(name)
    try:
        yield
    finally:
        for name in names:
            deactivate(name)
