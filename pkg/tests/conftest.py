"""Shared fixtures.

Every Triangulation constructed during a test is recorded; after the test the
edge-count inequalities (strict with boundary, equalities without) are
checked on each one that is a valid manifold.
"""

import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

from fermionic_tqft.triangulation import Triangulation, TriangulationError  # noqa: E402
from oracles import lemma1_holds  # noqa: E402

settings.register_profile("default", deadline=None)
settings.load_profile("default")

_created = []
LEMMA1 = {"checked": 0, "failures": []}
ACCEPTANCE = {}

_orig_init = Triangulation.__init__


def _recording_init(self, *args, **kwargs):
    _orig_init(self, *args, **kwargs)
    _created.append(self)


Triangulation.__init__ = _recording_init


def check_lemma1(t):
    """None if fine or not a manifold; otherwise a description of the failure."""
    try:
        d = t.validate()
    except TriangulationError as exc:
        if any("edge count" in p for p in exc.problems):
            return "validate reports %s" % exc
        return None
    LEMMA1["checked"] += 1
    if not lemma1_holds(d):
        return "counts %s violate the inequalities" % (d,)
    return None


@pytest.fixture(autouse=True)
def lemma1_on_every_triangulation(request):
    _created.clear()
    yield
    bad = []
    for t in list(_created):
        msg = check_lemma1(t)
        if msg:
            bad.append(msg)
    _created.clear()
    if bad:
        LEMMA1["failures"].extend(bad)
        pytest.fail("edge-count lemma failed on %d triangulations: %s" % (len(bad), bad[:3]))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            ok, text = ACCEPTANCE[k]
            terminalreporter.write_line("criterion %2d: %s  %s" % (k, "PASS" if ok else "FAIL", text))
    terminalreporter.write_line("edge-count lemma checked on %d valid triangulations, %d failures"
                                % (LEMMA1["checked"], len(LEMMA1["failures"])))
