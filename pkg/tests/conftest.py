import pytest

from toricrank.cohom import build_ring
from toricrank.fan import MoriCone, fan_from_triangulation, projective_space_fan
from toricrank.geom import pn_polytope
from toricrank.tri import appendix_triangulation


@pytest.fixture(scope="session")
def model():
    """Triangulation, fan and ring of the model polytope, cached per n."""
    cache = {}

    def get(n):
        if n not in cache:
            T = appendix_triangulation(n)
            F = fan_from_triangulation(T)
            cache[n] = {"P": pn_polytope(n), "T": T, "F": F, "R": build_ring(F)}
        return cache[n]

    return get


@pytest.fixture(scope="session")
def mori(model):
    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = MoriCone(model(n)["F"])
        return cache[n]

    return get


@pytest.fixture(scope="session")
def line_fan():
    F = projective_space_fan(1)
    return F, build_ring(F)


class _Criterion:
    def __init__(self, store, number, title):
        self.store, self.number, self.title = store, number, title
        self.detail = ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        ok = exc_type is None
        detail = self.detail if ok else f"{self.detail} [{exc_type.__name__}: {(str(exc).splitlines() or [''])[0]}]".strip()
        prev = self.store.get(self.number)
        if prev is not None:
            ok = ok and prev[0]
            detail = f"{prev[2]}; {detail}"
        self.store[self.number] = (ok, self.title, detail)
        line = f"criterion {self.number}: {'PASS' if ok else 'FAIL'}  {self.title}  {detail}"
        print(line)
        return False


@pytest.fixture
def criterion(request):
    store = request.config.__dict__.setdefault("_acceptance", {})

    def make(number, title):
        return _Criterion(store, number, title)

    return make


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.__dict__.get("_acceptance")
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(store):
        ok, title, detail = store[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  {detail}")
