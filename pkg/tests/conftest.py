import pytest

from mnpieri.symfunc import SymRing, set_default_ring

# criterion number -> list of (test name, role, outcome)
_RESULTS: dict[int, list] = {}

TITLES = {
    1: "classical Pieri rule",
    2: "Macdonald polynomials and nabla",
    3: "first q,t Pieri rule from the unit kernel",
    4: "norm map on P and E kernels",
    5: "hook evaluation closed form",
    6: "wheel conditions",
    7: "integer-slope Pieri rule",
    8: "diagonal degree bounds",
    9: "highest degree term of d^lambda",
    10: "hook expansion of e_1^{m/n} . 1",
    11: "LLT ratio and symmetry",
    12: "collapse graph connectivity",
    13: "bubble game and cover uniqueness",
    14: "Heisenberg relation and adjoints",
    15: "variable inversion and coproduct",
}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, companion=False): acceptance criterion number")


@pytest.fixture(scope="session", autouse=True)
def ring(request):
    # a persistent cache keeps repeated runs fast
    cache = request.config.cache.mkdir("mnpieri-macdonald") if getattr(request.config, "cache", None) else None
    r = SymRing(9, cache)
    set_default_ring(r)
    return r


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        role = "companion" if mark.kwargs.get("companion") else "literal"
        _RESULTS.setdefault(mark.args[0], []).append((item.name, role, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for c in sorted(_RESULTS):
        rows = _RESULTS[c]
        literal = [ok for _, role, ok in rows if role == "literal"]
        status = "PASS" if literal and all(literal) else "FAIL"
        extra = ""
        companions = [(name, ok) for name, role, ok in rows if role == "companion"]
        if status == "FAIL" and companions:
            extra = "  (corrected form: " + ", ".join(
                f"{name.removeprefix('test_')} {'pass' if ok else 'FAIL'}" for name, ok in companions) + ")"
        tr.write_line(f"criterion {c:2d} {status}  {TITLES.get(c, '')}{extra}")
