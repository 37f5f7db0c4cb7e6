import numpy as np
import pytest
from hypothesis import settings

from twolevel.scenarios import ScenarioSpec, sine_scenario

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def sine_bundles():
    cache = {}

    def get(nu0T, **kw):
        key = (nu0T, tuple(sorted(kw.items())))
        if key not in cache:
            cache[key] = sine_scenario(ScenarioSpec.from_product(nu0T, **kw))
        return cache[key]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
