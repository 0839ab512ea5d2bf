import numpy as np
import pytest

from scramblemark import experiments, testimages
from scramblemark.embed import EmbedConfig


@pytest.fixture(scope="session")
def images():
    return testimages.load_all()


@pytest.fixture(scope="session")
def lena(images):
    return images[testimages.LENA_CLASS]


@pytest.fixture(scope="session")
def logo():
    return testimages.logo()


@pytest.fixture(scope="session")
def keys():
    return experiments.Keys()


@pytest.fixture(scope="session")
def cfg():
    return EmbedConfig()


@pytest.fixture(scope="session")
def marked(images, logo, keys, cfg):
    """name -> (image I, image II) for every test image."""
    return {name: experiments.watermark(img, logo, keys, cfg) for name, img in images.items()}


@pytest.fixture(scope="session")
def lena_marked(marked):
    return marked[testimages.LENA_CLASS][1]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one line per acceptance criterion, printed after the test run
ACCEPTANCE_LINES = {}


@pytest.fixture
def acceptance(request):
    def record(criterion: int, title: str, checks):
        """checks: list of (label, ok, detail). Records a summary line and asserts."""
        failed = [f"{label}: {detail}" for label, ok, detail in checks if not ok]
        status = "PASS" if not failed else "FAIL"
        detail = "; ".join(failed) if failed else f"{len(checks)} checks"
        ACCEPTANCE_LINES[criterion] = f"criterion {criterion:>2} {status}  {title} ({detail})"
        print(ACCEPTANCE_LINES[criterion])
        assert not failed, "\n".join(failed)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
