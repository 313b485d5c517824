import pytest
from expected_outputs import expected_path, transcript

from ktgspin.ktgio import CORPUS


@pytest.mark.parametrize("name", CORPUS)
def test_cli_reports_match_expected_files(name):
    want = expected_path(name).read_text(encoding="utf-8")
    assert transcript(name) == want


def test_reports_are_stable():
    assert transcript("granny-theta") == transcript("granny-theta")
