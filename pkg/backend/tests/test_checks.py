from types import SimpleNamespace

import pytest

from conic.checks import CHECKS, CheckResult, run_checks
from conic.config import Settings
from conic.errors import PrecisionError


def test_result_line():
    assert CheckResult("gamma recurrence", True, "ok").line() == "PASS gamma recurrence: ok"
    assert CheckResult("defect test", False, "bad").as_dict()["passed"] is False


def test_failing_check_is_reported_not_raised(monkeypatch):
    def broken(settings: Settings):
        raise PrecisionError("no digits left")

    monkeypatch.setattr("conic.checks.CHECKS", (("broken", broken),) + CHECKS[:1])
    results = run_checks()
    assert [r.passed for r in results] == [False, True]
    assert "PrecisionError" in results[0].detail


@pytest.mark.slow
def test_full_suite_passes():
    results = run_checks()
    assert len(results) == 11
    failed = [r.line() for r in results if not r.passed]
    assert not failed


def test_branch_consistency_uses_tight_limit_in_double_precision(monkeypatch):
    loose = SimpleNamespace(overlap_mismatch=5e-6)
    monkeypatch.setattr("conic.checks.conic_params", lambda m, settings=None: loose)
    (check,) = [fn for name, fn in CHECKS if name == "branch consistency"]
    passed, detail = check(Settings())
    assert not passed
    assert "limit 1e-06" in detail
    assert check(Settings(wide=True))[0] is False
