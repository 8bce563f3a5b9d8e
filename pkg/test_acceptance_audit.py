#!/usr/bin/env python3
"""
Test single acceptance criteria
"""

import acceptance_audit
from acceptance_audit import check_basis_proxy, homogeneous_families


def _proxy_report(n, deficient):
    return {"n": n, "groups": deficient, "deficient": deficient, "independent": not deficient}


def test_basis_proxy_deficiency_fails_the_criterion(monkeypatch):
    group = {"co": [0, 0, 0], "ro": [0, 0, 0], "size": 9, "rank": 5}
    monkeypatch.setattr(acceptance_audit, "basis_proxy_check",
                        lambda n, **kwargs: _proxy_report(n, [group] if n == 3 else []))
    result = check_basis_proxy()
    assert result["passed"] is False
    assert result["checks"] == 2
    assert result["findings"] == ["n=3 group co=[0, 0, 0] ro=[0, 0, 0]: rank 5 of 9"]


def test_basis_proxy_criterion_passes_without_deficiency(monkeypatch):
    monkeypatch.setattr(acceptance_audit, "basis_proxy_check", lambda n, **kwargs: _proxy_report(n, []))
    result = check_basis_proxy()
    assert result["passed"] is True
    assert result["findings"] == []


def test_homogeneous_families():
    families = homogeneous_families(bound=1, size=8)
    assert all(len({a - b + c for a, b, c in family}) == 1 for family in families)
    assert [(0, 0, 0), (0, 1, 1), (1, 1, 0)] in families
