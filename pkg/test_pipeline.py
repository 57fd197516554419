"""Tests for the end-to-end construction."""
import pytest

from models import PipelineStatus
from services.generators import trial_rng
from services.params import derive_params
from services.pipeline import RESAMPLE, SINGLE, run_pipeline


def test_single_pass_on_the_smallest_instance():
    p = derive_params(6, 2, 3)
    for trial in range(20):
        result = run_pipeline(p, trial_rng(42, trial, "pipeline"), mode=SINGLE, master_seed=42, trial_index=trial)
        assert result.passes == 1
        assert result.hnm.edges == frozenset()
        if result.status == PipelineStatus.OK:
            assert result.tilde_h.is_regular(2)
            assert len(result.tilde_h.edges) == 4
            assert len(result.switchings) == result.lambda_y
        else:
            assert result.tilde_h is None
            assert result.status in (PipelineStatus.REJECTED_E, PipelineStatus.ABORTED_REJECTS)


def test_resample_until_ok():
    p = derive_params(6, 2, 3)
    for trial in range(10):
        result = run_pipeline(p, trial_rng(7, trial, "resample"), mode=RESAMPLE)
        assert result.status == PipelineStatus.OK
        assert sum(result.rejections.values()) == result.passes - 1
        assert result.embedded


def test_construction_embeds_hnm_when_both_events_hold():
    p = derive_params(57, 6, 3)
    assert p.m == 6
    ok = 0
    for trial in range(8):
        result = run_pipeline(p, trial_rng(5, trial, "embed"), mode=RESAMPLE, max_passes=50)
        if result.status != PipelineStatus.OK:
            continue
        ok += 1
        assert len(result.hnm.edges) == p.m
        assert result.tilde_h.is_regular(p.d)
        assert len(result.tilde_h.edges) == p.M
        assert len(result.switchings) == result.lambda_y
        if result.event_A and result.event_B:
            assert result.embedded
        if result.embedded:
            assert result.hnm.edges <= result.tilde_h.edges
    assert ok > 0


def test_same_seed_same_result():
    p = derive_params(19, 3, 3)
    a = run_pipeline(p, trial_rng(42, 0, "pipeline"), master_seed=42)
    b = run_pipeline(p, trial_rng(42, 0, "pipeline"), master_seed=42)
    assert a.model_dump(mode="json") == b.model_dump(mode="json")


def test_result_serializes_with_schema_version():
    p = derive_params(19, 3, 3)
    doc = run_pipeline(p, trial_rng(1, 0, "pipeline"), master_seed=1).model_dump(mode="json")
    assert doc["schema_version"] == "1.0"
    assert doc["params"]["m"] == 1
    assert doc["status"] in {s.value for s in PipelineStatus}


def test_unknown_mode():
    with pytest.raises(ValueError):
        run_pipeline(derive_params(6, 2, 3), trial_rng(0), mode="forever")
