"""REST API contract: error taxonomy, isolation, degradation, privacy."""

import json
import logging

import numpy as np
import pytest
from fastapi.testclient import TestClient

import jsonschema
from referencing import Registry, Resource

from revqual.engine import AnalysisEngine
from revqual.errors import MalformedJudgment, NetworkError, RateLimited
from revqual.judge import MockJudgeBackend
from revqual.models import fit
from revqual.openalex import MockOpenAlexClient
from revqual.service import create_app


@pytest.fixture()
def engine():
    return AnalysisEngine(judge_backend=MockJudgeBackend(), openalex_client=MockOpenAlexClient())


@pytest.fixture()
def client(engine):
    return TestClient(create_app(engine), raise_server_exceptions=False)


def load_schema(schemas_dir, name):
    resources = [
        Resource.from_contents(json.loads(p.read_text()))
        for p in schemas_dir.glob("*.json")
    ]
    registry = Registry().with_resources((r.id(), r) for r in resources)
    schema = json.loads((schemas_dir / name).read_text())
    return jsonschema.Draft202012Validator(schema, registry=registry).validate


@pytest.fixture(scope="session")
def validate_report(schemas_dir):
    return load_schema(schemas_dir, "quality_report.schema.json")


@pytest.fixture(scope="session")
def validate_error(schemas_dir):
    return load_schema(schemas_dir, "error.schema.json")


class FailingJudge:
    id = "failing"

    def complete(self, messages, temperature=0.0):
        raise NetworkError("judge endpoint unreachable")


class TestAnalyze:
    def test_full_report(self, client, sample_review, validate_report):
        resp = client.post("/v1/analyze", json=sample_review)
        assert resp.status_code == 200
        doc = resp.json()
        validate_report(doc)
        assert doc["id"] == sample_review["id"]
        assert doc["degraded"] is False
        assert doc["structured"]["review_length_tokens"] > 0
        assert set(doc["rubric"]["scores"]) == {
            "overall_quality", "comprehensiveness", "actionability", "sentiment_polarity",
            "constructiveness", "technical_terms", "objectivity", "alignment", "vagueness",
            "fairness", "politeness", "clarity_readability", "factuality",
        }
        assert doc["profile"]["works_sampled"] == 3
        assert doc["overall_estimate"] is None  # no model loaded
        assert "X-Request-ID" in resp.headers

    def test_malformed_json_is_400(self, client, validate_error):
        resp = client.post("/v1/analyze", content=b"{not json", headers={"content-type": "application/json"})
        assert resp.status_code == 400
        assert resp.json()["error"] == "malformed_json"
        validate_error(resp.json())

    def test_empty_review_is_422(self, client, sample_review, validate_error):
        resp = client.post("/v1/analyze", json={**sample_review, "review_text": "   "})
        assert resp.status_code == 422
        assert resp.json()["error"] == "empty_review"
        validate_error(resp.json())

    def test_empty_paper_context_is_422(self, client, sample_review):
        resp = client.post("/v1/analyze", json={**sample_review, "title": "", "abstract": ""})
        assert resp.status_code == 422
        assert resp.json()["error"] == "empty_paper_context"

    def test_bad_reviewer_id_is_422(self, client, sample_review):
        resp = client.post("/v1/analyze", json={**sample_review, "reviewer_openalex_id": "Q7"})
        assert resp.status_code == 422
        assert resp.json()["error"] == "bad_reviewer_id"

    def test_non_object_is_422(self, client):
        resp = client.post("/v1/analyze", json=["a", "list"])
        assert resp.status_code == 422
        assert resp.json()["error"] == "not_an_object"

    def test_wrong_field_type_is_422(self, client, sample_review):
        resp = client.post("/v1/analyze", json={**sample_review, "include_llm": "yes"})
        assert resp.status_code == 422
        assert resp.json()["error"] == "bad_field_type"

    def test_skip_llm_leaves_rubric_null(self, engine, sample_review, validate_report):
        client = TestClient(create_app(engine))
        resp = client.post("/v1/analyze", json={**sample_review, "include_llm": False})
        doc = resp.json()
        validate_report(doc)
        assert doc["rubric"] is None
        assert doc["degraded"] is False
        assert engine.judge_backend.calls == 0

    def test_skip_profile_when_not_requested(self, client, sample_review, validate_report):
        body = dict(sample_review)
        del body["reviewer_openalex_id"]
        doc = client.post("/v1/analyze", json=body).json()
        validate_report(doc)
        assert doc["profile"] is None

    def test_judge_failure_degrades_not_fails(self, sample_review, validate_report):
        engine = AnalysisEngine(judge_backend=FailingJudge(), openalex_client=MockOpenAlexClient())
        client = TestClient(create_app(engine))
        resp = client.post("/v1/analyze", json=sample_review)
        assert resp.status_code == 200
        doc = resp.json()
        validate_report(doc)
        assert doc["degraded"] is True
        assert doc["rubric"]["error"] == "upstream_unreachable"
        assert doc["structured"]["review_length_tokens"] > 0  # rest of report intact
        assert doc["profile"]["works_sampled"] == 3

    def test_missing_author_degrades(self, sample_review, validate_report):
        engine = AnalysisEngine(judge_backend=MockJudgeBackend(), openalex_client=MockOpenAlexClient(authors={}))
        client = TestClient(create_app(engine))
        doc = client.post("/v1/analyze", json=sample_review).json()
        validate_report(doc)
        assert doc["degraded"] is True
        assert doc["profile"]["error"] == "author_not_found"
        assert "scores" in doc["rubric"]

    def test_require_estimate_without_model_is_503(self, client, sample_review, validate_error):
        resp = client.post("/v1/analyze", json={**sample_review, "require_estimate": True})
        assert resp.status_code == 503
        assert resp.json()["error"] == "model_not_loaded"
        validate_error(resp.json())

    def test_estimate_present_with_model(self, engine, sample_review, validate_report):
        rng = np.random.default_rng(0)
        model = fit("linear", rng.normal(size=(30, 28)), rng.normal(size=30))
        engine.set_model(model)
        client = TestClient(create_app(engine))
        doc = client.post("/v1/analyze", json={**sample_review, "require_estimate": True}).json()
        validate_report(doc)
        assert isinstance(doc["overall_estimate"], float)


class TestBatch:
    def test_batch_equals_single(self, client, sample_review, canonical_report):
        single = client.post("/v1/analyze", json=sample_review).json()
        batch = client.post("/v1/analyze/batch", json=[sample_review]).json()
        assert canonical_report(batch[0]) == canonical_report(single)

    def test_item_isolation(self, client, sample_review, validate_report):
        bad = {**sample_review, "review_text": ""}
        resp = client.post("/v1/analyze/batch", json=[sample_review, bad, sample_review])
        assert resp.status_code == 200
        items = resp.json()
        validate_report(items[0])
        validate_report(items[2])
        assert items[1] == {"error": "empty_review", "detail": items[1]["detail"], "status": 422}

    def test_identical_items_identical_reports(self, client, sample_review, canonical_report):
        items = client.post("/v1/analyze/batch", json=[sample_review] * 4).json()
        canon = {canonical_report(i) for i in items}
        assert len(canon) == 1

    def test_not_an_array(self, client, sample_review):
        resp = client.post("/v1/analyze/batch", json=sample_review)
        assert resp.status_code == 400
        assert resp.json()["error"] == "not_an_array"

    def test_empty_batch(self, client):
        resp = client.post("/v1/analyze/batch", json=[])
        assert resp.status_code == 400
        assert resp.json()["error"] == "batch_empty"

    def test_batch_too_large(self, engine, sample_review):
        client = TestClient(create_app(engine, max_batch=500))
        resp = client.post("/v1/analyze/batch", json=[sample_review] * 501)
        assert resp.status_code == 400
        assert resp.json()["error"] == "batch_too_large"

    def test_malformed_batch_body(self, client):
        resp = client.post("/v1/analyze/batch", content=b"[", headers={"content-type": "application/json"})
        assert resp.status_code == 400
        assert resp.json()["error"] == "malformed_json"


class TestReviewer:
    def test_profile_with_submission_text(self, client, schemas_dir):
        validate = load_schema(schemas_dir, "reviewer_profile.schema.json")
        resp = client.get("/v1/reviewer/A2208157607", params={"submission_text": "sparse attention"})
        assert resp.status_code == 200
        doc = resp.json()
        validate(doc)
        assert doc["openalex_id"] == "A2208157607"
        assert 0.0 <= doc["topical_alignment"] <= 1.0

    def test_alignment_omitted_without_submission_text(self, client):
        doc = client.get("/v1/reviewer/A2208157607").json()
        assert "topical_alignment" not in doc
        assert doc["citation_count"] > 0

    def test_bad_id_is_422(self, client, validate_error):
        resp = client.get("/v1/reviewer/banana")
        assert resp.status_code == 422
        assert resp.json()["error"] == "bad_reviewer_id"
        validate_error(resp.json())

    def test_unknown_author_is_404(self, sample_review):
        engine = AnalysisEngine(openalex_client=MockOpenAlexClient(authors={}))
        client = TestClient(create_app(engine))
        resp = client.get("/v1/reviewer/A1")
        assert resp.status_code == 404
        assert resp.json()["error"] == "author_not_found"

    def test_unconfigured_client_is_503(self):
        client = TestClient(create_app(AnalysisEngine()))
        resp = client.get("/v1/reviewer/A1")
        assert resp.status_code == 503
        assert resp.json()["error"] == "profile_not_configured"

    def test_rate_limited_maps_to_502(self):
        class Limited:
            def get_profile(self, *a, **k):
                raise RateLimited("upstream said HTTP 429", retry_after="60")

        client = TestClient(create_app(AnalysisEngine(openalex_client=Limited())))
        resp = client.get("/v1/reviewer/A1")
        assert resp.status_code == 502
        doc = resp.json()
        assert doc["error"] == "rate_limited"
        assert "429" in doc["detail"]


class TestHealth:
    def test_health_without_model(self, client, schemas_dir):
        validate = load_schema(schemas_dir, "health.schema.json")
        resp = client.get("/v1/health")
        assert resp.status_code == 200
        doc = resp.json()
        validate(doc)
        assert doc == {"status": "ok", "engine_version": doc["engine_version"], "model_loaded": False}

    def test_health_reflects_loaded_model(self, engine):
        rng = np.random.default_rng(1)
        engine.set_model(fit("linear", rng.normal(size=(10, 28)), rng.normal(size=10)))
        client = TestClient(create_app(engine))
        assert client.get("/v1/health").json()["model_loaded"] is True


class TestPrivacyLogging:
    def test_logs_never_contain_review_text(self, engine, sample_review):
        records = []

        class Capture(logging.Handler):
            def emit(self, rec):
                records.append(rec.getMessage())

        logger = logging.getLogger("revqual.service")
        handler = Capture()
        logger.addHandler(handler)
        try:
            client = TestClient(create_app(engine))
            client.post("/v1/analyze", json=sample_review)
            client.post("/v1/analyze/batch", json=[sample_review, {"bogus": 1}])
            client.get("/v1/reviewer/A2208157607", params={"submission_text": sample_review["title"]})
        finally:
            logger.removeHandler(handler)

        assert records, "expected structured log lines"
        needles = [
            sample_review["review_text"],
            sample_review["title"],
            sample_review["abstract"],
        ]
        for line in records:
            doc = json.loads(line)  # every log line is structured JSON
            assert set(doc) <= {
                "request_id", "method", "path", "status", "request_bytes", "duration_ms"
            }
            for needle in needles:
                assert needle not in line
            # even fragments of the review must not leak
            assert "gradient" not in line.lower()

    def test_malformed_judgment_detail_has_no_review_text(self, sample_review):
        class EchoingJudge:
            id = "echoing"

            def complete(self, messages, temperature=0.0):
                raise MalformedJudgment("reply was not parseable")

        engine = AnalysisEngine(judge_backend=EchoingJudge())
        client = TestClient(create_app(engine))
        doc = client.post("/v1/analyze", json=sample_review).json()
        assert sample_review["review_text"] not in json.dumps(doc["rubric"])
