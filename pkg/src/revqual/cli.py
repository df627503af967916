"""Command-line front door: analyze, audit, train, evaluate, serve.

Exit codes: 0 success, 1 serve failure, 2 input error, 3 backend error.
"""

import json
import math
import sys
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import click
import numpy as np

from . import agreement
from . import models as models_mod
from .config import build_engine, load_config
from .corpus import (
    MIN_TRAINING_RECORDS,
    AnnotatedReview,
    corpus_fingerprint,
    iter_jsonl,
    load_annotated,
)
from .engine import AnalysisEngine, ReviewInput
from .errors import (
    BackendError,
    ConfigError,
    InvalidInput,
    MalformedJudgment,
    MalformedResponse,
    RevqualError,
    TooFewSamples,
)
from .features import assemble_features
from .judge import RubricScores
from .judge import judge as judge_call
from .openalex import ReviewerProfile

EXIT_OK = 0
EXIT_SERVE_FAILURE = 1
EXIT_INPUT_ERROR = 2
EXIT_BACKEND_ERROR = 3

_BACKEND_ERRORS = (BackendError, MalformedJudgment, MalformedResponse)


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def backend_options(fn):
    fn = click.option("--config", "config_path", type=click.Path(), default=None, help="INI config file.")(fn)
    fn = click.option("--judge", "judge_mode", type=click.Choice(["none", "mock", "http"]), default=None, help="Judge backend mode (overrides config).")(fn)
    fn = click.option("--openalex", "openalex_mode", type=click.Choice(["none", "mock", "http"]), default=None, help="Scholarly-metadata backend mode (overrides config).")(fn)
    fn = click.option("--model", "model_path", type=click.Path(), default=None, help="Trained model file to load.")(fn)
    return fn


def _make_engine(config_path, judge_mode, openalex_mode, model_path) -> AnalysisEngine:
    try:
        config = load_config(config_path)
        if judge_mode is not None:
            config.values["backends.judge"]["mode"] = judge_mode
        if openalex_mode is not None:
            config.values["backends.openalex"]["mode"] = openalex_mode
        if model_path is not None:
            config.values["model"]["path"] = model_path
        return build_engine(config)
    except ConfigError as exc:
        _fail(EXIT_INPUT_ERROR, f"bad configuration: {exc}")
    except RevqualError as exc:
        _fail(EXIT_INPUT_ERROR, str(exc))


def _effective_input(review: ReviewInput, engine: AnalysisEngine, skip_llm: bool = False) -> ReviewInput:
    """Disable stages whose backends are absent, so reports stay clean."""
    if skip_llm or engine.judge_backend is None:
        review = replace(review, include_llm=False)
    if engine.openalex_client is None:
        review = replace(review, include_profile=False)
    return review


def _degraded_backend_failure(report) -> bool:
    codes = []
    for section in (report.rubric, report.profile):
        code = getattr(section, "code", None)
        if code is not None:
            codes.append(code)
    return any(not code.endswith("_not_configured") for code in codes)


@click.group()
def main():
    """Peer-review quality analysis toolkit."""


@main.command("analyze")
@click.option("--input", "input_path", default="-", help="JSON file with one review object, or - for stdin.")
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json")
@backend_options
def cmd_analyze(input_path, fmt, config_path, judge_mode, openalex_mode, model_path):
    """Analyze a single review and print its quality report."""
    engine = _make_engine(config_path, judge_mode, openalex_mode, model_path)
    try:
        raw = sys.stdin.read() if input_path == "-" else open(input_path, "r", encoding="utf-8").read()
    except OSError as exc:
        _fail(EXIT_INPUT_ERROR, f"cannot read input: {exc}")
    try:
        obj = json.loads(raw)
        review = _effective_input(ReviewInput.from_dict(obj), engine)
    except ValueError as exc:
        _fail(EXIT_INPUT_ERROR, f"input is not valid JSON: {exc}")
    except InvalidInput as exc:
        _fail(EXIT_INPUT_ERROR, f"invalid review ({exc.code}): {exc.message}")
    try:
        report = engine.analyze(review)
    except InvalidInput as exc:
        _fail(EXIT_INPUT_ERROR, f"invalid review ({exc.code}): {exc.message}")
    except RevqualError as exc:
        _fail(EXIT_BACKEND_ERROR, str(exc))

    doc = report.to_dict()
    if fmt == "json":
        click.echo(json.dumps(doc, sort_keys=True, indent=2))
    else:
        click.echo(_format_table(doc))
    if _degraded_backend_failure(report):
        sys.exit(EXIT_BACKEND_ERROR)


def _format_table(doc: dict) -> str:
    rows: list[tuple[str, object]] = list(doc["structured"].items())
    if doc.get("rubric") and "scores" in doc["rubric"]:
        rows += [(f"rubric.{k}", v) for k, v in sorted(doc["rubric"]["scores"].items())]
    if doc.get("profile") and "error" not in (doc["profile"] or {}):
        rows += [(f"profile.{k}", v) for k, v in doc["profile"].items()]
    rows.append(("overall_estimate", doc.get("overall_estimate")))
    rows.append(("degraded", doc.get("degraded")))
    width = max(len(name) for name, _ in rows)
    lines = []
    for name, value in rows:
        if isinstance(value, float):
            value = f"{value:.4f}"
        lines.append(f"{name.ljust(width)}  {value}")
    return "\n".join(lines)


class _RunningStats:
    """Streaming min/mean/max/stddev (Welford) so audits stay O(1) in memory."""

    def __init__(self):
        self.count = 0
        self.mean = 0.0
        self.m2 = 0.0
        self.min = math.inf
        self.max = -math.inf

    def add(self, value: float):
        self.count += 1
        delta = value - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (value - self.mean)
        self.min = min(self.min, value)
        self.max = max(self.max, value)

    def to_dict(self) -> dict:
        if not self.count:
            return {"count": 0}
        std = math.sqrt(self.m2 / self.count)
        return {
            "count": self.count,
            "min": self.min,
            "mean": self.mean,
            "max": self.max,
            "stddev": std,
        }


def _bounded_map(fn, items, workers: int):
    """Ordered map over an iterable with a bounded in-flight window."""
    if workers <= 1:
        for item in items:
            yield fn(item)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        window: deque = deque()
        iterator = iter(items)
        for item in iterator:
            window.append(pool.submit(fn, item))
            if len(window) >= workers * 2:
                yield window.popleft().result()
        while window:
            yield window.popleft().result()


@main.command("audit")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True), help="Line-delimited JSON corpus.")
@click.option("--out", "out_path", default="-", help="Output file for JSONL reports, or - for stdout.")
@click.option("--skip-llm", is_flag=True, help="Skip judge scoring entirely.")
@click.option("--concurrency", default=4, show_default=True, help="Concurrent analyses.")
@backend_options
def cmd_audit(corpus_path, out_path, skip_llm, concurrency, config_path, judge_mode, openalex_mode, model_path):
    """Analyze every review in a corpus, streaming one report per line."""
    engine = _make_engine(config_path, judge_mode, openalex_mode, model_path)
    out = sys.stdout if out_path == "-" else open(out_path, "w", encoding="utf-8")

    stats: dict[str, _RunningStats] = {}
    skipped = 0
    emitted = 0
    backend_failures = 0

    def parsed_inputs():
        nonlocal skipped
        for lineno, obj in iter_jsonl(corpus_path):
            if isinstance(obj, InvalidInput):
                skipped += 1
                click.echo(f"skipping line {lineno}: {obj.message}", err=True)
                continue
            try:
                review = ReviewInput.from_dict(obj)
            except InvalidInput as exc:
                skipped += 1
                click.echo(f"skipping line {lineno}: {exc.code}: {exc.message}", err=True)
                continue
            yield _effective_input(review, engine, skip_llm=skip_llm)

    def analyze(review: ReviewInput):
        return engine.analyze(review)

    try:
        for report in _bounded_map(analyze, parsed_inputs(), concurrency):
            doc = report.to_dict()
            out.write(json.dumps(doc, sort_keys=True) + "\n")
            emitted += 1
            if _degraded_backend_failure(report):
                backend_failures += 1
            for name, value in doc["structured"].items():
                if isinstance(value, bool):
                    value = float(value)
                if isinstance(value, (int, float)):
                    stats.setdefault(name, _RunningStats()).add(float(value))
            if doc.get("overall_estimate") is not None:
                stats.setdefault("overall_estimate", _RunningStats()).add(doc["overall_estimate"])
    finally:
        summary = {
            "summary": {
                "count": emitted,
                "skipped": skipped,
                "backend_failures": backend_failures,
                "metrics": {name: s.to_dict() for name, s in sorted(stats.items())},
            }
        }
        out.write(json.dumps(summary, sort_keys=True) + "\n")
        if out is not sys.stdout:
            out.close()

    total = emitted + skipped
    if total and skipped * 2 > total:
        _fail(EXIT_INPUT_ERROR, f"{skipped} of {total} corpus lines were malformed")


def _rubric_from_human(record: AnnotatedReview, engine: AnalysisEngine) -> RubricScores:
    return RubricScores(
        scores=dict(record.human_aspects),
        rationales={},
        backend_id="human",
        prompt_version=engine.rubric.prompt_version,
    )


def _features_for_records(records, engine: AnalysisEngine, use_human_rubric: bool, fail_fast: bool):
    """Feature matrix + targets for annotated records; returns (X, y, skipped)."""
    if not use_human_rubric and engine.judge_backend is None:
        raise BackendError("no judge backend configured; use --use-human-rubric or --judge mock")
    rows = []
    targets = []
    skipped = 0
    for record in records:
        review = record.to_review_input()
        try:
            structured = engine.analyze(replace(review, include_llm=False, include_profile=False)).structured
            if use_human_rubric:
                rubric = _rubric_from_human(record, engine)
            else:
                rubric = judge_call(review, engine.judge_backend, rubric=engine.rubric)
            profile = None
            if record.reviewer_openalex_id and engine.openalex_client is not None:
                try:
                    profile = engine.openalex_client.get_profile(
                        record.reviewer_openalex_id, review.paper_context(), backend=engine.embedding_backend
                    )
                except RevqualError:
                    profile = None
            fv = assemble_features(structured, rubric, profile)
        except _BACKEND_ERRORS as exc:
            if fail_fast:
                _fail(EXIT_BACKEND_ERROR, f"record {record.id!r}: {exc}")
            skipped += 1
            click.echo(f"skipping record {record.id!r}: {exc}", err=True)
            continue
        rows.append(fv.values)
        targets.append(float(record.human_overall))
    if len(rows) < MIN_TRAINING_RECORDS:
        raise TooFewSamples(
            f"only {len(rows)} usable records after feature computation; need {MIN_TRAINING_RECORDS}"
        )
    return np.asarray(rows, dtype=float), np.asarray(targets, dtype=float), skipped


@main.command("train")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True), help="Annotated JSONL corpus.")
@click.option("--model-kind", type=click.Choice(list(models_mod.MODEL_KINDS)), default="linear", show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(), help="Where to write the model file.")
@click.option("--seed", default=0, show_default=True)
@click.option("--use-human-rubric", is_flag=True, help="Use human aspect scores instead of a judge backend.")
@click.option("--fail-fast", is_flag=True, help="Abort on the first backend failure.")
@backend_options
def cmd_train(corpus_path, model_kind, out_path, seed, use_human_rubric, fail_fast,
              config_path, judge_mode, openalex_mode, model_path):
    """Fit an overall-quality model on an annotated corpus."""
    engine = _make_engine(config_path, judge_mode, openalex_mode, model_path)
    try:
        records = load_annotated(corpus_path)
        X, y, skipped = _features_for_records(records, engine, use_human_rubric, fail_fast)
        config = {"seed": seed} if model_kind in ("forest", "mlp") else None
        model = models_mod.fit(
            model_kind,
            X,
            y,
            config=config,
            extra_meta={"seed": seed, "corpus_fingerprint": corpus_fingerprint(corpus_path)},
        )
        models_mod.save_model(model, out_path)
        predictions = models_mod.predict_matrix(model, X)
        mse = float(np.mean((predictions - y) ** 2))
        try:
            tau = agreement.kendall_tau_b(agreement.PairedScores(x=tuple(predictions), y=tuple(y)))
        except RevqualError:
            tau = None
        click.echo(
            json.dumps(
                {
                    "model_kind": model_kind,
                    "model_path": out_path,
                    "n_records": int(len(y)),
                    "skipped": skipped,
                    "training_mse": mse,
                    "in_sample_tau": tau,
                },
                sort_keys=True,
            )
        )
    except TooFewSamples as exc:
        _fail(EXIT_INPUT_ERROR, str(exc))
    except InvalidInput as exc:
        _fail(EXIT_INPUT_ERROR, f"{exc.code}: {exc.message}")
    except _BACKEND_ERRORS as exc:
        _fail(EXIT_BACKEND_ERROR, str(exc))


@main.command("evaluate")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True), help="Annotated JSONL corpus.")
@click.option("--model-kind", type=click.Choice(list(models_mod.MODEL_KINDS)), default="linear", show_default=True)
@click.option("--k", default=10, show_default=True, help="Cross-validation folds.")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_path", default=None, type=click.Path(), help="Optional JSON report file.")
@click.option("--use-human-rubric", is_flag=True, help="Use human aspect scores instead of a judge backend.")
@click.option("--fail-fast", is_flag=True, help="Abort on the first backend failure.")
@backend_options
def cmd_evaluate(corpus_path, model_kind, k, seed, out_path, use_human_rubric, fail_fast,
                 config_path, judge_mode, openalex_mode, model_path):
    """Cross-validated rank agreement between model and human overall scores."""
    engine = _make_engine(config_path, judge_mode, openalex_mode, model_path)
    try:
        records = load_annotated(corpus_path)
        X, y, _ = _features_for_records(records, engine, use_human_rubric, fail_fast)
        model_config = {"seed": seed} if model_kind in ("forest", "mlp") else None
        report = agreement.cross_validate(X, y, model_kind, k=k, seed=seed, model_config=model_config)
        doc = report.to_dict()
        click.echo(json.dumps(doc, sort_keys=True, indent=2))
        if out_path:
            with open(out_path, "w", encoding="utf-8") as fh:
                fh.write(report.to_json() + "\n")
    except TooFewSamples as exc:
        _fail(EXIT_INPUT_ERROR, str(exc))
    except InvalidInput as exc:
        _fail(EXIT_INPUT_ERROR, f"{exc.code}: {exc.message}")
    except _BACKEND_ERRORS as exc:
        _fail(EXIT_BACKEND_ERROR, str(exc))


@main.command("serve")
@click.option("--config", "config_path", type=click.Path(), default=None, help="INI config file.")
@click.option("--host", default=None, help="Bind host (overrides config).")
@click.option("--port", default=None, type=int, help="Bind port (overrides config).")
def cmd_serve(config_path, host, port):
    """Run the HTTP service until interrupted."""
    import uvicorn

    from .service import create_app

    try:
        config = load_config(config_path)
        engine = build_engine(config)
    except RevqualError as exc:
        click.echo(f"error: invalid configuration: {exc}", err=True)
        sys.exit(EXIT_SERVE_FAILURE)
    app = create_app(engine, max_batch=config.get("limits", "max_batch"))
    bind_host = host or config.get("server", "host")
    bind_port = port if port is not None else config.get("server", "port")
    try:
        uvicorn.run(app, host=bind_host, port=bind_port, log_level="warning")
    except (OSError, SystemExit) as exc:
        if isinstance(exc, SystemExit) and not exc.code:
            return
        click.echo(f"error: cannot serve on {bind_host}:{bind_port}: {exc}", err=True)
        sys.exit(EXIT_SERVE_FAILURE)


if __name__ == "__main__":
    main()
