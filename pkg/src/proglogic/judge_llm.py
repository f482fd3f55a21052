"""LLM-judge baseline: prompt construction, verdict parsing, and a cached
client for any chat-completion compatible endpoint."""

from __future__ import annotations

import hashlib
import json
import os
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import requests

from .corpus import ProgramRecord
from .metrics import EvalMetrics, evaluate_predictions
from .taxonomy import TaxonomyLabel

ENDPOINT_ENV = "PROGLOGIC_JUDGE_ENDPOINT"
API_KEY_ENV = "PROGLOGIC_JUDGE_API_KEY"

JUDGE_PROMPT = """You are an expert code judge that analyze code based on the
following classes:
 1- Conceptual through library calls. Reference a math concept
 through calls to relevant math libraries, standard or external.
 2- primitive solution: programs are expressed in terms of the
 primitive operations only due to problem simplicity, where no
 library functionality can be called or implemented.
 3- From-scratch Implementation of a library functionality.
 Implements a library functionality from scratch. implementation
 is inlined in the generated code, or can be a custom function
 to be called when required.
 4- Brute-Force. The program search through all possible values
 to find the answer without guiding the search with some math
 knowledge.
 5- Disorganized: the program consists of incoherent steps that
 seem to be a mix of the previous classes. Usually include
 variables used but not defined or the opposite.
 6- No Logic: These programs merely return a result without
 explicitly generating the steps to arrive at it, transcribing
 information from the question only without further processing
 the information is also No logic. generating the logic as
 comments doesn't count either.

Instructions:
- given an input program your task is to analyze it and then
provide a class number from the list above.
- don't fix the code.
- Put your final answer in \\boxed{}.
"""


class JudgeError(Exception):
    pass


class VerdictMissing(JudgeError):
    pass


class VerdictInvalid(JudgeError):
    pass


@dataclass
class JudgeConfig:
    endpoint: str = field(default_factory=lambda: os.environ.get(ENDPOINT_ENV, ""))
    model_name: str = "o3-mini"
    max_output_tokens: int = 20000
    reasoning_effort: str = "high"  # low | medium | high
    timeout: float = 120.0
    max_retries: int = 2
    cache_dir: str = ".judge_cache"

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.reasoning_effort not in ("low", "medium", "high"):
            raise ValueError(f"invalid reasoning effort {self.reasoning_effort!r}")


@dataclass
class Judgement:
    record_id: str
    label: Optional[TaxonomyLabel]
    raw_response: str
    latency_ms: float
    attempt: int
    from_cache: bool = False
    error: Optional[str] = None


def build_prompt(program: str) -> list[dict[str, str]]:
    """Zero-shot judge prompt: class descriptions, instructions, then the
    program verbatim (no escaping, no reference examples)."""
    if not program.strip():
        raise JudgeError("cannot judge an empty program")
    content = JUDGE_PROMPT + "\nInput program:\n```python\n" + program + "\n```\n"
    return [{"role": "user", "content": content}]


_BOXED = re.compile(r"\\boxed\{\s*([^{}]*?)\s*\}")


def parse_verdict(response: str) -> TaxonomyLabel:
    """Extract the last boxed answer; 1..6 maps onto the taxonomy."""
    matches = _BOXED.findall(response)
    if not matches:
        raise VerdictMissing("no boxed answer in response")
    raw = matches[-1]
    try:
        value = int(raw)
    except ValueError:
        raise VerdictInvalid(f"boxed content {raw!r} is not a class number") from None
    if not 1 <= value <= 6:
        raise VerdictInvalid(f"boxed class {value} outside 1..6")
    return TaxonomyLabel(value)


Transport = Callable[[list[dict[str, str]], "JudgeConfig"], str]


def _http_transport(messages: list[dict[str, str]], config: JudgeConfig) -> str:
    if not config.endpoint:
        raise JudgeError(f"no endpoint configured (set {ENDPOINT_ENV})")
    headers = {"Content-Type": "application/json"}
    api_key = os.environ.get(API_KEY_ENV)
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"
    body = {
        "model": config.model_name,
        "messages": messages,
        "max_completion_tokens": config.max_output_tokens,
        "reasoning_effort": config.reasoning_effort,
    }
    resp = requests.post(config.endpoint, json=body, headers=headers,
                         timeout=config.timeout)
    resp.raise_for_status()
    data = resp.json()
    return data["choices"][0]["message"]["content"]


def _cache_key(config: JudgeConfig, record_id: str, prompt_text: str) -> str:
    digest = hashlib.sha256()
    digest.update(config.model_name.encode())
    digest.update(b"\x00")
    digest.update(record_id.encode())
    digest.update(b"\x00")
    digest.update(prompt_text.encode())
    return digest.hexdigest()


def judge_corpus(records: Sequence[ProgramRecord], config: JudgeConfig,
                 transport: Transport | None = None) -> list[Judgement]:
    """Judge every record once, reading and writing the on-disk cache.

    Failures (transport errors after retries, unparseable verdicts) are
    recorded with a null label so denominators stay honest.
    """
    transport = transport or _http_transport
    cache = Path(config.cache_dir)
    cache.mkdir(parents=True, exist_ok=True)
    results: list[Judgement] = []
    for record in records:
        messages = build_prompt(record.source)
        prompt_text = json.dumps(messages, sort_keys=True)
        key = _cache_key(config, record.id, prompt_text)
        cache_file = cache / f"{key}.json"
        if cache_file.exists():
            cached = json.loads(cache_file.read_text(encoding="utf-8"))
            results.append(Judgement(
                record_id=record.id,
                label=TaxonomyLabel(cached["label"]) if cached["label"] else None,
                raw_response=cached["raw_response"],
                latency_ms=cached["latency_ms"],
                attempt=cached["attempt"],
                from_cache=True,
                error=cached.get("error"),
            ))
            continue

        judgement = _judge_one(record, messages, config, transport)
        cache_file.write_text(json.dumps({
            "record_id": record.id,
            "label": int(judgement.label) if judgement.label else None,
            "raw_response": judgement.raw_response,
            "latency_ms": judgement.latency_ms,
            "attempt": judgement.attempt,
            "error": judgement.error,
        }, sort_keys=True), encoding="utf-8")
        # prompt stored next to the verdict for auditability
        (cache / f"{key}.prompt.txt").write_text(prompt_text, encoding="utf-8")
        results.append(judgement)
    return results


def _judge_one(record: ProgramRecord, messages, config: JudgeConfig,
               transport: Transport) -> Judgement:
    last_error = ""
    response_text = ""
    for attempt in range(1, config.max_retries + 2):
        start = time.monotonic()
        try:
            response_text = transport(messages, config)
            label = parse_verdict(response_text)
        except (VerdictMissing, VerdictInvalid, JudgeError,
                requests.RequestException) as exc:
            last_error = f"{type(exc).__name__}: {exc}"
            continue
        finally:
            latency = (time.monotonic() - start) * 1000.0
        return Judgement(record_id=record.id, label=label,
                         raw_response=response_text, latency_ms=latency,
                         attempt=attempt)
    return Judgement(record_id=record.id, label=None, raw_response=response_text,
                     latency_ms=0.0, attempt=config.max_retries + 1,
                     error=last_error)


@dataclass
class JudgeComparison:
    tree_metrics: EvalMetrics
    llm_metrics: Optional[EvalMetrics]  # over parsed verdicts only
    llm_accuracy_including_failures: float  # failures counted as wrong
    disagree_with_gold: list[str]
    judges_disagree: list[str]
    unparsed_ids: list[str]


def compare_judges(gold: dict[str, TaxonomyLabel],
                   tree_preds: dict[str, TaxonomyLabel],
                   llm_preds: dict[str, Optional[TaxonomyLabel]]) -> JudgeComparison:
    ids = sorted(gold)
    if set(tree_preds) != set(ids) or set(llm_preds) != set(ids):
        raise JudgeError("record id sets differ between gold and predictions")

    gold_seq = [gold[i] for i in ids]
    tree_metrics = evaluate_predictions(gold_seq, [tree_preds[i] for i in ids])

    unparsed = [i for i in ids if llm_preds[i] is None]
    parsed_ids = [i for i in ids if llm_preds[i] is not None]
    llm_metrics = None
    if parsed_ids:
        llm_metrics = evaluate_predictions(
            [gold[i] for i in parsed_ids], [llm_preds[i] for i in parsed_ids])
    correct = sum(1 for i in parsed_ids if llm_preds[i] == gold[i])
    accuracy_incl = correct / len(ids)

    disagree_gold = [i for i in ids
                     if tree_preds[i] != gold[i] or llm_preds[i] != gold[i]]
    judges_disagree = [i for i in ids if tree_preds[i] != llm_preds[i]]
    return JudgeComparison(
        tree_metrics=tree_metrics,
        llm_metrics=llm_metrics,
        llm_accuracy_including_failures=accuracy_incl,
        disagree_with_gold=disagree_gold,
        judges_disagree=judges_disagree,
        unparsed_ids=unparsed,
    )
