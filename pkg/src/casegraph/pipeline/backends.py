"""Chat-completion backends and their configuration."""

from __future__ import annotations

import json
import os
import threading
import urllib.error
import urllib.request
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Protocol

from ..errors import BackendError, ConfigError
from .prompts import question_line

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


class ChatBackend(Protocol):
    def complete(self, prompt: str) -> str:
        """Return the completion text; raise :class:`BackendError` on transport failure."""
        ...


@dataclass(frozen=True)
class BackendConfig:
    endpoint: str = ""
    model_name: str = ""
    temperature: float = 0.0
    max_retries: int = 2
    request_timeout: float = 60.0
    parallelism: int = 1
    api_key_env_var: str = "CASEGRAPH_API_KEY"

    def __post_init__(self):
        if self.temperature < 0:
            raise ConfigError("temperature must be >= 0")
        if not 0 <= self.max_retries <= 10:
            raise ConfigError("max_retries must be within 0..10")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be >= 1")
        if self.request_timeout <= 0:
            raise ConfigError("request_timeout must be positive")

    @classmethod
    def from_mapping(cls, raw: dict) -> "BackendConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown backend config keys: {sorted(unknown)}")
        return cls(**raw)


class HttpChatBackend:
    """Text-in/text-out completion endpoint.

    Request body: ``{"model", "prompt", "temperature"}``. The response may carry
    the text as ``text``, ``completion``, ``choices[0].text`` or
    ``choices[0].message.content``.
    """

    def __init__(self, cfg: BackendConfig):
        if not cfg.endpoint:
            raise ConfigError("HTTP backend needs an endpoint")
        self.cfg = cfg
        self.api_key = os.environ.get(cfg.api_key_env_var)

    def complete(self, prompt: str) -> str:
        body = json.dumps(
            {"model": self.cfg.model_name, "prompt": prompt, "temperature": self.cfg.temperature}
        ).encode("utf-8")
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        req = urllib.request.Request(self.cfg.endpoint, data=body, headers=headers, method="POST")
        try:
            with urllib.request.urlopen(req, timeout=self.cfg.request_timeout) as resp:
                payload = json.loads(resp.read().decode("utf-8"))
        except (urllib.error.URLError, TimeoutError, OSError, json.JSONDecodeError) as exc:
            raise BackendError(f"request to {self.cfg.endpoint} failed: {exc}") from exc
        return _completion_text(payload)


def _completion_text(payload) -> str:
    if isinstance(payload, dict):
        for key in ("text", "completion"):
            if isinstance(payload.get(key), str):
                return payload[key]
        choices = payload.get("choices")
        if isinstance(choices, list) and choices:
            first = choices[0]
            if isinstance(first.get("text"), str):
                return first["text"]
            message = first.get("message") or {}
            if isinstance(message.get("content"), str):
                return message["content"]
    raise BackendError("response carries no completion text")


class ScriptedBackend:
    """Deterministic backend answering from a rule table.

    Fixture format (JSON)::

        {"rules": [{"contains": ["..."], "responses": ["...", ...]},
                   {"edge": ["cause label", "effect label"], "responses": ["..."]}],
         "default": "..."}

    The first rule whose substrings all occur in the prompt answers. Its
    responses are used in turn, the last one repeating. ``edge`` is shorthand
    for the question line of an edge prompt. A rule ``{"error": true}`` raises
    a transport error instead. Calls are safe from several threads.
    """

    def __init__(self, rules: list[dict], default: str | None = None):
        self.rules = []
        for rule in rules:
            needles = list(rule.get("contains", []))
            if "edge" in rule:
                needles.append(question_line(*rule["edge"]))
            if not needles:
                raise ConfigError(f"scripted rule without a match condition: {rule!r}")
            self.rules.append((needles, list(rule.get("responses", [])), bool(rule.get("error"))))
        self.default = default
        self._used = [0] * len(self.rules)
        self._lock = threading.Lock()
        self.calls: list[str] = []

    @classmethod
    def from_file(cls, path) -> "ScriptedBackend":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(doc.get("rules", []), doc.get("default"))

    def complete(self, prompt: str) -> str:
        with self._lock:
            self.calls.append(prompt)
            for i, (needles, responses, error) in enumerate(self.rules):
                if all(s in prompt for s in needles):
                    if error:
                        raise BackendError("scripted transport failure")
                    k = min(self._used[i], len(responses) - 1)
                    self._used[i] += 1
                    return responses[k]
        if self.default is None:
            raise BackendError("no scripted response matches the prompt")
        return self.default


def resolve_fixture(name: str) -> Path:
    path = Path(name)
    if path.exists():
        return path
    for candidate in (DATA_DIR / name, DATA_DIR / f"{name}.json"):
        if candidate.exists():
            return candidate
    raise ConfigError(f"scripted fixture {name!r} not found")


def load_backend(spec: str, overrides: dict | None = None) -> tuple[ChatBackend, BackendConfig]:
    """Backend plus config from ``mock:<fixture>`` or a JSON config file path.

    Precedence: ``overrides`` (flags) > config file > environment
    (``CASEGRAPH_ENDPOINT``, ``CASEGRAPH_MODEL``).
    """
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    if spec.startswith("mock:"):
        cfg = BackendConfig.from_mapping(overrides)
        return ScriptedBackend.from_file(resolve_fixture(spec[5:])), cfg
    raw: dict = {}
    env = {"endpoint": "CASEGRAPH_ENDPOINT", "model_name": "CASEGRAPH_MODEL"}
    for key, var in env.items():
        if os.environ.get(var):
            raw[key] = os.environ[var]
    try:
        raw.update(json.loads(Path(spec).read_text(encoding="utf-8")))
    except FileNotFoundError:
        raise ConfigError(f"backend config {spec!r} not found") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"backend config {spec!r} is not valid JSON: {exc}") from None
    raw.update(overrides)
    cfg = BackendConfig.from_mapping(raw)
    return HttpChatBackend(cfg), cfg
