"""Request/response schemas for the experiment service."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field


class RunRequest(BaseModel):
    params: dict[str, Any] = Field(default_factory=dict)


class RunResponse(BaseModel):
    experiment: str
    version: str
    config: dict[str, Any]
    columns: list[str]
    rows: list[list[Any]]
    extra: dict[str, Any] = Field(default_factory=dict)


class ExperimentList(BaseModel):
    experiments: list[str]
    version: str
