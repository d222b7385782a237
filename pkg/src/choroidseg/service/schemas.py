"""Pydantic request/response models for the HTTP API."""

from pydantic import BaseModel, Field


class PointModel(BaseModel):
    col: int = Field(ge=0)
    row: int = Field(ge=0)


class CorrectionRequest(BaseModel):
    layer: str = Field(pattern="^(RPE|CHOROID)$")
    a: PointModel
    b: PointModel


class UploadResponse(BaseModel):
    session_id: str


class HealthResponse(BaseModel):
    status: str = "ok"
