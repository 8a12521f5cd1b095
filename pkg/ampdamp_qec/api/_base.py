"""Base models shared by the domain types and result containers."""
from __future__ import annotations

from typing import Any, Dict, Generic, Iterator, List, TypeVar

from pydantic import BaseModel, ConfigDict, Field

T = TypeVar("T")


class FrozenModel(BaseModel):
    """Base class for immutable domain values."""
    model_config = ConfigDict(frozen=True, extra="forbid")


class ArrayModel(BaseModel):
    """Base class for immutable values that carry numpy arrays."""
    model_config = ConfigDict(frozen=True, extra="forbid", arbitrary_types_allowed=True)


class RequestModel(BaseModel):
    """Base class for validated inputs such as run configurations."""
    model_config = ConfigDict(extra="forbid")

    def to_record(self) -> Dict[str, Any]:
        """Dump the model without unset optional fields."""
        return self.model_dump(exclude_none=True, mode="json")


class ResultModel(BaseModel):
    """Base class for computed results."""
    model_config = ConfigDict(extra="ignore", arbitrary_types_allowed=True)


class TableResult(ResultModel, Generic[T]):
    """A result made of ordered rows, iterable like a list."""
    rows: List[T] = Field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def __getitem__(self, index: int) -> T:
        return self.rows[index]

    def __iter__(self) -> Iterator[T]:  # type: ignore[override]
        return iter(self.rows)


__all__ = ["FrozenModel", "ArrayModel", "RequestModel", "ResultModel", "TableResult"]
