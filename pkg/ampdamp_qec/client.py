"""Async sweep client.

This module provides an async client that evaluates fidelity curves with the
gamma points running concurrently in a worker pool, bounded by a semaphore and
returned in ascending gamma order.
"""
from __future__ import annotations

import asyncio
import functools
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, List, Optional, Sequence, Tuple, TypeVar

from .api._exceptions import QECError
from .api._responses import FidelityCurve, FidelityPoint
from .api.codes import get_code, parse_selector
from .api.fidelity import RecoveryFactory, evaluate_point, recovery_factory, resolve_truncation
from .api.recovery import RecoveryOperation, check_mode
from .api.stabilizer import StabilizerCode
from .config import QECConfig, config as default_config

T = TypeVar("T")

logger = logging.getLogger(__name__)


MODE_SEPARATOR = "@"


def split_mode(selector: str, mode: Optional[str] = None) -> Tuple[str, Optional[str]]:
    """Split ``pair:3@perturbed`` into the code selector and its recovery mode.

    A selector without a mode falls back to ``mode``.
    """
    code, separator, own = selector.partition(MODE_SEPARATOR)
    return code.strip(), (own.strip() or None) if separator else mode


class SweepClient:
    """Async client for fidelity sweeps.

    Handles the worker pool, the concurrency limit and the rebuilding of
    gamma-dependent recoveries.
    """

    def __init__(self, config: Optional[QECConfig] = None):
        """Initialize the sweep client.

        Args:
            config: Configuration instance. If not provided, uses the loaded settings.
        """
        self.config = config or default_config
        self._executor: Optional[ThreadPoolExecutor] = None
        self._semaphore = asyncio.Semaphore(self.config.max_workers)

    async def __aenter__(self) -> "SweepClient":
        await self.start()
        return self

    async def __aexit__(self, *args: Any) -> None:
        await self.close()

    async def start(self) -> None:
        """Create the worker pool."""
        if self._executor is None:
            self._executor = ThreadPoolExecutor(
                max_workers=self.config.max_workers, thread_name_prefix="qec-sweep"
            )

    async def close(self) -> None:
        """Shut the worker pool down."""
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None

    @property
    def running(self) -> bool:
        return self._executor is not None

    async def _run(self, func: Callable[..., T], *args: Any, **kwargs: Any) -> T:
        """Run ``func`` in the pool under the concurrency limit.

        Raises:
            QECError: Domain errors pass through; anything else is wrapped.
        """
        if self._executor is None:
            await self.start()
        async with self._semaphore:
            loop = asyncio.get_running_loop()
            try:
                return await loop.run_in_executor(
                    self._executor, functools.partial(func, *args, **kwargs)
                )
            except QECError:
                raise
            except Exception as e:
                logger.error("Evaluation failed: %s", str(e))
                raise QECError(f"Evaluation failed: {str(e)}") from e

    async def evaluate(
        self,
        code: StabilizerCode,
        recovery: RecoveryOperation,
        gamma: float,
        truncation: Optional[int] = None,
        copies: int = 1,
        label: Optional[str] = None,
    ) -> FidelityPoint:
        """Evaluate one gamma point in the pool."""
        return await self._run(evaluate_point, code, recovery, gamma, truncation, copies, label)

    async def _point(
        self,
        code: StabilizerCode,
        factory: RecoveryFactory,
        fixed: Optional[RecoveryOperation],
        gamma: float,
        truncation: Optional[int],
        copies: int,
        label: Optional[str],
    ) -> FidelityPoint:
        recovery = fixed if fixed is not None else await self._run(factory, gamma)
        return await self.evaluate(code, recovery, gamma, truncation, copies, label)

    async def sweep(
        self,
        code: StabilizerCode,
        factory: RecoveryFactory,
        grid: Sequence[float],
        truncation: Optional[int] = None,
        copies: int = 1,
        label: Optional[str] = None,
    ) -> FidelityCurve:
        """Fidelity curve with the gamma points evaluated concurrently.

        Gives the same points as :func:`ampdamp_qec.api.fidelity.sweep`.
        """
        grid = sorted(grid)
        if not grid:
            raise QECError("Empty gamma grid")
        first = await self._run(factory, grid[0])
        fixed = None if first.mode.needs_gamma else first
        logger.debug(
            "Sweeping %s over %d points with %d workers",
            label or code.name, len(grid), self.config.max_workers,
        )
        points: List[FidelityPoint] = await asyncio.gather(
            *(
                self._point(code, factory, fixed, gamma, truncation, copies, label)
                for gamma in grid
            )
        )
        return FidelityCurve(
            rows=points,
            code=label or code.name,
            recovery_mode=first.mode.value,
            k=code.k * copies,
            truncation_order=truncation,
            provenance={"copies": copies, "points": len(points), "n": code.n},
        )

    async def sweep_code(
        self,
        selector: str,
        mode: Optional[str],
        grid: Sequence[float],
        truncation: Optional[int] = None,
        exact: bool = False,
    ) -> FidelityCurve:
        """Sweep a registry code given as ``name`` or ``name^copies``.

        Raises:
            UnknownCodeError: If the code is unknown.
            UnknownModeError: If the mode is not available for the code.
        """
        name, copies = parse_selector(selector)
        resolved = check_mode(name, mode)
        code = get_code(name)
        order = resolve_truncation(code.n, truncation, exact)
        label = selector if copies > 1 else code.name
        return await self.sweep(
            code, recovery_factory(name, resolved.value), grid, order, copies, label
        )

    async def compare(
        self,
        selectors: Sequence[str],
        mode: Optional[str],
        grid: Sequence[float],
        truncation: Optional[int] = None,
        exact: bool = False,
    ) -> List[FidelityCurve]:
        """One curve per selector, in the order given.

        A selector may carry its own recovery mode as ``code@mode``, e.g.
        ``["gottesman83@adapted_stabilizer", "pair:3@perturbed"]``; otherwise
        ``mode`` applies, and None picks each code's default.
        """
        runs = [split_mode(selector, mode) for selector in selectors]
        # Validate every selector before any computation starts.
        for selector, own in runs:
            name, _ = parse_selector(selector)
            check_mode(name, own)
        return [
            await self.sweep_code(selector, own, grid, truncation, exact)
            for selector, own in runs
        ]


__all__ = ["SweepClient", "split_mode"]
