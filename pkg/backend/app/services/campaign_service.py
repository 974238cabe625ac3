# backend/app/services/campaign_service.py
"""
Verification Campaigns

Runs many independent oracle verifications (every curve over F_q, every
admissible n) and yields one JSON-ready record per item in input order, so a
consumer can stream JSON lines while later items are still being computed.
Items run in worker processes when more than one job is requested; each
worker installs the parent's settings before it starts.
"""

import asyncio
import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from typing import Any, AsyncIterator, Dict, Iterable, Iterator, List, Optional

from pydantic import BaseModel, Field

from ..config import Settings, get_settings, use_settings
from ..core.curves.elliptic import all_curves
from ..core.exceptions import AbvarError, OutOfTheoremScope
from ..core.orchestrator import verify_curve

logger = logging.getLogger(__name__)


class CampaignItem(BaseModel):
    """One verification job"""
    index: int
    kind: str = "ec"
    p: int
    k: int = 1
    coeffs: List[int]
    n: int = 1
    integral_frobenius: bool = False


class CampaignSummary(BaseModel):
    status: str = "summary"
    total: int = 0
    outcomes: Dict[str, int] = Field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return any(k not in ("PASS", "out_of_scope") for k in self.outcomes)


def outcome_of(record: Dict[str, Any]) -> str:
    return record.get("verdict") or record.get("status", "error")


def run_item(item: CampaignItem, settings: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Verify one item; errors become records instead of exceptions"""
    if settings is not None:
        use_settings(Settings.model_validate(settings))
    head = {"index": item.index, "kind": item.kind, "p": item.p, "k": item.k,
            "coeffs": item.coeffs, "n": item.n}
    try:
        report = verify_curve(item.kind, item.p, item.k, item.coeffs, item.n, item.integral_frobenius)
    except OutOfTheoremScope as e:
        return {**head, "status": "out_of_scope", "code": e.code, "detail": e.detail}
    except AbvarError as e:
        return {**head, "status": e.status, "code": e.code, "detail": e.detail}
    return {**head, **report.model_dump(mode="json")}


def ec_campaign_items(p: int, k: int, n_max: int, integral_frobenius: bool = False) -> Iterator[CampaignItem]:
    """Every nonsingular curve over F_{p^k} for every n <= n_max with q^n within the field cap"""
    cap = get_settings().field_cap
    q = p ** k
    degrees = [n for n in range(1, n_max + 1) if q ** n <= cap]
    index = 0
    for curve in all_curves(p, k):
        for n in degrees:
            yield CampaignItem(index=index, kind="ec", p=p, k=k, coeffs=list(curve.coefficients),
                               n=n, integral_frobenius=integral_frobenius)
            index += 1


class CampaignService:
    """Ordered, optionally parallel execution of campaign items"""

    def __init__(self, jobs: Optional[int] = None):
        self.jobs = jobs or get_settings().jobs

    async def stream(self, items: Iterable[CampaignItem]) -> AsyncIterator[Dict[str, Any]]:
        items = list(items)
        if self.jobs <= 1:
            for item in items:
                yield run_item(item)
            return

        settings = get_settings().model_dump()
        loop = asyncio.get_running_loop()
        with ProcessPoolExecutor(max_workers=self.jobs) as pool:
            futures = [loop.run_in_executor(pool, run_item, item, settings) for item in items]
            # awaiting in submission order keeps the output deterministic
            for future in futures:
                yield await future

    async def run(self, items: Iterable[CampaignItem], sink=None) -> CampaignSummary:
        """Consume the stream, passing each record to sink, and tally outcomes"""
        tally: Counter = Counter()
        total = 0
        async for record in self.stream(items):
            total += 1
            tally[outcome_of(record)] += 1
            if sink is not None:
                sink(record)
        logger.info("campaign finished: %d items, %s", total, dict(tally))
        return CampaignSummary(total=total, outcomes=dict(sorted(tally.items())))


def run_campaign(items: Iterable[CampaignItem], sink=None, jobs: Optional[int] = None) -> CampaignSummary:
    return asyncio.run(CampaignService(jobs).run(items, sink))
