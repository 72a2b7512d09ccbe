"""HTTP interface for the planner UI and scripted clients.

One network per process, results in memory only. Scenario jobs run on a
single background executor; request handlers only read immutable
published results, and publication is a single reference assignment under
the engine lock, so readers never observe partial fields. Every number
served here comes from the same code path as the CLI files.
"""
from __future__ import annotations

import queue
import threading
from contextlib import asynccontextmanager
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import __version__
from .accessibility import AccessibilityField, field_from_walk_result
from .errors import ScenarioError
from .network import StreetNetwork
from .scenario import ScenarioResult, evaluate_scenario, make_scenario, report_to_json_obj
from .walks import WalkConfig, walk_entropy_field

QUEUED = "queued"
RUNNING = "running"
DONE = "done"
FAILED = "failed"


@dataclass
class JobRecord:
    id: str
    scenario_doc: dict
    state: str = QUEUED
    progress: float = 0.0
    error: str | None = None
    result: ScenarioResult | None = field(default=None, repr=False)

    def advance(self, state: str) -> None:
        order = [QUEUED, RUNNING, DONE, FAILED]
        if order.index(state) < order.index(self.state):
            raise RuntimeError(f"job state cannot move {self.state} -> {state}")
        self.state = state


class Engine:
    """Owns the network, the baseline field, and the job executor."""

    def __init__(
        self,
        net: StreetNetwork,
        config: WalkConfig,
        threads: int = 1,
        literal_zero_survival: bool = False,
        step_range: tuple[int, int] | None = None,
    ):
        self.net = net
        self.config = config
        self.threads = threads
        self.literal_zero_survival = literal_zero_survival
        self.step_range = step_range
        self._lock = threading.Lock()
        self._compute_lock = threading.Lock()
        self._baseline: AccessibilityField | None = None
        self._jobs: dict[str, JobRecord] = {}
        self._queue: queue.Queue[str] = queue.Queue()
        self._job_counter = 0
        self._worker = threading.Thread(target=self._work, daemon=True)
        self._worker.start()

    def baseline_field(self) -> AccessibilityField:
        """Baseline accessibility, computed lazily on first use."""
        if self._baseline is None:
            with self._compute_lock:
                if self._baseline is None:
                    result = walk_entropy_field(self.net, self.config, self.threads)
                    fld = field_from_walk_result(
                        result,
                        self.net.node_count,
                        self.literal_zero_survival,
                        self.step_range,
                    )
                    with self._lock:
                        self._baseline = fld
        return self._baseline

    def precompute(self) -> None:
        self.baseline_field()

    def submit(self, doc: dict) -> tuple[str, int]:
        """Validate and enqueue a scenario; returns (job id, queue position)."""
        pairs = doc.get("add_edges")
        if not isinstance(pairs, list) or any(
            not isinstance(p, (list, tuple)) or len(p) != 2 for p in pairs or []
        ):
            raise ScenarioError("'add_edges' must be a list of [u, v] pairs")
        radius = doc.get("radius", 7)
        if not isinstance(radius, int) or isinstance(radius, bool):
            raise ScenarioError("'radius' must be an integer")
        # Raises ScenarioError on any invalid edge; nothing is queued then.
        make_scenario(self.net, [(str(u), str(v)) for u, v in pairs], radius=radius)
        with self._lock:
            self._job_counter += 1
            job_id = f"job-{self._job_counter}"
            record = JobRecord(id=job_id, scenario_doc={"add_edges": pairs, "radius": radius})
            self._jobs[job_id] = record
            position = self._queue.qsize()
        self._queue.put(job_id)
        return job_id, position

    def job(self, job_id: str) -> JobRecord:
        with self._lock:
            record = self._jobs.get(job_id)
        if record is None:
            raise KeyError(job_id)
        return record

    def queue_position(self, job_id: str) -> int | None:
        with self._lock:
            # registry preserves submission order
            waiting = [j.id for j in self._jobs.values() if j.state == QUEUED]
        return waiting.index(job_id) if job_id in waiting else None

    def _work(self) -> None:
        while True:
            job_id = self._queue.get()
            record = self.job(job_id)
            record.advance(RUNNING)
            try:
                scenario = make_scenario(
                    self.net,
                    [(str(u), str(v)) for u, v in record.scenario_doc["add_edges"]],
                    radius=record.scenario_doc["radius"],
                )

                def on_progress(done: int, total: int) -> None:
                    record.progress = max(record.progress, done / total)

                result = evaluate_scenario(
                    self.net,
                    scenario,
                    self.config,
                    threads=self.threads,
                    literal_zero_survival=self.literal_zero_survival,
                    step_range=self.step_range,
                    progress=on_progress,
                )
                with self._lock:
                    record.result = result
                    record.progress = 1.0
                    record.advance(DONE)
            except Exception as exc:
                with self._lock:
                    record.error = f"{type(exc).__name__}: {exc}"
                    record.advance(FAILED)


def _network_document(net: StreetNetwork) -> dict:
    nodes = []
    for i, lab in enumerate(net.labels):
        if net.coords is not None:
            nodes.append({"id": lab, "x": float(net.coords[i, 0]), "y": float(net.coords[i, 1])})
        else:
            nodes.append({"id": lab, "x": None, "y": None})
    return {
        "node_count": net.node_count,
        "edge_count": net.edge_count,
        "has_coordinates": net.coords is not None,
        "nodes": nodes,
        "edges": [[net.labels[u], net.labels[v]] for u, v in net.edge_list()],
    }


def _field_document(net: StreetNetwork, fld: AccessibilityField) -> dict:
    return {
        "steps": fld.max_steps,
        "node_count": fld.node_count_total,
        "nodes": [
            {
                "id": net.labels[node],
                "mean_oa": float(fld.mean_oa[i]),
                "oa": [float(x) for x in fld.oa[i]],
            }
            for i, node in enumerate(fld.node_ids)
        ],
    }


def create_app(
    net: StreetNetwork,
    config: WalkConfig,
    threads: int = 1,
    precompute: bool = False,
    literal_zero_survival: bool = False,
    step_range: tuple[int, int] | None = None,
    ui_dir: str | None = None,
) -> FastAPI:
    engine = Engine(net, config, threads, literal_zero_survival, step_range)

    @asynccontextmanager
    async def lifespan(_app: FastAPI):
        if precompute:
            engine.precompute()
        yield

    app = FastAPI(title="accesswalk", version=__version__, lifespan=lifespan)
    app.state.engine = engine
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(ScenarioError)
    async def _scenario_error(_req: Request, exc: ScenarioError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/api/health")
    def health() -> dict:
        return {
            "status": "ok",
            "version": __version__,
            "node_count": net.node_count,
            "baseline_ready": engine._baseline is not None,
        }

    @app.get("/api/network")
    def get_network() -> dict:
        return _network_document(net)

    @app.get("/api/accessibility")
    def get_accessibility(scenario: str | None = None) -> dict:
        if scenario is None:
            return _field_document(net, engine.baseline_field())
        try:
            record = engine.job(scenario)
        except KeyError:
            raise HTTPException(404, f"unknown scenario id {scenario!r}")
        if record.state == FAILED:
            raise HTTPException(409, f"scenario job failed: {record.error}")
        if record.state != DONE or record.result is None:
            raise HTTPException(409, f"scenario job is {record.state}, not finished")
        doc = _field_document(net, record.result.enhanced_field)
        doc["scenario"] = scenario
        doc["partial"] = True
        return doc

    @app.post("/api/scenarios", status_code=202)
    async def post_scenario(request: Request) -> dict:
        body = await request.json()
        if not isinstance(body, dict):
            raise ScenarioError("scenario body must be a JSON object")
        job_id, position = engine.submit(body)
        return {"job_id": job_id, "position": position}

    @app.get("/api/jobs/{job_id}")
    def get_job(job_id: str) -> dict:
        try:
            record = engine.job(job_id)
        except KeyError:
            raise HTTPException(404, f"unknown job id {job_id!r}")
        return {
            "id": record.id,
            "state": record.state,
            "progress": record.progress,
            "scenario": record.scenario_doc,
            "error": record.error,
            "position": engine.queue_position(job_id),
        }

    @app.get("/api/scenarios/{job_id}/comparison")
    def get_comparison(job_id: str) -> dict:
        try:
            record = engine.job(job_id)
        except KeyError:
            raise HTTPException(404, f"unknown scenario id {job_id!r}")
        if record.state == FAILED:
            raise HTTPException(409, f"scenario job failed: {record.error}")
        if record.state != DONE or record.result is None:
            raise HTTPException(409, f"scenario job is {record.state}, not finished")
        doc = report_to_json_obj(record.result.report, net, record.result.scenario)
        doc["job_id"] = job_id
        return doc

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
