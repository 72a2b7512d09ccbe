import { ApiClient, ApiError } from "./api.js";
import { exactNumber, legendTicks, makeColorScale, percent, shortNumber } from "./color.js";
import { comparisonRows, drawComparison } from "./chart.js";
import { drawMap, pickNode } from "./map.js";
import {
  clearPending,
  clickNode,
  fitTransform,
  initialState,
  nodeBounds,
  panBy,
  removePending,
  zoomAt,
  type ViewState,
} from "./state.js";
import type { AccessibilityDocument, NetworkDocument } from "./types.js";

const POLL_MS = 500;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function boot(): Promise<void> {
  const api = new ApiClient("");
  const status = el<HTMLDivElement>("status");
  const mapCanvas = el<HTMLCanvasElement>("map");
  const chartCanvas = el<HTMLCanvasElement>("chart");
  const tooltip = el<HTMLDivElement>("tooltip");
  const legend = el<HTMLDivElement>("legend");
  const pendingList = el<HTMLUListElement>("pending");
  const submitBtn = el<HTMLButtonElement>("submit");
  const clearBtn = el<HTMLButtonElement>("clear");
  const radiusInput = el<HTMLInputElement>("radius");
  const jobStatus = el<HTMLDivElement>("job-status");
  const table = el<HTMLTableElement>("comparison-table");

  status.textContent = "loading network…";
  let net: NetworkDocument;
  let field: AccessibilityDocument;
  try {
    net = await api.getNetwork();
    field = await api.getAccessibility();
  } catch (err) {
    status.textContent = `service unavailable: ${String(err)}`;
    return;
  }

  if (!net.has_coordinates) {
    status.textContent =
      "this network has no coordinates, so the map view is disabled; " +
      "load a network with x/y to plan streets visually";
    el<HTMLDivElement>("map-wrap").classList.add("disabled");
    return;
  }

  let state: ViewState = initialState();
  const bounds = nodeBounds(net)!;
  state = { ...state, transform: fitTransform(bounds, mapCanvas.width, mapCanvas.height) };
  const scale = makeColorScale(field.nodes.map((n) => n.mean_oa));
  const meanOf = new Map(field.nodes.map((n) => [n.id, n.mean_oa]));

  legend.innerHTML = "";
  const caption = document.createElement("span");
  caption.className = "legend-caption";
  caption.textContent = "mean outward accessibility";
  legend.appendChild(caption);
  for (const tick of legendTicks(scale)) {
    const item = document.createElement("span");
    item.className = "legend-item";
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = tick.color;
    item.appendChild(swatch);
    item.appendChild(document.createTextNode(tick.label));
    legend.appendChild(item);
  }

  function redraw(): void {
    const ctx = mapCanvas.getContext("2d")!;
    drawMap(ctx, mapCanvas.width, mapCanvas.height, net, field, state, scale);
  }

  function renderPending(): void {
    pendingList.innerHTML = "";
    state.pending.forEach((edge, i) => {
      const li = document.createElement("li");
      li.textContent = `${edge.a} – ${edge.b}`;
      const rm = document.createElement("button");
      rm.textContent = "×";
      rm.addEventListener("click", () => {
        state = removePending(state, i);
        renderPending();
        redraw();
      });
      li.appendChild(rm);
      pendingList.appendChild(li);
    });
    submitBtn.disabled = state.pending.length === 0 || state.activeJobId !== null;
    status.textContent = state.lastError
      ? state.lastError
      : state.selected
        ? `node ${state.selected} selected; click another node to draw a street`
        : `${net.node_count} nodes, ${net.edge_count} streets; click two nodes to add a candidate`;
  }

  function renderComparison(): void {
    if (!state.comparison) return;
    drawComparison(
      chartCanvas.getContext("2d")!,
      chartCanvas.width,
      chartCanvas.height,
      state.comparison,
    );
    const rows = comparisonRows(state.comparison);
    table.innerHTML =
      "<tr><th>h</th><th>baseline</th><th>enhanced</th><th>change</th></tr>";
    for (const row of rows) {
      const tr = document.createElement("tr");
      const cells = [
        String(row.h),
        shortNumber(row.baseline),
        shortNumber(row.enhanced),
        percent(row.relativeChange),
      ];
      const titles = [
        "",
        exactNumber(row.baseline),
        exactNumber(row.enhanced),
        exactNumber(row.relativeChange),
      ];
      cells.forEach((text, i) => {
        const td = document.createElement("td");
        td.textContent = text;
        if (titles[i]) td.title = titles[i];
        tr.appendChild(td);
      });
      table.appendChild(tr);
    }
    el<HTMLDivElement>("comparison-wrap").style.display = "block";
  }

  // map interaction: drag pans, wheel zooms, click picks nodes
  let dragging = false;
  let moved = false;
  let last: [number, number] = [0, 0];
  mapCanvas.addEventListener("mousedown", (ev) => {
    dragging = true;
    moved = false;
    last = [ev.offsetX, ev.offsetY];
  });
  window.addEventListener("mouseup", () => {
    dragging = false;
  });
  mapCanvas.addEventListener("mousemove", (ev) => {
    if (dragging) {
      const dx = ev.offsetX - last[0];
      const dy = ev.offsetY - last[1];
      if (Math.abs(dx) + Math.abs(dy) > 2) moved = true;
      state = { ...state, transform: panBy(state.transform, dx, dy) };
      last = [ev.offsetX, ev.offsetY];
      redraw();
      return;
    }
    const hit = pickNode(net, state.transform, ev.offsetX, ev.offsetY);
    if (hit !== null) {
      tooltip.style.display = "block";
      tooltip.style.left = `${ev.offsetX + 14}px`;
      tooltip.style.top = `${ev.offsetY + 14}px`;
      const mean = meanOf.get(hit);
      tooltip.textContent =
        mean === undefined ? hit : `${hit}: mean OA ${exactNumber(mean)}`;
    } else {
      tooltip.style.display = "none";
    }
  });
  mapCanvas.addEventListener("wheel", (ev) => {
    ev.preventDefault();
    const factor = ev.deltaY < 0 ? 1.15 : 1 / 1.15;
    state = { ...state, transform: zoomAt(state.transform, ev.offsetX, ev.offsetY, factor) };
    redraw();
  });
  mapCanvas.addEventListener("click", (ev) => {
    if (moved) return;
    const hit = pickNode(net, state.transform, ev.offsetX, ev.offsetY);
    if (hit === null) return;
    state = clickNode(state, net, hit);
    renderPending();
    redraw();
  });

  clearBtn.addEventListener("click", () => {
    state = clearPending(state);
    renderPending();
    redraw();
  });

  submitBtn.addEventListener("click", async () => {
    const edges = state.pending.map((e) => [e.a, e.b] as [string, string]);
    const radius = Number.parseInt(radiusInput.value, 10);
    try {
      const { job_id } = await api.postScenario(
        edges,
        Number.isFinite(radius) ? radius : 7,
      );
      state = { ...state, activeJobId: job_id };
      renderPending();
      jobStatus.textContent = `job ${job_id} submitted…`;
      poll(job_id);
    } catch (err) {
      jobStatus.textContent =
        err instanceof ApiError ? `rejected: ${err.detail}` : String(err);
    }
  });

  function poll(jobId: string): void {
    window.setTimeout(async () => {
      try {
        const job = await api.getJob(jobId);
        if (job.state === "failed") {
          jobStatus.textContent = `job ${jobId} failed: ${job.error}`;
          state = { ...state, activeJobId: null };
          renderPending();
          return;
        }
        if (job.state !== "done") {
          jobStatus.textContent = `job ${jobId}: ${job.state}, ${(job.progress * 100).toFixed(0)}%`;
          poll(jobId);
          return;
        }
        const comparison = await api.getComparison(jobId);
        state = { ...state, activeJobId: null, comparison };
        jobStatus.textContent = `job ${jobId} done over ${comparison.region.length} nodes`;
        renderPending();
        renderComparison();
      } catch (err) {
        jobStatus.textContent = String(err);
        state = { ...state, activeJobId: null };
        renderPending();
      }
    }, POLL_MS);
  }

  renderPending();
  redraw();
}

boot().catch((err) => {
  const status = document.getElementById("status");
  if (status) status.textContent = String(err);
});
