/** DOM wiring for the coach console. All state shown on screen is a
 * projection of server payloads (viewModel.ts); the only client-side logic
 * is form validation parity (validation.ts). */

import { ApiClient, ApiError } from "./api.js";
import { renderPressureCurve } from "./chart.js";
import type {
  AppendOverRequest,
  CreateSessionRequest,
  SessionSnapshot,
} from "./types.js";
import {
  applyAppend,
  initialFormState,
  validateAppend,
  validateCreate,
  type SessionFormState,
} from "./validation.js";
import {
  projectSession,
  type ConsoleViewModel,
  type RecommendationCard,
} from "./viewModel.js";
import { whatIfNextOver } from "./whatif.js";

interface ConsoleState {
  sessionId: string | null;
  sessionReq: CreateSessionRequest | null;
  form: SessionFormState | null;
  entries: AppendOverRequest[];
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  cls?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

function cardHtml(card: RecommendationCard): string {
  const zoneCls = `zone-${card.zone.toLowerCase()}`;
  const pred = card.prediction;
  const predLine = pred
    ? `Predicted PI <b>${pred.expectedPi}</b> ` +
      `[${pred.intervalLow}, ${pred.intervalHigh}] ` +
      `<small>(${pred.source}, n=${pred.observations})</small>`
    : "No prediction yet";
  const hint =
    card.requiredRunRateHint === null
      ? ""
      : `<div class="rrr-hint">Required run rate to recover: <b>${card.requiredRunRateHint}</b></div>`;
  return (
    `<div class="card ${zoneCls}">` +
    `<div class="zone-name">${card.zone}</div>` +
    `<div class="message">${card.message}</div>` +
    `<div class="prediction">${predLine}</div>` +
    `<div class="band">Mini-target band: [${card.bandLow}, ${card.bandHigh}]</div>` +
    hint +
    `<div class="basis">basis: ${card.basis}</div>` +
    `</div>`
  );
}

export function mount(root: HTMLElement, client: ApiClient): void {
  const state: ConsoleState = {
    sessionId: null,
    sessionReq: null,
    form: null,
    entries: [],
  };

  root.innerHTML = "";
  const banner = el("div", "banner");
  const errorsBox = el("div", "errors");
  const chartBox = el("div", "chart");
  const cardBox = el("div", "card-box");
  const tableBox = el("div", "table-box");
  const whatIfBox = el("div", "whatif-box");

  const createForm = el("form", "create-form");
  createForm.innerHTML = `
    <label>Target <input name="target" type="number" value="154"></label>
    <label>Balls <input name="total_balls" type="number" value="120"></label>
    <label>Venue <select name="venue_class">
      <option>home</option><option>away</option><option>neutral</option>
    </select></label>
    <button type="submit">Start chase</button>`;

  const overForm = el("form", "over-form");
  overForm.innerHTML = `
    <label>Over <input name="over" type="number" value="1"></label>
    <label>Cumulative runs <input name="runs" type="number"></label>
    <label>Wickets this over (positions) <input name="positions" placeholder="e.g. 3,5"></label>
    <label>Balls (optional) <input name="balls" type="number"></label>
    <button type="submit">Record over</button>`;
  overForm.hidden = true;

  const whatIfForm = el("form", "whatif-form");
  whatIfForm.innerHTML = `
    <label>If we score <input name="runs" type="number" value="10"> next over
    losing positions <input name="positions" placeholder="none"></label>
    <button type="submit">Explore</button>`;
  whatIfForm.hidden = true;

  root.append(banner, createForm, overForm, errorsBox, cardBox, chartBox,
    whatIfForm, whatIfBox, tableBox);

  function showErrors(messages: string[]): void {
    errorsBox.innerHTML = messages
      .map((m) => `<div class="error-line">${m}</div>`)
      .join("");
  }

  function renderSnapshot(snapshot: SessionSnapshot): void {
    const vm: ConsoleViewModel = projectSession(snapshot);
    banner.className = `banner banner-${vm.banner}`;
    banner.textContent =
      vm.banner === "live"
        ? `Chasing ${vm.target} from ${vm.totalBalls} balls — current PI ${vm.currentPi}`
        : vm.banner === "victory"
          ? "Target reached — chase complete"
          : "Chase lost";
    chartBox.innerHTML = renderPressureCurve(snapshot.trajectory, {
      venueClass: vm.venueClass,
      maxOver: snapshot.total_balls / 6,
    });
    cardBox.innerHTML = vm.card ? cardHtml(vm.card) : "";
    tableBox.innerHTML =
      "<table><tr><th>Over</th><th>PI</th><th>Wicket</th></tr>" +
      vm.rows
        .map(
          (r) =>
            `<tr><td>${r.over}</td><td>${r.pi}</td>` +
            `<td>${r.wicket ? "yes" : ""}</td></tr>`,
        )
        .join("") +
      "</table>";
    overForm.hidden = vm.locked;
    whatIfForm.hidden = vm.locked;
  }

  async function refresh(): Promise<void> {
    if (!state.sessionId) return;
    renderSnapshot(await client.getSession(state.sessionId));
  }

  function parsePositions(text: string): number[] {
    return text
      .split(",")
      .map((s) => s.trim())
      .filter((s) => s.length > 0)
      .map(Number);
  }

  createForm.addEventListener("submit", (event) => {
    event.preventDefault();
    void (async () => {
      const data = new FormData(createForm);
      const req: CreateSessionRequest = {
        target: Number(data.get("target")),
        total_balls: Number(data.get("total_balls")),
        venue_class: String(data.get("venue_class")),
      };
      const errors = validateCreate(req);
      showErrors(errors);
      if (errors.length > 0) return;
      try {
        const created = await client.createSession(req);
        state.sessionId = created.session_id;
        state.sessionReq = req;
        state.form = initialFormState(req);
        state.entries = [];
        overForm.hidden = false;
        whatIfForm.hidden = false;
        await refresh();
      } catch (err) {
        showErrors([err instanceof ApiError ? `${err.code}: ${err.message}` : String(err)]);
      }
    })();
  });

  overForm.addEventListener("submit", (event) => {
    event.preventDefault();
    void (async () => {
      if (!state.sessionId || !state.form) return;
      const data = new FormData(overForm);
      const req: AppendOverRequest = {
        over: Number(data.get("over")),
        runs: Number(data.get("runs")),
        dismissed_positions: parsePositions(String(data.get("positions") ?? "")),
      };
      const ballsRaw = String(data.get("balls") ?? "").trim();
      if (ballsRaw !== "") req.balls = Number(ballsRaw);
      const errors = validateAppend(state.form, req);
      showErrors(errors);
      if (errors.length > 0) return;
      try {
        await client.appendOver(state.sessionId, req);
        state.form = applyAppend(state.form, req);
        state.entries.push(req);
        const overInput = overForm.elements.namedItem("over") as HTMLInputElement;
        overInput.value = String(state.form.expectedOver);
        await refresh();
      } catch (err) {
        showErrors([err instanceof ApiError ? `${err.code}: ${err.message}` : String(err)]);
        await refresh();
      }
    })();
  });

  whatIfForm.addEventListener("submit", (event) => {
    event.preventDefault();
    void (async () => {
      if (!state.sessionReq) return;
      const data = new FormData(whatIfForm);
      try {
        const result = await whatIfNextOver(client, state.sessionReq, state.entries, {
          runs: Number(data.get("runs")),
          dismissed_positions: parsePositions(String(data.get("positions") ?? "")),
        });
        whatIfBox.innerHTML =
          `<div class="whatif-result">Hypothetical over ${result.over}: ` +
          `PI would be <b>${String(result.current_pi)}</b></div>` +
          (result.recommendation
            ? cardHtml({
                zone: result.recommendation.zone,
                message: result.recommendation.message,
                bandLow: String(result.recommendation.target_band[0]),
                bandHigh: String(result.recommendation.target_band[1]),
                requiredRunRateHint:
                  result.recommendation.required_run_rate_hint === null
                    ? null
                    : String(result.recommendation.required_run_rate_hint),
                basis: result.recommendation.basis,
                prediction: result.prediction
                  ? {
                      expectedPi: String(result.prediction.expected_pi),
                      intervalLow: String(result.prediction.interval[0]),
                      intervalHigh: String(result.prediction.interval[1]),
                      source: result.prediction.source,
                      observations: String(result.prediction.n_observations),
                    }
                  : null,
              })
            : "");
      } catch (err) {
        whatIfBox.innerHTML = `<div class="error-line">${
          err instanceof ApiError ? `${err.code}: ${err.message}` : String(err)
        }</div>`;
      }
    })();
  });
}

declare global {
  interface Window {
    chasepressureMount?: typeof mount;
  }
}

if (typeof window !== "undefined") {
  window.chasepressureMount = mount;
  const root = document.getElementById("console-root");
  if (root) {
    const base = new URLSearchParams(window.location.search).get("api") ??
      "http://localhost:8000";
    mount(root, new ApiClient(base));
  }
}
