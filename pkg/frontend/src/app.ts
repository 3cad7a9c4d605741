/** Browser bootstrap: wires DOM inputs to API calls and pure renderers. */

import { getJson, getText, postJson } from "./api.js";
import { parseConllu, type ConlluSentence } from "./conllu.js";
import { debounce } from "./debounce.js";
import {
  renderAnnotatePanel,
  renderDependencyPanel,
  renderFixtureOptions,
  renderPatternPanel,
  renderPredefinedPanel,
  renderTriggerOptions,
} from "./render.js";
import { SequenceGate } from "./seq.js";
import { applyEdit, initialState, type WorkbenchState } from "./state.js";
import type {
  AnnotateResponse,
  FixtureEntry,
  MatchResponse,
  PatternsResponse,
  TriggersResponse,
} from "./types.js";

const DEBOUNCE_MS = 300;

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (found === null) {
    throw new Error(`missing element #${id}`);
  }
  return found as T;
}

function parsedOrEmpty(conllu: string | null): ConlluSentence[] {
  if (conllu === null) {
    return [];
  }
  try {
    return parseConllu(conllu);
  } catch {
    return [];
  }
}

export function startApp(base = ""): void {
  let state: WorkbenchState = initialState();
  const gate = new SequenceGate();

  const inputText = element<HTMLTextAreaElement>("input-text");
  const triggerSelect = element<HTMLSelectElement>("trigger-set");
  const windowSelect = element<HTMLSelectElement>("window-size");
  const fixtureSelect = element<HTMLSelectElement>("fixture");
  const conlluPaste = element<HTMLTextAreaElement>("conllu-paste");
  const patternInput = element<HTMLInputElement>("pattern");

  const render = () => {
    element("panel-annotate").innerHTML = renderAnnotatePanel(
      state.annotate.value,
      state.annotate.failure,
    );
    const sentences = parsedOrEmpty(state.conllu);
    const pair = state.pairConllu === null ? null : parsedOrEmpty(state.pairConllu);
    element("panel-dependency").innerHTML = renderDependencyPanel(
      sentences.length > 0 ? sentences : null,
      pair,
      null,
    );
    element("panel-pattern").innerHTML = renderPatternPanel(
      state.interactivePattern,
      state.interactive.value,
      state.interactive.failure,
      sentences,
    );
    element("panel-predefined").innerHTML = renderPredefinedPanel(
      state.predefined,
      state.predefinedMatches.value,
      state.predefinedMatches.failure,
      sentences,
    );
    triggerSelect.innerHTML = renderTriggerOptions(state.triggers, state.selectedTriggerSet);
    fixtureSelect.innerHTML = renderFixtureOptions(state.fixtures, state.selectedFixture);
  };

  const refreshAnnotate = async () => {
    if (state.inputText.trim() === "") {
      state.annotate = { value: null, failure: null };
      render();
      return;
    }
    const seq = gate.begin("annotate");
    const body: Record<string, unknown> = { text: state.inputText, window: state.window };
    if (state.selectedTriggerSet !== null) {
      body.trigger_set = state.selectedTriggerSet;
    }
    const result = await postJson<AnnotateResponse>(base, "/api/annotate", body);
    if (!gate.isCurrent("annotate", seq)) {
      return;
    }
    state.annotate = result.ok
      ? { value: result.value, failure: null }
      : { value: null, failure: result.failure };
    render();
  };

  const refreshInteractive = async () => {
    if (state.interactivePattern.trim() === "" || state.conllu === null) {
      state.interactive = { value: null, failure: null };
      render();
      return;
    }
    const seq = gate.begin("interactive");
    const result = await postJson<MatchResponse>(base, "/api/match", {
      conllu: state.conllu,
      pattern: state.interactivePattern,
    });
    if (!gate.isCurrent("interactive", seq)) {
      return;
    }
    state.interactive = result.ok
      ? { value: result.value, failure: null }
      : { value: null, failure: result.failure };
    render();
  };

  const refreshPredefined = async () => {
    if (state.conllu === null || state.predefined.length === 0) {
      state.predefinedMatches = { value: null, failure: null };
      render();
      return;
    }
    const seq = gate.begin("predefined");
    const conllu = state.conllu;
    const results = await Promise.all(
      state.predefined.map((p) =>
        postJson<MatchResponse>(base, "/api/match", { conllu, pattern: p.text }),
      ),
    );
    if (!gate.isCurrent("predefined", seq)) {
      return;
    }
    const firstFailure = results.find((r) => !r.ok);
    state.predefinedMatches =
      firstFailure !== undefined && !firstFailure.ok
        ? { value: null, failure: firstFailure.failure }
        : { value: results.map((r) => (r.ok ? r.value : { pattern: "", graphs: 0, matches: [] })), failure: null };
    render();
  };

  const loadFixture = async (id: string | null) => {
    state = applyEdit(state, "selectedFixture", id);
    if (id === null) {
      render();
      return;
    }
    const entry = state.fixtures.find((f) => f.id === id);
    if (entry === undefined) {
      render();
      return;
    }
    const main = await getText(base, `/fixtures/${entry.file}`);
    state.conllu = main.ok ? main.value : null;
    state.pairConllu = null;
    if (entry.pairWith !== undefined) {
      const pairEntry = state.fixtures.find((f) => f.id === entry.pairWith);
      if (pairEntry !== undefined) {
        const pair = await getText(base, `/fixtures/${pairEntry.file}`);
        state.pairConllu = pair.ok ? pair.value : null;
      }
    }
    render();
    await Promise.all([refreshInteractive(), refreshPredefined()]);
  };

  const onTextEdited = debounce(() => void refreshAnnotate(), DEBOUNCE_MS);
  const onPatternEdited = debounce(() => void refreshInteractive(), DEBOUNCE_MS);
  const onConlluPasted = debounce(() => {
    state.conllu = conlluPaste.value.trim() === "" ? null : conlluPaste.value;
    state.pairConllu = null;
    state.selectedFixture = null;
    state.interactive = { value: null, failure: null };
    state.predefinedMatches = { value: null, failure: null };
    render();
    void refreshInteractive();
    void refreshPredefined();
  }, DEBOUNCE_MS);

  inputText.addEventListener("input", () => {
    state = applyEdit(state, "inputText", inputText.value);
    onTextEdited();
  });
  triggerSelect.addEventListener("change", () => {
    state = applyEdit(state, "selectedTriggerSet", triggerSelect.value);
    void refreshAnnotate();
  });
  windowSelect.addEventListener("change", () => {
    state = applyEdit(state, "window", windowSelect.value);
    void refreshAnnotate();
  });
  fixtureSelect.addEventListener("change", () => {
    void loadFixture(fixtureSelect.value === "" ? null : fixtureSelect.value);
  });
  patternInput.addEventListener("input", () => {
    state = applyEdit(state, "interactivePattern", patternInput.value);
    onPatternEdited();
  });
  conlluPaste.addEventListener("input", () => onConlluPasted());

  void (async () => {
    const [triggers, patterns, manifest] = await Promise.all([
      getJson<TriggersResponse>(base, "/api/triggers"),
      getJson<PatternsResponse>(base, "/api/patterns"),
      getJson<FixtureEntry[]>(base, "/fixtures/manifest.json"),
    ]);
    if (triggers.ok) {
      state.triggers = triggers.value;
    }
    if (patterns.ok) {
      state.predefined = patterns.value.patterns;
    }
    if (manifest.ok) {
      state.fixtures = manifest.value;
    }
    render();
  })();
}

startApp();
