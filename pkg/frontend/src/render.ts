/** Pure render functions: state in, HTML string out. No assertion logic here —
 * every displayed judgement is read verbatim from an API payload.
 */

import type { ConlluSentence } from "./conllu.js";
import type {
  AnnotateResponse,
  ApiFailure,
  ConceptJson,
  FixtureEntry,
  MatchResponse,
  MatchRow,
  PatternInfo,
  TriggersResponse,
} from "./types.js";

export function escapeHtml(raw: string): string {
  return raw
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderErrorBanner(failure: ApiFailure): string {
  const where = failure.status === 0 ? "no connection" : `HTTP ${failure.status}`;
  return `<div class="error-banner">${escapeHtml(where)}: ${escapeHtml(failure.detail)}</div>`;
}

function conceptMarkup(concept: ConceptJson, surface: string): string {
  const negated = concept.assertion === "Negated";
  const classes = negated ? "concept negated" : "concept affirmed";
  const hover = negated
    ? `${concept.trigger ? concept.trigger.text : ""} (${concept.source})`.trim()
    : concept.category;
  const badge = negated ? `<sup class="badge">−</sup>` : "";
  return `<span class="${classes}" title="${escapeHtml(hover)}">${escapeHtml(surface)}${badge}</span>`;
}

/** Panel B: the input text with concept spans highlighted in place. */
export function renderAnnotatePanel(
  doc: AnnotateResponse | null,
  failure: ApiFailure | null,
): string {
  if (failure !== null) {
    return renderErrorBanner(failure);
  }
  if (doc === null) {
    return `<p class="empty">Enter text above to annotate it.</p>`;
  }
  const ordered = [...doc.concepts].sort((a, b) => a.span.begin - b.span.begin);
  const parts: string[] = [];
  let cursor = 0;
  for (const concept of ordered) {
    if (concept.span.begin < cursor) {
      continue; // overlapping annotation; the first one wins the display
    }
    parts.push(escapeHtml(doc.text.slice(cursor, concept.span.begin)));
    parts.push(conceptMarkup(concept, doc.text.slice(concept.span.begin, concept.span.end)));
    cursor = concept.span.end;
  }
  parts.push(escapeHtml(doc.text.slice(cursor)));
  const negated = ordered.filter((c) => c.assertion === "Negated").length;
  const summary =
    ordered.length === 0
      ? `<p class="empty">No concepts found.</p>`
      : `<p class="panel-summary">${ordered.length} concept(s), ${negated} negated</p>`;
  return `<div class="annotated-text">${parts.join("")}</div>${summary}`;
}

const TOKEN_STEP = 110;
const TOKEN_BASE_X = 50;
const TOKEN_Y = 180;

function tokenX(index1: number): number {
  return TOKEN_BASE_X + (index1 - 1) * TOKEN_STEP;
}

/** One labeled directed arc from the governor down to its dependent. */
function arcMarkup(head: number, dep: number, label: string): string {
  const x1 = tokenX(head);
  const x2 = tokenX(dep);
  const lift = 28 + Math.abs(head - dep) * 26;
  const top = TOKEN_Y - 24;
  const mid = (x1 + x2) / 2;
  const path = `M ${x1} ${top} C ${x1} ${top - lift}, ${x2} ${top - lift}, ${x2} ${top - 6}`;
  return (
    `<path class="arc" d="${path}" marker-end="url(#arrow)"></path>` +
    `<text class="arc-label" x="${mid}" y="${top - lift / 2 - 6}" text-anchor="middle">${escapeHtml(label)}</text>`
  );
}

export function renderParseSvg(sentence: ConlluSentence): string {
  const width = TOKEN_BASE_X + sentence.tokens.length * TOKEN_STEP;
  const body: string[] = [];
  for (const token of sentence.tokens) {
    body.push(
      `<text class="token" x="${tokenX(token.id)}" y="${TOKEN_Y}" text-anchor="middle">${escapeHtml(token.form)}</text>`,
    );
    if (token.head !== 0) {
      body.push(arcMarkup(token.head, token.id, token.deprel));
    }
  }
  const caption = sentence.text === null ? "" : `<text class="caption" x="${TOKEN_BASE_X}" y="${TOKEN_Y + 26}">${escapeHtml(sentence.text)}</text>`;
  return (
    `<svg class="parse" viewBox="0 0 ${width} ${TOKEN_Y + 40}" xmlns="http://www.w3.org/2000/svg">` +
    `<defs><marker id="arrow" viewBox="0 0 8 8" refX="7" refY="4" markerWidth="7" markerHeight="7" orient="auto-start-reverse">` +
    `<path d="M 0 0 L 8 4 L 0 8 z"></path></marker></defs>` +
    body.join("") +
    caption +
    `</svg>`
  );
}

/** Panel C: arc diagram(s); a contrastive pair renders side by side. */
export function renderDependencyPanel(
  sentences: ConlluSentence[] | null,
  pair: ConlluSentence[] | null,
  failure: ApiFailure | null,
): string {
  if (failure !== null) {
    const line = failure.line !== undefined ? ` (line ${failure.line})` : "";
    return `<div class="error-banner">${escapeHtml(failure.detail)}${escapeHtml(line)}</div>`;
  }
  if (sentences === null || sentences.length === 0) {
    return `<p class="empty">Pick a fixture parse or paste CoNLL-U.</p>`;
  }
  const first = sentences.map(renderParseSvg).join("");
  if (pair !== null && pair.length > 0) {
    const second = pair.map(renderParseSvg).join("");
    return `<div class="parse-pair"><div class="parse-half">${first}</div><div class="parse-half">${second}</div></div>`;
  }
  return first;
}

function formOf(sentences: ConlluSentence[], graph: number, index1: number): string {
  const sentence = sentences[graph];
  const token = sentence?.tokens.find((t) => t.id === index1);
  return token ? token.form : `#${index1}`;
}

function bindingMarkup(name: string, form: string): string {
  const role = name === "gov" ? "binding-gov" : "binding-dep";
  return `<span class="${role}">${escapeHtml(name)}: ${escapeHtml(form)}</span>`;
}

function matchRowMarkup(row: MatchRow, sentences: ConlluSentence[]): string {
  const names = Object.keys(row.bindings).sort();
  const bindings = names
    .map((name) => bindingMarkup(name, formOf(sentences, row.graph, row.bindings[name])))
    .join(", ");
  const root = formOf(sentences, row.graph, row.root);
  const detail = bindings === "" ? "" : ` — ${bindings}`;
  return `<li class="match-row">sentence ${row.graph + 1}, root ${escapeHtml(root)}${detail}</li>`;
}

/** Panels D/E: the interactive pattern's matches, or its syntax error. */
export function renderPatternPanel(
  pattern: string,
  response: MatchResponse | null,
  failure: ApiFailure | null,
  sentences: ConlluSentence[],
): string {
  if (failure !== null) {
    if (failure.error === "pattern_syntax" && failure.offset !== undefined) {
      const caret = `${" ".repeat(failure.offset)}^`;
      return (
        `<pre class="pattern-error">${escapeHtml(pattern)}\n${caret}\n${escapeHtml(failure.detail)}</pre>`
      );
    }
    return renderErrorBanner(failure);
  }
  if (pattern.trim() === "" || response === null) {
    return `<p class="empty">Enter a pattern to match it live.</p>`;
  }
  if (response.matches.length === 0) {
    return `<p class="empty">No matches in ${response.graphs} sentence(s).</p>`;
  }
  const rows = response.matches.map((row) => matchRowMarkup(row, sentences)).join("");
  return `<ul class="matches">${rows}</ul>`;
}

/** Panel F: every predefined pattern with its matches; POS rows are corrections. */
export function renderPredefinedPanel(
  patterns: PatternInfo[],
  responses: MatchResponse[] | null,
  failure: ApiFailure | null,
  sentences: ConlluSentence[],
): string {
  if (failure !== null) {
    return renderErrorBanner(failure);
  }
  if (patterns.length === 0) {
    return `<p class="empty">No predefined patterns configured.</p>`;
  }
  if (responses === null) {
    return `<p class="empty">Pick a parse to run the predefined patterns.</p>`;
  }
  const blocks = patterns.map((pattern, i) => {
    const kind = pattern.kind ?? "?";
    const correction = pattern.kind === "POS";
    const kindClass = correction ? "kind correction" : "kind";
    const kindLabel = correction ? `${kind} (correction)` : kind;
    const response = responses[i];
    const rows =
      response === undefined || response.matches.length === 0
        ? `<p class="empty">no matches</p>`
        : `<ul class="matches">${response.matches
            .map((row) => matchRowMarkup(row, sentences))
            .join("")}</ul>`;
    return (
      `<div class="predefined${correction ? " correction" : ""}">` +
      `<code>${escapeHtml(pattern.text)}</code> <span class="${kindClass}">${escapeHtml(kindLabel)}</span>` +
      rows +
      `</div>`
    );
  });
  return blocks.join("");
}

/** Panel A menus: trigger sets from the API, window ladder, fixture list. */
export function renderTriggerOptions(
  triggers: TriggersResponse | null,
  selected: string | null,
): string {
  if (triggers === null) {
    return "";
  }
  return triggers.trigger_sets
    .map((set) => {
      const chosen = selected === null ? set.default : set.name === selected;
      return `<option value="${escapeHtml(set.name)}"${chosen ? " selected" : ""}>${escapeHtml(set.name)} (${set.total})</option>`;
    })
    .join("");
}

export function renderFixtureOptions(fixtures: FixtureEntry[], selected: string | null): string {
  const blank = `<option value=""${selected === null ? " selected" : ""}>— pick a parse —</option>`;
  return (
    blank +
    fixtures
      .map(
        (f) =>
          `<option value="${escapeHtml(f.id)}"${f.id === selected ? " selected" : ""}>${escapeHtml(f.text)}</option>`,
      )
      .join("")
  );
}
