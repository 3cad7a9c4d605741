/** Workbench state: every panel renders purely from this object. */

import type {
  AnnotateResponse,
  ApiFailure,
  FixtureEntry,
  MatchResponse,
  PatternInfo,
  TriggersResponse,
} from "./types.js";

export interface PanelData<T> {
  value: T | null;
  failure: ApiFailure | null;
}

export interface WorkbenchState {
  inputText: string;
  selectedTriggerSet: string | null;
  window: string; // "inf" or an integer as text
  interactivePattern: string;
  selectedFixture: string | null;
  /** CoNLL-U text currently feeding the dependency/pattern panels. */
  conllu: string | null;
  /** Matching CoNLL-U for the side-by-side contrastive parse, if any. */
  pairConllu: string | null;
  fixtures: FixtureEntry[];
  predefined: PatternInfo[];
  triggers: TriggersResponse | null;
  annotate: PanelData<AnnotateResponse>;
  interactive: PanelData<MatchResponse>;
  predefinedMatches: PanelData<MatchResponse[]>;
}

export function initialState(): WorkbenchState {
  return {
    inputText: "",
    selectedTriggerSet: null,
    window: "inf",
    interactivePattern: "",
    selectedFixture: null,
    conllu: null,
    pairConllu: null,
    fixtures: [],
    predefined: [],
    triggers: null,
    annotate: { value: null, failure: null },
    interactive: { value: null, failure: null },
    predefinedMatches: { value: null, failure: null },
  };
}

export type EditableField =
  | "inputText"
  | "selectedTriggerSet"
  | "window"
  | "interactivePattern"
  | "selectedFixture";

/** Which cached panel responses an edit invalidates — exactly these, no more. */
const INVALIDATES: Record<EditableField, ("annotate" | "interactive" | "predefinedMatches")[]> = {
  inputText: ["annotate"],
  selectedTriggerSet: ["annotate"],
  window: ["annotate"],
  interactivePattern: ["interactive"],
  selectedFixture: ["interactive", "predefinedMatches"],
};

export function applyEdit(
  state: WorkbenchState,
  field: EditableField,
  value: string | null,
): WorkbenchState {
  const next: WorkbenchState = { ...state, [field]: value };
  for (const panel of INVALIDATES[field]) {
    next[panel] = { value: null, failure: null };
  }
  if (field === "selectedFixture") {
    next.conllu = null;
    next.pairConllu = null;
  }
  return next;
}
