/** Display-side CoNLL-U reader: enough structure to draw token rows and arcs.
 *
 * The server remains the authority on format errors; this reader throws with
 * a line number only so obviously broken pasted input fails fast locally.
 */

export interface ConlluToken {
  id: number;
  form: string;
  head: number;
  deprel: string;
}

export interface ConlluSentence {
  text: string | null;
  tokens: ConlluToken[];
}

export class ConlluError extends Error {
  constructor(message: string, readonly line: number) {
    super(`${message} at line ${line}`);
  }
}

export function parseConllu(content: string): ConlluSentence[] {
  const sentences: ConlluSentence[] = [];
  let text: string | null = null;
  let tokens: ConlluToken[] = [];

  const flush = () => {
    if (tokens.length > 0) {
      sentences.push({ text, tokens });
    }
    text = null;
    tokens = [];
  };

  const lines = content.split("\n");
  for (let i = 0; i < lines.length; i += 1) {
    const line = lines[i];
    const lineno = i + 1;
    if (line.trim() === "") {
      flush();
      continue;
    }
    if (line.startsWith("#")) {
      const match = /^#\s*text\s*=\s*(.*)$/.exec(line);
      if (match) {
        text = match[1].trim();
      }
      continue;
    }
    const columns = line.split("\t");
    if (columns.length !== 10) {
      throw new ConlluError(`expected 10 tab-separated columns, got ${columns.length}`, lineno);
    }
    // Multiword ranges (1-2) and empty nodes (1.1) are display noise here.
    if (columns[0].includes("-") || columns[0].includes(".")) {
      continue;
    }
    const id = Number(columns[0]);
    const head = Number(columns[6]);
    if (!Number.isInteger(id)) {
      throw new ConlluError(`non-numeric token ID '${columns[0]}'`, lineno);
    }
    if (!Number.isInteger(head)) {
      throw new ConlluError(`non-numeric HEAD '${columns[6]}'`, lineno);
    }
    tokens.push({ id, form: columns[1], head, deprel: columns[7] });
  }
  flush();
  return sentences;
}
