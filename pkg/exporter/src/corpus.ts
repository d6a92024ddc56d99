/** JSONL corpus reader: one {"id", "sentences", ...} object per line. */

import { readFile } from "fs/promises";

export interface CorpusDocument {
  id: string;
  sentences: string[];
}

export async function readCorpus(path: string): Promise<CorpusDocument[]> {
  let text: string;
  try {
    text = await readFile(path, "utf-8");
  } catch (err) {
    throw new Error(`cannot read corpus ${path}: ${(err as Error).message}`);
  }
  const docs: CorpusDocument[] = [];
  const seen = new Set<string>();
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) continue;
    let parsed: unknown;
    try {
      parsed = JSON.parse(line);
    } catch (err) {
      throw new Error(`corpus line ${i + 1}: invalid JSON (${(err as Error).message})`);
    }
    const obj = parsed as { id?: unknown; sentences?: unknown };
    if (typeof obj.id !== "string" || obj.id.length === 0) {
      throw new Error(`corpus line ${i + 1}: 'id' must be a non-empty string`);
    }
    if (
      !Array.isArray(obj.sentences) ||
      obj.sentences.length === 0 ||
      !obj.sentences.every((s) => typeof s === "string")
    ) {
      throw new Error(
        `corpus line ${i + 1} (document ${obj.id}): 'sentences' must be a non-empty list of strings`,
      );
    }
    if (seen.has(obj.id)) {
      throw new Error(`duplicate document id ${obj.id} at line ${i + 1}`);
    }
    seen.add(obj.id);
    docs.push({ id: obj.id, sentences: obj.sentences as string[] });
  }
  if (docs.length === 0) {
    throw new Error(`corpus ${path} contains no documents`);
  }
  return docs;
}
