/**
 * Export pipeline: read corpus, encode sentences in batches, write the
 * binary embedding file plus a provenance sidecar.
 */

import { writeFile } from "fs/promises";

import { readCorpus } from "./corpus.js";
import { type Encoder } from "./encoders.js";
import { EmbeddingFileWriter } from "./format.js";

export interface ExportOptions {
  corpusPath: string;
  outputPath: string;
  encoder: Encoder;
  batchSize?: number;
  log?: (message: string) => void;
}

export interface ExportSummary {
  documents: number;
  sentences: number;
  dim: number;
  model: string;
  output: string;
  sidecar: string;
}

export async function exportCorpus(options: ExportOptions): Promise<ExportSummary> {
  const { corpusPath, outputPath, encoder } = options;
  const batchSize = options.batchSize ?? 32;
  const log = options.log ?? (() => {});
  if (!Number.isInteger(batchSize) || batchSize < 1) {
    throw new Error(`batch size must be a positive integer, got ${batchSize}`);
  }

  const docs = await readCorpus(corpusPath);
  const writer = await EmbeddingFileWriter.create(outputPath, encoder.dim);
  let sentences = 0;
  try {
    for (const doc of docs) {
      const rows: Float32Array[] = [];
      for (let start = 0; start < doc.sentences.length; start += batchSize) {
        const batch = doc.sentences.slice(start, start + batchSize);
        rows.push(...(await encoder.encode(batch)));
      }
      await writer.writeRecord(doc.id, rows);
      sentences += rows.length;
      log(`encoded ${doc.id}: ${rows.length} sentences`);
    }
  } catch (err) {
    // Leave the placeholder doc_count in the header so the partial file
    // fails loudly when loaded.
    await writer.abort();
    throw err;
  }
  const documents = await writer.finish();

  const sidecarPath = `${outputPath}.meta.json`;
  const sidecar = {
    model: encoder.name,
    dim: encoder.dim,
    documents,
    sentences,
    corpus: corpusPath,
  };
  await writeFile(sidecarPath, JSON.stringify(sidecar, null, 2) + "\n", "utf-8");
  return {
    documents,
    sentences,
    dim: encoder.dim,
    model: encoder.name,
    output: outputPath,
    sidecar: sidecarPath,
  };
}
