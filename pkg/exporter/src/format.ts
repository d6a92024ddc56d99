/**
 * Binary embedding file writer.
 *
 * Layout (little-endian):
 *   header:  magic "C2FE" | u16 version = 1 | u32 dim | u32 doc_count
 *   record:  u16 id_len | id (UTF-8) | u32 n | n * dim float32, row-major
 *
 * The header is written with an invalid doc_count placeholder and patched
 * after the last record, so a crash mid-export leaves a file that loaders
 * reject loudly instead of silently truncating the corpus.
 */

import { open, type FileHandle } from "fs/promises";

export const MAGIC = "C2FE";
export const VERSION = 1;
export const HEADER_SIZE = 4 + 2 + 4 + 4;

/** Placeholder that promises more records than any file can hold. */
const DOC_COUNT_PLACEHOLDER = 0xffffffff;

export class EmbeddingFileWriter {
  private handle: FileHandle | null = null;
  private position = 0;
  private docCount = 0;
  private finished = false;

  private constructor(private readonly path: string, readonly dim: number) {}

  static async create(path: string, dim: number): Promise<EmbeddingFileWriter> {
    if (!Number.isInteger(dim) || dim < 1) {
      throw new Error(`embedding dim must be a positive integer, got ${dim}`);
    }
    const writer = new EmbeddingFileWriter(path, dim);
    writer.handle = await open(path, "w");
    const header = Buffer.alloc(HEADER_SIZE);
    header.write(MAGIC, 0, "ascii");
    header.writeUInt16LE(VERSION, 4);
    header.writeUInt32LE(dim, 6);
    header.writeUInt32LE(DOC_COUNT_PLACEHOLDER, 10);
    await writer.handle.write(header, 0, header.length, 0);
    writer.position = HEADER_SIZE;
    return writer;
  }

  /** Append one document record; rows are sentence vectors in order. */
  async writeRecord(id: string, rows: Float32Array[]): Promise<void> {
    if (!this.handle || this.finished) {
      throw new Error("writer is not open");
    }
    for (const row of rows) {
      if (row.length !== this.dim) {
        throw new Error(
          `document ${id}: row has ${row.length} values, expected dim ${this.dim}`,
        );
      }
    }
    const idBytes = Buffer.from(id, "utf-8");
    if (idBytes.length > 0xffff) {
      throw new Error(`document id too long: ${id.slice(0, 32)}...`);
    }
    const head = Buffer.alloc(2 + idBytes.length + 4);
    head.writeUInt16LE(idBytes.length, 0);
    idBytes.copy(head, 2);
    head.writeUInt32LE(rows.length, 2 + idBytes.length);
    await this.handle.write(head, 0, head.length, this.position);
    this.position += head.length;
    const payload = Buffer.alloc(rows.length * this.dim * 4);
    rows.forEach((row, r) => {
      for (let c = 0; c < this.dim; c++) {
        payload.writeFloatLE(row[c], (r * this.dim + c) * 4);
      }
    });
    await this.handle.write(payload, 0, payload.length, this.position);
    this.position += payload.length;
    this.docCount += 1;
  }

  /** Patch the real doc_count into the header and close the file. */
  async finish(): Promise<number> {
    if (!this.handle || this.finished) {
      throw new Error("writer is not open");
    }
    const count = Buffer.alloc(4);
    count.writeUInt32LE(this.docCount, 0);
    await this.handle.write(count, 0, 4, 10);
    await this.handle.close();
    this.handle = null;
    this.finished = true;
    return this.docCount;
  }

  /** Close without patching the header (leaves the file invalid on purpose). */
  async abort(): Promise<void> {
    if (this.handle) {
      await this.handle.close();
      this.handle = null;
    }
  }
}
