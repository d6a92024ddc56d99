/**
 * Sentence encoders.
 *
 * The default is a pretrained sentence encoder run through transformers.js
 * (mean-pooled, normalized). The "hash" encoder is a deterministic
 * feature-hashing fallback that needs no model download; it exists for
 * offline tests and smoke runs, not for summary quality.
 */

export interface Encoder {
  readonly name: string;
  readonly dim: number;
  encode(sentences: string[]): Promise<Float32Array[]>;
}

const FNV_OFFSET = 0xcbf29ce484222325n;
const FNV_PRIME = 0x100000001b3n;
const MASK64 = 0xffffffffffffffffn;

export function fnv1a64(text: string): bigint {
  let hash = FNV_OFFSET;
  for (const byte of Buffer.from(text, "utf-8")) {
    hash = ((hash ^ BigInt(byte)) * FNV_PRIME) & MASK64;
  }
  return hash;
}

function tokenize(text: string): string[] {
  return text
    .toLowerCase()
    .split(/\s+/)
    .map((raw) => raw.replace(/^[^\p{L}\p{N}]+|[^\p{L}\p{N}]+$/gu, ""))
    .filter((token) => token.length > 0);
}

/** Feature-hashed bag of tokens, L2-normalized; empty text maps to e0. */
export class HashEncoder implements Encoder {
  readonly name: string;

  constructor(readonly dim: number = 256) {
    if (dim < 8) {
      throw new Error(`hash encoder dim must be >= 8, got ${dim}`);
    }
    this.name = `hash-${dim}`;
  }

  async encode(sentences: string[]): Promise<Float32Array[]> {
    return sentences.map((text) => {
      const row = new Float64Array(this.dim);
      for (const token of tokenize(text)) {
        const hash = fnv1a64(token);
        const sign = hash >> 63n ? -1 : 1;
        row[Number(hash % BigInt(this.dim))] += sign;
      }
      let norm = Math.sqrt(row.reduce((acc, v) => acc + v * v, 0));
      if (norm === 0) {
        row[0] = 1;
        norm = 1;
      }
      return Float32Array.from(row, (v) => v / norm);
    });
  }
}

/** Pretrained encoder via transformers.js feature extraction. */
export class TransformerEncoder implements Encoder {
  private constructor(
    readonly name: string,
    readonly dim: number,
    private readonly extractor: (
      texts: string[],
      options: { pooling: "mean"; normalize: boolean },
    ) => Promise<{ dims: number[]; data: Float32Array }>,
  ) {}

  static async load(model: string, device?: string): Promise<TransformerEncoder> {
    let pipeline: any;
    try {
      ({ pipeline } = await import("@huggingface/transformers"));
    } catch (err) {
      throw new Error(
        `transformers.js is not installed; run npm install or use --model hash ` +
          `(${(err as Error).message})`,
      );
    }
    let extractor: any;
    try {
      extractor = await pipeline("feature-extraction", model, {
        ...(device ? { device } : {}),
      });
    } catch (err) {
      throw new Error(`failed to load encoder ${model}: ${(err as Error).message}`);
    }
    const probe = await extractor(["probe"], { pooling: "mean", normalize: true });
    const dim = probe.dims[probe.dims.length - 1];
    return new TransformerEncoder(model, dim, extractor);
  }

  async encode(sentences: string[]): Promise<Float32Array[]> {
    const output = await this.extractor(sentences, { pooling: "mean", normalize: true });
    const dim = output.dims[output.dims.length - 1];
    const rows: Float32Array[] = [];
    for (let i = 0; i < sentences.length; i++) {
      rows.push(Float32Array.from(output.data.slice(i * dim, (i + 1) * dim)));
    }
    return rows;
  }
}

/** "hash" or "hash:<dim>" selects the fallback; anything else is a model name. */
export async function loadEncoder(model: string, device?: string): Promise<Encoder> {
  if (model === "hash" || model.startsWith("hash:")) {
    const dim = model.includes(":") ? Number(model.split(":")[1]) : 256;
    return new HashEncoder(dim);
  }
  return TransformerEncoder.load(model, device);
}
