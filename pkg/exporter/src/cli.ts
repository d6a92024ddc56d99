#!/usr/bin/env node
/**
 * c2fe-export: encode a JSONL corpus into the binary embedding format.
 *
 *   c2fe-export export --corpus corpus.jsonl --out corpus.c2fe \
 *       [--model Xenova/all-MiniLM-L6-v2 | hash | hash:<dim>] \
 *       [--batch-size 32] [--device cpu] [--quiet]
 */

import { loadEncoder } from "./encoders.js";
import { exportCorpus } from "./export.js";

const DEFAULT_MODEL = "Xenova/all-MiniLM-L6-v2";

interface CliArgs {
  corpus: string;
  out: string;
  model: string;
  batchSize: number;
  device?: string;
  quiet: boolean;
}

function usage(): never {
  console.error(
    "usage: c2fe-export export --corpus <corpus.jsonl> --out <file.c2fe> " +
      "[--model NAME|hash|hash:DIM] [--batch-size N] [--device D] [--quiet]",
  );
  process.exit(2);
}

function parseArgs(argv: string[]): CliArgs {
  if (argv[0] !== "export") usage();
  const args: Partial<CliArgs> = { model: DEFAULT_MODEL, batchSize: 32, quiet: false };
  for (let i = 1; i < argv.length; i++) {
    const flag = argv[i];
    const next = () => {
      if (i + 1 >= argv.length) usage();
      return argv[++i];
    };
    switch (flag) {
      case "--corpus":
        args.corpus = next();
        break;
      case "--out":
        args.out = next();
        break;
      case "--model":
        args.model = next();
        break;
      case "--batch-size":
        args.batchSize = Number(next());
        break;
      case "--device":
        args.device = next();
        break;
      case "--quiet":
        args.quiet = true;
        break;
      default:
        usage();
    }
  }
  if (!args.corpus || !args.out) usage();
  return args as CliArgs;
}

async function main(): Promise<void> {
  const args = parseArgs(process.argv.slice(2));
  const encoder = await loadEncoder(args.model, args.device);
  const summary = await exportCorpus({
    corpusPath: args.corpus,
    outputPath: args.out,
    encoder,
    batchSize: args.batchSize,
    log: args.quiet ? undefined : (message) => console.error(message),
  });
  console.log(JSON.stringify(summary));
}

main().catch((err) => {
  console.error(JSON.stringify({ error: (err as Error).message }));
  process.exit(1);
});
