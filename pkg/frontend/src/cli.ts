#!/usr/bin/env node
/**
 * plots <figure_kind> --runs label=dir ... -o out.svg
 *
 * Reads driftnet report directories (single runs or batch directories of
 * seed-* subdirectories) and writes one SVG comparison figure.
 */

import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';

import { FIGURE_KINDS, FigureKind, renderFigure } from './figures';
import { ReportLoadError, RunSet, loadRunSet } from './reports';

export function parseRunSpec(spec: string): { label: string; dir: string } {
  const idx = spec.indexOf('=');
  if (idx <= 0 || idx === spec.length - 1) {
    throw new Error(`--runs expects label=dir, got '${spec}'`);
  }
  return { label: spec.slice(0, idx), dir: spec.slice(idx + 1) };
}

export async function main(argv: string[]): Promise<number> {
  const args = await yargs(argv)
    .command('$0 <figure_kind>', 'render one figure from report directories', (cmd) =>
      cmd.positional('figure_kind', {
        describe: `one of: ${FIGURE_KINDS.join(', ')}`,
        type: 'string',
        demandOption: true,
      }))
    .option('runs', {
      type: 'string',
      array: true,
      demandOption: true,
      describe: 'label=dir pairs; dir is a run or batch directory',
    })
    .option('out', {
      alias: 'o',
      type: 'string',
      demandOption: true,
      describe: 'output image path (SVG)',
    })
    .strict()
    .fail((msg, err) => {
      throw err ?? new Error(msg);
    })
    .parse();

  const kind = args.figure_kind as string;
  if (!(FIGURE_KINDS as readonly string[]).includes(kind)) {
    process.stderr.write(`error: unknown figure kind '${kind}'; expected ${FIGURE_KINDS.join(', ')}\n`);
    return 1;
  }
  const runsets: RunSet[] = [];
  for (const spec of args.runs as string[]) {
    const { label, dir } = parseRunSpec(spec);
    runsets.push(loadRunSet(label, dir));
  }
  const out = renderFigure(kind as FigureKind, runsets, args.out as string);
  process.stdout.write(`${out}\n`);
  return 0;
}

if (require.main === module) {
  main(hideBin(process.argv))
    .then((code) => process.exit(code))
    .catch((err) => {
      const prefix = err instanceof ReportLoadError ? 'load error' : 'error';
      process.stderr.write(`${prefix}: ${err.message}\n`);
      process.exit(1);
    });
}
