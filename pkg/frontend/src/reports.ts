/**
 * Parsing for driftnet report directories.
 *
 * A run directory holds four text files written by the simulator. Every
 * file starts with `# driftnet <report-name> scenario=<name> seed=<seed>`;
 * the stats report is `key: value` lines, the record reports are
 * space-separated columns behind a `# columns:` header. Numbers carry four
 * decimals and `NaN` marks undefined values.
 */

import { existsSync, readFileSync, readdirSync, statSync } from 'node:fs';
import path from 'node:path';

export class ReportLoadError extends Error {}

export interface ReportHeader {
  report: string;
  scenario: string;
  seed: number;
}

export interface MessageStats {
  created: number;
  started: number;
  relayed: number;
  aborted: number;
  dropped: number;
  expired: number;
  delivered: number;
  delivery_prob: number;
  overhead_ratio: number;
  latency_avg: number;
  latency_med: number;
  hopcount_avg: number;
  hopcount_med: number;
}

export interface DeliveredRow {
  time: number;
  messageId: string;
  size: number;
  hopcount: number;
  latency: number;
  source: string;
  destination: string;
  remainingTtl: number;
}

export interface DelayRow {
  delay: number;
  cumulativeDeliveryProb: number;
}

export interface BufferRow {
  time: number;
  meanOccupancyPct: number;
  variancePct2: number;
}

export interface RunReports {
  dir: string;
  header: ReportHeader;
  stats: MessageStats;
  delivered: DeliveredRow[];
  delays: DelayRow[];
  bufferSamples: BufferRow[];
}

/** A labelled collection of runs (e.g. one batch directory of seeds). */
export interface RunSet {
  label: string;
  runs: RunReports[];
}

export const REPORT_FILES = {
  stats: 'message_stats.txt',
  delivered: 'delivered_messages.txt',
  delay: 'message_delay.txt',
  buffer: 'buffer_occupancy.txt',
} as const;

const HEADER_RE = /^# driftnet (\S+) scenario=(\S+) seed=(\d+)$/;

function parseNumber(token: string, file: string): number {
  if (token === 'NaN') return NaN;
  const value = Number(token);
  if (Number.isNaN(value)) {
    throw new ReportLoadError(`${file}: expected a number, got '${token}'`);
  }
  return value;
}

function readLines(file: string): string[] {
  if (!existsSync(file)) {
    throw new ReportLoadError(`missing report file: ${file}`);
  }
  return readFileSync(file, 'utf-8').split('\n').filter((line) => line.length > 0);
}

function parseHeader(line: string | undefined, file: string, expected: string): ReportHeader {
  const match = line === undefined ? null : HEADER_RE.exec(line);
  if (!match) {
    throw new ReportLoadError(`${file}: bad or missing driftnet header line`);
  }
  const [, report, scenario, seed] = match;
  if (report !== expected) {
    throw new ReportLoadError(`${file}: expected report '${expected}', found '${report}'`);
  }
  return { report, scenario, seed: Number(seed) };
}

function parseStats(file: string): { header: ReportHeader; stats: MessageStats } {
  const lines = readLines(file);
  const header = parseHeader(lines[0], file, 'message-stats');
  const raw: Record<string, number> = {};
  for (const line of lines.slice(1)) {
    const idx = line.indexOf(': ');
    if (idx < 0) throw new ReportLoadError(`${file}: malformed stats line '${line}'`);
    raw[line.slice(0, idx)] = parseNumber(line.slice(idx + 2), file);
  }
  const need = ['created', 'started', 'relayed', 'aborted', 'dropped', 'expired', 'delivered',
    'delivery_prob', 'overhead_ratio', 'latency_avg', 'latency_med', 'hopcount_avg',
    'hopcount_med'];
  for (const key of need) {
    if (!(key in raw)) throw new ReportLoadError(`${file}: missing stat '${key}'`);
  }
  return { header, stats: raw as unknown as MessageStats };
}

function parseColumns<T>(file: string, report: string, expectedColumns: string,
  build: (fields: string[]) => T): T[] {
  const lines = readLines(file);
  parseHeader(lines[0], file, report);
  const columnsLine = lines[1];
  if (columnsLine !== `# columns: ${expectedColumns}`) {
    throw new ReportLoadError(`${file}: unexpected columns header '${columnsLine ?? ''}'`);
  }
  return lines.slice(2).map((line) => {
    const fields = line.split(' ');
    if (fields.length !== expectedColumns.split(' ').length) {
      throw new ReportLoadError(`${file}: malformed row '${line}'`);
    }
    return build(fields);
  });
}

/** Load the four reports of one run directory. */
export function loadRun(dir: string): RunReports {
  const statsFile = path.join(dir, REPORT_FILES.stats);
  const { header, stats } = parseStats(statsFile);

  const delivered = parseColumns(path.join(dir, REPORT_FILES.delivered), 'delivered-messages',
    'time message_id size hopcount latency source destination remaining_ttl',
    (f) => ({
      time: parseNumber(f[0], dir), messageId: f[1], size: parseNumber(f[2], dir),
      hopcount: parseNumber(f[3], dir), latency: parseNumber(f[4], dir),
      source: f[5], destination: f[6], remainingTtl: parseNumber(f[7], dir),
    }));

  const delays = parseColumns(path.join(dir, REPORT_FILES.delay), 'message-delay',
    'delay cumulative_delivery_prob',
    (f) => ({ delay: parseNumber(f[0], dir), cumulativeDeliveryProb: parseNumber(f[1], dir) }));

  const bufferSamples = parseColumns(path.join(dir, REPORT_FILES.buffer), 'buffer-occupancy',
    'time mean_occupancy_pct variance_pct2',
    (f) => ({
      time: parseNumber(f[0], dir), meanOccupancyPct: parseNumber(f[1], dir),
      variancePct2: parseNumber(f[2], dir),
    }));

  return { dir, header, stats, delivered, delays, bufferSamples };
}

/**
 * Load a run set from a directory that is either a single run (contains the
 * report files directly) or a batch (contains seed-* subdirectories).
 */
export function loadRunSet(label: string, dir: string): RunSet {
  if (!existsSync(dir)) {
    throw new ReportLoadError(`run directory does not exist: ${dir}`);
  }
  if (existsSync(path.join(dir, REPORT_FILES.stats))) {
    return { label, runs: [loadRun(dir)] };
  }
  const subdirs = readdirSync(dir)
    .filter((name) => statSync(path.join(dir, name)).isDirectory())
    .sort();
  const runs = subdirs
    .filter((name) => existsSync(path.join(dir, name, REPORT_FILES.stats)))
    .map((name) => loadRun(path.join(dir, name)));
  if (runs.length === 0) {
    throw new ReportLoadError(`no report directories found under: ${dir}`);
  }
  const names = new Set(runs.map((r) => r.header.report));
  if (names.size !== 1) {
    throw new ReportLoadError(`mixed report schemas under ${dir}`);
  }
  return { label, runs };
}
