/**
 * Figure construction and SVG rendering for run-set comparisons.
 *
 * Every plotted number is taken from report rows; the only derived values
 * are means (bar heights, occupancy traces) and quartiles (boxplots).
 * Rendering is server-side SVG with a pinned size and no animation, and the
 * output is post-processed so identical inputs yield identical bytes.
 */

import { writeFileSync } from 'node:fs';
import * as echarts from 'echarts';
import type { BoxplotSeriesOption } from 'echarts/charts';

import { BoxStats, boxStats, mean } from './quantile';
import { RunSet } from './reports';

export const FIGURE_KINDS = [
  'delivered-bars',
  'delivery-prob-bars',
  'delivery-times',
  'delay-box',
  'buffer-time',
  'buffer-box',
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface Figure {
  kind: FigureKind;
  option: echarts.EChartsOption;
  /** per-runset box statistics for the boxplot kinds (null when a set has no data) */
  boxes?: Record<string, BoxStats | null>;
  /** per-runset bar values for the bar kinds */
  bars?: Record<string, number>;
}

const WIDTH = 900;
const HEIGHT = 560;

const PALETTE = ['#4e79a7', '#f28e2b', '#59a14f', '#e15759', '#b07aa1', '#76b7b2'];

function baseOption(title: string): echarts.EChartsOption {
  return {
    animation: false,
    color: [...PALETTE],
    title: { text: title, left: 'center' },
    legend: { bottom: 0 },
    grid: { left: 70, right: 30, top: 60, bottom: 60 },
  };
}

function placeholder(option: echarts.EChartsOption, message: string): void {
  option.graphic = [{
    type: 'text',
    left: 'center',
    top: 'middle',
    style: { text: message, fontSize: 18, fill: '#888' },
  }];
}

function barFigure(kind: FigureKind, title: string, yName: string, runsets: RunSet[],
  value: (set: RunSet) => number): Figure {
  const bars: Record<string, number> = {};
  for (const set of runsets) bars[set.label] = value(set);
  const option = baseOption(title);
  option.xAxis = { type: 'category', data: runsets.map((s) => s.label) };
  option.yAxis = { type: 'value', name: yName };
  option.series = [{
    type: 'bar',
    barWidth: '50%',
    data: runsets.map((s) => bars[s.label]),
  }];
  return { kind, option, bars };
}

function deliveryTimesFigure(runsets: RunSet[]): Figure {
  const option = baseOption('Delivery times');
  option.xAxis = { type: 'value', name: 'delivery #', minInterval: 1 };
  option.yAxis = { type: 'value', name: 'time (s)' };
  const series: echarts.SeriesOption[] = [];
  let colorIdx = 0;
  let total = 0;
  for (const set of runsets) {
    const color = PALETTE[colorIdx++ % PALETTE.length];
    for (const run of set.runs) {
      const points = run.delivered.map((row, i) => [i + 1, row.time]);
      total += points.length;
      if (points.length === 0) continue;
      series.push({
        name: `${set.label} seed=${run.header.seed}`,
        type: 'line',
        itemStyle: { color },
        lineStyle: { color },
        symbolSize: 6,
        data: points,
      });
    }
  }
  option.series = series;
  if (total === 0) {
    placeholder(option, 'no deliveries in any run');
  }
  return { kind: 'delivery-times', option };
}

function boxFigure(kind: FigureKind, title: string, yName: string, runsets: RunSet[],
  values: (set: RunSet) => number[]): Figure {
  const MISSING = ['-', '-', '-', '-', '-'];  // echarts convention for absent data
  const boxes: Record<string, BoxStats | null> = {};
  const data: (number | string)[][] = [];
  for (const set of runsets) {
    const pool = values(set);
    if (pool.length === 0) {
      boxes[set.label] = null;
      data.push(MISSING);
      continue;
    }
    const stats = boxStats(pool);
    boxes[set.label] = stats;
    data.push([stats.min, stats.q1, stats.median, stats.q3, stats.max]);
  }
  const option = baseOption(title);
  option.xAxis = { type: 'category', data: runsets.map((s) => s.label) };
  option.yAxis = { type: 'value', name: yName };
  option.series = [{ type: 'boxplot', data: data as BoxplotSeriesOption['data'] }];
  if (data.every((d) => d === MISSING)) {
    placeholder(option, 'no data in any run');
  }
  return { kind, option, boxes };
}

function bufferTimeFigure(runsets: RunSet[]): Figure {
  const option = baseOption('Mean buffer occupancy over time');
  let maxTime = 0;
  const series: echarts.SeriesOption[] = [];
  for (const set of runsets) {
    const byTime = new Map<number, number[]>();
    for (const run of set.runs) {
      for (const row of run.bufferSamples) {
        const bucket = byTime.get(row.time);
        if (bucket) bucket.push(row.meanOccupancyPct);
        else byTime.set(row.time, [row.meanOccupancyPct]);
      }
    }
    const points = [...byTime.entries()]
      .sort((a, b) => a[0] - b[0])
      .map(([time, pcts]) => [time, mean(pcts)]);
    if (points.length) maxTime = Math.max(maxTime, points[points.length - 1][0]);
    series.push({ name: set.label, type: 'line', showSymbol: false, data: points });
  }
  option.xAxis = { type: 'value', name: 'time (s)', min: 0, max: maxTime || undefined };
  option.yAxis = { type: 'value', name: 'occupancy (%)' };
  option.series = series;
  return { kind: 'buffer-time', option };
}

export function buildFigure(kind: FigureKind, runsets: RunSet[]): Figure {
  if (runsets.length === 0) throw new Error('at least one run set is required');
  switch (kind) {
    case 'delivered-bars':
      return barFigure(kind, 'Delivered messages (mean per run)', 'delivered', runsets,
        (set) => mean(set.runs.map((r) => r.stats.delivered)));
    case 'delivery-prob-bars':
      return barFigure(kind, 'Delivery probability (mean per run)', 'probability', runsets,
        (set) => mean(set.runs.map((r) => r.stats.delivery_prob)));
    case 'delivery-times':
      return deliveryTimesFigure(runsets);
    case 'delay-box':
      return boxFigure(kind, 'Message delay distribution', 'delay (s)', runsets,
        (set) => set.runs.flatMap((r) => r.delays.map((d) => d.delay)));
    case 'buffer-time':
      return bufferTimeFigure(runsets);
    case 'buffer-box':
      return boxFigure(kind, 'Buffer occupancy distribution', 'occupancy (%)', runsets,
        (set) => set.runs.flatMap((r) => r.bufferSamples.map((s) => s.meanOccupancyPct)));
    default:
      throw new Error(`unknown figure kind '${kind as string}'`);
  }
}

/** zrender derives CSS class names (zr0-cls-3) and clip-path ids (zr2-c0)
 * from a process-global instance counter; renumber them by first appearance
 * so identical charts serialize to identical bytes. */
export function canonicalizeSvg(svg: string): string {
  const seen = new Map<string, string>();
  return svg.replace(/zr\d+-[a-z]+-?\d+/g, (token) => {
    let canon = seen.get(token);
    if (canon === undefined) {
      canon = `zr-t${seen.size}`;
      seen.set(token, canon);
    }
    return canon;
  });
}

export function renderSvg(figure: Figure): string {
  const chart = echarts.init(null, null, { renderer: 'svg', ssr: true, width: WIDTH, height: HEIGHT });
  try {
    chart.setOption(figure.option);
    return canonicalizeSvg(chart.renderToSVGString());
  } finally {
    chart.dispose();
  }
}

export function renderFigure(kind: FigureKind, runsets: RunSet[], outPath: string): string {
  const svg = renderSvg(buildFigure(kind, runsets));
  writeFileSync(outPath, svg, 'utf-8');
  return outPath;
}
