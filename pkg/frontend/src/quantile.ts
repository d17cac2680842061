/** Quantile with linear interpolation between closest ranks (type-7). */
export function quantile(sortedValues: number[], p: number): number {
  if (sortedValues.length === 0) throw new Error('quantile of empty array');
  if (p <= 0) return sortedValues[0];
  if (p >= 1) return sortedValues[sortedValues.length - 1];
  const pos = (sortedValues.length - 1) * p;
  const lo = Math.floor(pos);
  const frac = pos - lo;
  if (frac === 0) return sortedValues[lo];
  return sortedValues[lo] + frac * (sortedValues[lo + 1] - sortedValues[lo]);
}

export interface BoxStats {
  min: number;
  q1: number;
  median: number;
  q3: number;
  max: number;
}

export function boxStats(values: number[]): BoxStats {
  const sorted = [...values].sort((a, b) => a - b);
  return {
    min: sorted[0],
    q1: quantile(sorted, 0.25),
    median: quantile(sorted, 0.5),
    q3: quantile(sorted, 0.75),
    max: sorted[sorted.length - 1],
  };
}

export function mean(values: number[]): number {
  if (values.length === 0) throw new Error('mean of empty array');
  return values.reduce((a, b) => a + b, 0) / values.length;
}
