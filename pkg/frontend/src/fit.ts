export interface LineFit {
  slope: number;
  intercept: number;
  r2: number;
}

export function leastSquares(x: number[], y: number[]): LineFit {
  if (x.length !== y.length || x.length < 2) {
    throw new Error(`least squares needs matched arrays of length >= 2, got ${x.length}/${y.length}`);
  }
  const n = x.length;
  const mx = x.reduce((a, b) => a + b, 0) / n;
  const my = y.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  let syy = 0;
  for (let i = 0; i < n; i++) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx === 0) {
    throw new Error("least squares: degenerate abscissa (all x equal)");
  }
  const slope = sxy / sxx;
  const intercept = my - slope * mx;
  const r2 = syy === 0 ? 1 : (sxy * sxy) / (sxx * syy);
  return { slope, intercept, r2 };
}

/** Fit y ~ C <t>^gamma on log-log axes, <t> = sqrt(1 + t^2). */
export function powerLawFit(t: number[], values: number[]): LineFit {
  const x = t.map((v) => 0.5 * Math.log1p(v * v));
  const y = values.map((v) => {
    if (v <= 0) throw new Error("power-law fit requires positive values");
    return Math.log(v);
  });
  return leastSquares(x, y);
}

export function median(values: number[]): number {
  if (values.length === 0) throw new Error("median of empty array");
  const s = [...values].sort((a, b) => a - b);
  const mid = Math.floor(s.length / 2);
  return s.length % 2 === 1 ? s[mid] : 0.5 * (s[mid - 1] + s[mid]);
}
