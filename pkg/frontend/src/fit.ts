/** Least-squares power law y = C x^e in log-log coordinates. */
export interface PowerFit {
  exponent: number;
  prefactor: number;
  r2: number;
  used: number;
}

export function fitPowerLaw(x: number[], y: number[]): PowerFit {
  if (x.length !== y.length) {
    throw new Error("x and y lengths differ");
  }
  const lx: number[] = [];
  const ly: number[] = [];
  for (let i = 0; i < x.length; i++) {
    if (x[i] > 0 && y[i] > 0 && Number.isFinite(x[i]) && Number.isFinite(y[i])) {
      lx.push(Math.log(x[i]));
      ly.push(Math.log(y[i]));
    }
  }
  const n = lx.length;
  if (n < 2) {
    throw new Error("need at least two positive points to fit");
  }
  const mx = lx.reduce((a, b) => a + b, 0) / n;
  const my = ly.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  let syy = 0;
  for (let i = 0; i < n; i++) {
    sxx += (lx[i] - mx) ** 2;
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) ** 2;
  }
  if (sxx === 0) {
    throw new Error("all x values coincide");
  }
  const slope = sxy / sxx;
  const intercept = my - slope * mx;
  const r2 = syy === 0 ? 1 : (sxy * sxy) / (sxx * syy);
  return {
    exponent: slope,
    prefactor: Math.exp(intercept),
    r2,
    used: n,
  };
}
