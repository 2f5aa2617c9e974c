//! One-dimensional grid search refined by golden section, and bisection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Values closer than this count as tied, so roundoff cannot break ties.
pub const TIE_TOL: f64 = 1e-14;

/// Grid sizes and refinement tolerances for the nested optimization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Grid points over the attack parameter.
    pub lambda_grid: usize,
    /// Grid points over the preprocessing probability.
    pub q_grid: usize,
    /// Final bracket width of the golden-section refinement.
    pub golden_tol: f64,
    /// Final bracket width of threshold bisection.
    pub bisection_tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            lambda_grid: 129,
            q_grid: 65,
            golden_tol: 1e-7,
            bisection_tol: 1e-5,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.lambda_grid < 2 || self.q_grid < 2 {
            return Err(Error::OutOfDomain {
                name: "grid points",
                value: self.lambda_grid.min(self.q_grid) as f64,
                domain: ">= 2",
            });
        }
        for (name, v) in [("golden_tol", self.golden_tol), ("bisection_tol", self.bisection_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::OutOfDomain {
                    name,
                    value: v,
                    domain: "(0, inf)",
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Uniform grid of `points` on `[lo, hi]`, hitting `hi` exactly.
pub fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|k| if k == points - 1 { hi } else { lo + step * k as f64 })
        .collect()
}

/// Minimizes `f` on `[lo, hi]`: a uniform grid of `points`, then golden section
/// on the cells adjacent to the best grid point.
///
/// Ties (within [`TIE_TOL`]) go to the smallest `x`; the refinement only
/// replaces the grid point if it is better by more than that.
pub fn minimize<F>(f: F, lo: f64, hi: f64, points: usize, tol: f64) -> Result<Extremum>
where
    F: Fn(f64) -> Result<f64>,
{
    minimize_with(|_, x| f(x), &f, lo, hi, points, tol)
}

/// As [`minimize`], with grid points evaluated by `at_grid(k, x)` so callers
/// can reuse per-grid-point work.
pub fn minimize_with<G, F>(at_grid: G, f: F, lo: f64, hi: f64, points: usize, tol: f64) -> Result<Extremum>
where
    G: Fn(usize, f64) -> Result<f64>,
    F: Fn(f64) -> Result<f64>,
{
    if hi <= lo {
        return Ok(Extremum {
            x: lo,
            value: at_grid(0, lo)?,
            evaluations: 1,
        });
    }
    let xs = grid(lo, hi, points);
    let mut best = (0, f64::INFINITY);
    for (k, &x) in xs.iter().enumerate() {
        let v = at_grid(k, x)?;
        if v < best.1 - TIE_TOL {
            best = (k, v);
        }
    }
    let k = best.0;
    let a = xs[k.saturating_sub(1)];
    let b = xs[(k + 1).min(points - 1)];
    let (gx, gv, n) = golden(&f, a, b, tol)?;
    let evaluations = points + n;
    Ok(if gv < best.1 - TIE_TOL {
        Extremum {
            x: gx,
            value: gv,
            evaluations,
        }
    } else {
        Extremum {
            x: xs[k],
            value: best.1,
            evaluations,
        }
    })
}

/// As [`minimize`], for the maximum.
pub fn maximize<F>(f: F, lo: f64, hi: f64, points: usize, tol: f64) -> Result<Extremum>
where
    F: Fn(f64) -> Result<f64>,
{
    let m = minimize(|x| f(x).map(|v| -v), lo, hi, points, tol)?;
    Ok(Extremum { value: -m.value, ..m })
}

fn golden<F>(f: &F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64, usize)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut n = 2;
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
        n += 1;
    }
    Ok(if fc <= fd { (c, fc, n) } else { (d, fd, n) })
}

/// Bisection on a predicate that holds at `lo` and fails at `hi`.
///
/// Returns the final bracket `(lo, hi)` with `hi - lo <= width`.
pub fn bisect<F>(mut holds: F, mut lo: f64, mut hi: f64, width: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<bool>,
{
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if holds(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}
