//! Uniform grids and sampled functions.

use std::io::{BufRead, Write};
use std::ops::Range;

use crate::error::{Error, Result};

/// Fraction of a subinterval treated as a boundary layer when measuring
/// interior norms. Weakly singular kernels contaminate a fixed number of
/// nodes at every resolution, so the band is physical, not a node count.
pub const BOUNDARY_LAYER_FRACTION: f64 = 0.02;

/// Minimum number of nodes dropped at each end of an interior band.
pub const MIN_EXCLUDED_NODES: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    a: f64,
    b: f64,
    n: usize,
}

impl Grid {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(Error::InvalidInterval { a, b });
        }
        if n < 3 {
            return Err(Error::InvalidSize { n });
        }
        Ok(Grid { a, b, n })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / (self.n - 1) as f64
    }

    /// Node `i`; the last node is `b` exactly.
    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.b
        } else {
            self.a + i as f64 * self.h()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Index of the node nearest to `x` (clamped to the grid).
    pub fn nearest_index(&self, x: f64) -> usize {
        let t = ((x - self.a) / self.h()).round();
        if t <= 0.0 {
            0
        } else {
            (t as usize).min(self.n - 1)
        }
    }

    /// Sub-grid over nodes `lo..=hi`; needs at least three nodes.
    pub fn sub(&self, lo: usize, hi: usize) -> Result<Grid> {
        if hi >= self.n || lo >= hi {
            return Err(Error::GridMismatch(format!(
                "sub-grid {lo}..={hi} out of range for {} nodes",
                self.n
            )));
        }
        Grid::new(self.x(lo), self.x(hi), hi - lo + 1)
    }

    /// Nodes of this grid counted as interior for norms and accuracy claims.
    pub fn interior(&self) -> Range<usize> {
        interior_band(self.n)
    }
}

/// Interior band of an `n`-node grid: drops
/// `max(2, ceil(0.02 (n - 1)))` nodes at each end.
pub fn interior_band(n: usize) -> Range<usize> {
    let cut = ((BOUNDARY_LAYER_FRACTION * (n.saturating_sub(1)) as f64).ceil() as usize)
        .max(MIN_EXCLUDED_NODES);
    if 2 * cut >= n {
        0..0
    } else {
        cut..n - cut
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub sup: f64,
    pub l2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}-node grid",
                values.len(),
                grid.len()
            )));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteSample {
                index,
                x: grid.x(index),
                value,
            });
        }
        Ok(GridFunction { grid, values })
    }

    /// Internal constructor for values already known to be finite.
    pub(crate) fn from_parts(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        GridFunction { grid, values }
    }

    pub fn sample<F: Fn(f64) -> f64>(f: F, grid: Grid) -> Result<Self> {
        let values = grid.nodes().into_iter().map(f).collect();
        GridFunction::new(grid, values)
    }

    pub fn zeros(grid: Grid) -> Self {
        GridFunction::from_parts(grid, vec![0.0; grid.len()])
    }

    pub fn constant(grid: Grid, c: f64) -> Result<Self> {
        GridFunction::new(grid, vec![c; grid.len()])
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Restriction to nodes `lo..=hi`.
    pub fn slice(&self, lo: usize, hi: usize) -> Result<GridFunction> {
        let grid = self.grid.sub(lo, hi)?;
        Ok(GridFunction::from_parts(
            grid,
            self.values[lo..=hi].to_vec(),
        ))
    }

    /// Values in reverse node order on the same grid, i.e. `f(a + b - x)`.
    pub fn reflect(&self) -> GridFunction {
        let mut values = self.values.clone();
        values.reverse();
        GridFunction::from_parts(self.grid, values)
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Result<GridFunction> {
        GridFunction::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scale(&self, c: f64) -> GridFunction {
        GridFunction::from_parts(self.grid, self.values.iter().map(|v| c * v).collect())
    }

    pub fn zip_with<F: Fn(f64, f64) -> f64>(
        &self,
        other: &GridFunction,
        f: F,
    ) -> Result<GridFunction> {
        self.check_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&p, &q)| f(p, q))
            .collect();
        GridFunction::new(self.grid, values)
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |p, q| p + q)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |p, q| p - q)
    }

    pub(crate) fn check_same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    /// Second-order finite differences: central inside, one-sided
    /// three-point at both ends.
    pub fn derivative_fd(&self) -> GridFunction {
        let f = &self.values;
        let n = f.len();
        let h = self.grid.h();
        let mut d = vec![0.0; n];
        d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
        for i in 1..n - 1 {
            d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
        }
        d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
        GridFunction::from_parts(self.grid, d)
    }

    /// Composite trapezoid rule over the whole grid.
    pub fn trapezoid_integral(&self) -> f64 {
        trapezoid(&self.values, self.grid.h())
    }

    /// Sup norm and trapezoid-weighted discrete L2 norm.
    pub fn norms(&self) -> Norms {
        let sup = self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        Norms {
            sup,
            l2: trapezoid(&sq, self.grid.h()).sqrt(),
        }
    }

    /// Sup norm restricted to `range`; zero for an empty range.
    pub fn sup_over(&self, range: Range<usize>) -> f64 {
        self.values[range]
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Sup norm over [`Grid::interior`].
    pub fn interior_sup(&self) -> f64 {
        self.sup_over(self.grid.interior())
    }

    /// Writes `x,value` rows (with header) at 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x,value")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{},{}", fmt_f64(self.grid.x(i)), fmt_f64(*v))?;
        }
        Ok(())
    }

    /// Reads the format produced by [`GridFunction::write_csv`]. Nodes must
    /// form a uniform grid.
    pub fn read_csv<R: BufRead>(r: R) -> Result<GridFunction> {
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line.map_err(|e| Error::Csv(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with('x')) {
                continue;
            }
            let mut parts = line.split(',');
            let parse = |s: Option<&str>| -> Result<f64> {
                s.and_then(|t| t.trim().parse::<f64>().ok())
                    .ok_or_else(|| Error::Csv(format!("line {}: expected `x,value`", lineno + 1)))
            };
            xs.push(parse(parts.next())?);
            vs.push(parse(parts.next())?);
        }
        let n = xs.len();
        if n < 3 {
            return Err(Error::InvalidSize { n });
        }
        let grid = Grid::new(xs[0], xs[n - 1], n)?;
        let h = grid.h();
        for (i, &x) in xs.iter().enumerate() {
            if (x - grid.x(i)).abs() > 1e-9 * h.max(1.0) {
                return Err(Error::Csv(format!(
                    "node {i} at x = {x} is not on a uniform grid"
                )));
            }
        }
        GridFunction::new(grid, vs)
    }
}

/// Composite trapezoid sum of equally spaced samples.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..n - 1].iter().sum();
    h * (0.5 * values[0] + inner + 0.5 * values[n - 1])
}

/// 17 significant digits, enough for an exact round trip.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}
