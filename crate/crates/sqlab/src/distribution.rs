//! Sampled 1-D and 2-D real-valued functions together with their grids.

/// What a [`Distribution`] represents; downstream consumers use this to pick
/// normalization checks and axis labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionKind {
    /// P(m) over non-negative integers; values sum to 1.
    PhotonNumber,
    /// W(x, y) over a cartesian mesh; integrates to 1.
    Wigner2d,
    /// Q(x, y) over a cartesian mesh; non-negative, integrates to 1.
    Q2d,
    /// P(theta) over a window of width 2*pi; integrates to 1.
    Phase,
}

/// A sampled distribution. For 2-D kinds the grid is the x-axis and `grid_y`
/// holds the second axis, with `values` in row-major order (y outer, x inner).
#[derive(Debug, Clone)]
pub struct Distribution {
    pub kind: DistributionKind,
    pub grid: Vec<f64>,
    pub grid_y: Option<Vec<f64>>,
    pub values: Vec<f64>,
    /// Free-form key=value metadata (truncations used, warning flags...).
    pub meta: Vec<(String, String)>,
}

impl Distribution {
    pub fn new_1d(kind: DistributionKind, grid: Vec<f64>, values: Vec<f64>) -> Self {
        assert_eq!(grid.len(), values.len());
        Distribution { kind, grid, grid_y: None, values, meta: Vec::new() }
    }

    pub fn new_2d(kind: DistributionKind, x: Vec<f64>, y: Vec<f64>, values: Vec<f64>) -> Self {
        assert_eq!(x.len() * y.len(), values.len());
        Distribution { kind, grid: x, grid_y: Some(y), values, meta: Vec::new() }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn value_at(&self, ix: usize, iy: usize) -> f64 {
        let nx = self.grid.len();
        self.values[iy * nx + ix]
    }

    /// Sum (photon-number) or trapezoid integral (continuous kinds).
    pub fn total_mass(&self) -> f64 {
        match self.kind {
            DistributionKind::PhotonNumber => self.values.iter().sum(),
            DistributionKind::Phase => trapezoid(&self.grid, &self.values),
            DistributionKind::Wigner2d | DistributionKind::Q2d => {
                let y = self.grid_y.as_ref().expect("2d distribution");
                let nx = self.grid.len();
                let mut rows = Vec::with_capacity(y.len());
                for iy in 0..y.len() {
                    rows.push(trapezoid(&self.grid, &self.values[iy * nx..(iy + 1) * nx]));
                }
                trapezoid(y, &rows)
            }
        }
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Indices of strict interior local maxima (1-D kinds).
    pub fn local_maxima(&self) -> Vec<usize> {
        extrema(&self.values, |a, b| a > b)
    }

    /// Indices of strict interior local minima (1-D kinds).
    pub fn local_minima(&self) -> Vec<usize> {
        extrema(&self.values, |a, b| a < b)
    }
}

fn extrema(v: &[f64], better: impl Fn(f64, f64) -> bool) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 1..v.len().saturating_sub(1) {
        if better(v[i], v[i - 1]) && better(v[i], v[i + 1]) {
            out.push(i);
        }
    }
    out
}

pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 1..x.len() {
        s += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    }
    s
}

/// Evenly spaced grid with `count` points spanning [min, max] inclusive.
pub fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2, "grid needs at least two points");
    let step = (max - min) / (count - 1) as f64;
    (0..count).map(|i| min + step * i as f64).collect()
}
