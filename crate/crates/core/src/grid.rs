//! Uniform boxes `[−L, L)ⁿ` with offset cell centres, and fields on them.

use std::io::{self, Read, Write};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("points per axis must be a power of two >= 8, got {0}")]
    Points(usize),
    #[error("dimension must be >= 1, got {0}")]
    Dimension(usize),
    #[error("half-width must be positive and finite, got {0}")]
    HalfWidth(f64),
    #[error("field has {got} values, grid needs {want}")]
    Length { got: usize, want: usize },
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("fields live on different grids")]
    Mismatch,
    #[error("snapshot: {0}")]
    Io(#[from] io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct GridSpec {
    dim: usize,
    points: usize,
    half_width: f64,
}

impl GridSpec {
    pub fn new(dim: usize, points: usize, half_width: f64) -> Result<Self, GridError> {
        if dim == 0 {
            return Err(GridError::Dimension(dim));
        }
        if points < 8 || !points.is_power_of_two() {
            return Err(GridError::Points(points));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(GridError::HalfWidth(half_width));
        }
        Ok(Self {
            dim,
            points,
            half_width,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn cell_measure(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn volume(&self) -> f64 {
        (2.0 * self.half_width).powi(self.dim as i32)
    }

    /// Cell centre `−L + (j + ½)h`; no centre sits at the origin.
    pub fn coordinate(&self, j: usize) -> f64 {
        -self.half_width + (j as f64 + 0.5) * self.spacing()
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.points).map(|j| self.coordinate(j)).collect()
    }

    /// Row-major multi-index of a flat index (axis 0 slowest).
    pub fn unflatten(&self, mut flat: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = flat % self.points;
            flat /= self.points;
        }
    }

    pub fn point(&self, flat: usize, out: &mut [f64]) {
        let mut idx = vec![0usize; self.dim];
        self.unflatten(flat, &mut idx);
        for (x, j) in out.iter_mut().zip(idx) {
            *x = self.coordinate(j);
        }
    }

    /// `|x|` at every cell centre.
    pub fn radii(&self) -> Vec<f64> {
        let xs = self.coordinates();
        let mut out = Vec::with_capacity(self.len());
        let mut idx = vec![0usize; self.dim];
        for flat in 0..self.len() {
            self.unflatten(flat, &mut idx);
            out.push(idx.iter().map(|&j| xs[j] * xs[j]).sum::<f64>().sqrt());
        }
        out
    }

    /// Same sample count on `[−L/δ, L/δ)ⁿ`: sample `j` of the dilated grid
    /// sits at `x_j/δ`, so `f(δ·)` on it equals `f` on `self` sample by sample.
    pub fn dilated(&self, delta: f64) -> Result<Self, GridError> {
        Self::new(self.dim, self.points, self.half_width / delta)
    }

    /// Twice the points on twice the box, same spacing.
    pub fn padded(&self) -> Self {
        Self {
            dim: self.dim,
            points: 2 * self.points,
            half_width: 2.0 * self.half_width,
        }
    }
}

/// Element types a field can carry.
pub trait Sample: Copy + Send + Sync + Default + 'static {
    fn modulus(self) -> f64;
    fn finite(self) -> bool;
    fn to_complex(self) -> Complex64;
}

impl Sample for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn finite(self) -> bool {
        self.is_finite()
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Sample for Complex64 {
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn to_complex(self) -> Complex64 {
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<T> {
    grid: GridSpec,
    values: Vec<T>,
}

pub type ComplexField = GridFunction<Complex64>;
pub type RealField = GridFunction<f64>;

impl<T: Sample> GridFunction<T> {
    pub fn new(grid: GridSpec, values: Vec<T>) -> Result<Self, GridError> {
        if values.len() != grid.len() {
            return Err(GridError::Length {
                got: values.len(),
                want: grid.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            values: vec![T::default(); grid.len()],
        }
    }

    /// Samples `f` at every cell centre.
    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(&[f64]) -> T) -> Self {
        let mut x = vec![0.0; grid.dim()];
        let values = (0..grid.len())
            .map(|flat| {
                grid.point(flat, &mut x);
                f(&x)
            })
            .collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn check_finite(&self) -> Result<(), GridError> {
        match self.values.iter().position(|v| !v.finite()) {
            Some(i) => Err(GridError::NonFinite(i)),
            None => Ok(()),
        }
    }

    pub fn map<U: Sample>(&self, f: impl Fn(T) -> U) -> GridFunction<U> {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn modulus(&self) -> RealField {
        self.map(Sample::modulus)
    }

    pub fn to_complex(&self) -> ComplexField {
        self.map(Sample::to_complex)
    }

    /// `(h Σ |v|^p)^{1/p}`; `p = ∞` gives the max modulus.
    pub fn lebesgue_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.values.iter().map(|v| v.modulus()).fold(0.0, f64::max);
        }
        let sum: f64 = self.values.iter().map(|v| v.modulus().powf(p)).sum();
        (self.grid.cell_measure() * sum).powf(1.0 / p)
    }

    pub fn l2_norm(&self) -> f64 {
        let sum: f64 = self.values.iter().map(|v| v.modulus().powi(2)).sum();
        (self.grid.cell_measure() * sum).sqrt()
    }

    pub fn mass(&self) -> f64 {
        self.l2_norm().powi(2)
    }

    /// Same values reinterpreted on the dilated grid (see [`GridSpec::dilated`]).
    pub fn on_grid(&self, grid: GridSpec) -> Result<Self, GridError> {
        if grid.dim() != self.grid.dim() || grid.points() != self.grid.points() {
            return Err(GridError::Mismatch);
        }
        Ok(Self {
            grid,
            values: self.values.clone(),
        })
    }
}

impl ComplexField {
    pub fn scale(&mut self, c: Complex64) {
        self.values.iter_mut().for_each(|v| *v *= c);
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GridError> {
        if self.grid != other.grid {
            return Err(GridError::Mismatch);
        }
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }

    /// `h Σ conj(a)·b`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum();
        s * self.grid.cell_measure()
    }

    /// Relative L² distance `‖a − b‖/‖b‖`.
    pub fn relative_l2(&self, reference: &Self) -> f64 {
        let num: f64 = self
            .values
            .iter()
            .zip(&reference.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let den: f64 = reference.values.iter().map(|b| b.norm_sqr()).sum();
        (num / den).sqrt()
    }

    /// Header: `u64 dim, u64 N, f64 L`; payload: interleaved re/im; all
    /// little-endian.
    pub fn write_snapshot<W: Write>(&self, mut w: W) -> Result<(), GridError> {
        w.write_all(&(self.grid.dim as u64).to_le_bytes())?;
        w.write_all(&(self.grid.points as u64).to_le_bytes())?;
        w.write_all(&self.grid.half_width.to_le_bytes())?;
        let mut buf = Vec::with_capacity(16 * self.values.len());
        for v in &self.values {
            buf.extend_from_slice(&v.re.to_le_bytes());
            buf.extend_from_slice(&v.im.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_snapshot<R: Read>(mut r: R) -> Result<Self, GridError> {
        let mut word = [0u8; 8];
        r.read_exact(&mut word)?;
        let dim = u64::from_le_bytes(word) as usize;
        r.read_exact(&mut word)?;
        let points = u64::from_le_bytes(word) as usize;
        r.read_exact(&mut word)?;
        let half_width = f64::from_le_bytes(word);
        let grid = GridSpec::new(dim, points, half_width)?;
        let mut payload = vec![0u8; 16 * grid.len()];
        r.read_exact(&mut payload)?;
        let values = payload
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
                let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
                Complex64::new(re, im)
            })
            .collect();
        Ok(Self { grid, values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(3, 32, 4.0).is_ok());
        assert!(matches!(GridSpec::new(3, 4, 4.0), Err(GridError::Points(4))));
        assert!(matches!(GridSpec::new(3, 24, 4.0), Err(GridError::Points(24))));
        assert!(GridSpec::new(3, 16, 0.0).is_err());
        assert!(GridSpec::new(0, 16, 1.0).is_err());
    }

    #[test]
    fn offset_centres_avoid_origin() {
        let g = GridSpec::new(1, 8, 4.0).unwrap();
        assert_eq!(g.coordinates(), vec![-3.5, -2.5, -1.5, -0.5, 0.5, 1.5, 2.5, 3.5]);
        let g3 = GridSpec::new(3, 8, 1.0).unwrap();
        assert!(g3.radii().iter().all(|&r| r > 0.0));
        assert!((g3.cell_measure() - 0.25f64.powi(3)).abs() < 1e-15);
    }

    #[test]
    fn padding_keeps_spacing() {
        let g = GridSpec::new(3, 16, 3.0).unwrap();
        assert_eq!(g.padded().spacing(), g.spacing());
        assert_eq!(g.padded().len(), 8 * g.len());
    }

    #[test]
    fn snapshot_round_trip() {
        let g = GridSpec::new(2, 8, 1.5).unwrap();
        let f = GridFunction::from_fn(g, |x| Complex64::new(x[0], x[1] * x[1]));
        let mut bytes = Vec::new();
        f.write_snapshot(&mut bytes).unwrap();
        assert_eq!(bytes.len(), 24 + 16 * 64);
        assert_eq!(ComplexField::read_snapshot(&bytes[..]).unwrap(), f);
        assert!(ComplexField::read_snapshot(&bytes[..100]).is_err());
    }

    #[test]
    fn non_finite_values_are_located() {
        let g = GridSpec::new(1, 8, 1.0).unwrap();
        let mut f = RealField::zeros(g);
        f.values_mut()[5] = f64::NAN;
        assert!(matches!(f.check_finite(), Err(GridError::NonFinite(5))));
    }
}
