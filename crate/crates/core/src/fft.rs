//! Axis-by-axis n-D transforms over row-major cubes, with optional pruning
//! for zero-padded convolution.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

/// Forward uses `e^{−ixξ}`; [`NdFft::inverse`] divides by the point count.
pub struct NdFft {
    dim: usize,
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl NdFft {
    pub fn new(dim: usize, len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            dim,
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }

    pub fn total(&self) -> usize {
        self.len.pow(self.dim as u32)
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        for axis in (0..self.dim).rev() {
            self.axis(data, axis, &self.forward, None);
        }
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        for axis in 0..self.dim {
            self.axis(data, axis, &self.inverse, None);
        }
        self.normalize(data);
    }

    /// Forward transform of data that vanishes outside the corner cube
    /// `[0, support)ⁿ`: lines that are still identically zero are skipped.
    pub fn forward_pruned(&self, data: &mut [Complex64], support: usize) {
        for axis in (0..self.dim).rev() {
            self.axis(data, axis, &self.forward, Some(support));
        }
    }

    /// Inverse transform that is only correct on the corner cube
    /// `[0, support)ⁿ`; lines that cannot reach it are skipped.
    pub fn inverse_pruned(&self, data: &mut [Complex64], support: usize) {
        for axis in 0..self.dim {
            self.axis(data, axis, &self.inverse, Some(support));
        }
        self.normalize(data);
    }

    fn normalize(&self, data: &mut [Complex64]) {
        let scale = 1.0 / self.total() as f64;
        data.par_iter_mut().for_each(|v| *v *= scale);
    }

    /// Transforms every line along `axis`. Data is viewed as blocks
    /// `[outer][axis][inner]`; a block is skipped when some outer index
    /// reaches `support`.
    fn axis(&self, data: &mut [Complex64], axis: usize, plan: &Arc<dyn Fft<f64>>, support: Option<usize>) {
        let m = self.len;
        let inner = m.pow((self.dim - 1 - axis) as u32);
        let block = m * inner;
        let outer_axes = axis;
        let live = |b: usize| match support {
            None => true,
            Some(cut) => {
                let mut rest = b;
                for _ in 0..outer_axes {
                    if rest % m >= cut {
                        return false;
                    }
                    rest /= m;
                }
                true
            }
        };
        if inner == 1 {
            // contiguous lines: one block per line
            data.par_chunks_mut(m).enumerate().for_each_init(
                || vec![Complex64::default(); plan.get_inplace_scratch_len()],
                |scratch, (b, line)| {
                    if live(b) {
                        plan.process_with_scratch(line, scratch);
                    }
                },
            );
            return;
        }
        let blocks = data.len() / block;
        let live_blocks: Vec<usize> = (0..blocks).filter(|&b| live(b)).collect();
        let tiles = inner.div_ceil(TILE);
        let base = SharedSlice(data.as_mut_ptr());
        let scratch_len = plan.get_inplace_scratch_len();
        (0..live_blocks.len() * tiles).into_par_iter().for_each_init(
            || (vec![Complex64::default(); TILE * m], vec![Complex64::default(); scratch_len]),
            |(buf, scratch), task| {
                let b = live_blocks[task / tiles];
                let i0 = (task % tiles) * TILE;
                let width = TILE.min(inner - i0);
                let offset = b * block + i0;
                // SAFETY: each task owns columns [i0, i0 + width) of block b,
                // disjoint from every other task.
                unsafe { transform_tile(base, offset, m, inner, width, &mut buf[..width * m], plan, scratch) };
            },
        );
    }
}

/// Columns gathered per strided pass; 16 complex values fill four cache lines.
const TILE: usize = 16;

#[derive(Clone, Copy)]
struct SharedSlice(*mut Complex64);

unsafe impl Send for SharedSlice {}
unsafe impl Sync for SharedSlice {}

/// Gathers `width` adjacent columns of a `[m][inner]` block into rows,
/// transforms them and scatters back.
#[allow(clippy::too_many_arguments)]
unsafe fn transform_tile(
    base: SharedSlice,
    offset: usize,
    m: usize,
    inner: usize,
    width: usize,
    buf: &mut [Complex64],
    plan: &Arc<dyn Fft<f64>>,
    scratch: &mut [Complex64],
) {
    let ptr = base.0.add(offset);
    for k in 0..m {
        let row = std::slice::from_raw_parts(ptr.add(k * inner), width);
        for (w, v) in row.iter().enumerate() {
            buf[w * m + k] = *v;
        }
    }
    plan.process_with_scratch(buf, scratch);
    for k in 0..m {
        let row = std::slice::from_raw_parts_mut(ptr.add(k * inner), width);
        for (w, v) in row.iter_mut().enumerate() {
            *v = buf[w * m + k];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(len: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..len).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
    }

    /// Direct O(N²ⁿ) DFT in 2-D.
    fn dft2(data: &[Complex64], m: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); m * m];
        for k0 in 0..m {
            for k1 in 0..m {
                let mut acc = Complex64::default();
                for j0 in 0..m {
                    for j1 in 0..m {
                        let ph = -2.0 * std::f64::consts::PI * ((j0 * k0 + j1 * k1) as f64) / m as f64;
                        acc += data[j0 * m + j1] * Complex64::from_polar(1.0, ph);
                    }
                }
                out[k0 * m + k1] = acc;
            }
        }
        out
    }

    #[test]
    fn matches_direct_dft() {
        let m = 8;
        let x = random(m * m, 1);
        let mut y = x.clone();
        NdFft::new(2, m).forward(&mut y);
        let want = dft2(&x, m);
        for (a, b) in y.iter().zip(&want) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn round_trip_3d() {
        let m = 16;
        let x = random(m * m * m, 2);
        let mut y = x.clone();
        let f = NdFft::new(3, m);
        f.forward(&mut y);
        f.inverse(&mut y);
        let err = x.iter().zip(&y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12);
    }

    #[test]
    fn pruned_transforms_agree_on_the_corner() {
        let (n, m) = (8, 16);
        let mut x = vec![Complex64::default(); m * m * m];
        let src = random(n * n * n, 3);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    x[(i * m + j) * m + k] = src[(i * n + j) * n + k];
                }
            }
        }
        let f = NdFft::new(3, m);
        let mut full = x.clone();
        f.forward(&mut full);
        let mut pruned = x.clone();
        f.forward_pruned(&mut pruned, n);
        for (a, b) in full.iter().zip(&pruned) {
            assert!((a - b).norm() < 1e-12);
        }
        // multiply by something and invert both ways
        for (i, v) in full.iter_mut().enumerate() {
            *v *= 1.0 + (i % 7) as f64;
        }
        let mut inv_full = full.clone();
        f.inverse(&mut inv_full);
        let mut inv_pruned = full;
        f.inverse_pruned(&mut inv_pruned, n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let idx = (i * m + j) * m + k;
                    assert!((inv_full[idx] - inv_pruned[idx]).norm() < 1e-12);
                }
            }
        }
    }
}
