//! 2-D FFT helpers on square complex grids.
//!
//! Thin wrapper over `rustfft` doing rows → transpose → rows → transpose.
//! The forward/inverse pair is normalized so that `ifft2(fft2(x)) == x`
//! (the 1/N² lives in the inverse). Plans are cached per thread and size.

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

/// Cached plans keyed by (size, inverse?).
type PlanCache = HashMap<(usize, bool), Arc<dyn Fft<f64>>>;

thread_local! {
    static PLANS: RefCell<PlanCache> = RefCell::new(HashMap::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|cache| {
        cache
            .borrow_mut()
            .entry((n, inverse))
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                if inverse {
                    planner.plan_fft_inverse(n)
                } else {
                    planner.plan_fft_forward(n)
                }
            })
            .clone()
    })
}

fn transform_rows(data: &mut Array2<Complex64>, inverse: bool) {
    let n = data.nrows();
    let fft = plan(n, inverse);
    let slice = data.as_slice_mut().expect("grid must be contiguous");
    for row in slice.chunks_exact_mut(n) {
        fft.process(row);
    }
}

fn transpose_square(data: &mut Array2<Complex64>) {
    let n = data.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let tmp = data[[i, j]];
            data[[i, j]] = data[[j, i]];
            data[[j, i]] = tmp;
        }
    }
}

/// In-place unnormalized forward 2-D FFT.
pub fn fft2(data: &mut Array2<Complex64>) {
    assert_eq!(data.nrows(), data.ncols(), "square grids only");
    transform_rows(data, false);
    transpose_square(data);
    transform_rows(data, false);
    transpose_square(data);
}

/// In-place inverse 2-D FFT, normalized by 1/N² so it inverts `fft2`.
pub fn ifft2(data: &mut Array2<Complex64>) {
    assert_eq!(data.nrows(), data.ncols(), "square grids only");
    transform_rows(data, true);
    transpose_square(data);
    transform_rows(data, true);
    transpose_square(data);
    let norm = 1.0 / (data.nrows() * data.ncols()) as f64;
    data.mapv_inplace(|v| v * norm);
}

/// In-place unnormalized inverse 2-D FFT (the plain conjugate-kernel sum).
pub fn ifft2_unnormalized(data: &mut Array2<Complex64>) {
    assert_eq!(data.nrows(), data.ncols(), "square grids only");
    transform_rows(data, true);
    transpose_square(data);
    transform_rows(data, true);
    transpose_square(data);
}

/// Signed DFT frequency index: 0, 1, ..., N/2, -(N/2-1), ..., -1.
#[inline]
pub fn freq_index(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}
