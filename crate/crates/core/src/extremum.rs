//! Grid plus golden-section maximization on an interval.
//!
//! The estimators here return certified lower bounds on the true maximum:
//! every returned value is an actual function value at an evaluated point.

use crate::scalar::Real;

const GOLDEN_INV: f64 = 0.618_033_988_749_894_9;

// Interval width the refinement shrinks to; below ~1e-12 the bracket is
// narrower than the attainable improvement for the polynomials in scope.
const REFINE_WIDTH: f64 = 1e-12;

// Golden-section shrinks the bracket by 0.618 per step, so 200 steps cover
// any width reachable in finite precision; the no-progress check handles
// scalars too coarse to reach the target width (f32).
const MAX_STEPS: usize = 200;

/// Chebyshev-Lobatto points on `[a, b]`, ascending, endpoints exact.
pub(crate) fn chebyshev_grid<T: Real>(a: T, b: T, count: usize) -> Vec<T> {
    debug_assert!(count >= 2);
    let mid = (a + b) * T::of(0.5);
    let rad = (b - a) * T::of(0.5);
    let last = count - 1;
    let step = T::PI() / T::of(last as f64);
    (0..=last)
        .map(|j| {
            if j == 0 {
                a
            } else if j == last {
                b
            } else {
                mid - rad * (step * T::of(j as f64)).cos()
            }
        })
        .collect()
}

/// Golden-section search maximizing `f` on `[a, b]`; returns `(t, f(t))`
/// for the best interior evaluation point.
fn golden_section_max<T: Real, F: Fn(T) -> T>(f: &F, mut a: T, mut b: T, width: T) -> (T, T) {
    let g = T::of(GOLDEN_INV);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut previous_width = b - a;
    for _ in 0..MAX_STEPS {
        if b - a <= width {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        let w = b - a;
        if w.is_nan() || w >= previous_width {
            break;
        }
        previous_width = w;
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Maximum of `f` over the grid, with every local grid maximum refined by
/// golden-section search. The raw grid values participate in the final
/// maximum, so grid points (endpoints included) are never lost to the
/// refinement.
pub(crate) fn grid_refined_max<T: Real, F: Fn(T) -> T>(f: F, grid: &[T]) -> T {
    debug_assert!(grid.len() >= 2);
    let values: Vec<T> = grid.iter().map(|&t| f(t)).collect();
    let mut best = values[0];
    for &v in &values[1..] {
        if v > best {
            best = v;
        }
    }
    let width = T::of(REFINE_WIDTH);
    let last = grid.len() - 1;
    for i in 0..=last {
        let rises_left = i == 0 || values[i] >= values[i - 1];
        let falls_right = i == last || values[i] >= values[i + 1];
        if !(rises_left && falls_right) {
            continue;
        }
        let lo = grid[i.saturating_sub(1)];
        let hi = grid[(i + 1).min(last)];
        if hi > lo {
            let (_, v) = golden_section_max(&f, lo, hi, width);
            if v > best {
                best = v;
            }
        }
    }
    best
}
