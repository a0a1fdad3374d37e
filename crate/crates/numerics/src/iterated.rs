//! Iterated 2D and 3D quadrature with variable inner bounds.
//!
//! Each level runs the adaptive 1D driver; inner levels use a tolerance one
//! order of magnitude tighter than their parent. Inner error estimates are
//! propagated into the reported error as `max_inner_error * outer_width`, and
//! any inner failure aborts the whole integral (poisoning the outer integrand
//! with NaN so the driver stops immediately).

use std::cell::{Cell, RefCell};

use crate::adaptive::integrate_1d;
use crate::{IntegrationConfig, NumericsError, QuadratureResult};

struct InnerTracker {
    max_abs_error: Cell<f64>,
    evaluations: Cell<usize>,
    failure: RefCell<Option<NumericsError>>,
}

impl InnerTracker {
    fn new() -> Self {
        Self {
            max_abs_error: Cell::new(0.0),
            evaluations: Cell::new(0),
            failure: RefCell::new(None),
        }
    }

    fn absorb(&self, r: &QuadratureResult) {
        self.max_abs_error.set(self.max_abs_error.get().max(r.abs_error));
        self.evaluations.set(self.evaluations.get() + r.evaluations);
    }

    fn fail(&self, e: NumericsError) -> f64 {
        let mut slot = self.failure.borrow_mut();
        if slot.is_none() {
            *slot = Some(e);
        }
        f64::NAN
    }

    fn into_failure(self) -> Option<NumericsError> {
        self.failure.into_inner()
    }
}

/// Integrates `f(x, y)` over `x in [outer.0, outer.1]`,
/// `y in [inner_bounds(x).0, inner_bounds(x).1]`.
///
/// An empty inner range (`hi <= lo`) contributes zero.
pub fn integrate_2d<F, B>(
    f: F,
    outer: (f64, f64),
    inner_bounds: B,
    cfg: &IntegrationConfig,
) -> Result<QuadratureResult, NumericsError>
where
    F: Fn(f64, f64) -> f64,
    B: Fn(f64) -> (f64, f64),
{
    let inner_cfg = cfg.tightened();
    let tracker = InnerTracker::new();

    let outer_result = integrate_1d(
        |x: f64| {
            let (lo, hi) = inner_bounds(x);
            if !(hi > lo) {
                return 0.0;
            }
            match integrate_1d(|y| f(x, y), lo, hi, &inner_cfg) {
                Ok(r) => {
                    tracker.absorb(&r);
                    r.value
                }
                Err(e) => tracker.fail(e),
            }
        },
        outer.0,
        outer.1,
        cfg,
    );

    finish(outer_result, outer, tracker)
}

/// Integrates `f(x, y, z)` over `x in [outer.0, outer.1]`,
/// `y in [middle_bounds(x)]`, `z in [inner_bounds(x, y)]`.
pub fn integrate_3d<F, BM, BI>(
    f: F,
    outer: (f64, f64),
    middle_bounds: BM,
    inner_bounds: BI,
    cfg: &IntegrationConfig,
) -> Result<QuadratureResult, NumericsError>
where
    F: Fn(f64, f64, f64) -> f64,
    BM: Fn(f64) -> (f64, f64),
    BI: Fn(f64, f64) -> (f64, f64),
{
    let middle_cfg = cfg.tightened();
    let tracker = InnerTracker::new();

    let outer_result = integrate_1d(
        |x: f64| {
            let (lo, hi) = middle_bounds(x);
            if !(hi > lo) {
                return 0.0;
            }
            match integrate_2d(|y, z| f(x, y, z), (lo, hi), |y| inner_bounds(x, y), &middle_cfg) {
                Ok(r) => {
                    tracker.absorb(&r);
                    r.value
                }
                Err(e) => tracker.fail(e),
            }
        },
        outer.0,
        outer.1,
        cfg,
    );

    finish(outer_result, outer, tracker)
}

fn finish(
    outer_result: Result<QuadratureResult, NumericsError>,
    outer: (f64, f64),
    tracker: InnerTracker,
) -> Result<QuadratureResult, NumericsError> {
    let width = (outer.1 - outer.0).abs();
    let max_inner = tracker.max_abs_error.get();
    let inner_evals = tracker.evaluations.get();
    if let Some(e) = tracker.into_failure() {
        return Err(e);
    }
    let r = outer_result?;
    Ok(QuadratureResult {
        value: r.value,
        abs_error: r.abs_error + max_inner * width,
        evaluations: r.evaluations + inner_evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separable_product() {
        // int_0^1 int_0^2 x e^{-y} dy dx = 0.5 * (1 - e^-2)
        let cfg = IntegrationConfig::default_2d();
        let r = integrate_2d(|x, y| x * (-y).exp(), (0.0, 1.0), |_| (0.0, 2.0), &cfg).unwrap();
        let exact = 0.5 * (1.0 - (-2.0f64).exp());
        assert!((r.value - exact).abs() < 1e-8);
    }

    #[test]
    fn triangular_domain() {
        // int_0^1 int_0^x 1 dy dx = 1/2
        let cfg = IntegrationConfig::default_2d();
        let r = integrate_2d(|_, _| 1.0, (0.0, 1.0), |x| (0.0, x), &cfg).unwrap();
        assert!((r.value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn three_dimensional_simplex_volume() {
        // volume of {0 <= z <= y <= x <= 1} = 1/6
        let cfg = IntegrationConfig::default_3d();
        let r = integrate_3d(
            |_, _, _| 1.0,
            (0.0, 1.0),
            |x| (0.0, x),
            |_, y| (0.0, y),
            &cfg,
        )
        .unwrap();
        assert!((r.value - 1.0 / 6.0).abs() < 1e-7);
    }

    #[test]
    fn inner_failure_propagates() {
        let cfg = IntegrationConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 4,
        };
        // inner integrand too hard for a budget of 4 subdivisions
        let err = integrate_2d(
            |x, y| ((50.0 * (x + 1.0) * y).sin() * 30.0).exp(),
            (0.0, 1.0),
            |_| (0.0, 1.0),
            &cfg,
        );
        assert!(err.is_err());
    }
}
