//! Globally adaptive bisection driver over the Gauss-Kronrod panel rule.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::kronrod::{qk15, Panel, QK15_EVALS};
use crate::{IntegrationConfig, NumericsError, QuadratureResult};

struct HeapPanel(Panel);

impl PartialEq for HeapPanel {
    fn eq(&self, other: &Self) -> bool {
        self.0.abs_error == other.0.abs_error
    }
}
impl Eq for HeapPanel {}
impl PartialOrd for HeapPanel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapPanel {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap on the error estimate; errors are finite by construction
        self.0
            .abs_error
            .partial_cmp(&other.0.abs_error)
            .unwrap_or(Ordering::Equal)
    }
}

/// Integrates `f` over the finite interval `[a, b]`.
///
/// Bisects the interval with the largest error estimate until the summed
/// error meets `max(cfg.abs_tol, cfg.rel_tol * |integral|)` or the
/// subdivision budget is exhausted (which is reported as an error, never as a
/// silently inaccurate value).
pub fn integrate_1d<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &IntegrationConfig,
) -> Result<QuadratureResult, NumericsError> {
    if !a.is_finite() || !b.is_finite() {
        return Err(NumericsError::Domain(format!(
            "integrate_1d requires finite bounds, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }

    let mut evaluations = QK15_EVALS;
    let first = qk15(&f, a, b);
    check_finite(&first)?;

    let mut heap = BinaryHeap::new();
    let mut total_value = first.value;
    let mut total_error = first.abs_error;
    heap.push(HeapPanel(first));

    let mut subdivisions = 0;
    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * total_value.abs());
        if total_error <= target {
            return Ok(QuadratureResult {
                value: total_value,
                abs_error: total_error,
                evaluations,
            });
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(NumericsError::ToleranceNotMet {
                value: total_value,
                requested: target,
                achieved: total_error,
                subdivisions,
            });
        }

        let worst = heap.pop().expect("heap holds at least one panel").0;
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // interval no longer splittable in f64; accept what we have
            return Err(NumericsError::ToleranceNotMet {
                value: total_value,
                requested: target,
                achieved: total_error,
                subdivisions,
            });
        }
        let left = qk15(&f, worst.a, mid);
        let right = qk15(&f, mid, worst.b);
        evaluations += 2 * QK15_EVALS;
        check_finite(&left)?;
        check_finite(&right)?;

        total_value += left.value + right.value - worst.value;
        total_error += left.abs_error + right.abs_error - worst.abs_error;
        heap.push(HeapPanel(left));
        heap.push(HeapPanel(right));
        subdivisions += 1;
    }
}

fn check_finite(panel: &Panel) -> Result<(), NumericsError> {
    if panel.value.is_finite() && panel.abs_error.is_finite() {
        Ok(())
    } else {
        Err(NumericsError::NonFiniteIntegrand {
            at: 0.5 * (panel.a + panel.b),
        })
    }
}

/// Integrates `f` over `[a, infinity)` using the substitution
/// `w = a + t/(1-t)`, which maps the half line onto `t in (0, 1)`:
///
/// `int_a^inf f(w) dw = int_0^1 f(a + t/(1-t)) / (1-t)^2 dt`.
///
/// The panel rule never evaluates at `t = 1`, so the transform is safe for
/// any integrand decaying at infinity.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    cfg: &IntegrationConfig,
) -> Result<QuadratureResult, NumericsError> {
    if !a.is_finite() {
        return Err(NumericsError::Domain(format!(
            "integrate_semi_infinite requires a finite lower bound, got {a}"
        )));
    }
    integrate_1d(
        |t: f64| {
            let om = 1.0 - t;
            // Deep adaptive bisection can place a node so close to 1 that
            // `t/om` overflows. That node is the image of w = infinity; with
            // an open rule it carries zero measure, so score it as 0. A
            // divergent integrand still fails loudly through the error
            // estimates of the neighbouring panels.
            if om <= f64::EPSILON {
                return 0.0;
            }
            f(a + t / om) / (om * om)
        },
        0.0,
        1.0,
        cfg,
    )
}
