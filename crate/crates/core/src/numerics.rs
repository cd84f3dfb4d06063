//! Small numerical kernels: adaptive Gauss–Kronrod quadrature, a safeguarded
//! Newton/bisection root finder and golden-section minimisation.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// 15-point Kronrod abscissae on [-1, 1]; odd indices are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Sum of |K15 − G7| over the final partition.
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) integration of `f` over `[a, b]`.
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate drops below `abs_tol`, or fails after `max_panels` panels.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<Quadrature> {
    integrate_panels(f, a, b, 1, abs_tol, max_panels)
}

/// Like [`integrate`], but starts from `pieces` equal panels. Useful when the
/// integrand has a known number of oscillations.
pub fn integrate_panels<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    pieces: usize,
    abs_tol: f64,
    max_panels: usize,
) -> Result<Quadrature> {
    let pieces = pieces.max(1);
    let width = (b - a) / pieces as f64;
    let mut heap: BinaryHeap<Panel> = (0..pieces)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == pieces {
                b
            } else {
                a + width * (i + 1) as f64
            };
            kronrod15(&f, lo, hi)
        })
        .collect();
    loop {
        let error: f64 = heap.iter().map(|p| p.error).sum();
        if error <= abs_tol || heap.len() >= max_panels {
            // Sum smallest-first for a stable total.
            let mut panels = heap.into_vec();
            panels.sort_by(|p, q| p.value.abs().total_cmp(&q.value.abs()));
            let value = panels.iter().map(|p| p.value).sum();
            if error > abs_tol {
                return Err(Error::NonConvergence {
                    method: "adaptive Gauss-Kronrod quadrature",
                    iterations: panels.len(),
                    residual: error,
                });
            }
            return Ok(Quadrature {
                value,
                error,
                intervals: panels.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(kronrod15(&f, worst.a, mid));
        heap.push(kronrod15(&f, mid, worst.b));
    }
}

/// Root of an increasing function `f` on a bracket `[lo, hi]` with
/// `f(lo) < 0 < f(hi)`.
///
/// Newton steps from `df` are taken when they stay inside the current
/// bracket; otherwise the bracket is bisected. Stops once `|f| <= f_tol`
/// after at least one Newton polish, or when the bracket can no longer shrink.
pub fn newton_bisect<F, D>(f: F, df: D, mut lo: f64, mut hi: f64, f_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo < 0.0 && fhi > 0.0) {
        return Err(Error::Bracket { what: "f", lo, hi });
    }
    let mut x = 0.5 * (lo + hi);
    const MAX_ITER: usize = 500;
    for _ in 0..MAX_ITER {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / df(x);
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if fx.abs() <= f_tol && (next - x).abs() <= 4.0 * f64::EPSILON * x.abs() {
            return Ok(if f(next).abs() < fx.abs() { next } else { x });
        }
        if next == x || next <= lo || next >= hi {
            // Bracket exhausted at double precision.
            return Ok(x);
        }
        x = next;
    }
    Err(Error::NonConvergence {
        method: "Newton-bisection",
        iterations: MAX_ITER,
        residual: f(x).abs(),
    })
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search on `[a, b]` driven by a comparator.
///
/// `less(x, y)` must report whether the objective at `x` is below the one at
/// `y`; this lets callers compare objective values without forming them.
/// Terminates when the bracket is narrower than `x_tol`.
pub fn golden_section_by<L: Fn(f64, f64) -> bool>(
    less: L,
    mut a: f64,
    mut b: f64,
    x_tol: f64,
) -> f64 {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    for _ in 0..400 {
        if (b - a).abs() <= x_tol {
            break;
        }
        if less(c, d) {
            b = d;
            d = c;
            c = b - INV_PHI * (b - a);
        } else {
            a = c;
            c = d;
            d = a + INV_PHI * (b - a);
        }
        if !(c > a && c < b && d > a && d < b) {
            break;
        }
    }
    0.5 * (a + b)
}

/// Golden-section minimisation of `f` on `[a, b]`.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, x_tol: f64) -> f64 {
    golden_section_by(|x, y| f(x) < f(y), a, b, x_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn integrates_polynomials_exactly() {
        let q = integrate(|x| x.powi(7) - 3.0 * x * x, 0.0, 2.0, 1e-12, 100).unwrap();
        assert!((q.value - (256.0 / 8.0 - 8.0)).abs() < 1e-12);
        assert_eq!(q.intervals, 1);
    }

    #[test]
    fn integrates_oscillatory_sine_square() {
        let q = integrate(|x| (40.0 * PI * x).sin().powi(2), 0.0, 1.0, 1e-12, 10_000).unwrap();
        assert!((q.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn quadrature_reports_non_convergence() {
        let err = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-14, 8).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }

    #[test]
    fn newton_bisect_finds_cubic_root() {
        let r = newton_bisect(|x| x * x * x - 2.0, |x| 3.0 * x * x, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-15);
    }

    #[test]
    fn newton_bisect_rejects_bad_bracket() {
        assert!(matches!(
            newton_bisect(|x| x - 5.0, |_| 1.0, 0.0, 1.0, 1e-14),
            Err(Error::Bracket { .. })
        ));
    }

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let x = golden_section(|x| (x - 0.3).powi(2) + 1.0, -1.0, 2.0, 1e-12);
        // Objective values are flat within √ε of the vertex.
        assert!((x - 0.3).abs() < 1e-7);
        let x = golden_section_by(|x, y| (x - 0.3).abs() < (y - 0.3).abs(), -1.0, 2.0, 1e-13);
        assert!((x - 0.3).abs() < 1e-12);
    }
}
