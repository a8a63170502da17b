//! Globally adaptive Gauss–Kronrod (7, 15) quadrature for complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

/// Splits between exact recomputations of the running totals.
const RESYNC: usize = 256;

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

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub intervals: usize,
}

/// One 15-point Kronrod panel; the error is `|K15 − G7|`.
pub fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    let k = k * h;
    let g = g * h;
    (k, (k - g).norm())
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
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

/// Integrates `f` over `[a, b]` split into `initial` equal panels, bisecting
/// the worst panel until the summed error estimate is below
/// `max(abs_tol, rel_tol·|I|)` or `max_panels` is reached.
///
/// The result is returned either way; callers compare `error` with their
/// own target.
pub fn integrate<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    initial: usize,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> QuadResult {
    let initial = initial.max(1);
    let mut heap = BinaryHeap::with_capacity(2 * initial);
    let step = (b - a) / initial as f64;
    for j in 0..initial {
        let lo = a + step * j as f64;
        let hi = if j + 1 == initial { b } else { lo + step };
        let (value, error) = gk15(&mut f, lo, hi);
        heap.push(Panel { a: lo, b: hi, value, error });
    }
    // running totals, recomputed exactly before any decision to stop
    let (mut total, mut err) = totals(&heap);
    let mut since_sync = 0usize;
    loop {
        let target = abs_tol.max(rel_tol * total.norm());
        if err <= target || heap.len() >= max_panels || since_sync >= RESYNC {
            (total, err) = totals(&heap);
            since_sync = 0;
            let target = abs_tol.max(rel_tol * total.norm());
            if err <= target || heap.len() >= max_panels {
                return QuadResult { value: total, error: err, intervals: heap.len() };
            }
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot split further at double resolution
            heap.push(worst);
            let (total, err) = totals(&heap);
            return QuadResult { value: total, error: err, intervals: heap.len() };
        }
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.error;
        since_sync += 1;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
    }
}

fn totals(heap: &BinaryHeap<Panel>) -> (Complex64, f64) {
    let mut re = crate::parallel::Neumaier::new();
    let mut im = crate::parallel::Neumaier::new();
    let mut err = 0.0;
    for p in heap.iter() {
        re.add(p.value.re);
        im.add(p.value.im);
        err += p.error;
    }
    (Complex64::new(re.value(), im.value()), err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| Complex64::new(x.powi(20), 0.0), 0.0, 1.0, 1, 1e-15, 1e-15, 50);
        assert!((r.value.re - 1.0 / 21.0).abs() < 1e-15);
    }

    #[test]
    fn oscillatory() {
        let r = integrate(|x| Complex64::new(0.0, 50.0 * x).exp(), 0.0, 1.0, 4, 1e-14, 1e-14, 500);
        let exact = (Complex64::new(0.0, 50.0).exp() - 1.0) / Complex64::new(0.0, 50.0);
        assert!((r.value - exact).norm() < 1e-13);
        assert!(r.error < 1e-13);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate(|x| Complex64::new(x.sqrt(), 0.0), 0.0, 1.0, 1, 1e-12, 1e-12, 500);
        assert!((r.value.re - 2.0 / 3.0).abs() < 1e-11);
    }
}
