//! Globally adaptive Gauss-Kronrod (10/21) quadrature with interval bisection,
//! and iterated 2D quadrature over regions described by a membership predicate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

impl QuadConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let cfg = Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::input("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::input("max_subdivisions must be positive"));
        }
        Ok(())
    }
}

// Kronrod abscissae on [-1, 1] (non-negative half, descending); odd indices
// are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_562_269_888_443,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Segment> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    if !fc.is_finite() {
        return Err(Error::NonFinite { at: center });
    }
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut abs_sum = WGK[10] * fc.abs();
    for (i, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(10).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        if !f1.is_finite() {
            return Err(Error::NonFinite { at: center - dx });
        }
        if !f2.is_finite() {
            return Err(Error::NonFinite { at: center + dx });
        }
        kronrod += w * (f1 + f2);
        abs_sum += w * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            gauss += WG[i / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let mut error = ((kronrod - gauss) * half).abs();
    // roundoff floor
    let floor = 50.0 * f64::EPSILON * abs_sum * half.abs();
    if error < floor {
        error = floor;
    }
    Ok(Segment {
        lo,
        hi,
        value,
        error,
    })
}

/// Result of an adaptive integration with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

/// Adaptive integral of `f` over `[lo, hi]`; `lo > hi` gives the oriented
/// integral `-(integral over [hi, lo])`.
pub fn integrate_1d<F>(f: F, lo: f64, hi: f64, cfg: &QuadConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_1d_with_breaks(f, lo, hi, &[], cfg).map(|e| e.value)
}

/// As [`integrate_1d`], with interior points where the integrand is known to
/// be non-smooth. Breakpoints outside the interval are ignored.
pub fn integrate_1d_with_breaks<F>(
    f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadEstimate>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::input("integration limits must be finite"));
    }
    if lo == hi {
        return Ok(QuadEstimate {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions: 0,
        });
    }
    if lo > hi {
        let mut e = integrate_1d_with_breaks(f, hi, lo, breaks, cfg)?;
        e.value = -e.value;
        return Ok(e);
    }

    let mut nodes = vec![lo];
    let mut interior: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&b| b > lo && b < hi)
        .collect();
    interior.sort_by(f64::total_cmp);
    interior.dedup();
    nodes.extend(interior);
    nodes.push(hi);

    let mut heap = BinaryHeap::new();
    let mut value = 0.0;
    let mut error = 0.0;
    for w in nodes.windows(2) {
        let seg = gauss_kronrod(&f, w[0], w[1])?;
        value += seg.value;
        error += seg.error;
        heap.push(seg);
    }

    let mut subdivisions = 0;
    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if error <= target {
            break;
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::NoConvergence {
                estimate: value,
                error_estimate: error,
            });
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // interval cannot be split further in floating point
            return Err(Error::NoConvergence {
                estimate: value,
                error_estimate: error,
            });
        }
        let left = gauss_kronrod(&f, worst.lo, mid)?;
        let right = gauss_kronrod(&f, mid, worst.hi)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }

    // re-sum to shed the drift of the running updates
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    Ok(QuadEstimate {
        value,
        error_estimate: error,
        subdivisions,
    })
}

/// Axis-aligned box `[x1_min, x1_max] x [x2_min, x2_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub x1_min: f64,
    pub x1_max: f64,
    pub x2_min: f64,
    pub x2_max: f64,
}

/// Planar integration region.
///
/// Only `contains` and `bounding_box` are required. The default `section`
/// locates the vertical cross-section at `x1` by scanning the predicate and
/// bisecting each transition, which misses features narrower than the scan
/// spacing; regions with a closed-form cross-section should override it.
pub trait Region2 {
    fn contains(&self, x1: f64, x2: f64) -> bool;

    fn bounding_box(&self) -> BoundingBox;

    /// Abscissae where the cross-section changes topology or has a kink.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Disjoint intervals of `x2` making up the region at fixed `x1`.
    fn section(&self, x1: f64) -> Vec<(f64, f64)> {
        const SCAN: usize = 256;
        let bb = self.bounding_box();
        let dx = (bb.x2_max - bb.x2_min) / SCAN as f64;
        let locate = |mut a: f64, mut b: f64, a_inside: bool| {
            for _ in 0..100 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if self.contains(x1, m) == a_inside {
                    a = m;
                } else {
                    b = m;
                }
            }
            0.5 * (a + b)
        };
        let mut out = Vec::new();
        let mut prev_x = bb.x2_min;
        let mut prev_in = self.contains(x1, prev_x);
        let mut start = if prev_in { Some(prev_x) } else { None };
        for i in 1..=SCAN {
            let x = bb.x2_min + dx * i as f64;
            let inside = self.contains(x1, x);
            if inside != prev_in {
                let edge = locate(prev_x, x, prev_in);
                if inside {
                    start = Some(edge);
                } else if let Some(s) = start.take() {
                    out.push((s, edge));
                }
            }
            prev_x = x;
            prev_in = inside;
        }
        if let Some(s) = start {
            out.push((s, bb.x2_max));
        }
        out
    }
}

/// Iterated adaptive integral of `f` over `region`.
pub fn integrate_2d<F, R>(f: F, region: &R, cfg: &QuadConfig) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
    R: Region2 + ?Sized,
{
    cfg.validate()?;
    let bb = region.bounding_box();
    let width = (bb.x1_max - bb.x1_min).max(f64::MIN_POSITIVE);
    let inner_cfg = QuadConfig {
        abs_tol: 0.01 * cfg.abs_tol / width,
        rel_tol: 0.01 * cfg.rel_tol,
        max_subdivisions: cfg.max_subdivisions,
    };
    let failure = std::cell::Cell::new(None::<Error>);
    let outer = |x1: f64| -> f64 {
        let mut total = 0.0;
        for (lo, hi) in region.section(x1) {
            match integrate_1d(|x2| f(x1, x2), lo, hi, &inner_cfg) {
                Ok(v) => total += v,
                Err(e) => {
                    failure.set(Some(e));
                    return f64::NAN;
                }
            }
        }
        total
    };
    let result = integrate_1d_with_breaks(outer, bb.x1_min, bb.x1_max, &region.breakpoints(), cfg);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    result.map(|e| e.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kronrod_weights_sum_to_two() {
        let k: f64 = WGK[10] + 2.0 * WGK[..10].iter().sum::<f64>();
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rules_are_exact_on_monomials() {
        // G10 is exact to degree 19, K21 to degree 31
        for deg in (0..=31).step_by(2) {
            let exact = 2.0 / (deg as f64 + 1.0);
            let mut k = if deg == 0 { WGK[10] } else { 0.0 };
            let mut g = 0.0;
            for i in 0..10 {
                let p = XGK[i].powi(deg);
                k += 2.0 * WGK[i] * p;
                if i % 2 == 1 {
                    g += 2.0 * WG[i / 2] * p;
                }
            }
            assert!((k - exact).abs() < 1e-14, "kronrod deg {deg}");
            if deg <= 19 {
                assert!((g - exact).abs() < 1e-14, "gauss deg {deg}");
            }
        }
    }

    #[test]
    fn constant_over_full_turn() {
        let v = integrate_1d(|_| 1.0, 0.0, 2.0 * PI, &QuadConfig::default()).unwrap();
        assert!((v - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn cos_two_theta_vanishes() {
        let v = integrate_1d(|t| (2.0 * t).cos(), -PI / 2.0, PI / 2.0, &QuadConfig::default())
            .unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn theta_sin_two_theta() {
        let v = integrate_1d(
            |t| t * (2.0 * t).sin(),
            -PI / 2.0,
            PI / 2.0,
            &QuadConfig::default(),
        )
        .unwrap();
        // antiderivative -(t/2) cos 2t + (1/4) sin 2t
        let anti = |t: f64| -(t / 2.0) * (2.0 * t).cos() + 0.25 * (2.0 * t).sin();
        let exact = anti(PI / 2.0) - anti(-PI / 2.0);
        assert!((exact - PI / 2.0).abs() < 1e-15);
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let cfg = QuadConfig::default();
        let a = integrate_1d(f64::exp, 0.0, 1.0, &cfg).unwrap();
        let b = integrate_1d(f64::exp, 1.0, 0.0, &cfg).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn exhausted_budget_is_reported() {
        let cfg = QuadConfig::new(1e-14, 1e-14, 3).unwrap();
        let err = integrate_1d(|x: f64| x.abs().sqrt().recip().min(1e8), -1.0, 1.0, &cfg)
            .unwrap_err();
        assert!(matches!(err, Error::NoConvergence { estimate, .. } if estimate.is_finite()));
    }

    struct Disk {
        cx: f64,
        cy: f64,
        r: f64,
    }

    impl Region2 for Disk {
        fn contains(&self, x1: f64, x2: f64) -> bool {
            (x1 - self.cx).powi(2) + (x2 - self.cy).powi(2) <= self.r * self.r
        }
        fn bounding_box(&self) -> BoundingBox {
            BoundingBox {
                x1_min: self.cx - self.r,
                x1_max: self.cx + self.r,
                x2_min: self.cy - self.r,
                x2_max: self.cy + self.r,
            }
        }
    }

    #[test]
    fn unit_disk_area_from_predicate() {
        let disk = Disk {
            cx: 0.0,
            cy: 0.0,
            r: 1.0,
        };
        let cfg = QuadConfig::new(1e-9, 1e-9, 4000).unwrap();
        let v = integrate_2d(|_, _| 1.0, &disk, &cfg).unwrap();
        assert!((v - PI).abs() < 1e-6, "{v}");
    }

    #[test]
    fn first_moment_of_shifted_disk() {
        let disk = Disk {
            cx: 1.0,
            cy: 0.0,
            r: 1.0,
        };
        let cfg = QuadConfig::new(1e-9, 1e-9, 4000).unwrap();
        let v = integrate_2d(|x1, _| x1, &disk, &cfg).unwrap();
        // centroid times area
        assert!((v - PI).abs() < 1e-6, "{v}");
    }
}
