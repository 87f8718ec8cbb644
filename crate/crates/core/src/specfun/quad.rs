//! Adaptive Gauss–Kronrod quadrature (15-point Kronrod / 7-point Gauss pair)
//! over real intervals with complex-valued integrands.

use num_complex::Complex64;

// Nodes and weights of the 15-point Kronrod rule; Gauss nodes are the odd
// indices plus the center.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_7,
    0.949_107_912_342_758_524_526_189_7,
    0.864_864_423_359_769_072_789_712_8,
    0.741_531_185_599_394_439_863_864_8,
    0.586_087_235_467_691_130_294_144_8,
    0.405_845_151_377_397_166_906_606_4,
    0.207_784_955_007_898_467_600_689_4,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_0,
    0.063_092_092_629_978_553_290_700_7,
    0.104_790_010_322_250_183_839_876_3,
    0.140_653_259_715_525_918_745_189_6,
    0.169_004_726_639_267_902_826_583_4,
    0.190_350_578_064_785_409_913_256_4,
    0.204_432_940_075_298_892_414_162_0,
    0.209_482_141_084_727_828_012_999_2,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_4,
    0.279_705_391_489_276_667_901_467_8,
    0.381_830_050_505_118_944_950_369_8,
    0.417_959_183_673_469_387_755_102_0,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub abs_err: f64,
    pub converged: bool,
}

fn gk15(f: &mut impl FnMut(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let fsum = f(c - dx) + f(c + dx);
        resk += WGK[i] * fsum;
        if i % 2 == 1 {
            resg += WG[i / 2] * fsum;
        }
    }
    let value = resk * h;
    let err = ((resk - resg) * h).norm();
    (value, err)
}

/// Integrates `f` over `[a, b]` by adaptive bisection until the summed
/// Kronrod error estimate is below `rel_tol * |I| + abs_floor`.
pub fn integrate(
    mut f: impl FnMut(f64) -> Complex64,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_floor: f64,
) -> QuadResult {
    assert!(a.is_finite() && b.is_finite() && a < b, "bad interval [{a}, {b}]");
    // Seed densely so a localized feature inside a wide interval registers on at
    // least one rule.  Features have to be visible at this resolution: anything
    // that falls entirely between the seed nodes (width well under 1/32 of the
    // interval) produces a spuriously small error estimate.  Callers are expected
    // to choose integration windows that keep the mass at a representable scale.
    let mut panels: Vec<(f64, f64, Complex64, f64)> = Vec::new();
    let seeds = 32;
    for i in 0..seeds {
        let lo = a + (b - a) * i as f64 / seeds as f64;
        let hi = a + (b - a) * (i + 1) as f64 / seeds as f64;
        let (v, e) = gk15(&mut f, lo, hi);
        panels.push((lo, hi, v, e));
    }
    let mut rounds = 0;
    loop {
        let total: Complex64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        let target = rel_tol * total.norm() + abs_floor;
        if err <= target {
            return QuadResult { value: total, abs_err: err, converged: true };
        }
        if rounds > 60 || panels.len() > 8000 {
            return QuadResult { value: total, abs_err: err, converged: false };
        }
        // Split every panel whose share of the error exceeds its share of the target.
        let per_panel = target / panels.len() as f64;
        let before = panels.len();
        let mut next = Vec::with_capacity(panels.len() * 2);
        for (lo, hi, v, e) in panels {
            if e > per_panel && hi - lo > f64::EPSILON * (1.0 + lo.abs()) {
                let mid = 0.5 * (lo + hi);
                let (v1, e1) = gk15(&mut f, lo, mid);
                let (v2, e2) = gk15(&mut f, mid, hi);
                next.push((lo, mid, v1, e1));
                next.push((mid, hi, v2, e2));
            } else {
                next.push((lo, hi, v, e));
            }
        }
        panels = next;
        // Never stall: if the per-panel rule split nothing, bisect the worst panel.
        if panels.len() == before {
            let worst = panels
                .iter()
                .enumerate()
                .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
                .map(|(i, _)| i)
                .unwrap();
            let (lo, hi, _, _) = panels[worst];
            if hi - lo > f64::EPSILON * (1.0 + lo.abs()) {
                let mid = 0.5 * (lo + hi);
                let (v1, e1) = gk15(&mut f, lo, mid);
                let (v2, e2) = gk15(&mut f, mid, hi);
                panels[worst] = (lo, mid, v1, e1);
                panels.insert(worst + 1, (mid, hi, v2, e2));
            } else {
                let total: Complex64 = panels.iter().map(|p| p.2).sum();
                let err: f64 = panels.iter().map(|p| p.3).sum();
                return QuadResult { value: total, abs_err: err, converged: false };
            }
        }
        rounds += 1;
    }
}

pub fn integrate_real(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_floor: f64,
) -> QuadResult {
    integrate(|t| Complex64::new(f(t), 0.0), a, b, rel_tol, abs_floor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate_real(|t| 3.0 * t * t, 0.0, 2.0, 1e-12, 0.0);
        assert!((r.value.re - 8.0).abs() < 1e-12);
        assert!(r.converged);
    }

    #[test]
    fn narrow_peak_in_wide_interval() {
        // Gaussian of width 0.5 centered at 7 inside [0, 1000]: three orders of
        // magnitude below the interval scale, but visible at seed resolution, so
        // adaptive refinement has to chase it down locally.
        let r = integrate_real(
            |t| (-((t - 7.0) / 0.5).powi(2) / 2.0).exp(),
            0.0,
            1000.0,
            1e-10,
            1e-300,
        );
        let exact = (2.0 * std::f64::consts::PI).sqrt() * 0.5;
        assert!((r.value.re / exact - 1.0).abs() < 1e-8, "got {}", r.value.re);
        assert!(r.converged);
    }

    #[test]
    fn oscillatory_complex() {
        // integral of e^{i t} over [0, pi] = 2i / ... exact: (e^{i pi} - 1)/i = 2i.
        let r = integrate(
            |t| Complex64::new(0.0, t).exp(),
            0.0,
            std::f64::consts::PI,
            1e-12,
            0.0,
        );
        assert!((r.value - Complex64::new(0.0, 2.0)).norm() < 1e-10);
    }
}
