#![allow(dead_code)]

//! Independent numerical oracles shared by the integration tests.

use std::f64::consts::PI;

// 15-point Kronrod nodes on [-1, 1] with embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let pair = f(c - x) + f(c + x);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod quadrature on a finite interval.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth == 0 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, tol / 2.0, depth - 1) + rec(f, m, b, tol / 2.0, depth - 1)
    }
    rec(f, a, b, tol, 60)
}

/// `∫_c^∞ f` through `x = c + s·u/(1−u)`.
pub fn integrate_upper_tail<F: Fn(f64) -> f64>(f: &F, c: f64, s: f64, tol: f64) -> f64 {
    let g = |u: f64| {
        if u >= 1.0 {
            return 0.0;
        }
        let x = c + s * u / (1.0 - u);
        f(x) * s / ((1.0 - u) * (1.0 - u))
    };
    integrate(&g, 0.0, 1.0, tol)
}

/// `∫_{−∞}^c f` through `x = c − s·u/(1−u)`.
pub fn integrate_lower_tail<F: Fn(f64) -> f64>(f: &F, c: f64, s: f64, tol: f64) -> f64 {
    integrate_upper_tail(&|x: f64| f(2.0 * c - x), c, s, tol)
}

/// Direct evaluation of `|Σ x_n h_n e^{−2πi f Δt n}|²` at an arbitrary frequency.
pub fn dft_power(x: &[f64], window: &[f64], freq_hz: f64, sample_rate: f64) -> f64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (n, (v, h)) in x.iter().zip(window).enumerate() {
        let arg = -2.0 * PI * freq_hz * n as f64 / sample_rate;
        re += v * h * arg.cos();
        im += v * h * arg.sin();
    }
    re * re + im * im
}
