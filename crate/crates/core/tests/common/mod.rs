#![allow(dead_code)]

use num_complex::Complex64 as C64;
use qsp_core::synth::Algorithm;
use qsp_core::StateVector;

/// `(2/√23)·[1, 1, 1/√2, i/2, −1, −1/√2, 1/√2, 1]`.
pub fn golden_state() -> StateVector {
    let s = 2.0 / 23f64.sqrt();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = [
        C64::new(1., 0.),
        C64::new(1., 0.),
        C64::new(h, 0.),
        C64::new(0., 0.5),
        C64::new(-1., 0.),
        C64::new(-h, 0.),
        C64::new(h, 0.),
        C64::new(1., 0.),
    ];
    StateVector::new(v.iter().map(|a| a * s).collect()).unwrap()
}

pub const ALGOS: [Algorithm; 4] =
    [Algorithm::NoAncilla, Algorithm::OneAncilla, Algorithm::Full, Algorithm::Budget(4)];

/// Random product state with generic single-qubit factors.
pub fn product_state(n: usize, seed: u64) -> StateVector {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let qs: Vec<[C64; 2]> = (0..n)
        .map(|_| {
            let t: f64 = rng.gen_range(0.0..std::f64::consts::PI);
            let p: f64 = rng.gen_range(-3.0..3.0);
            let g: f64 = rng.gen_range(-3.0..3.0);
            [C64::from_polar((t / 2.0).cos(), g), C64::from_polar((t / 2.0).sin(), p)]
        })
        .collect();
    StateVector::product(&qs)
}
