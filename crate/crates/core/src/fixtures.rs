use num_complex::Complex64 as C64;

use crate::state::StateVector;

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
