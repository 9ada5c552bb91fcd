//! Complete elliptic integrals by the arithmetic-geometric mean.

use std::f64::consts::PI;

const MAX_STEPS: usize = 64;

/// K(k) and E(k) for modulus 0 ≤ k < 1.
pub fn complete_elliptic(k: f64) -> (f64, f64) {
    debug_assert!((0.0..1.0).contains(&k));
    let mut a = 1.0;
    let mut b = (1.0 - k * k).sqrt();
    let mut c = k;
    let mut sum = 0.5 * c * c;
    let mut weight = 0.5;
    for _ in 0..MAX_STEPS {
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        let a_next = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = (a * b).sqrt();
        a = a_next;
        weight *= 2.0;
        sum += weight * c * c;
    }
    let k_int = PI / (2.0 * a);
    (k_int, k_int * (1.0 - sum))
}
