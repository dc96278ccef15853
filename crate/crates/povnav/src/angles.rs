//! Angle normalization shared across the crate.

use std::f64::consts::PI;

/// Wraps an angle into `[-pi, pi)`.
pub fn wrap_to_pi(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut a = (theta + PI).rem_euclid(two_pi);
    if a < 0.0 {
        a += two_pi;
    }
    a - PI
}
