//! Counter-based random number generation.
//!
//! Monte Carlo runs in this crate must be bit-reproducible no matter how the
//! paths are scheduled across threads. Instead of a stateful generator that
//! would have to be split per worker, every variate is a pure function of a
//! `(seed, path, step, component)` key: two splitmix64-style avalanche rounds
//! turn the key into uniforms, and Box–Muller turns the uniforms into a
//! standard normal. Running path 7 before path 3 therefore changes nothing.

/// splitmix64 finalizer; full-avalanche 64-bit mixer.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Collapse a (seed, path, step, component) key into one well-mixed word.
#[inline]
fn key(seed: u64, path: u64, step: u64, component: u64) -> u64 {
    let mut z = mix(seed ^ 0x9e37_79b9_7f4a_7c15);
    z = mix(z ^ path.wrapping_mul(0xd1b5_4a32_d192_ed03));
    z = mix(z ^ step.wrapping_mul(0xaef1_7502_108e_f2d9));
    mix(z ^ component.wrapping_mul(0x8664_f205_49c6_8d35))
}

/// Uniform in the open interval (0, 1); never returns 0 or 1 so logs are safe.
#[inline]
fn to_open_unit(word: u64) -> f64 {
    ((word >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

/// Standard normal variate for the given counter key.
///
/// `component` indexes independent draws within one (path, step) pair, e.g.
/// the coordinates of the two noise vectors fed to the oracle stepper.
#[inline]
pub fn normal(seed: u64, path: u64, step: u64, component: u64) -> f64 {
    let u1 = to_open_unit(key(seed, path, step, 2 * component));
    let u2 = to_open_unit(key(seed, path, step, 2 * component + 1));
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Uniform in (0, 1) for the given counter key.
#[inline]
pub fn uniform(seed: u64, path: u64, step: u64, component: u64) -> f64 {
    to_open_unit(key(seed, path, step, component))
}
