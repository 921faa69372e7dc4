#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use geophase::{CoherentParam, EntangledSpec, ModePair};
use proptest::prelude::*;

pub fn cp(rho: f64, phi: f64) -> CoherentParam {
    CoherentParam::new(rho, phi).unwrap()
}

pub fn label() -> impl Strategy<Value = CoherentParam> {
    (0.0..1.5f64, 0.0..TAU).prop_map(|(r, p)| cp(r, p))
}

/// General spec, kept away from the degenerate `N² → 0` corner.
pub fn general_spec() -> impl Strategy<Value = EntangledSpec> {
    (label(), label(), label(), label(), 0.0..=PI, 0.0..TAU)
        .prop_map(|(a, b, m, n, t, v)| EntangledSpec::new(a, b, m, n, t, v).unwrap())
        .prop_filter("normalizable", |s| geophase::Analytic::default().norm_squared(s).unwrap_or(0.0) > 1e-3)
}

pub fn antipodal_spec() -> impl Strategy<Value = EntangledSpec> {
    (label(), label(), 0.0..=PI, 0.0..TAU).prop_map(|(a, m, t, v)| EntangledSpec::antipodal(a, m, t, v).unwrap())
}

/// Mode angles in `(0, 4π]` with `τ = 1`.
pub fn modes() -> impl Strategy<Value = ModePair> {
    (1e-3..4.0 * PI, 0.0..4.0 * PI).prop_map(|(w1, w2)| ModePair::new(w1, w2, 1.0).unwrap())
}
