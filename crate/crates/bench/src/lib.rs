//! Shared fixtures for the criterion benches.

use multisplit_core::problems::convection_diffusion_1d;
use multisplit_core::splittings::{hadjidimos_multisplitting, Multisplitting};
use multisplit_core::{C64, CMatrix, CVector};

/// Convection-diffusion system with a shifted-triangular multisplitting,
/// sized for wall-clock comparisons.
pub fn cd_fixture(n: usize) -> (CMatrix, Multisplitting, CVector) {
    let a = convection_diffusion_1d(n, 8.0).expect("drift inside the definite range");
    let (ms, _) = hadjidimos_multisplitting(&a, &[1.0, 1.0, 2.0, 2.0], None)
        .expect("shifts above their bounds");
    let b = CVector::from_element(n, C64::new(1.0, 0.0));
    (a, ms, b)
}
