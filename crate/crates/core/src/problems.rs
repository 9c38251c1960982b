//! Reproducible test-problem generators.
//!
//! Randomness comes from a 64-bit linear congruential generator with the
//! Knuth MMIX constants (`state <- a*state + c mod 2^64`,
//! `a = 6364136223846793005`, `c = 1442695040888963407`); uniform doubles
//! take the top 53 bits, Gaussians use the Box-Muller transform, and random
//! unitaries are assembled from explicitly sampled Givens rotations. The
//! whole pipeline is elementary IEEE arithmetic in a documented order, so
//! any implementation can reproduce the matrices bit for bit from a seed.

use serde::{Deserialize, Serialize};

use crate::certificates::BlockMatrix;
use crate::error::{CoreError, Result};
use crate::linalg::{CMatrix, HermitianMatrix, C64};

/// 64-bit linear congruential generator (Knuth MMIX constants).
#[derive(Debug, Clone)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    const MULTIPLIER: u64 = 6364136223846793005;
    const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        self.state
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `[lo, hi)`.
    pub fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard Gaussian via Box-Muller.
    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = loop {
            let u = self.next_f64();
            if u > 0.0 {
                break u;
            }
        };
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Complex Gaussian with independent real and imaginary parts.
    pub fn next_complex_gaussian(&mut self) -> C64 {
        C64::new(self.next_gaussian(), self.next_gaussian())
    }
}

/// Random unitary matrix: a diagonal of unit phases followed by one complex
/// Givens rotation per index pair, all with angles drawn from the stream.
pub fn random_unitary(n: usize, rng: &mut Lcg64) -> CMatrix {
    let mut q = nalgebra::DMatrix::<C64>::zeros(n, n);
    for i in 0..n {
        let phi = rng.next_range(0.0, 2.0 * std::f64::consts::PI);
        q[(i, i)] = C64::from_polar(1.0, phi);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let theta = rng.next_range(0.0, 2.0 * std::f64::consts::PI);
            let psi = rng.next_range(0.0, 2.0 * std::f64::consts::PI);
            let (s, c) = theta.sin_cos();
            let z = C64::from_polar(s, psi);
            // Right-multiply by the rotation acting on columns (i, j).
            for row in 0..n {
                let qi = q[(row, i)];
                let qj = q[(row, j)];
                q[(row, i)] = qi * c + qj * z;
                q[(row, j)] = -qi * z.conj() + qj * c;
            }
        }
    }
    CMatrix::new(q).expect("rotations preserve finiteness")
}

/// Random Hermitian matrix `Q diag(lambda) Q*` with eigenvalues uniform in
/// `[lo, hi]`, exactly symmetrized.
pub fn random_hermitian_with_spectrum(
    n: usize,
    lo: f64,
    hi: f64,
    rng: &mut Lcg64,
) -> HermitianMatrix {
    let q = random_unitary(n, rng);
    let lambda: Vec<f64> = (0..n).map(|_| rng.next_range(lo, hi)).collect();
    let scaled = q.col_scaled(&lambda);
    HermitianMatrix::symmetrize(&(&scaled * &q.adjoint()))
}

/// Random skew-Hermitian matrix of (approximately) unit spectral norm; the
/// normalization uses 128 power-iteration steps on `-W^2`, which is
/// deterministic and elementary.
pub fn random_skew_unit(n: usize, rng: &mut Lcg64) -> CMatrix {
    let z = nalgebra::DMatrix::from_fn(n, n, |_, _| rng.next_complex_gaussian());
    let w = crate::linalg::skew_part(&CMatrix::new(z).expect("gaussian entries are finite"));
    if n == 0 {
        return w;
    }
    // Power iteration on W* W = -W^2.
    let gram = &w.adjoint() * &w;
    let mut v = nalgebra::DVector::from_element(n, C64::new(1.0, 0.0));
    v /= C64::new(v.norm(), 0.0);
    let mut sigma_sq = 0.0;
    for _ in 0..128 {
        let next = gram.as_dmatrix() * &v;
        sigma_sq = next.norm();
        if sigma_sq == 0.0 {
            return w;
        }
        v = next / C64::new(sigma_sq, 0.0);
    }
    w.scale_re(1.0 / sigma_sq.sqrt())
}

/// Generator families for reproducible experiments.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum ProblemSpec {
    #[serde(rename = "convection-diffusion-1d")]
    ConvectionDiffusion1d { n: usize, drift: f64 },
    #[serde(rename = "convection-diffusion-2d")]
    ConvectionDiffusion2d { nx: usize, ny: usize, drift: f64 },
    #[serde(rename = "random-npd")]
    RandomNpd { n: usize, skew_scale: f64, seed: u64 },
    #[serde(rename = "block-structured")]
    BlockStructured { m: usize, k: usize, off_scale: f64, seed: u64 },
}

impl ProblemSpec {
    /// Generates the matrix (block matrices are flattened).
    pub fn generate(&self) -> Result<CMatrix> {
        match *self {
            Self::ConvectionDiffusion1d { n, drift } => convection_diffusion_1d(n, drift),
            Self::ConvectionDiffusion2d { nx, ny, drift } => {
                convection_diffusion_2d(nx, ny, drift)
            }
            Self::RandomNpd {
                n,
                skew_scale,
                seed,
            } => Ok(random_npd(n, skew_scale, seed)),
            Self::BlockStructured {
                m,
                k,
                off_scale,
                seed,
            } => Ok(block_structured(m, k, off_scale, seed).flatten()),
        }
    }
}

/// Centered-difference discretization of `-u'' + q u'` on the unit interval
/// with homogeneous Dirichlet boundaries: the stencil
/// `(-1 - d, 2, -1 + d) / h^2` with `d = q h / 2` and `h = 1/(n+1)`.
/// Requires `|d| < 1` so the Hermitian part stays definite.
pub fn convection_diffusion_1d(n: usize, drift: f64) -> Result<CMatrix> {
    if n < 2 {
        return Err(CoreError::GeneratorParameter {
            reason: format!("grid size must be at least 2, got {n}"),
        });
    }
    let h = 1.0 / (n as f64 + 1.0);
    let delta = drift * h / 2.0;
    if delta.abs() >= 1.0 {
        return Err(CoreError::GeneratorParameter {
            reason: format!("|q*h/2| = {} must be below 1", delta.abs()),
        });
    }
    let inv_h2 = 1.0 / (h * h);
    CMatrix::from_fn(n, |i, j| {
        let v = if i == j {
            2.0
        } else if j + 1 == i {
            -1.0 - delta
        } else if i + 1 == j {
            -1.0 + delta
        } else {
            0.0
        };
        C64::new(v * inv_h2, 0.0)
    })
}

/// Five-point discretization of `-Lap(u) + q (u_x + u_y)` on the unit
/// square with Dirichlet boundaries; both direction stencils follow the 1-D
/// pattern and both `|q h/2|` bounds must hold.
pub fn convection_diffusion_2d(nx: usize, ny: usize, drift: f64) -> Result<CMatrix> {
    if nx < 2 || ny < 2 {
        return Err(CoreError::GeneratorParameter {
            reason: format!("grid sizes must be at least 2, got {nx}x{ny}"),
        });
    }
    let hx = 1.0 / (nx as f64 + 1.0);
    let hy = 1.0 / (ny as f64 + 1.0);
    let dx = drift * hx / 2.0;
    let dy = drift * hy / 2.0;
    if dx.abs() >= 1.0 || dy.abs() >= 1.0 {
        return Err(CoreError::GeneratorParameter {
            reason: format!(
                "drift outside the definite range: |q*hx/2| = {}, |q*hy/2| = {}",
                dx.abs(),
                dy.abs()
            ),
        });
    }
    let ihx2 = 1.0 / (hx * hx);
    let ihy2 = 1.0 / (hy * hy);
    let n = nx * ny;
    CMatrix::from_fn(n, |p, q| {
        let (ix, iy) = (p % nx, p / nx);
        let (jx, jy) = (q % nx, q / nx);
        let v = if p == q {
            2.0 * ihx2 + 2.0 * ihy2
        } else if iy == jy && jx + 1 == ix {
            (-1.0 - dx) * ihx2
        } else if iy == jy && ix + 1 == jx {
            (-1.0 + dx) * ihx2
        } else if ix == jx && jy + 1 == iy {
            (-1.0 - dy) * ihy2
        } else if ix == jx && iy + 1 == jy {
            (-1.0 + dy) * ihy2
        } else {
            0.0
        };
        C64::new(v, 0.0)
    })
}

/// Random non-Hermitian positive definite matrix
/// `A = Q diag(lambda) Q* + s W` with `lambda` uniform in `[1, 10]`, `Q`
/// random unitary and `W` skew-Hermitian of unit spectral norm. The
/// Hermitian part equals `Q diag(lambda) Q*`, so definiteness holds by
/// construction for every `s >= 0`.
pub fn random_npd(n: usize, skew_scale: f64, seed: u64) -> CMatrix {
    let mut rng = Lcg64::new(seed);
    let h = random_hermitian_with_spectrum(n, 1.0, 10.0, &mut rng);
    if skew_scale == 0.0 {
        return h.to_cmatrix();
    }
    let w = random_skew_unit(n, &mut rng);
    &h.to_cmatrix() + &w.scale_re(skew_scale)
}

/// Random block matrix with Hermitian positive definite diagonal blocks
/// (`lambda_min >= 1`) and normal off-diagonal blocks of spectral norm at
/// most `off_scale`. For `off_scale < 1/(m-1)` the result is extended-H by
/// diagonal dominance of the comparison matrix.
pub fn block_structured(m: usize, k: usize, off_scale: f64, seed: u64) -> BlockMatrix {
    let mut rng = Lcg64::new(seed);
    let mut blocks = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            if i == j {
                blocks.push(random_hermitian_with_spectrum(k, 1.0, 3.0, &mut rng).to_cmatrix());
            } else if off_scale == 0.0 {
                blocks.push(CMatrix::zeros(k));
            } else {
                // Normal block: V diag(d) V* with |d| <= off_scale.
                let v = random_unitary(k, &mut rng);
                let d: Vec<C64> = (0..k)
                    .map(|_| {
                        let r = off_scale * rng.next_f64();
                        let phi = rng.next_range(0.0, 2.0 * std::f64::consts::PI);
                        C64::from_polar(r, phi)
                    })
                    .collect();
                let scaled = &v * &CMatrix::from_diagonal(&d);
                blocks.push(&scaled * &v.adjoint());
            }
        }
    }
    BlockMatrix::from_blocks(m, k, blocks).expect("generator produces consistent blocks")
}
