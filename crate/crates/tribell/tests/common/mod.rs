//! Shared helpers for the integration suites: seeded randomness, Haar
//! states, local unitaries, and independent oracle implementations that
//! deliberately avoid the library's computational shortcuts.

#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tribell::states::{DensityMatrix, SpinState};
use tribell::{AxisSet, Mat3, Vec3};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal via Box-Muller.
pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng))
}

/// Haar-random pure three-qubit state: normalized vector of independent
/// standard complex Gaussian amplitudes.
pub fn haar_state(rng: &mut ChaCha8Rng) -> SpinState {
    let mut amps = [Complex64::ZERO; 8];
    for a in amps.iter_mut() {
        *a = complex_gaussian(rng);
    }
    SpinState::from_amplitudes(amps).expect("Gaussian vector never vanishes")
}

pub fn random_unit_vec3(rng: &mut ChaCha8Rng) -> Vec3 {
    let z: f64 = 2.0 * rng.random::<f64>() - 1.0;
    let phi: f64 = 2.0 * std::f64::consts::PI * rng.random::<f64>();
    let r = (1.0 - z * z).max(0.0).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

/// Haar-random SU(2) matrix.
pub fn random_su2(rng: &mut ChaCha8Rng) -> [[Complex64; 2]; 2] {
    loop {
        let a = complex_gaussian(rng);
        let b = complex_gaussian(rng);
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if n > 1e-6 {
            let a = a / n;
            let b = b / n;
            return [[a, b], [-b.conj(), a.conj()]];
        }
    }
}

const PAULI: [[[Complex64; 2]; 2]; 3] = [
    [
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    ],
    [
        [Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
        [Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
    ],
    [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
    ],
];

fn mul2(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut c = [[Complex64::ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for (k, bk) in b.iter().enumerate() {
                c[i][j] += a[i][k] * bk[j];
            }
        }
    }
    c
}

fn dagger2(a: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

/// Rotation matrix R with U^dag sigma_i U = sum_j R_ij sigma_j, so that the
/// correlation tensor of U|psi> equals the original tensor contracted with R.
pub fn su2_to_so3(u: &[[Complex64; 2]; 2]) -> Mat3 {
    let ud = dagger2(u);
    let mut r = [[0.0; 3]; 3];
    for (i, row) in r.iter_mut().enumerate() {
        let m = mul2(&mul2(&ud, &PAULI[i]), u);
        for (j, x) in row.iter_mut().enumerate() {
            let t = mul2(&m, &PAULI[j]);
            let tr = t[0][0] + t[1][1];
            *x = 0.5 * tr.re;
        }
    }
    r
}

pub type CMat4 = [[Complex64; 4]; 4];

pub fn cmat4_from_density(rho: &DensityMatrix) -> CMat4 {
    assert_eq!(rho.dim(), 4);
    let mut m = [[Complex64::ZERO; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = rho.get(i, j);
        }
    }
    m
}

pub fn cmat4_mul(a: &CMat4, b: &CMat4) -> CMat4 {
    let mut c = [[Complex64::ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for (k, bk) in b.iter().enumerate() {
                c[i][j] += a[i][k] * bk[j];
            }
        }
    }
    c
}

/// Eigen-decomposition of a 4x4 Hermitian matrix by cyclic complex Jacobi
/// rotations: returns eigenvalues (decreasing) and the diagonalizing error.
pub fn hermitian_eigen4(h: &CMat4) -> ([f64; 4], CMat4) {
    let mut a = *h;
    let mut v: CMat4 = [[Complex64::ZERO; 4]; 4];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = Complex64::ONE;
    }
    for _sweep in 0..128 {
        let mut off = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    off += a[i][j].norm_sqr();
                }
            }
        }
        if off < 1e-28 {
            break;
        }
        for p in 0..4 {
            for q in (p + 1)..4 {
                let h_pq = a[p][q];
                if h_pq.norm() < 1e-300 {
                    continue;
                }
                let alpha = h_pq.arg();
                let tau = (a[q][q].re - a[p][p].re) / (2.0 * h_pq.norm());
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let e_ia = Complex64::from_polar(1.0, alpha);
                // J = I with J[pp] = c, J[pq] = s e^{i alpha},
                // J[qp] = -s e^{-i alpha}, J[qq] = c; apply a <- J^dag a J
                let rot_cols = |m: &mut CMat4| {
                    for k in 0..4 {
                        let xp = m[k][p];
                        let xq = m[k][q];
                        m[k][p] = xp * c - xq * s * e_ia.conj();
                        m[k][q] = xp * s * e_ia + xq * c;
                    }
                };
                rot_cols(&mut a);
                // rows with J^dag
                for k in 0..4 {
                    let xp = a[p][k];
                    let xq = a[q][k];
                    a[p][k] = xp * c - xq * s * e_ia;
                    a[q][k] = xp * s * e_ia.conj() + xq * c;
                }
                rot_cols(&mut v);
            }
        }
    }
    let mut pairs: Vec<(f64, usize)> = (0..4).map(|i| (a[i][i].re, i)).collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    let vals = [pairs[0].0, pairs[1].0, pairs[2].0, pairs[3].0];
    let mut vecs = [[Complex64::ZERO; 4]; 4];
    for (col, (_, src)) in pairs.iter().enumerate() {
        for row in 0..4 {
            vecs[row][col] = v[row][*src];
        }
    }
    (vals, vecs)
}

/// Textbook Wootters concurrence: eigenvalues of sqrt(sqrt(rho) rho~
/// sqrt(rho)), entirely via Hermitian eigen-decompositions. Serves as the
/// independent cross-check of the trace-invariant implementation.
pub fn wootters_definition_oracle(rho: &DensityMatrix) -> f64 {
    let m = cmat4_from_density(rho);
    let (vals, vecs) = hermitian_eigen4(&m);
    // sqrt(rho) = V sqrt(D) V^dag
    let mut sqrt_rho = [[Complex64::ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for (k, lam) in vals.iter().enumerate() {
                let s = lam.max(0.0).sqrt();
                sqrt_rho[i][j] += vecs[i][k] * s * vecs[j][k].conj();
            }
        }
    }
    // rho~ = F rho* F with F the antidiagonal (-1, 1, 1, -1)
    const SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    let mut tilde = [[Complex64::ZERO; 4]; 4];
    for (i, row) in tilde.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = SIGN[i] * SIGN[j] * m[3 - i][3 - j].conj();
        }
    }
    let inner = cmat4_mul(&cmat4_mul(&sqrt_rho, &tilde), &sqrt_rho);
    let (ev, _) = hermitian_eigen4(&inner);
    let eta: Vec<f64> = ev.iter().map(|l| l.max(0.0).sqrt()).collect();
    (eta[0] - eta[1] - eta[2] - eta[3]).max(0.0)
}

/// Uniformly random measurement axes for the given observable shape.
pub fn random_axes(rng: &mut ChaCha8Rng, na: usize, nb: usize, nc: usize) -> AxisSet {
    AxisSet {
        a_axes: (0..na).map(|_| random_unit_vec3(rng)).collect(),
        b_axes: (0..nb).map(|_| random_unit_vec3(rng)).collect(),
        c_axes: (0..nc).map(|_| random_unit_vec3(rng)).collect(),
    }
}

pub fn approx(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
