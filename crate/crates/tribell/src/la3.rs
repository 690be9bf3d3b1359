//! Small fixed-size real linear algebra: 3-vectors and symmetric 3x3
//! eigenproblems, used by the measurement-axis optimizers.

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn scale(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn add(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Unit vector in the direction of `a`, or `None` when |a| < `eps`.
pub fn normalized(a: &Vec3, eps: f64) -> Option<Vec3> {
    let n = norm(a);
    if n < eps {
        None
    } else {
        Some(scale(a, 1.0 / n))
    }
}

pub fn matvec(m: &Mat3, v: &Vec3) -> Vec3 {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

/// Gram matrix M^T M of a (not necessarily symmetric) 3x3 matrix.
pub fn gram(m: &Mat3) -> Mat3 {
    let mut g = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = m[0][i] * m[0][j] + m[1][i] * m[1][j] + m[2][i] * m[2][j];
        }
    }
    g
}

/// Some unit vector orthogonal to `v` (|v| = 1 assumed).
pub fn any_orthogonal(v: &Vec3) -> Vec3 {
    let trial = if v[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let c = cross(v, &trial);
    normalized(&c, 1e-300).unwrap_or([0.0, 0.0, 1.0])
}

/// Eigenvalues of a symmetric 3x3 matrix, sorted in decreasing order.
///
/// Uses the trigonometric closed form of the characteristic polynomial and
/// falls back to cyclic Jacobi sweeps when the cubic discriminant is too
/// close to zero for the closed form to be trustworthy.
pub fn sym_eigenvalues(m: &Mat3) -> [f64; 3] {
    match closed_form_eigenvalues(m) {
        Some(e) => e,
        None => {
            let (e, _) = jacobi_eigen(m);
            e
        }
    }
}

/// Eigenvalues (decreasing) and matching orthonormal eigenvectors.
pub fn sym_eigen(m: &Mat3) -> ([f64; 3], [Vec3; 3]) {
    if let Some(vals) = closed_form_eigenvalues(m) {
        if let Some(vecs) = eigenvectors_for(m, &vals) {
            return (vals, vecs);
        }
    }
    jacobi_eigen(m)
}

const DISC_EPS: f64 = 1e-14;

fn closed_form_eigenvalues(m: &Mat3) -> Option<[f64; 3]> {
    let p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    let q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    let p2 = (m[0][0] - q).powi(2) + (m[1][1] - q).powi(2) + (m[2][2] - q).powi(2) + 2.0 * p1;
    if p2 < 1e-30 {
        // multiple of the identity
        return Some([q, q, q]);
    }
    let p = (p2 / 6.0).sqrt();
    let mut b = *m;
    for (i, row) in b.iter_mut().enumerate() {
        row[i] -= q;
        for x in row.iter_mut() {
            *x /= p;
        }
    }
    let r = det3(&b) / 2.0;
    // r = +-1 signals a repeated root; hand over to Jacobi there.
    if 1.0 - r.abs() < DISC_EPS {
        return None;
    }
    let phi = r.clamp(-1.0, 1.0).acos() / 3.0;
    let e0 = q + 2.0 * p * phi.cos();
    let e2 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let e1 = 3.0 * q - e0 - e2;
    let mut e = [e0, e1, e2];
    e.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Some(e)
}

fn det3(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Eigenvectors via products of shifted matrices; valid only when the
/// eigenvalues are well separated (the closed-form branch guarantees that).
fn eigenvectors_for(m: &Mat3, vals: &[f64; 3]) -> Option<[Vec3; 3]> {
    let scale_ref = vals.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let shifted = |lambda: f64| -> Mat3 {
        let mut s = *m;
        for (i, row) in s.iter_mut().enumerate() {
            row[i] -= lambda;
        }
        s
    };
    let mut vecs = [[0.0; 3]; 3];
    for k in 0..3 {
        let a = shifted(vals[(k + 1) % 3]);
        let b = shifted(vals[(k + 2) % 3]);
        // columns of a*b span the eigenspace of vals[k]
        let mut best = [0.0; 3];
        let mut best_n = 0.0;
        for col in 0..3 {
            let v = matvec(&a, &[b[0][col], b[1][col], b[2][col]]);
            let n = norm(&v);
            if n > best_n {
                best_n = n;
                best = v;
            }
        }
        if best_n < 1e-10 * scale_ref.max(1e-300) {
            return None;
        }
        vecs[k] = scale(&best, 1.0 / best_n);
        // residual check guards against near-degenerate spectra
        let r = sub(&matvec(m, &vecs[k]), &scale(&vecs[k], vals[k]));
        if norm(&r) > 1e-8 * scale_ref.max(1.0) {
            return None;
        }
    }
    // orthonormalize (numerical drift only; eigenvalues are distinct here)
    let v0 = vecs[0];
    let mut v1 = sub(&vecs[1], &scale(&v0, dot(&vecs[1], &v0)));
    v1 = normalized(&v1, 1e-12)?;
    let v2 = cross(&v0, &v1);
    Some([v0, v1, v2])
}

/// Cyclic Jacobi diagonalization; robust for degenerate spectra.
fn jacobi_eigen(m: &Mat3) -> ([f64; 3], [Vec3; 3]) {
    let mut a = *m;
    let mut v: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let scale_ref = a
        .iter()
        .flatten()
        .fold(0.0f64, |acc, x| acc.max(x.abs()))
        .max(1e-300);
    for _sweep in 0..64 {
        let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if off < (1e-15 * scale_ref).powi(2) {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            if a[p][q].abs() < 1e-300 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            // a <- J^T a J with J the (p,q) Givens rotation
            for k in 0..3 {
                let xp = a[p][k];
                let xq = a[q][k];
                a[p][k] = c * xp - s * xq;
                a[q][k] = s * xp + c * xq;
            }
            for k in 0..3 {
                let xp = a[k][p];
                let xq = a[k][q];
                a[k][p] = c * xp - s * xq;
                a[k][q] = s * xp + c * xq;
            }
            // accumulate v <- v J
            for k in 0..3 {
                let xp = v[k][p];
                let xq = v[k][q];
                v[k][p] = c * xp - s * xq;
                v[k][q] = s * xp + c * xq;
            }
        }
    }
    let mut pairs: Vec<(f64, Vec3)> = (0..3)
        .map(|i| (a[i][i], [v[0][i], v[1][i], v[2][i]]))
        .collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    (
        [pairs[0].0, pairs[1].0, pairs[2].0],
        [pairs[0].1, pairs[1].1, pairs[2].1],
    )
}
