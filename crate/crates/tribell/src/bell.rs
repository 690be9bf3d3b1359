//! Bell-type observables on three-qubit correlation tensors: evaluation of
//! the Mermin, Svetlichny and tight 4x4x2 functionals for explicit
//! measurement axes, and their maximization over axes.
//!
//! Mermin and Svetlichny are maximized by alternating analytic alignment:
//! the expectation value is linear in each party's pair of axis vectors, so
//! each party update aligns its axes with the exact coefficient vectors,
//! which makes every step monotone. The 4x4x2 observable is reduced
//! analytically to the two largest eigenvalues of a pair of 3x3 Gram
//! matrices built from an orthonormal frame (C+, C-); only the three angles
//! parameterizing that frame are optimized numerically (coarse grid plus
//! compass pattern search).

use serde::Serialize;
use thiserror::Error;

use crate::la3::{
    add, any_orthogonal, dot, gram, matvec, norm, normalized, scale, sub, sym_eigen,
    sym_eigenvalues, Mat3, Vec3,
};
use crate::states::{CorrelationTensor, QubitPermutation};

pub const UNIT_AXIS_EPS: f64 = 1e-12;
pub const DEGENERATE_FRAME_EPS: f64 = 1e-12;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum BellError {
    #[error("axis counts do not match the observable")]
    AxisCountMismatch,
    #[error("axis vector is not unit length")]
    NonUnitAxis,
    #[error("degenerate frame: an axis normalization denominator vanishes")]
    DegenerateFrame,
}

/// Which Bell functional to evaluate or optimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ObservableKind {
    Mermin,
    Svetlichny,
    B442,
    B442Sym,
}

/// Measurement axes per party: 2 or 4 unit vectors for A and B, 2 for C.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisSet {
    #[serde(rename = "A")]
    pub a_axes: Vec<Vec3>,
    #[serde(rename = "B")]
    pub b_axes: Vec<Vec3>,
    #[serde(rename = "C")]
    pub c_axes: Vec<Vec3>,
}

impl AxisSet {
    /// Checks counts against the observable and unit norms of every axis.
    pub fn validate(&self, kind: ObservableKind) -> Result<(), BellError> {
        let (na, nb, nc) = match kind {
            ObservableKind::Mermin | ObservableKind::Svetlichny => (2, 2, 2),
            ObservableKind::B442 => (4, 4, 2),
            // the symmetric extension is an optimizer-level construct
            ObservableKind::B442Sym => return Err(BellError::AxisCountMismatch),
        };
        if self.a_axes.len() != na || self.b_axes.len() != nb || self.c_axes.len() != nc {
            return Err(BellError::AxisCountMismatch);
        }
        for v in self
            .a_axes
            .iter()
            .chain(self.b_axes.iter())
            .chain(self.c_axes.iter())
        {
            if (norm(v) - 1.0).abs() > UNIT_AXIS_EPS {
                return Err(BellError::NonUnitAxis);
            }
        }
        Ok(())
    }
}

/// Which of the three role assignments of the 4x4x2 observable won the
/// symmetric maximization ("442" keeps two axes on C, "424" on B, "244" on A).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RoleAssignment {
    #[serde(rename = "442")]
    B442,
    #[serde(rename = "424")]
    B424,
    #[serde(rename = "244")]
    B244,
}

impl RoleAssignment {
    /// Index relabeling that brings the assignment to the canonical 4x4x2
    /// form (four axes on the first two slots, two on the last).
    pub fn permutation(self) -> QubitPermutation {
        match self {
            RoleAssignment::B442 => QubitPermutation::IDENTITY,
            RoleAssignment::B424 => QubitPermutation::SWAP_BC,
            RoleAssignment::B244 => QubitPermutation::SWAP_AC,
        }
    }
}

/// Outcome of an axis optimization. The reported value is realized by the
/// reported axes: `evaluate` on them reproduces `value` to 1e-9. For the
/// symmetric 4x4x2 maximization the axes apply to the tensor permuted by
/// `role.permutation()`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptResult {
    pub value: f64,
    pub axes: AxisSet,
    pub restarts_used: usize,
    pub converged: bool,
    /// Frame angles (theta, phi1, phi2) of the 4x4x2 optimum.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub internal_angles: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub role: Option<RoleAssignment>,
}

/// Multistart and convergence controls for the axis optimizers.
///
/// The first [`COVARIANT_RESTARTS`] starting points are built from the
/// tensor's own principal directions; the rest come from a seeded
/// low-discrepancy sequence expressed in a frame that also rotates with the
/// tensor. Both families are equivariant, so the optimized value is
/// frame-independent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizerSettings {
    pub restarts: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            restarts: 320,
            tol: 1e-12,
            seed: 0,
        }
    }
}

/// Size of the tensor-derived multistart family: 6 axis pairs for A times
/// 6 for C times 4 relative sign classes.
pub const COVARIANT_RESTARTS: usize = 144;

type Block = [[[f64; 3]; 3]; 3];

// sum_jk T_ijk b_j c_k
fn contract_bc(t: &Block, b: &Vec3, c: &Vec3) -> Vec3 {
    let mut out = [0.0; 3];
    for (i, o) in out.iter_mut().enumerate() {
        let mut s = 0.0;
        for j in 0..3 {
            for k in 0..3 {
                s += t[i][j][k] * b[j] * c[k];
            }
        }
        *o = s;
    }
    out
}

// sum_ik T_ijk a_i c_k
fn contract_ac(t: &Block, a: &Vec3, c: &Vec3) -> Vec3 {
    let mut out = [0.0; 3];
    for (j, o) in out.iter_mut().enumerate() {
        let mut s = 0.0;
        for i in 0..3 {
            for k in 0..3 {
                s += t[i][j][k] * a[i] * c[k];
            }
        }
        *o = s;
    }
    out
}

// sum_ij T_ijk a_i b_j
fn contract_ab(t: &Block, a: &Vec3, b: &Vec3) -> Vec3 {
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += t[i][j][k] * a[i] * b[j];
            }
        }
        *o = s;
    }
    out
}

/// Expectation value of the observable for explicit measurement axes:
/// the contraction of the observable's coefficient tensor with the
/// pure-Pauli block of `t`.
pub fn evaluate(
    t: &CorrelationTensor,
    axes: &AxisSet,
    kind: ObservableKind,
) -> Result<f64, BellError> {
    axes.validate(kind)?;
    let block = t.xyz_block();
    Ok(evaluate_block(&block, axes, kind))
}

fn evaluate_block(t: &Block, axes: &AxisSet, kind: ObservableKind) -> f64 {
    let a = &axes.a_axes;
    let b = &axes.b_axes;
    let c = &axes.c_axes;
    match kind {
        ObservableKind::Mermin => {
            let d1 = add(&contract_bc(t, &b[0], &c[1]), &contract_bc(t, &b[1], &c[0]));
            let d2 = sub(&contract_bc(t, &b[0], &c[0]), &contract_bc(t, &b[1], &c[1]));
            dot(&a[0], &d1) + dot(&a[1], &d2)
        }
        ObservableKind::Svetlichny => {
            let (d1, d2) = svetlichny_a_coefficients(t, &b[0], &b[1], &c[0], &c[1]);
            dot(&a[0], &d1) + dot(&a[1], &d2)
        }
        ObservableKind::B442 => {
            let cp = add(&c[0], &c[1]);
            let cm = sub(&c[0], &c[1]);
            dot(&a[0], &contract_bc(t, &add(&b[0], &b[1]), &cp))
                + dot(&a[1], &contract_bc(t, &sub(&b[0], &b[1]), &cp))
                + dot(&a[2], &contract_bc(t, &add(&b[2], &b[3]), &cm))
                + dot(&a[3], &contract_bc(t, &sub(&b[2], &b[3]), &cm))
        }
        ObservableKind::B442Sym => unreachable!("rejected by validate"),
    }
}

fn svetlichny_a_coefficients(
    t: &Block,
    b1: &Vec3,
    b2: &Vec3,
    c1: &Vec3,
    c2: &Vec3,
) -> (Vec3, Vec3) {
    let t11 = contract_bc(t, b1, c1);
    let t12 = contract_bc(t, b1, c2);
    let t21 = contract_bc(t, b2, c1);
    let t22 = contract_bc(t, b2, c2);
    (
        add(&add(&t11, &t12), &sub(&t21, &t22)),
        sub(&sub(&t11, &t22), &add(&t21, &t12)),
    )
}

// ---------------------------------------------------------------------------
// Mermin / Svetlichny: alternating analytic alignment with multistart
// ---------------------------------------------------------------------------

const MAX_SWEEPS: usize = 500;

struct SixAxes {
    a: [Vec3; 2],
    b: [Vec3; 2],
    c: [Vec3; 2],
}

fn align_pair(axes: &mut [Vec3; 2], g1: &Vec3, g2: &Vec3) -> f64 {
    if let Some(u) = normalized(g1, 1e-300) {
        axes[0] = u;
    }
    if let Some(u) = normalized(g2, 1e-300) {
        axes[1] = u;
    }
    dot(&axes[0], g1) + dot(&axes[1], g2)
}

/// One multistart run of alternating alignment. Returns (value, converged);
/// appends the objective after every party update to `trace` when given.
fn ascend(
    t: &Block,
    kind: ObservableKind,
    axes: &mut SixAxes,
    tol: f64,
    trace: Option<&mut Vec<f64>>,
) -> (f64, bool) {
    let mermin = matches!(kind, ObservableKind::Mermin);
    let mut trace = trace;
    let mut record = |v: f64| {
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(v);
        }
    };
    let mut value = f64::NEG_INFINITY;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        // B update
        let (g1, g2) = if mermin {
            (
                add(
                    &contract_ac(t, &axes.a[0], &axes.c[1]),
                    &contract_ac(t, &axes.a[1], &axes.c[0]),
                ),
                sub(
                    &contract_ac(t, &axes.a[0], &axes.c[0]),
                    &contract_ac(t, &axes.a[1], &axes.c[1]),
                ),
            )
        } else {
            let t11 = contract_ac(t, &axes.a[0], &axes.c[0]);
            let t12 = contract_ac(t, &axes.a[0], &axes.c[1]);
            let t21 = contract_ac(t, &axes.a[1], &axes.c[0]);
            let t22 = contract_ac(t, &axes.a[1], &axes.c[1]);
            (
                add(&add(&t11, &t12), &sub(&t21, &t22)),
                sub(&sub(&t11, &t22), &add(&t21, &t12)),
            )
        };
        record(align_pair(&mut axes.b, &g1, &g2));

        // C update
        let (g1, g2) = if mermin {
            (
                add(
                    &contract_ab(t, &axes.a[0], &axes.b[1]),
                    &contract_ab(t, &axes.a[1], &axes.b[0]),
                ),
                sub(
                    &contract_ab(t, &axes.a[0], &axes.b[0]),
                    &contract_ab(t, &axes.a[1], &axes.b[1]),
                ),
            )
        } else {
            let t11 = contract_ab(t, &axes.a[0], &axes.b[0]);
            let t12 = contract_ab(t, &axes.a[0], &axes.b[1]);
            let t21 = contract_ab(t, &axes.a[1], &axes.b[0]);
            let t22 = contract_ab(t, &axes.a[1], &axes.b[1]);
            (
                add(&add(&t11, &t12), &sub(&t21, &t22)),
                sub(&sub(&t11, &t22), &add(&t21, &t12)),
            )
        };
        record(align_pair(&mut axes.c, &g1, &g2));

        // A update; ends the sweep so the returned value is realized exactly
        let (g1, g2) = if mermin {
            (
                add(
                    &contract_bc(t, &axes.b[0], &axes.c[1]),
                    &contract_bc(t, &axes.b[1], &axes.c[0]),
                ),
                sub(
                    &contract_bc(t, &axes.b[0], &axes.c[0]),
                    &contract_bc(t, &axes.b[1], &axes.c[1]),
                ),
            )
        } else {
            svetlichny_a_coefficients(t, &axes.b[0], &axes.b[1], &axes.c[0], &axes.c[1])
        };
        let new_value = align_pair(&mut axes.a, &g1, &g2);
        record(new_value);

        if new_value - value < tol {
            value = value.max(new_value);
            converged = true;
            break;
        }
        value = new_value;
    }
    (value, converged)
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seeded low-discrepancy initial axes: a 12-dimensional Kronecker sequence
/// (powers of the generalized golden ratio) with a seed-derived offset.
struct AxisSequence {
    alphas: [f64; 12],
    offsets: [f64; 12],
}

impl AxisSequence {
    fn new(seed: u64) -> Self {
        // root of x^13 = x + 1
        let mut g = 1.03f64;
        for _ in 0..64 {
            g = (g + 1.0).powf(1.0 / 13.0);
        }
        let mut alphas = [0.0; 12];
        let mut acc = 1.0;
        for a in alphas.iter_mut() {
            acc /= g;
            *a = acc;
        }
        let mut st = seed ^ 0xA076_1D64_78BD_642F;
        let mut offsets = [0.0; 12];
        for o in offsets.iter_mut() {
            *o = (splitmix64(&mut st) >> 11) as f64 / (1u64 << 53) as f64;
        }
        Self { alphas, offsets }
    }

    fn axes(&self, restart: usize) -> SixAxes {
        let mut u = [0.0; 12];
        for (k, x) in u.iter_mut().enumerate() {
            *x = (self.offsets[k] + (restart + 1) as f64 * self.alphas[k]).fract();
        }
        let v = |k: usize| -> Vec3 {
            let z = 2.0 * u[2 * k] - 1.0;
            let phi = 2.0 * std::f64::consts::PI * u[2 * k + 1];
            let r = (1.0 - z * z).max(0.0).sqrt();
            [r * phi.cos(), r * phi.sin(), z]
        };
        SixAxes {
            a: [v(0), v(1)],
            b: [v(2), v(3)],
            c: [v(4), v(5)],
        }
    }
}

/// Gram matrix of one tensor slot: N_A[i][i'] = sum_jk T_ijk T_i'jk and
/// cyclic. Its eigenvectors are the party's principal correlation
/// directions and rotate with the tensor.
fn party_gram(t: &Block, slot: usize) -> Mat3 {
    let mut n = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            let mut s = 0.0;
            for p in 0..3 {
                for q in 0..3 {
                    let (x, y) = match slot {
                        0 => (t[a][p][q], t[b][p][q]),
                        1 => (t[p][a][q], t[p][b][q]),
                        _ => (t[p][q][a], t[p][q][b]),
                    };
                    s += x * y;
                }
            }
            n[a][b] = s;
        }
    }
    n
}

/// Candidate axis pairs from an eigenvector triad: the three eigenvector
/// pairs plus their diagonal (sum/difference) combinations.
fn candidate_pairs(vecs: &[Vec3; 3]) -> [[Vec3; 2]; 6] {
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let diag = |i: usize, j: usize| -> [Vec3; 2] {
        [
            add(&scale(&vecs[i], half), &scale(&vecs[j], half)),
            sub(&scale(&vecs[i], half), &scale(&vecs[j], half)),
        ]
    };
    [
        [vecs[0], vecs[1]],
        [vecs[0], vecs[2]],
        [vecs[1], vecs[2]],
        diag(0, 1),
        diag(0, 2),
        diag(1, 2),
    ]
}

/// Deterministic starting points built from the tensor itself. Because the
/// construction is equivariant under frame rotations (up to eigenvector
/// choices inside exactly degenerate subspaces), the multistart winner is a
/// frame-independent value.
fn covariant_inits(block: &Block) -> Vec<SixAxes> {
    let (_, a_vecs) = sym_eigen(&party_gram(block, 0));
    let (_, c_vecs) = sym_eigen(&party_gram(block, 2));
    let a_pairs = candidate_pairs(&a_vecs);
    let c_pairs = candidate_pairs(&c_vecs);
    // relative sign classes: flipping both axes of two parties at once is a
    // symmetry of the functionals, which leaves four inequivalent choices
    let signs: [(f64, f64); 4] = [(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)];
    let mut out = Vec::with_capacity(COVARIANT_RESTARTS);
    for ap in &a_pairs {
        for cp in &c_pairs {
            for (sa, sc) in signs {
                out.push(SixAxes {
                    a: [ap[0], scale(&ap[1], sa)],
                    // overwritten by the first alignment step
                    b: [a_vecs[0], a_vecs[1]],
                    c: [cp[0], scale(&cp[1], sc)],
                });
            }
        }
    }
    out
}

/// Orthonormal frame built from one party's slot of the tensor with signs
/// fixed by covariant functionals, so low-discrepancy restarts expressed in
/// it transform with that qubit's local frame. Sign ambiguities survive
/// only inside exactly degenerate eigenspaces, where the optimum is
/// correspondingly flat.
fn canonical_frame(t: &CorrelationTensor, block: &Block, slot: usize) -> [Vec3; 3] {
    let (_, vecs) = sym_eigen(&party_gram(block, slot));
    // orientation functionals: contraction against the complementary pair
    // correlations, then the party's own Bloch vector
    let mut g1 = [0.0; 3];
    for (a, g) in g1.iter_mut().enumerate() {
        let mut s = 0.0;
        for p in 0..3 {
            for q in 0..3 {
                s += match slot {
                    0 => block[a][p][q] * t.get(0, p + 1, q + 1),
                    1 => block[p][a][q] * t.get(p + 1, 0, q + 1),
                    _ => block[p][q][a] * t.get(p + 1, q + 1, 0),
                };
            }
        }
        *g = s;
    }
    let g2 = match slot {
        0 => [t.get(1, 0, 0), t.get(2, 0, 0), t.get(3, 0, 0)],
        1 => [t.get(0, 1, 0), t.get(0, 2, 0), t.get(0, 3, 0)],
        _ => [t.get(0, 0, 1), t.get(0, 0, 2), t.get(0, 0, 3)],
    };
    let orient = |v: &Vec3| -> Vec3 {
        for g in [&g1, &g2] {
            let d = dot(v, g);
            if d.abs() > 1e-9 {
                return if d < 0.0 { scale(v, -1.0) } else { *v };
            }
        }
        *v
    };
    let f0 = orient(&vecs[0]);
    let f1 = orient(&vecs[1]);
    let f2 = crate::la3::cross(&f0, &f1);
    [f0, f1, f2]
}

fn optimize_two_setting(
    t: &CorrelationTensor,
    kind: ObservableKind,
    settings: &OptimizerSettings,
) -> OptResult {
    let block = t.xyz_block();
    let restarts = settings.restarts.max(1);
    let inits = covariant_inits(&block);
    let frames: [[Vec3; 3]; 3] = [
        canonical_frame(t, &block, 0),
        canonical_frame(t, &block, 1),
        canonical_frame(t, &block, 2),
    ];
    let seq = AxisSequence::new(settings.seed);
    let in_frame = |slot: usize, v: &Vec3| -> Vec3 {
        let f = &frames[slot];
        add(
            &add(&scale(&f[0], v[0]), &scale(&f[1], v[1])),
            &scale(&f[2], v[2]),
        )
    };
    let mut best: Option<(f64, SixAxes, bool)> = None;
    for r in 0..restarts {
        let mut axes = if r < inits.len() {
            SixAxes {
                a: inits[r].a,
                b: inits[r].b,
                c: inits[r].c,
            }
        } else {
            let raw = seq.axes(r - inits.len());
            SixAxes {
                a: [in_frame(0, &raw.a[0]), in_frame(0, &raw.a[1])],
                b: [in_frame(1, &raw.b[0]), in_frame(1, &raw.b[1])],
                c: [in_frame(2, &raw.c[0]), in_frame(2, &raw.c[1])],
            }
        };
        let (value, converged) = ascend(&block, kind, &mut axes, settings.tol, None);
        if best.as_ref().is_none_or(|(bv, _, _)| value > *bv) {
            best = Some((value, axes, converged));
        }
    }
    let (value, axes, converged) = best.expect("at least one restart");
    OptResult {
        value,
        axes: AxisSet {
            a_axes: axes.a.to_vec(),
            b_axes: axes.b.to_vec(),
            c_axes: axes.c.to_vec(),
        },
        restarts_used: restarts,
        converged,
        internal_angles: None,
        role: None,
    }
}

/// Maximizes the Mermin observable over all six measurement axes.
pub fn optimize_mermin(t: &CorrelationTensor, settings: &OptimizerSettings) -> OptResult {
    optimize_two_setting(t, ObservableKind::Mermin, settings)
}

/// Maximizes the Svetlichny observable over all six measurement axes.
pub fn optimize_svetlichny(t: &CorrelationTensor, settings: &OptimizerSettings) -> OptResult {
    optimize_two_setting(t, ObservableKind::Svetlichny, settings)
}

// ---------------------------------------------------------------------------
// Tight 4x4x2: analytic reduction to a 3-angle search
// ---------------------------------------------------------------------------

const B442_GRID_N: usize = 24;
const B442_REFINE_STARTS: usize = 24;
const SEED_MIN_SEPARATION: usize = 2;
const PS_INIT_STEP: f64 = 0.1;
const PS_MIN_STEP: f64 = 1e-7;
const PS_RESTART_STEP: f64 = 0.02;
const PS_ROUNDS: usize = 4;
const PS_SEED_BUDGET: usize = 8_000;
const ESCAPE_RADII: [f64; 3] = [0.04, 0.12, 0.3];
const MAX_ESCAPES: usize = 4;

/// Orthonormal pair (C+, C-) from one polar and two azimuthal angles,
/// expressed in the given orthonormal basis. Using the tensor's principal
/// C-frame as the basis makes the whole angle search rotate with the state.
fn frame_vectors(basis: &[Vec3; 3], theta: f64, phi1: f64, phi2: f64) -> (Vec3, Vec3) {
    let (st, ct) = theta.sin_cos();
    let (s1, c1) = phi1.sin_cos();
    let (s2, c2) = phi2.sin_cos();
    let in_basis = |x: f64, y: f64, z: f64| -> Vec3 {
        add(
            &add(&scale(&basis[0], x), &scale(&basis[1], y)),
            &scale(&basis[2], z),
        )
    };
    let cplus = in_basis(st * c1, st * s1, ct);
    let cminus = in_basis(ct * c1 * c2 - s1 * s2, ct * s1 * c2 + c1 * s2, -st * c2);
    (cplus, cminus)
}

/// Principal directions of the C slot, used as the frame-search basis.
fn c_slot_basis(t: &Block) -> [Vec3; 3] {
    sym_eigen(&party_gram(t, 2)).1
}

// [T . c]_ij = sum_k T_ijk c_k
fn slice_matrix(t: &Block, c: &Vec3) -> Mat3 {
    let mut m = [[0.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = t[i][j][0] * c[0] + t[i][j][1] * c[1] + t[i][j][2] * c[2];
        }
    }
    m
}

/// Sum of the two largest eigenvalues of both Gram matrices; the optimized
/// 4x4x2 value for this frame is 4 sqrt(objective).
fn b442_objective(t: &Block, basis: &[Vec3; 3], angles: &[f64; 3]) -> f64 {
    let (cp, cm) = frame_vectors(basis, angles[0], angles[1], angles[2]);
    let lp = sym_eigenvalues(&gram(&slice_matrix(t, &cp)));
    let lm = sym_eigenvalues(&gram(&slice_matrix(t, &cm)));
    lp[0].max(0.0) + lp[1].max(0.0) + lm[0].max(0.0) + lm[1].max(0.0)
}

/// Direction bases for the pattern search: the coordinate axes plus fixed
/// rotated copies. Cycling bases between re-expansion rounds lets the
/// search progress along ridges that are not axis-aligned.
fn search_basis(round: usize) -> [[f64; 3]; 3] {
    if round.is_multiple_of(2) {
        return [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    }
    // rotation by 2 pi / 5 about an oblique axis, applied (round / 2 + 1) times
    let axis = {
        let n = (1.0f64 + 4.0 + 9.0).sqrt();
        [1.0 / n, 2.0 / n, 3.0 / n]
    };
    let angle = 0.4 * std::f64::consts::PI * ((round / 2) as f64 + 1.0);
    let (s, c) = angle.sin_cos();
    let mut basis = [[0.0; 3]; 3];
    for (k, b) in basis.iter_mut().enumerate() {
        let mut e = [0.0; 3];
        e[k] = 1.0;
        // Rodrigues rotation of the coordinate axis
        let cross = [
            axis[1] * e[2] - axis[2] * e[1],
            axis[2] * e[0] - axis[0] * e[2],
            axis[0] * e[1] - axis[1] * e[0],
        ];
        let d = axis[0] * e[0] + axis[1] * e[1] + axis[2] * e[2];
        for i in 0..3 {
            b[i] = e[i] * c + cross[i] * s + axis[i] * d * (1.0 - c);
        }
    }
    basis
}

/// Pattern search with step re-expansion and rotating direction bases;
/// re-expansion recovers progress along curved ridges of the eigenvalue
/// objective where a single shrinking sweep stalls. Moves must beat the
/// incumbent by a relative epsilon so the step shrinks instead of dripping
/// rounding-level improvements.
fn compass_rounds(
    t: &Block,
    basis: &[Vec3; 3],
    start: [f64; 3],
    start_value: f64,
    first_step: f64,
    evals: &mut usize,
    budget: usize,
) -> ([f64; 3], f64) {
    let mut point = start;
    let mut value = start_value;
    for round in 0..PS_ROUNDS {
        let mut step = if round == 0 {
            first_step
        } else {
            PS_RESTART_STEP
        };
        let directions = search_basis(round);
        let round_start = value;
        while step >= PS_MIN_STEP && *evals < budget {
            let eps = 1e-15 * (1.0 + value.abs());
            let mut improved = false;
            let mut best_point = point;
            let mut best_value = value;
            for dir in &directions {
                for sgn in [1.0, -1.0] {
                    let cand = [
                        point[0] + sgn * step * dir[0],
                        point[1] + sgn * step * dir[1],
                        point[2] + sgn * step * dir[2],
                    ];
                    let v = b442_objective(t, basis, &cand);
                    *evals += 1;
                    if v > best_value + eps {
                        best_value = v;
                        best_point = cand;
                        improved = true;
                    }
                }
            }
            if improved {
                point = best_point;
                value = best_value;
            } else {
                step *= 0.5;
            }
        }
        if round > 0 && value - round_start < 1e-14 {
            break;
        }
    }
    (point, value)
}

/// 64 deterministic probe directions (Fibonacci sphere).
fn probe_directions() -> [[f64; 3]; 64] {
    let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    let mut dirs = [[0.0; 3]; 64];
    for (i, d) in dirs.iter_mut().enumerate() {
        let z = 1.0 - 2.0 * (i as f64 + 0.5) / 64.0;
        let r = (1.0 - z * z).max(0.0).sqrt();
        let phi = golden * i as f64;
        *d = [r * phi.cos(), r * phi.sin(), z];
    }
    dirs
}

/// Local search plus basin-escape probes: after the pattern search settles,
/// sample deterministic shells around the optimum and resume the search from
/// any strictly better point. Escapes shallow traps separated by ~0.1 rad.
fn local_search(
    t: &Block,
    basis: &[Vec3; 3],
    start: [f64; 3],
    start_value: f64,
) -> ([f64; 3], f64) {
    let mut evals = 0usize;
    let (mut point, mut value) = compass_rounds(
        t,
        basis,
        start,
        start_value,
        PS_INIT_STEP,
        &mut evals,
        PS_SEED_BUDGET,
    );
    let dirs = probe_directions();
    for _ in 0..MAX_ESCAPES {
        let mut jumped = false;
        'probe: for radius in ESCAPE_RADII {
            for d in &dirs {
                let cand = [
                    point[0] + radius * d[0],
                    point[1] + radius * d[1],
                    point[2] + radius * d[2],
                ];
                let v = b442_objective(t, basis, &cand);
                evals += 1;
                if v > value + 1e-12 {
                    let budget = evals + PS_SEED_BUDGET / 2;
                    let (p2, v2) = compass_rounds(t, basis, cand, v, radius, &mut evals, budget);
                    if v2 > value {
                        point = p2;
                        value = v2;
                    }
                    jumped = true;
                    break 'probe;
                }
            }
        }
        if !jumped {
            break;
        }
    }
    (point, value)
}

/// Maximizes the tight 4x4x2 observable (four axes on A and B, two on C)
/// via the eigenvalue form of the frame-reduced objective.
pub fn optimize_b442(t: &CorrelationTensor, _settings: &OptimizerSettings) -> OptResult {
    let block = t.xyz_block();
    let basis = c_slot_basis(&block);
    let n = B442_GRID_N;
    let mut values = Vec::with_capacity(n * n * n);
    for i in 0..n {
        let theta = i as f64 * std::f64::consts::PI / (n - 1) as f64;
        for j in 0..n {
            let phi1 = j as f64 * 2.0 * std::f64::consts::PI / n as f64;
            for k in 0..n {
                let phi2 = k as f64 * 2.0 * std::f64::consts::PI / n as f64;
                values.push((
                    b442_objective(&block, &basis, &[theta, phi1, phi2]),
                    [i, j, k],
                ));
            }
        }
    }
    // refinement seeds: best grid cells with enforced mutual separation, so
    // distinct near-optimal basins all receive a local search
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].0.partial_cmp(&values[a].0).unwrap());
    let mut seeds: Vec<[usize; 3]> = Vec::with_capacity(B442_REFINE_STARTS);
    let wrap_dist = |a: usize, b: usize, period: usize| -> usize {
        let d = a.abs_diff(b);
        d.min(period - d)
    };
    for &idx in &order {
        if seeds.len() >= B442_REFINE_STARTS {
            break;
        }
        let cell = values[idx].1;
        let isolated = seeds.iter().all(|s| {
            let d_theta = s[0].abs_diff(cell[0]);
            let d1 = wrap_dist(s[1], cell[1], n);
            let d2 = wrap_dist(s[2], cell[2], n);
            d_theta.max(d1).max(d2) >= SEED_MIN_SEPARATION
        });
        if isolated {
            seeds.push(cell);
        }
    }
    let mut best_angles = [0.0; 3];
    let mut best_obj = f64::NEG_INFINITY;
    for cell in &seeds {
        let start = [
            cell[0] as f64 * std::f64::consts::PI / (n - 1) as f64,
            cell[1] as f64 * 2.0 * std::f64::consts::PI / n as f64,
            cell[2] as f64 * 2.0 * std::f64::consts::PI / n as f64,
        ];
        let v0 = b442_objective(&block, &basis, &start);
        let (p, v) = local_search(&block, &basis, start, v0);
        if v > best_obj {
            best_obj = v;
            best_angles = p;
        }
    }
    let value = 4.0 * best_obj.max(0.0).sqrt();
    let axes = build_b442_axes(&block, &best_angles, true).expect("completion cannot fail");
    OptResult {
        value,
        axes,
        restarts_used: B442_REFINE_STARTS,
        converged: true,
        internal_angles: Some(best_angles),
        role: None,
    }
}

/// Maximum of the 4x4x2 observable over the three role assignments,
/// implemented by permuting the tensor indices. Ties keep the first of
/// (442, 424, 244).
pub fn optimize_b442_sym(t: &CorrelationTensor, settings: &OptimizerSettings) -> OptResult {
    let mut best: Option<OptResult> = None;
    for role in [
        RoleAssignment::B442,
        RoleAssignment::B424,
        RoleAssignment::B244,
    ] {
        let permuted = t.permuted(role.permutation());
        let mut r = optimize_b442(&permuted, settings);
        r.role = Some(role);
        if best.as_ref().is_none_or(|b| r.value > b.value) {
            best = Some(r);
        }
    }
    best.expect("three candidates")
}

/// Explicit ten axes realizing the frame-reduced 4x4x2 value at the given
/// angles: `evaluate` on them reproduces 4 sqrt(objective) to 1e-9.
///
/// Fails with `DegenerateFrame` when an axis direction is undetermined
/// because its normalization denominator |T(C+/-) . D| falls below 1e-12;
/// such directions carry zero weight, so callers may retry with a slightly
/// perturbed frame or accept an arbitrary completion.
pub fn reconstruct_b442_axes(
    t: &CorrelationTensor,
    angles: &[f64; 3],
) -> Result<AxisSet, BellError> {
    let block = t.xyz_block();
    build_b442_axes(&block, angles, false)
}

fn build_b442_axes(
    t: &Block,
    angles: &[f64; 3],
    complete_degenerate: bool,
) -> Result<AxisSet, BellError> {
    let basis = c_slot_basis(t);
    let (cp, cm) = frame_vectors(&basis, angles[0], angles[1], angles[2]);
    let tp = slice_matrix(t, &cp);
    let tm = slice_matrix(t, &cm);
    let (lp, vp) = sym_eigen(&gram(&tp));
    let (lm, vm) = sym_eigen(&gram(&tm));
    let lp = [lp[0].max(0.0), lp[1].max(0.0)];
    let lm = [lm[0].max(0.0), lm[1].max(0.0)];
    let sum_p = lp[0] + lp[1];
    let sum_m = lm[0] + lm[1];

    // branch weights: cos/sin of the analytic angle optima
    let split = |hi: f64, lo: f64| -> (f64, f64) {
        let s = hi + lo;
        if s > 0.0 {
            ((hi / s).sqrt(), (lo / s).sqrt())
        } else {
            (1.0, 0.0)
        }
    };
    let (c_gamma, s_gamma) = split(sum_p, sum_m);
    let (c_delta, s_delta) = split(lp[0], lp[1]);
    let (c_eps, s_eps) = split(lm[0], lm[1]);

    // front-party axes aligned with T(C) . D; degenerate directions carry
    // zero weight and may be completed arbitrarily
    let aligned = |m: &Mat3, d: &Vec3, partner: Option<&Vec3>| -> Result<Vec3, BellError> {
        match normalized(&matvec(m, d), DEGENERATE_FRAME_EPS) {
            Some(u) => Ok(u),
            None if complete_degenerate => Ok(match partner {
                Some(p) => any_orthogonal(p),
                None => [0.0, 0.0, 1.0],
            }),
            None => Err(BellError::DegenerateFrame),
        }
    };
    let a1 = aligned(&tp, &vp[0], None)?;
    let a2 = aligned(&tp, &vp[1], Some(&a1))?;
    let a3 = aligned(&tm, &vm[0], None)?;
    let a4 = aligned(&tm, &vm[1], Some(&a3))?;

    let b1 = add(&scale(&vp[0], c_delta), &scale(&vp[1], s_delta));
    let b2 = sub(&scale(&vp[0], c_delta), &scale(&vp[1], s_delta));
    let b3 = add(&scale(&vm[0], c_eps), &scale(&vm[1], s_eps));
    let b4 = sub(&scale(&vm[0], c_eps), &scale(&vm[1], s_eps));
    let c1 = add(&scale(&cp, c_gamma), &scale(&cm, s_gamma));
    let c2 = sub(&scale(&cp, c_gamma), &scale(&cm, s_gamma));
    Ok(AxisSet {
        a_axes: vec![a1, a2, a3, a4],
        b_axes: vec![b1, b2, b3, b4],
        c_axes: vec![c1, c2],
    })
}
