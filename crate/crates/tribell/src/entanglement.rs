//! Entanglement measures for pure three-qubit states: pairwise (Wootters)
//! concurrences, one-to-other concurrences, the three-tangle and the
//! concurrence-triangle measure F3.

use num_complex::Complex64;
use serde::Serialize;

use crate::states::{DensityMatrix, Party, SpinState};

/// Unordered pair of parties for one-to-one concurrences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pair {
    AB,
    AC,
    BC,
}

impl Pair {
    pub fn parties(self) -> [Party; 2] {
        match self {
            Pair::AB => [Party::A, Party::B],
            Pair::AC => [Party::A, Party::C],
            Pair::BC => [Party::B, Party::C],
        }
    }
}

/// All eight measures for one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglementReport {
    #[serde(rename = "C_AB")]
    pub c_ab: f64,
    #[serde(rename = "C_AC")]
    pub c_ac: f64,
    #[serde(rename = "C_BC")]
    pub c_bc: f64,
    #[serde(rename = "C_A_BC")]
    pub c_a_bc: f64,
    #[serde(rename = "C_B_AC")]
    pub c_b_ac: f64,
    #[serde(rename = "C_C_AB")]
    pub c_c_ab: f64,
    #[serde(rename = "tau")]
    pub tau: f64,
    #[serde(rename = "F3")]
    pub f3: f64,
}

fn clamp01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Wootters concurrence of a two-qubit density matrix obtained by tracing
/// one qubit out of a pure three-qubit state.
///
/// With rho of rank <= 2 (always the case for such partial traces), the
/// product rho * rho~ has at most two nonzero eigenvalues, which follow from
/// its first two trace invariants; the concurrence is the difference of
/// their square roots.
pub fn wootters_concurrence(rho: &DensityMatrix) -> f64 {
    assert_eq!(rho.dim(), 4, "Wootters formula applies to two qubits");
    // rho~ = (sigma_y x sigma_y) rho* (sigma_y x sigma_y); the flip matrix is
    // the antidiagonal (-1, 1, 1, -1).
    const SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    let tilde =
        |i: usize, j: usize| -> Complex64 { SIGN[i] * SIGN[j] * rho.get(3 - i, 3 - j).conj() };
    let mut r = [[Complex64::ZERO; 4]; 4];
    for (i, row) in r.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            let mut s = Complex64::ZERO;
            for k in 0..4 {
                s += rho.get(i, k) * tilde(k, j);
            }
            *x = s;
        }
    }
    let e1: f64 = (0..4).map(|i| r[i][i].re).sum();
    let mut tr_r2 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            tr_r2 += (r[i][j] * r[j][i]).re;
        }
    }
    let disc = (2.0 * tr_r2 - e1 * e1).max(0.0);
    let clamp_eig = |x: f64| -> f64 {
        debug_assert!(x > -1e-12, "eigenvalue of rho*rho~ below tolerance: {x}");
        x.max(0.0)
    };
    let hi = clamp_eig((e1 + disc.sqrt()) / 2.0);
    let lo = clamp_eig((e1 - disc.sqrt()) / 2.0);
    clamp01(hi.sqrt() - lo.sqrt())
}

/// One-to-one concurrence of the given pair.
///
/// Equivalent to reducing the state and applying [`wootters_concurrence`],
/// but computed through the singular values of the 2x2 spin-flip overlap
/// matrix tau_cc' = v_c^T (sigma_y x sigma_y) v_c' built from the amplitude
/// slices v_c over the traced qubit. The two nonzero eta of rho * rho~ are
/// exactly the singular values of tau, and their difference is stable even
/// when they coincide (where the eigenvalue route loses half the digits).
pub fn concurrence_pair(state: &SpinState, pair: Pair) -> f64 {
    // bit masks of the kept pair (high, low) and the traced qubit
    let (hi, lo, traced) = match pair {
        Pair::AB => (4usize, 2usize, 1usize),
        Pair::AC => (4, 1, 2),
        Pair::BC => (2, 1, 4),
    };
    let amp = state.amplitudes();
    let mut v = [[Complex64::ZERO; 4]; 2];
    for (idx, a) in amp.iter().enumerate() {
        let c = usize::from(idx & traced != 0);
        let row = 2 * usize::from(idx & hi != 0) + usize::from(idx & lo != 0);
        v[c][row] = *a;
    }
    const SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    let mut tau = [[Complex64::ZERO; 2]; 2];
    for c in 0..2 {
        for cp in 0..2 {
            let mut s = Complex64::ZERO;
            for i in 0..4 {
                s += v[c][i] * SIGN[i] * v[cp][3 - i];
            }
            tau[c][cp] = s;
        }
    }
    // singular values of tau: the larger from the Hermitian 2x2 tau^dag tau,
    // the smaller through |det tau| = s_hi * s_lo, which avoids the
    // cancellation in mean - radius when a singular value is near zero
    let h00 = tau[0][0].norm_sqr() + tau[1][0].norm_sqr();
    let h11 = tau[0][1].norm_sqr() + tau[1][1].norm_sqr();
    let h01 = tau[0][0].conj() * tau[0][1] + tau[1][0].conj() * tau[1][1];
    let mean = 0.5 * (h00 + h11);
    let radius = (0.25 * (h00 - h11) * (h00 - h11) + h01.norm_sqr()).sqrt();
    let s_hi = (mean + radius).max(0.0).sqrt();
    if s_hi <= 0.0 {
        return 0.0;
    }
    let s_lo = (tau[0][0] * tau[1][1] - tau[0][1] * tau[1][0]).norm() / s_hi;
    clamp01(s_hi - s_lo)
}

/// One-to-other concurrence C_{i(jk)} = sqrt(2 (1 - Tr rho_i^2)).
///
/// Computed through the Cauchy-Binet identity: writing the pure state as a
/// 2x4 coefficient matrix over (qubit i) x (rest), 2 (1 - Tr rho_i^2) equals
/// 4 det(Psi Psi^dag) = 4 sum |2x2 minors of Psi|^2. The minor sum has no
/// cancellation, so separable directions give exact zeros where the purity
/// difference would leave sqrt(rounding) residue.
pub fn concurrence_one_other(state: &SpinState, single: Party) -> f64 {
    let row_mask = match single {
        Party::A => 4usize,
        Party::B => 2,
        Party::C => 1,
    };
    let (hi, lo) = match single {
        Party::A => (2usize, 1usize),
        Party::B => (4, 1),
        Party::C => (4, 2),
    };
    let amp = state.amplitudes();
    let mut psi = [[Complex64::ZERO; 4]; 2];
    for (idx, a) in amp.iter().enumerate() {
        let row = usize::from(idx & row_mask != 0);
        let col = 2 * usize::from(idx & hi != 0) + usize::from(idx & lo != 0);
        psi[row][col] = *a;
    }
    let mut minor_sq = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            minor_sq += (psi[0][i] * psi[1][j] - psi[0][j] * psi[1][i]).norm_sqr();
        }
    }
    clamp01(2.0 * minor_sq.sqrt())
}

const TANGLE_CONSISTENCY_EPS: f64 = 1e-7;

/// Residual tripartite entanglement tau = C_{i(jk)}^2 - C_{ij}^2 - C_{ik}^2.
///
/// Computed from partition A and cross-checked against the other two
/// partitions; a mismatch beyond 1e-7 indicates a numerically invalid input
/// state and panics.
pub fn three_tangle(state: &SpinState) -> f64 {
    let c_ab = concurrence_pair(state, Pair::AB);
    let c_ac = concurrence_pair(state, Pair::AC);
    let c_bc = concurrence_pair(state, Pair::BC);
    let tau_a = concurrence_one_other(state, Party::A).powi(2) - c_ab * c_ab - c_ac * c_ac;
    let tau_b = concurrence_one_other(state, Party::B).powi(2) - c_ab * c_ab - c_bc * c_bc;
    let tau_c = concurrence_one_other(state, Party::C).powi(2) - c_ac * c_ac - c_bc * c_bc;
    assert!(
        (tau_a - tau_b).abs() <= TANGLE_CONSISTENCY_EPS
            && (tau_a - tau_c).abs() <= TANGLE_CONSISTENCY_EPS,
        "three-tangle partitions disagree: {tau_a} {tau_b} {tau_c}"
    );
    clamp01(tau_a)
}

/// Concurrence-triangle measure of genuine tripartite entanglement: the
/// normalized Heron area of the triangle with the three one-to-other
/// concurrences as sides.
pub fn f3(state: &SpinState) -> f64 {
    let a = concurrence_one_other(state, Party::A);
    let b = concurrence_one_other(state, Party::B);
    let c = concurrence_one_other(state, Party::C);
    f3_from_sides(a, b, c)
}

fn f3_from_sides(a: f64, b: f64, c: f64) -> f64 {
    let q = 0.5 * (a + b + c);
    let prod = q * (q - a).max(0.0) * (q - b).max(0.0) * (q - c).max(0.0);
    clamp01(4.0 / 3.0f64.sqrt() * prod.sqrt())
}

/// Computes every measure of [`EntanglementReport`] for one state.
pub fn report(state: &SpinState) -> EntanglementReport {
    let c_ab = concurrence_pair(state, Pair::AB);
    let c_ac = concurrence_pair(state, Pair::AC);
    let c_bc = concurrence_pair(state, Pair::BC);
    let c_a_bc = concurrence_one_other(state, Party::A);
    let c_b_ac = concurrence_one_other(state, Party::B);
    let c_c_ab = concurrence_one_other(state, Party::C);
    EntanglementReport {
        c_ab,
        c_ac,
        c_bc,
        c_a_bc,
        c_b_ac,
        c_c_ab,
        tau: three_tangle(state),
        f3: f3_from_sides(c_a_bc, c_b_ac, c_c_ab),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::DecayAngles;
    use crate::states::{
        scalar_state, tensor_state, vector_state, ScalarCouplings, SpinDirection, SpinState,
        TensorCouplings, VectorCouplings,
    };
    use num_complex::Complex64;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn ghz_reference_values() {
        let s = SpinState::ghz();
        for p in [Pair::AB, Pair::AC, Pair::BC] {
            assert!(concurrence_pair(&s, p) < 1e-9);
        }
        for p in [Party::A, Party::B, Party::C] {
            assert!(approx(concurrence_one_other(&s, p), 1.0, 1e-9));
        }
        assert!(approx(three_tangle(&s), 1.0, 1e-9));
        assert!(approx(f3(&s), 1.0, 1e-9));
    }

    #[test]
    fn w_reference_values() {
        let s = SpinState::w();
        for p in [Pair::AB, Pair::AC, Pair::BC] {
            assert!(approx(concurrence_pair(&s, p), 2.0 / 3.0, 1e-9));
        }
        for p in [Party::A, Party::B, Party::C] {
            assert!(approx(
                concurrence_one_other(&s, p),
                2.0 * 2.0f64.sqrt() / 3.0,
                1e-9
            ));
        }
        assert!(three_tangle(&s).abs() < 1e-9);
        assert!(approx(f3(&s), 8.0 / 9.0, 1e-9));
    }

    #[test]
    fn scalar_state_is_biseparable() {
        let c = ScalarCouplings::new(0.6, -0.4, 0.2, 0.9).unwrap();
        let s = scalar_state(&c, &SpinDirection::new(1.1, 0.7));
        let r = report(&s);
        assert!(r.c_ab < 1e-10 && r.c_ac < 1e-10);
        assert!(approx(r.c_bc, 1.0, 1e-10));
        assert!(r.c_a_bc < 1e-10);
        assert!(approx(r.c_b_ac, 1.0, 1e-10));
        assert!(approx(r.c_c_ab, 1.0, 1e-10));
        assert!(r.tau < 1e-9 && r.f3 < 1e-10);
    }

    #[test]
    fn fully_separable_product_state() {
        let mut amps = [Complex64::ZERO; 8];
        amps[0b010] = Complex64::ONE; // |+-+>
        let s = SpinState::from_amplitudes(amps).unwrap();
        let r = report(&s);
        for v in [
            r.c_ab, r.c_ac, r.c_bc, r.c_a_bc, r.c_b_ac, r.c_c_ab, r.tau, r.f3,
        ] {
            assert!(v < 1e-12);
        }
    }

    #[test]
    fn vector_state_closed_forms() {
        let c = VectorCouplings::new(0.7, -0.3, 0.5, 0.8).unwrap();
        let angles = DecayAngles::new(1.9, 2.5);
        let spin = SpinDirection::new(0.9, 4.0);
        let s = vector_state(&c, &angles, &spin).unwrap();
        let a = s.amplitudes();
        let (m_ll, m_lr, m_rl, m_rr) = (a[0b101], a[0b110], a[0b001], a[0b010]);
        assert!(concurrence_pair(&s, Pair::AB) < 1e-10);
        assert!(concurrence_pair(&s, Pair::AC) < 1e-10);
        let c_bc = 2.0 * (m_ll * m_lr.conj() + m_rl * m_rr.conj()).norm();
        assert!(approx(concurrence_pair(&s, Pair::BC), c_bc, 1e-9));
        let c_a = 2.0 * (m_rr * m_ll - m_lr * m_rl).norm();
        assert!(approx(concurrence_one_other(&s, Party::A), c_a, 1e-10));
        let c_b = 2.0
            * ((m_ll.norm_sqr() + m_rl.norm_sqr()) * (m_lr.norm_sqr() + m_rr.norm_sqr())).sqrt();
        assert!(approx(concurrence_one_other(&s, Party::B), c_b, 1e-10));
        assert!(approx(concurrence_one_other(&s, Party::C), c_b, 1e-10));
        // tau = C_A(BC)^2 because C_AB = C_AC = 0
        assert!(approx(three_tangle(&s), c_a * c_a, 1e-9));
    }

    #[test]
    fn tensor_state_f3() {
        let c = TensorCouplings::new(0.3, 0.4, -0.2, 0.8).unwrap();
        let s = tensor_state(
            &c,
            &DecayAngles::new(2.2, 1.4),
            &SpinDirection::new(0.5, 1.0),
        )
        .unwrap();
        let a = s.amplitudes();
        let expect = 4.0 * (a[0].norm() * a[7].norm()).powi(2);
        assert!(approx(f3(&s), expect, 1e-10));
    }

    #[test]
    fn vector_limits_biseparable_and_separable() {
        let angles = DecayAngles::new(2.0, 2.4);
        let spin = SpinDirection::new(0.8, 0.6);
        // c_R = 0: A factors out
        let s = vector_state(
            &VectorCouplings::new(0.9, 0.0, 0.5, 0.7).unwrap(),
            &angles,
            &spin,
        )
        .unwrap();
        assert!(concurrence_one_other(&s, Party::A) < 1e-10);
        // d_R = 0: fully separable
        let s = vector_state(
            &VectorCouplings::new(0.9, 0.4, 0.5, 0.0).unwrap(),
            &angles,
            &spin,
        )
        .unwrap();
        let r = report(&s);
        for v in [r.c_ab, r.c_ac, r.c_bc, r.c_a_bc, r.c_b_ac, r.c_c_ab, r.f3] {
            assert!(v < 1e-10, "separable state has measure {v}");
        }
    }
}
