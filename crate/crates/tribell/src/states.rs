//! Three-qubit spin states of the decay X -> A B C for scalar, vector and
//! tensor four-fermion interactions, plus the derived density matrices and
//! the Pauli correlation tensor.
//!
//! Amplitudes are stored over the helicity basis |lambda_A lambda_B lambda_C>
//! with lambda in {+, -}. The flat index is
//!
//! ```text
//! index = 4*[lambda_A = -] + 2*[lambda_B = -] + [lambda_C = -]
//! ```
//!
//! so |+++> is index 0 and |---> is index 7. Common positive prefactors of
//! the amplitudes (momentum factors and pure numbers) are dropped before
//! normalization; they carry no spin information.

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::kinematics::DecayAngles;
use crate::la3::{Mat3, Vec3};

/// Pre-normalization norm below which a state is reported as vanishing
/// rather than silently normalized.
pub const VANISHING_NORM_EPS: f64 = 1e-14;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum StateError {
    #[error("all amplitudes vanish (norm below threshold)")]
    AllAmplitudesVanish,
    #[error("invalid couplings: {0}")]
    InvalidCouplings(&'static str),
    #[error("empty keep set in partial trace")]
    EmptyKeepSet,
    #[error("party not present in this density matrix")]
    PartyNotPresent,
    #[error("invalid correlation tensor: {0}")]
    InvalidTensor(&'static str),
}

/// One of the three final-state qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Party {
    A,
    B,
    C,
}

impl Party {
    /// Bit selecting this party in the flat amplitude index.
    fn mask(self) -> usize {
        match self {
            Party::A => 4,
            Party::B => 2,
            Party::C => 1,
        }
    }
}

/// Rotation axis for initial-spin sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RotAxis {
    X,
    Y,
}

/// Polarization direction of the decaying particle,
/// n = (sin t cos p, sin t sin p, cos t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinDirection {
    pub theta: f64,
    pub phi: f64,
}

impl SpinDirection {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// +z polarization.
    pub fn z() -> Self {
        Self::new(0.0, 0.0)
    }

    /// +y polarization.
    pub fn y() -> Self {
        Self::new(std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2)
    }

    /// Spin obtained by rotating +z about the given axis by `omega`.
    ///
    /// Convention: rotation about y gives n = (sin w, 0, cos w); rotation
    /// about x gives n = (0, -sin w, cos w). Both reduce to +z at w = 0.
    pub fn from_rotation(axis: RotAxis, omega: f64) -> Self {
        let n: Vec3 = match axis {
            RotAxis::Y => [omega.sin(), 0.0, omega.cos()],
            RotAxis::X => [0.0, -omega.sin(), omega.cos()],
        };
        Self::from_unit_vector(&n)
    }

    pub fn from_unit_vector(n: &Vec3) -> Self {
        let theta = n[2].clamp(-1.0, 1.0).acos();
        let mut phi = n[1].atan2(n[0]);
        if phi < 0.0 {
            phi += 2.0 * std::f64::consts::PI;
        }
        phi += 0.0; // normalize -0.0
        Self { theta, phi }
    }

    pub fn unit_vector(&self) -> Vec3 {
        [
            self.theta.sin() * self.phi.cos(),
            self.theta.sin() * self.phi.sin(),
            self.theta.cos(),
        ]
    }
}

fn unit_complex(re: f64, im: f64, what: &'static str) -> Result<Complex64, StateError> {
    let z = Complex64::new(re, im);
    let n = z.norm();
    if n <= 0.0 || !n.is_finite() {
        return Err(StateError::InvalidCouplings(what));
    }
    Ok(z / n)
}

/// Couplings of the scalar interaction; the complex combinations
/// c = c_S + i c_A and d = d_S + i d_A are normalized to unit modulus
/// (the overall amplitude scale is unobservable).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarCouplings {
    pub c_s: f64,
    pub c_a: f64,
    pub d_s: f64,
    pub d_a: f64,
}

impl ScalarCouplings {
    pub fn new(c_s: f64, c_a: f64, d_s: f64, d_a: f64) -> Result<Self, StateError> {
        let s = Self { c_s, c_a, d_s, d_a };
        s.c()?;
        s.d()?;
        Ok(s)
    }

    pub fn c(&self) -> Result<Complex64, StateError> {
        unit_complex(self.c_s, self.c_a, "c_S + i c_A must be nonzero")
    }

    pub fn d(&self) -> Result<Complex64, StateError> {
        unit_complex(self.d_s, self.d_a, "d_S + i d_A must be nonzero")
    }
}

/// Couplings of the vector interaction in the chiral basis; the pairs
/// (c_L, c_R) and (d_L, d_R) are normalized to unit length internally.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VectorCouplings {
    pub c_l: f64,
    pub c_r: f64,
    pub d_l: f64,
    pub d_r: f64,
}

impl VectorCouplings {
    pub fn new(c_l: f64, c_r: f64, d_l: f64, d_r: f64) -> Result<Self, StateError> {
        let s = Self { c_l, c_r, d_l, d_r };
        s.normalized()?;
        Ok(s)
    }

    /// (c_L, c_R, d_L, d_R) with each pair scaled to unit norm.
    pub fn normalized(&self) -> Result<[f64; 4], StateError> {
        let nc = (self.c_l * self.c_l + self.c_r * self.c_r).sqrt();
        let nd = (self.d_l * self.d_l + self.d_r * self.d_r).sqrt();
        if nc <= 0.0 || !nc.is_finite() {
            return Err(StateError::InvalidCouplings("(c_L, c_R) must be nonzero"));
        }
        if nd <= 0.0 || !nd.is_finite() {
            return Err(StateError::InvalidCouplings("(d_L, d_R) must be nonzero"));
        }
        Ok([self.c_l / nc, self.c_r / nc, self.d_l / nd, self.d_r / nd])
    }
}

/// Couplings of the tensor interaction; c = c_M + i c_E and d = d_M + i d_E
/// are normalized to unit modulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TensorCouplings {
    pub c_m: f64,
    pub c_e: f64,
    pub d_m: f64,
    pub d_e: f64,
}

impl TensorCouplings {
    pub fn new(c_m: f64, c_e: f64, d_m: f64, d_e: f64) -> Result<Self, StateError> {
        let s = Self { c_m, c_e, d_m, d_e };
        s.c()?;
        s.d()?;
        Ok(s)
    }

    pub fn c(&self) -> Result<Complex64, StateError> {
        unit_complex(self.c_m, self.c_e, "c_M + i c_E must be nonzero")
    }

    pub fn d(&self) -> Result<Complex64, StateError> {
        unit_complex(self.d_m, self.d_e, "d_M + i d_E must be nonzero")
    }
}

/// Provenance of a spin state: which interaction produced it and from which
/// inputs, or `Custom` for hand-built states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "interaction", rename_all = "lowercase")]
pub enum StateOrigin {
    Scalar {
        couplings: ScalarCouplings,
        spin: SpinDirection,
    },
    Vector {
        couplings: VectorCouplings,
        angles: DecayAngles,
        spin: SpinDirection,
    },
    Tensor {
        couplings: TensorCouplings,
        angles: DecayAngles,
        spin: SpinDirection,
    },
    Custom,
}

/// Normalized pure state of the three final-state qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    amplitudes: [Complex64; 8],
    origin: StateOrigin,
}

impl SpinState {
    /// Normalizes and wraps raw helicity amplitudes.
    pub fn from_amplitudes(amplitudes: [Complex64; 8]) -> Result<Self, StateError> {
        Self::build(amplitudes, StateOrigin::Custom)
    }

    fn build(mut amplitudes: [Complex64; 8], origin: StateOrigin) -> Result<Self, StateError> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < VANISHING_NORM_EPS {
            return Err(StateError::AllAmplitudesVanish);
        }
        for a in amplitudes.iter_mut() {
            *a /= norm;
        }
        Ok(Self { amplitudes, origin })
    }

    /// (|+++> + |--->) / sqrt(2)
    pub fn ghz() -> Self {
        let mut a = [Complex64::ZERO; 8];
        let x = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        a[0] = x;
        a[7] = x;
        Self::build(a, StateOrigin::Custom).unwrap()
    }

    /// (|-++> + |+-+> + |++->) / sqrt(3)
    pub fn w() -> Self {
        let mut a = [Complex64::ZERO; 8];
        let x = Complex64::new(1.0 / 3.0f64.sqrt(), 0.0);
        a[4] = x;
        a[2] = x;
        a[1] = x;
        Self::build(a, StateOrigin::Custom).unwrap()
    }

    pub fn amplitudes(&self) -> &[Complex64; 8] {
        &self.amplitudes
    }

    pub fn origin(&self) -> &StateOrigin {
        &self.origin
    }

    /// rho = |psi><psi| on the full three-qubit space.
    pub fn density_matrix(&self) -> DensityMatrix {
        let mut data = vec![Complex64::ZERO; 64];
        for i in 0..8 {
            for j in 0..8 {
                data[i * 8 + j] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        DensityMatrix {
            parties: vec![Party::A, Party::B, Party::C],
            data,
        }
    }

    /// Expectation values T_{mu nu rho} = <sigma_mu sigma_nu sigma_rho>,
    /// indices 0..3 with sigma_0 the identity.
    pub fn correlation_tensor(&self) -> CorrelationTensor {
        let mut entries = [0.0; 64];
        for mu in 0..4 {
            for nu in 0..4 {
                for rho in 0..4 {
                    let mut w = self.amplitudes;
                    apply_pauli(&mut w, Party::A.mask(), mu);
                    apply_pauli(&mut w, Party::B.mask(), nu);
                    apply_pauli(&mut w, Party::C.mask(), rho);
                    let mut t = Complex64::ZERO;
                    for i in 0..8 {
                        t += self.amplitudes[i].conj() * w[i];
                    }
                    debug_assert!(t.im.abs() < 1e-10);
                    entries[mu * 16 + nu * 4 + rho] = t.re;
                }
            }
        }
        CorrelationTensor { entries }
    }

    /// Applies a single-qubit operator (expected unitary) to one party.
    pub fn with_local_unitary(&self, party: Party, u: &[[Complex64; 2]; 2]) -> SpinState {
        let mask = party.mask();
        let mut a = self.amplitudes;
        for i in 0..8 {
            if i & mask == 0 {
                let v0 = a[i];
                let v1 = a[i | mask];
                a[i] = u[0][0] * v0 + u[0][1] * v1;
                a[i | mask] = u[1][0] * v0 + u[1][1] * v1;
            }
        }
        SpinState {
            amplitudes: a,
            origin: StateOrigin::Custom,
        }
    }
}

impl Serialize for SpinState {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Dto<'a> {
            origin: &'a StateOrigin,
            amplitudes: [[f64; 2]; 8],
        }
        let mut amplitudes = [[0.0; 2]; 8];
        for (i, a) in self.amplitudes.iter().enumerate() {
            amplitudes[i] = [a.re, a.im];
        }
        Dto {
            origin: &self.origin,
            amplitudes,
        }
        .serialize(serializer)
    }
}

/// w <- (sigma_p on the qubit selected by `mask`) w, p in 0..=3.
fn apply_pauli(w: &mut [Complex64; 8], mask: usize, p: usize) {
    match p {
        0 => {}
        1 => {
            for i in 0..8 {
                if i & mask == 0 {
                    w.swap(i, i | mask);
                }
            }
        }
        2 => {
            let im = Complex64::new(0.0, 1.0);
            for i in 0..8 {
                if i & mask == 0 {
                    let v0 = w[i];
                    let v1 = w[i | mask];
                    w[i] = -im * v1;
                    w[i | mask] = im * v0;
                }
            }
        }
        3 => {
            for i in 0..8 {
                if i & mask != 0 {
                    w[i] = -w[i];
                }
            }
        }
        _ => unreachable!("Pauli index out of range"),
    }
}

/// Spin state of the scalar interaction. It depends only on the initial
/// polarization, factorizes as (qubit A) x (Bell pair on BC), and populates
/// only |--->, |-++>, |+--> and |+++>.
pub fn scalar_state(couplings: &ScalarCouplings, spin: &SpinDirection) -> SpinState {
    let c = couplings.c().expect("validated at construction");
    let d = couplings.d().expect("validated at construction");
    let sh = (spin.theta / 2.0).sin();
    let ch = (spin.theta / 2.0).cos();
    let eip = Complex64::from_polar(1.0, spin.phi);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut a = [Complex64::ZERO; 8];
    a[0b111] = -c * d * eip * sh * r; // |--->
    a[0b100] = c * d.conj() * eip * sh * r; // |-++>
    a[0b011] = -c.conj() * d * ch * r; // |+-->
    a[0b000] = c.conj() * d.conj() * ch * r; // |+++>
    SpinState::build(
        a,
        StateOrigin::Scalar {
            couplings: *couplings,
            spin: *spin,
        },
    )
    .expect("scalar amplitudes carry total weight 1")
}

/// Spin state of the vector interaction; populates only |-+->, |--+>,
/// |++-> and |+-+>.
pub fn vector_state(
    couplings: &VectorCouplings,
    angles: &DecayAngles,
    spin: &SpinDirection,
) -> Result<SpinState, StateError> {
    let [cl, cr, dl, dr] = couplings.normalized()?;
    let sh = (spin.theta / 2.0).sin();
    let ch = (spin.theta / 2.0).cos();
    let eip = Complex64::from_polar(1.0, spin.phi);
    let sb = (angles.theta_b / 2.0).sin();
    let cb = (angles.theta_b / 2.0).cos();
    let sc = (angles.theta_c / 2.0).sin();
    let cc = (angles.theta_c / 2.0).cos();
    let mut a = [Complex64::ZERO; 8];
    a[0b101] = (cl * dl * sc) * (ch * cb + eip * (sh * sb)); // |-+->
    a[0b110] = -(cl * dr * sb) * (ch * cc - eip * (sh * sc)); // |--+>
    a[0b001] = (cr * dl * sb) * (ch * sc + eip * (sh * cc)); // |++->
    a[0b010] = (cr * dr * sc) * (ch * sb - eip * (sh * cb)); // |+-+>
    SpinState::build(
        a,
        StateOrigin::Vector {
            couplings: *couplings,
            angles: *angles,
            spin: *spin,
        },
    )
}

/// Spin state of the tensor interaction; populates only |+++> and |--->.
pub fn tensor_state(
    couplings: &TensorCouplings,
    angles: &DecayAngles,
    spin: &SpinDirection,
) -> Result<SpinState, StateError> {
    let c = couplings.c()?;
    let d = couplings.d()?;
    let sh = (spin.theta / 2.0).sin();
    let ch = (spin.theta / 2.0).cos();
    let eip = Complex64::from_polar(1.0, spin.phi);
    let sb = (angles.theta_b / 2.0).sin();
    let sc = (angles.theta_c / 2.0).sin();
    let sm = ((angles.theta_b - angles.theta_c) / 2.0).sin();
    let mut a = [Complex64::ZERO; 8];
    a[0b000] = c.conj() * d.conj() * (eip * (2.0 * sh * sb * sc) - Complex64::from(ch * sm));
    a[0b111] = c * d * (eip * (sh * sm) + Complex64::from(2.0 * ch * sb * sc));
    SpinState::build(
        a,
        StateOrigin::Tensor {
            couplings: *couplings,
            angles: *angles,
            spin: *spin,
        },
    )
}

/// Hermitian trace-one matrix over a subset of the three qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    parties: Vec<Party>,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        1 << self.parties.len()
    }

    pub fn parties(&self) -> &[Party] {
        &self.parties
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim() + j]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// Tr rho^2; equals 1 for pure states.
    pub fn purity(&self) -> f64 {
        // Hermitian: Tr rho^2 = sum |rho_ij|^2
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Partial trace keeping the listed parties (in canonical A, B, C order)
    /// and tracing out the rest.
    pub fn reduce(&self, keep: &[Party]) -> Result<DensityMatrix, StateError> {
        if keep.is_empty() {
            return Err(StateError::EmptyKeepSet);
        }
        let mut keep_pos: Vec<usize> = Vec::new();
        for p in keep {
            let pos = self
                .parties
                .iter()
                .position(|q| q == p)
                .ok_or(StateError::PartyNotPresent)?;
            if !keep_pos.contains(&pos) {
                keep_pos.push(pos);
            }
        }
        keep_pos.sort_unstable();
        let n = self.parties.len();
        let trace_pos: Vec<usize> = (0..n).filter(|p| !keep_pos.contains(p)).collect();
        let kd = 1 << keep_pos.len();
        let td = 1 << trace_pos.len();
        // party at position p occupies bit (n - 1 - p)
        let bit = |p: usize| n - 1 - p;
        let embed = |kept: usize, traced: usize| -> usize {
            let mut idx = 0;
            for (r, &p) in keep_pos.iter().enumerate() {
                let b = (kept >> (keep_pos.len() - 1 - r)) & 1;
                idx |= b << bit(p);
            }
            for (r, &p) in trace_pos.iter().enumerate() {
                let b = (traced >> (trace_pos.len() - 1 - r)) & 1;
                idx |= b << bit(p);
            }
            idx
        };
        let mut data = vec![Complex64::ZERO; kd * kd];
        for i in 0..kd {
            for j in 0..kd {
                let mut s = Complex64::ZERO;
                for t in 0..td {
                    s += self.data[embed(i, t) * self.dim() + embed(j, t)];
                }
                data[i * kd + j] = s;
            }
        }
        Ok(DensityMatrix {
            parties: keep_pos.iter().map(|&p| self.parties[p]).collect(),
            data,
        })
    }
}

/// Permutation of the three qubit roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QubitPermutation {
    /// map[s] = destination slot of the party currently in slot s
    map: [usize; 3],
}

impl QubitPermutation {
    pub const IDENTITY: Self = Self { map: [0, 1, 2] };
    pub const SWAP_AB: Self = Self { map: [1, 0, 2] };
    pub const SWAP_AC: Self = Self { map: [2, 1, 0] };
    pub const SWAP_BC: Self = Self { map: [0, 2, 1] };

    pub fn new(map: [usize; 3]) -> Option<Self> {
        let mut seen = [false; 3];
        for &m in &map {
            if m > 2 || seen[m] {
                return None;
            }
            seen[m] = true;
        }
        Some(Self { map })
    }

    pub fn inverse(&self) -> Self {
        let mut inv = [0; 3];
        for s in 0..3 {
            inv[self.map[s]] = s;
        }
        Self { map: inv }
    }

    pub fn map(&self) -> [usize; 3] {
        self.map
    }
}

/// Real rank-3 tensor of triple Pauli expectation values, 4x4x4 with the
/// identity in slot 0 of each index.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTensor {
    entries: [f64; 64],
}

impl CorrelationTensor {
    pub fn from_entries(entries: [f64; 64]) -> Result<Self, StateError> {
        if (entries[0] - 1.0).abs() > 1e-12 {
            return Err(StateError::InvalidTensor("T_000 must equal 1"));
        }
        if entries
            .iter()
            .any(|t| t.abs() > 1.0 + 1e-12 || !t.is_finite())
        {
            return Err(StateError::InvalidTensor("entries must lie in [-1, 1]"));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[f64; 64] {
        &self.entries
    }

    pub fn get(&self, mu: usize, nu: usize, rho: usize) -> f64 {
        self.entries[mu * 16 + nu * 4 + rho]
    }

    /// The pure-Pauli 3x3x3 block, zero-indexed over (x, y, z).
    pub fn xyz_block(&self) -> [[[f64; 3]; 3]; 3] {
        let mut b = [[[0.0; 3]; 3]; 3];
        for (i, bi) in b.iter_mut().enumerate() {
            for (j, bij) in bi.iter_mut().enumerate() {
                for (k, x) in bij.iter_mut().enumerate() {
                    *x = self.get(i + 1, j + 1, k + 1);
                }
            }
        }
        b
    }

    /// Relabels qubit roles: the party in slot s moves to slot `map[s]`.
    pub fn permuted(&self, perm: QubitPermutation) -> CorrelationTensor {
        let mut entries = [0.0; 64];
        let m = perm.map;
        for mu in 0..4 {
            for nu in 0..4 {
                for rho in 0..4 {
                    let src = [mu, nu, rho];
                    let mut dst = [0usize; 3];
                    for s in 0..3 {
                        dst[m[s]] = src[s];
                    }
                    entries[dst[0] * 16 + dst[1] * 4 + dst[2]] =
                        self.entries[mu * 16 + nu * 4 + rho];
                }
            }
        }
        CorrelationTensor { entries }
    }

    /// Contracts each Pauli index with a 3x3 rotation (identity row/column
    /// untouched): T'_ijk = sum R^a_ii' R^b_jj' R^c_kk' T_i'j'k'.
    pub fn rotated(&self, ra: &Mat3, rb: &Mat3, rc: &Mat3) -> CorrelationTensor {
        let ext = |r: &Mat3, i: usize, j: usize| -> f64 {
            match (i, j) {
                (0, 0) => 1.0,
                (0, _) | (_, 0) => 0.0,
                _ => r[i - 1][j - 1],
            }
        };
        let mut entries = [0.0; 64];
        for mu in 0..4 {
            for nu in 0..4 {
                for rho in 0..4 {
                    let mut s = 0.0;
                    for mp in 0..4 {
                        let fa = ext(ra, mu, mp);
                        if fa == 0.0 {
                            continue;
                        }
                        for np in 0..4 {
                            let fb = ext(rb, nu, np);
                            if fb == 0.0 {
                                continue;
                            }
                            for rp in 0..4 {
                                let fc = ext(rc, rho, rp);
                                if fc != 0.0 {
                                    s += fa * fb * fc * self.entries[mp * 16 + np * 4 + rp];
                                }
                            }
                        }
                    }
                    entries[mu * 16 + nu * 4 + rho] = s;
                }
            }
        }
        CorrelationTensor { entries }
    }
}

impl Serialize for CorrelationTensor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(64))?;
        for e in &self.entries {
            seq.serialize_element(e)?;
        }
        seq.end()
    }
}
