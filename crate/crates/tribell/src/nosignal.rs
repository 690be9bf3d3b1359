//! No-signalling box algebra with exact rational arithmetic: PR boxes, the
//! tripartite box saturating the algebraic maximum of the tight 4x4x2
//! functional, no-signalling verification, and Bell functionals evaluated
//! directly on conditional probability tables.
//!
//! Settings and outcomes are bits. Outcome bit a maps to the measurement
//! value (-1)^a, so correlators carry signs (-1)^(a xor b ...).

use num_rational::Rational64;
use serde::Serialize;

use crate::bell::AxisSet;
use crate::la3::Vec3;
use crate::states::{Party, SpinState};
use num_complex::Complex64;

/// Probability entries of a box: exact rationals for the algebraic
/// constructions, floats for quantum-derived statistics.
pub trait Prob:
    Copy
    + PartialEq
    + std::fmt::Display
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Neg<Output = Self>
{
    fn zero() -> Self;
    fn ratio(num: i64, den: i64) -> Self;
    /// Exact comparison for rationals, 1e-12 tolerance for floats.
    fn same(a: Self, b: Self) -> bool;
}

impl Prob for Rational64 {
    fn zero() -> Self {
        Rational64::new(0, 1)
    }
    fn ratio(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }
    fn same(a: Self, b: Self) -> bool {
        a == b
    }
}

impl Prob for f64 {
    fn zero() -> Self {
        0.0
    }
    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn same(a: Self, b: Self) -> bool {
        (a - b).abs() <= 1e-12
    }
}

/// Bipartite conditional probability table P(a,b|x,y), two settings and two
/// outcomes per party.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteBox<T> {
    /// indexed `[x][y][a][b]`
    pub p: [[[[T; 2]; 2]; 2]; 2],
}

impl<T: Prob> BipartiteBox<T> {
    pub fn from_fn(mut f: impl FnMut(u8, u8, u8, u8) -> T) -> Self {
        let mut p = [[[[T::zero(); 2]; 2]; 2]; 2];
        for x in 0..2u8 {
            for y in 0..2u8 {
                for a in 0..2u8 {
                    for b in 0..2u8 {
                        p[x as usize][y as usize][a as usize][b as usize] = f(a, b, x, y);
                    }
                }
            }
        }
        Self { p }
    }

    pub fn get(&self, a: u8, b: u8, x: u8, y: u8) -> T {
        self.p[x as usize][y as usize][a as usize][b as usize]
    }

    /// Per-setting normalization: sum_ab P(a,b|x,y) = 1.
    pub fn is_normalized(&self) -> bool {
        (0..2).all(|x| {
            (0..2).all(|y| {
                let s = self.get(0, 0, x, y)
                    + self.get(0, 1, x, y)
                    + self.get(1, 0, x, y)
                    + self.get(1, 1, x, y);
                T::same(s, T::ratio(1, 1))
            })
        })
    }

    /// Convex combination w1 * self + w2 * other (caller keeps w1 + w2 = 1).
    pub fn mix(&self, w1: T, other: &Self, w2: T) -> Self {
        Self::from_fn(|a, b, x, y| w1 * self.get(a, b, x, y) + w2 * other.get(a, b, x, y))
    }
}

/// PR box: P(a,b|x,y) = 1/2 when a + b + s = x y (mod 2), else 0.
/// s = 0 is the PR box, s = 1 the anti-PR box.
pub fn pr_box(s: u8) -> BipartiteBox<Rational64> {
    BipartiteBox::from_fn(|a, b, x, y| {
        if (a ^ b ^ s) == (x & y) {
            Rational64::new(1, 2)
        } else {
            Rational64::new(0, 1)
        }
    })
}

/// Completely random bipartite box: every entry 1/4.
pub fn random_box() -> BipartiteBox<Rational64> {
    BipartiteBox::from_fn(|_, _, _, _| Rational64::new(1, 4))
}

/// Quantum-extremal box (1 - 1/sqrt(2)) P* + (1/sqrt(2)) P^s, which matches
/// the singlet statistics at the CHSH-optimal settings.
pub fn quantum_box(s: u8) -> BipartiteBox<f64> {
    let w = std::f64::consts::FRAC_1_SQRT_2;
    BipartiteBox::from_fn(|a, b, x, y| {
        let pr = if (a ^ b ^ s) == (x & y) { 0.5 } else { 0.0 };
        (1.0 - w) * 0.25 + w * pr
    })
}

/// CHSH functional sum_(abxy) (-1)^(a+b) (-1)^(xy) P(a,b|x,y).
pub fn chsh_value<T: Prob>(bx: &BipartiteBox<T>) -> T {
    let mut total = T::zero();
    for x in 0..2u8 {
        for y in 0..2u8 {
            for a in 0..2u8 {
                for b in 0..2u8 {
                    let sign = ((a ^ b) + (x & y)) % 2;
                    let term = bx.get(a, b, x, y);
                    total = if sign == 0 {
                        total + term
                    } else {
                        total - term
                    };
                }
            }
        }
    }
    total
}

/// Exact maximum of the CHSH functional over the 16 deterministic local
/// strategies (outcome bit per setting and party).
pub fn chsh_deterministic_max() -> i64 {
    let mut best = i64::MIN;
    for alice in 0..4u8 {
        for bob in 0..4u8 {
            let a = |x: u8| (alice >> x) & 1;
            let b = |y: u8| (bob >> y) & 1;
            let mut v = 0i64;
            for x in 0..2u8 {
                for y in 0..2u8 {
                    let sign = ((a(x) ^ b(y)) + (x & y)) % 2;
                    v += if sign == 0 { 1 } else { -1 };
                }
            }
            best = best.max(v);
        }
    }
    best
}

/// Parity condition selecting the tripartite box variant; all three reach
/// the same algebraic maximum because delta_uv makes uvz = uz = vz on the
/// support of the functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TripartiteVariant {
    /// a + b + c + u v z = u'v'
    Uvz,
    /// a + b + c + u z = u'v'
    Uz,
    /// a + b + c + v z = u'v'
    Vz,
}

/// Tripartite conditional probability table P(a,b,c|A_uu', B_vv', C_z):
/// four settings for A and B (double-bit labels), two for C.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripartiteBox<T> {
    /// indexed `[u][u'][v][v'][z][a][b][c]`
    pub p: Vec<T>,
}

impl<T: Prob> TripartiteBox<T> {
    pub fn from_fn(mut f: impl FnMut(u8, u8, u8, u8, u8, u8, u8, u8) -> T) -> Self {
        let mut p = Vec::with_capacity(256);
        for u in 0..2u8 {
            for up in 0..2u8 {
                for v in 0..2u8 {
                    for vp in 0..2u8 {
                        for z in 0..2u8 {
                            for a in 0..2u8 {
                                for b in 0..2u8 {
                                    for c in 0..2u8 {
                                        p.push(f(a, b, c, u, up, v, vp, z));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Self { p }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn get(&self, a: u8, b: u8, c: u8, u: u8, up: u8, v: u8, vp: u8, z: u8) -> T {
        let idx = (((((((u as usize) * 2 + up as usize) * 2 + v as usize) * 2 + vp as usize) * 2
            + z as usize)
            * 2
            + a as usize)
            * 2
            + b as usize)
            * 2
            + c as usize;
        self.p[idx]
    }

    pub fn is_normalized(&self) -> bool {
        for_each_setting(|u, up, v, vp, z| {
            let mut s = T::zero();
            for a in 0..2u8 {
                for b in 0..2u8 {
                    for c in 0..2u8 {
                        s = s + self.get(a, b, c, u, up, v, vp, z);
                    }
                }
            }
            T::same(s, T::ratio(1, 1))
        })
    }
}

fn for_each_setting(mut f: impl FnMut(u8, u8, u8, u8, u8) -> bool) -> bool {
    for u in 0..2u8 {
        for up in 0..2u8 {
            for v in 0..2u8 {
                for vp in 0..2u8 {
                    for z in 0..2u8 {
                        if !f(u, up, v, vp, z) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Tripartite no-signalling box saturating the algebraic maximum 16 of the
/// tight 4x4x2 functional: P = 1/4 on the parity support, 0 elsewhere.
pub fn tripartite_box(variant: TripartiteVariant) -> TripartiteBox<Rational64> {
    TripartiteBox::from_fn(|a, b, c, u, up, v, vp, z| {
        let parity = match variant {
            TripartiteVariant::Uvz => u & v & z,
            TripartiteVariant::Uz => u & z,
            TripartiteVariant::Vz => v & z,
        };
        if (a ^ b ^ c ^ parity) == (up & vp) {
            Rational64::new(1, 4)
        } else {
            Rational64::new(0, 1)
        }
    })
}

/// Tight 4x4x2 functional on a tripartite box:
/// sum delta_uv (-1)^(a+b+c) (-1)^(u'v') (-1)^(uvz) P(a,b,c|A_uu',B_vv',C_z).
pub fn b442_box_value<T: Prob>(bx: &TripartiteBox<T>) -> T {
    let mut total = T::zero();
    for u in 0..2u8 {
        let v = u; // delta_uv
        for up in 0..2u8 {
            for vp in 0..2u8 {
                for z in 0..2u8 {
                    for a in 0..2u8 {
                        for b in 0..2u8 {
                            for c in 0..2u8 {
                                let sign = ((a ^ b ^ c) + (up & vp) + (u & v & z)) % 2;
                                let term = bx.get(a, b, c, u, up, v, vp, z);
                                total = if sign == 0 {
                                    total + term
                                } else {
                                    total - term
                                };
                            }
                        }
                    }
                }
            }
        }
    }
    total
}

/// Exact maximum of the 4x4x2 functional over the 1024 deterministic local
/// strategies (an outcome bit per setting: 2^4 for A, 2^4 for B, 2^2 for C).
pub fn b442_deterministic_max() -> i64 {
    let mut best = i64::MIN;
    for alice in 0..16u8 {
        for bob in 0..16u8 {
            for charlie in 0..4u8 {
                let a = |u: u8, up: u8| (alice >> (2 * u + up)) & 1;
                let b = |v: u8, vp: u8| (bob >> (2 * v + vp)) & 1;
                let c = |z: u8| (charlie >> z) & 1;
                let mut val = 0i64;
                for u in 0..2u8 {
                    let v = u;
                    for up in 0..2u8 {
                        for vp in 0..2u8 {
                            for z in 0..2u8 {
                                let sign =
                                    ((a(u, up) ^ b(v, vp) ^ c(z)) + (up & vp) + (u & v & z)) % 2;
                                val += if sign == 0 { 1 } else { -1 };
                            }
                        }
                    }
                }
                best = best.max(val);
            }
        }
    }
    best
}

/// A failed no-signalling marginal equality: the marginal of `marginal_party`
/// changed when `varied_party` switched between the two listed settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SignallingViolation<T> {
    pub marginal_party: Party,
    pub varied_party: Party,
    pub varied_settings: (u8, u8),
    /// Fixed outcomes and settings identifying the compared marginal.
    pub context: String,
    pub lhs: T,
    pub rhs: T,
}

/// Checks both bipartite marginal families; empty result means the box is
/// no-signalling. Comparisons are exact for rational boxes.
pub fn verify_no_signalling_bipartite<T: Prob>(
    bx: &BipartiteBox<T>,
) -> Vec<SignallingViolation<T>> {
    let mut out = Vec::new();
    // Alice's marginal must not depend on y
    for a in 0..2u8 {
        for x in 0..2u8 {
            let m = |y: u8| bx.get(a, 0, x, y) + bx.get(a, 1, x, y);
            if !T::same(m(0), m(1)) {
                out.push(SignallingViolation {
                    marginal_party: Party::A,
                    varied_party: Party::B,
                    varied_settings: (0, 1),
                    context: format!("P(a={a}|x={x})"),
                    lhs: m(0),
                    rhs: m(1),
                });
            }
        }
    }
    // Bob's marginal must not depend on x
    for b in 0..2u8 {
        for y in 0..2u8 {
            let m = |x: u8| bx.get(0, b, x, y) + bx.get(1, b, x, y);
            if !T::same(m(0), m(1)) {
                out.push(SignallingViolation {
                    marginal_party: Party::B,
                    varied_party: Party::A,
                    varied_settings: (0, 1),
                    context: format!("P(b={b}|y={y})"),
                    lhs: m(0),
                    rhs: m(1),
                });
            }
        }
    }
    out
}

/// Checks the three tripartite marginal families (sum over one party's
/// outcome must be independent of that party's setting).
pub fn verify_no_signalling_tripartite<T: Prob>(
    bx: &TripartiteBox<T>,
) -> Vec<SignallingViolation<T>> {
    let mut out = Vec::new();
    // varying Alice's setting (u, u'): marginal over a
    for b in 0..2u8 {
        for c in 0..2u8 {
            for v in 0..2u8 {
                for vp in 0..2u8 {
                    for z in 0..2u8 {
                        let m = |u: u8, up: u8| {
                            bx.get(0, b, c, u, up, v, vp, z) + bx.get(1, b, c, u, up, v, vp, z)
                        };
                        let base = m(0, 0);
                        for (u, up) in [(0u8, 1u8), (1, 0), (1, 1)] {
                            if !T::same(base, m(u, up)) {
                                out.push(SignallingViolation {
                                    marginal_party: Party::B,
                                    varied_party: Party::A,
                                    varied_settings: (0, 2 * u + up),
                                    context: format!("P(b={b},c={c}|B_{v}{vp},C_{z})"),
                                    lhs: base,
                                    rhs: m(u, up),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    // varying Bob's setting (v, v'): marginal over b
    for a in 0..2u8 {
        for c in 0..2u8 {
            for u in 0..2u8 {
                for up in 0..2u8 {
                    for z in 0..2u8 {
                        let m = |v: u8, vp: u8| {
                            bx.get(a, 0, c, u, up, v, vp, z) + bx.get(a, 1, c, u, up, v, vp, z)
                        };
                        let base = m(0, 0);
                        for (v, vp) in [(0u8, 1u8), (1, 0), (1, 1)] {
                            if !T::same(base, m(v, vp)) {
                                out.push(SignallingViolation {
                                    marginal_party: Party::A,
                                    varied_party: Party::B,
                                    varied_settings: (0, 2 * v + vp),
                                    context: format!("P(a={a},c={c}|A_{u}{up},C_{z})"),
                                    lhs: base,
                                    rhs: m(v, vp),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    // varying Charlie's setting z: marginal over c
    for a in 0..2u8 {
        for b in 0..2u8 {
            for u in 0..2u8 {
                for up in 0..2u8 {
                    for v in 0..2u8 {
                        for vp in 0..2u8 {
                            let m = |z: u8| {
                                bx.get(a, b, 0, u, up, v, vp, z) + bx.get(a, b, 1, u, up, v, vp, z)
                            };
                            if !T::same(m(0), m(1)) {
                                out.push(SignallingViolation {
                                    marginal_party: Party::A,
                                    varied_party: Party::C,
                                    varied_settings: (0, 1),
                                    context: format!("P(a={a},b={b}|A_{u}{up},B_{v}{vp})"),
                                    lhs: m(0),
                                    rhs: m(1),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Born-rule box of a pure three-qubit state for spin measurements along a
/// 4/4/2 axis set: P(a,b,c|...) = <psi| Pi_a Pi_b Pi_c |psi> with
/// Pi_o(n) = (1 + (-1)^o n.sigma)/2.
pub fn born_box(state: &SpinState, axes: &AxisSet) -> TripartiteBox<f64> {
    assert_eq!(axes.a_axes.len(), 4);
    assert_eq!(axes.b_axes.len(), 4);
    assert_eq!(axes.c_axes.len(), 2);
    let amp = state.amplitudes();
    let proj = |n: &Vec3, o: u8| -> [[Complex64; 2]; 2] {
        let s = if o == 0 { 1.0 } else { -1.0 };
        [
            [
                Complex64::new(0.5 * (1.0 + s * n[2]), 0.0),
                Complex64::new(0.5 * s * n[0], -0.5 * s * n[1]),
            ],
            [
                Complex64::new(0.5 * s * n[0], 0.5 * s * n[1]),
                Complex64::new(0.5 * (1.0 - s * n[2]), 0.0),
            ],
        ]
    };
    TripartiteBox::from_fn(|a, b, c, u, up, v, vp, z| {
        let pa = proj(&axes.a_axes[(2 * u + up) as usize], a);
        let pb = proj(&axes.b_axes[(2 * v + vp) as usize], b);
        let pc = proj(&axes.c_axes[z as usize], c);
        // <psi| Pa x Pb x Pc |psi>
        let mut w = [Complex64::ZERO; 8];
        for i in 0..8usize {
            let (ia, ib, ic) = ((i >> 2) & 1, (i >> 1) & 1, i & 1);
            for ja in 0..2usize {
                for jb in 0..2usize {
                    for jc in 0..2usize {
                        let j = (ja << 2) | (jb << 1) | jc;
                        w[i] += pa[ia][ja] * pb[ib][jb] * pc[ic][jc] * amp[j];
                    }
                }
            }
        }
        let mut p = Complex64::ZERO;
        for i in 0..8 {
            p += amp[i].conj() * w[i];
        }
        debug_assert!(p.im.abs() < 1e-10);
        p.re.max(0.0)
    })
}
