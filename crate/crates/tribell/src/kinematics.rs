//! Three-body decay kinematics of X -> A B C at the rest frame of X, with
//! massless daughters. The momentum of A fixes the z axis, the decay plane
//! is the x-z plane, and the two opening angles (A-B and A-C) determine all
//! momentum magnitudes. Everything is expressed in units of the parent mass.

use serde::Serialize;
use thiserror::Error;

/// Denominator threshold below which the momentum solution is treated as
/// underdetermined (e.g. theta_B = theta_C = pi, where B and C are collinear).
pub const DEGENERACY_EPS: f64 = 1e-12;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum KinematicsError {
    #[error("degenerate kinematics: momentum solution is underdetermined")]
    DegenerateKinematics,
}

/// Opening angles of the decay plane, in radians.
///
/// `theta_b` is the angle between the momenta of A and B, `theta_c` between
/// A and C. A configuration is physical when both lie in [0, pi] and their
/// sum lies in [pi, 2 pi] (positivity of p_A).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayAngles {
    pub theta_b: f64,
    pub theta_c: f64,
}

impl DecayAngles {
    pub fn new(theta_b: f64, theta_c: f64) -> Self {
        Self { theta_b, theta_c }
    }

    /// True iff the configuration lies in the physical region.
    pub fn is_physical(&self) -> bool {
        physical_region(self)
    }
}

/// Momentum magnitudes of the three daughters in units of the parent mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentumTriple {
    pub p_a: f64,
    pub p_b: f64,
    pub p_c: f64,
}

/// Physical-region predicate: finite angles in [0, pi] with pi <= sum <= 2 pi.
pub fn physical_region(angles: &DecayAngles) -> bool {
    let (tb, tc) = (angles.theta_b, angles.theta_c);
    if !tb.is_finite() || !tc.is_finite() {
        return false;
    }
    let pi = std::f64::consts::PI;
    (0.0..=pi).contains(&tb) && (0.0..=pi).contains(&tc) && {
        let s = tb + tc;
        (pi..=2.0 * pi).contains(&s)
    }
}

/// Solves energy-momentum conservation for the momentum magnitudes:
///
/// ```text
/// p_A = -D sin(theta_B + theta_C),  p_B = D sin theta_C,  p_C = D sin theta_B,
/// D   = 1 / [sin theta_B + sin theta_C - sin(theta_B + theta_C)]
/// ```
///
/// in units of the parent mass.
pub fn solve_momenta(angles: &DecayAngles) -> Result<MomentumTriple, KinematicsError> {
    let (tb, tc) = (angles.theta_b, angles.theta_c);
    let denom = tb.sin() + tc.sin() - (tb + tc).sin();
    if denom.abs() < DEGENERACY_EPS {
        return Err(KinematicsError::DegenerateKinematics);
    }
    let d = 1.0 / denom;
    Ok(MomentumTriple {
        p_a: -d * (tb + tc).sin(),
        p_b: d * tc.sin(),
        p_c: d * tb.sin(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn physical_region_examples() {
        assert!(physical_region(&DecayAngles::new(
            2.0 * PI / 3.0,
            5.0 * PI / 6.0
        )));
        assert!(!physical_region(&DecayAngles::new(PI / 4.0, PI / 4.0)));
        assert!(physical_region(&DecayAngles::new(PI, PI)));
        assert!(!physical_region(&DecayAngles::new(f64::NAN, PI)));
    }

    #[test]
    fn symmetric_configuration_splits_evenly() {
        let p = solve_momenta(&DecayAngles::new(2.0 * PI / 3.0, 2.0 * PI / 3.0)).unwrap();
        assert!((p.p_a - 1.0 / 3.0).abs() < 1e-14);
        assert!((p.p_b - 1.0 / 3.0).abs() < 1e-14);
        assert!((p.p_c - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn conservation_residuals() {
        let angles = DecayAngles::new(2.0 * PI / 3.0, 5.0 * PI / 6.0);
        let p = solve_momenta(&angles).unwrap();
        let e = p.p_a + p.p_b + p.p_c - 1.0;
        let pz = p.p_a + p.p_b * angles.theta_b.cos() + p.p_c * angles.theta_c.cos();
        let px = p.p_b * angles.theta_b.sin() - p.p_c * angles.theta_c.sin();
        assert!(e.abs() < 1e-12 && pz.abs() < 1e-12 && px.abs() < 1e-12);
    }

    #[test]
    fn collinear_backward_pair_is_degenerate() {
        assert_eq!(
            solve_momenta(&DecayAngles::new(PI, PI)),
            Err(KinematicsError::DegenerateKinematics)
        );
    }
}
