//! Builds the three-qubit spin state of X -> A B C for each interaction
//! type and prints its helicity amplitudes and leading correlations.
//!
//! ```sh
//! cargo run -p tribell --example decay_states
//! ```

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use tribell::{
    scalar_state, tensor_state, vector_state, DecayAngles, ScalarCouplings, SpinDirection,
    SpinState, TensorCouplings, VectorCouplings,
};

const KET: [&str; 8] = [
    "|+++>", "|++->", "|+-+>", "|+-->", "|-++>", "|-+->", "|--+>", "|--->",
];

fn show(label: &str, state: &SpinState) {
    println!("{label}");
    for (i, a) in state.amplitudes().iter().enumerate() {
        if a.norm() > 1e-12 {
            println!(
                "  {}  {:+.6} {:+.6}i   |.|^2 = {:.6}",
                KET[i],
                a.re,
                a.im,
                a.norm_sqr()
            );
        }
    }
    let t = state.correlation_tensor();
    println!(
        "  T_zzz = {:+.6}   T_xxx = {:+.6}   Bloch(A) = ({:+.4}, {:+.4}, {:+.4})\n",
        t.get(3, 3, 3),
        t.get(1, 1, 1),
        t.get(1, 0, 0),
        t.get(2, 0, 0),
        t.get(3, 0, 0),
    );
}

fn main() {
    let angles = DecayAngles::new(2.0 * PI / 3.0, 5.0 * PI / 6.0);
    let spin = SpinDirection::new(PI / 3.0, PI / 4.0);
    println!(
        "decay angles: theta_B = {:.4}, theta_C = {:.4}; polarization theta = {:.4}, phi = {:.4}\n",
        angles.theta_b, angles.theta_c, spin.theta, spin.phi
    );

    let momenta = tribell::solve_momenta(&angles).unwrap();
    println!(
        "momenta (units of the parent mass): p_A = {:.6}, p_B = {:.6}, p_C = {:.6}\n",
        momenta.p_a, momenta.p_b, momenta.p_c
    );

    let c = FRAC_1_SQRT_2;
    show(
        "scalar interaction (c_S, c_A, d_S, d_A) = (1, 0, 1, 0):",
        &scalar_state(&ScalarCouplings::new(1.0, 0.0, 1.0, 0.0).unwrap(), &spin),
    );
    show(
        "vector interaction, c_L = c_R = d_L = d_R = 1/sqrt(2):",
        &vector_state(&VectorCouplings::new(c, c, c, c).unwrap(), &angles, &spin).unwrap(),
    );
    show(
        "tensor interaction, c_M = c_E = d_M = d_E = 1/sqrt(2):",
        &tensor_state(&TensorCouplings::new(c, c, c, c).unwrap(), &angles, &spin).unwrap(),
    );

    // the tensor state becomes the maximally entangled GHZ state for n = e_y
    show(
        "tensor interaction with n = e_y (GHZ up to phases):",
        &tensor_state(
            &TensorCouplings::new(c, c, c, c).unwrap(),
            &angles,
            &SpinDirection::y(),
        )
        .unwrap(),
    );
}
