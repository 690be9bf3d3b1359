//! Entanglement measures (pairwise and one-to-other concurrences, the
//! three-tangle and F3) for the reference states and the decay states.
//!
//! ```sh
//! cargo run -p tribell --example entanglement_measures
//! ```

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use tribell::entanglement::report;
use tribell::{
    scalar_state, tensor_state, vector_state, DecayAngles, ScalarCouplings, SpinDirection,
    SpinState, TensorCouplings, VectorCouplings,
};

fn show(label: &str, state: &SpinState) {
    let r = report(state);
    println!("{label}");
    println!(
        "  C_AB = {:.6}  C_AC = {:.6}  C_BC = {:.6}",
        r.c_ab, r.c_ac, r.c_bc
    );
    println!(
        "  C_A(BC) = {:.6}  C_B(AC) = {:.6}  C_C(AB) = {:.6}",
        r.c_a_bc, r.c_b_ac, r.c_c_ab
    );
    println!("  three-tangle = {:.6}  F3 = {:.6}\n", r.tau, r.f3);
}

fn main() {
    show("GHZ state:", &SpinState::ghz());
    show("W state:", &SpinState::w());

    let angles = DecayAngles::new(2.0 * PI / 3.0, 5.0 * PI / 6.0);
    let spin = SpinDirection::new(1.1, 0.6);
    let c = FRAC_1_SQRT_2;
    show(
        "scalar decay state (A separates; BC is a Bell pair):",
        &scalar_state(&ScalarCouplings::new(0.8, 0.6, 0.28, -0.96).unwrap(), &spin),
    );
    show(
        "vector decay state:",
        &vector_state(&VectorCouplings::new(c, c, c, c).unwrap(), &angles, &spin).unwrap(),
    );
    show(
        "tensor decay state:",
        &tensor_state(&TensorCouplings::new(c, c, c, c).unwrap(), &angles, &spin).unwrap(),
    );

    // chiral limits of the vector interaction
    show(
        "vector with c_R = 0 (biseparable, A factors out):",
        &vector_state(
            &VectorCouplings::new(1.0, 0.0, c, c).unwrap(),
            &angles,
            &spin,
        )
        .unwrap(),
    );
    show(
        "vector with d_R = 0 (fully separable):",
        &vector_state(
            &VectorCouplings::new(c, c, 1.0, 0.0).unwrap(),
            &angles,
            &spin,
        )
        .unwrap(),
    );
}
