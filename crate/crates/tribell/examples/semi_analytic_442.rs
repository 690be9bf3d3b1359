//! Inside the 4x4x2 maximization: the ten measurement axes reduce
//! analytically to three frame angles; the optimizer searches only those
//! and reconstructs explicit axes afterwards. This example shows the
//! internal angles, the reconstruction identity, and how far plain random
//! axis sampling falls short.
//!
//! ```sh
//! cargo run -p tribell --example semi_analytic_442
//! ```

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use tribell::{
    evaluate, optimize_b442, reconstruct_b442_axes, vector_state, DecayAngles, ObservableKind,
    OptimizerSettings, SpinDirection, VectorCouplings,
};

fn main() {
    let c = FRAC_1_SQRT_2;
    let state = vector_state(
        &VectorCouplings::new(c, c, c, c).unwrap(),
        &DecayAngles::new(2.0 * PI / 3.0, 5.0 * PI / 6.0),
        &SpinDirection::new(PI / 4.0, PI / 4.0),
    )
    .unwrap();
    let t = state.correlation_tensor();

    let r = optimize_b442(&t, &OptimizerSettings::default());
    let [theta, phi1, phi2] = r.internal_angles.unwrap();
    println!("optimized <B442>      = {:.12}", r.value);
    println!("frame angles          = ({theta:.6}, {phi1:.6}, {phi2:.6})");

    let axes = reconstruct_b442_axes(&t, &[theta, phi1, phi2]).unwrap();
    let realized = evaluate(&t, &axes, ObservableKind::B442).unwrap();
    println!("re-evaluated on axes  = {realized:.12}");
    for (name, list) in [
        ("A", &axes.a_axes),
        ("B", &axes.b_axes),
        ("C", &axes.c_axes),
    ] {
        for (i, v) in list.iter().enumerate() {
            println!(
                "  {}_{} = ({:+.6}, {:+.6}, {:+.6})",
                name,
                i + 1,
                v[0],
                v[1],
                v[2]
            );
        }
    }

    // plain random sampling of all ten axes for comparison
    let mut state_rng = 0x2545F4914F6CDD1Du64;
    let mut rand = || {
        state_rng ^= state_rng << 13;
        state_rng ^= state_rng >> 7;
        state_rng ^= state_rng << 17;
        (state_rng >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut unit = || {
        let z: f64 = 2.0 * rand() - 1.0;
        let phi = 2.0 * PI * rand();
        let r = (1.0 - z * z).max(0.0).sqrt();
        [r * phi.cos(), r * phi.sin(), z]
    };
    let mut best = f64::NEG_INFINITY;
    for _ in 0..100_000 {
        let axes = tribell::AxisSet {
            a_axes: (0..4).map(|_| unit()).collect(),
            b_axes: (0..4).map(|_| unit()).collect(),
            c_axes: (0..2).map(|_| unit()).collect(),
        };
        best = best.max(evaluate(&t, &axes, ObservableKind::B442).unwrap());
    }
    println!("best of 100000 random axis draws = {best:.12}");
    println!("semi-analytic margin             = {:+.3e}", r.value - best);
}
