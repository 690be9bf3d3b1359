//! No-signalling boxes in exact arithmetic: PR boxes saturate the CHSH
//! algebraic maximum 4, their tripartite extension saturates the 4x4x2
//! algebraic maximum 16, and deterministic-strategy enumeration recovers
//! the classical bounds 2 and 4 exactly.
//!
//! ```sh
//! cargo run -p tribell --example no_signalling_boxes
//! ```

use num_rational::Rational64;
use tribell::nosignal::{
    b442_box_value, b442_deterministic_max, chsh_deterministic_max, chsh_value, pr_box,
    quantum_box, random_box, tripartite_box, verify_no_signalling_bipartite,
    verify_no_signalling_tripartite, BipartiteBox, TripartiteVariant,
};

fn main() {
    let r = Rational64::new;

    println!("CHSH functional values (exact rationals):");
    println!("  PR box       : {}", chsh_value(&pr_box(0)));
    println!("  anti-PR box  : {}", chsh_value(&pr_box(1)));
    println!("  random box   : {}", chsh_value(&random_box()));
    println!(
        "  quantum box  : {:.12} (= 2 sqrt(2))",
        chsh_value(&quantum_box(0))
    );
    println!(
        "  deterministic maximum over 16 local strategies: {}",
        chsh_deterministic_max()
    );

    println!("\nmixing PR and anti-PR in equal parts gives pure noise:");
    let mixed = pr_box(0).mix(r(1, 2), &pr_box(1), r(1, 2));
    println!("  (P0 + P1)/2 == random box: {}", mixed == random_box());

    println!("\ntripartite box (4 settings for A and B, 2 for C):");
    for (variant, label) in [
        (TripartiteVariant::Uvz, "uvz"),
        (TripartiteVariant::Uz, "uz "),
        (TripartiteVariant::Vz, "vz "),
    ] {
        let bx = tripartite_box(variant);
        println!(
            "  variant {label}: <B442> = {} (algebraic maximum 16), no-signalling violations: {}",
            b442_box_value(&bx),
            verify_no_signalling_tripartite(&bx).len()
        );
    }
    println!(
        "  deterministic maximum over 1024 local strategies: {}",
        b442_deterministic_max()
    );

    println!("\na signalling box is caught by the marginal checks:");
    let signalling: BipartiteBox<Rational64> =
        BipartiteBox::from_fn(|a, _b, _x, y| if a == y { r(1, 2) } else { r(0, 1) });
    for v in verify_no_signalling_bipartite(&signalling) {
        println!(
            "  {:?} marginal {} changes when {:?} switches settings {:?}: {} vs {}",
            v.marginal_party, v.context, v.varied_party, v.varied_settings, v.lhs, v.rhs
        );
    }
}
