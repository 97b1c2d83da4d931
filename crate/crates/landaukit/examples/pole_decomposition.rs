//! Pole decomposition: split a product of simple inverses into one term per
//! pole choice, exactly, and enumerate the per-side star graphs that the
//! same split induces on a dressed triangle graph.

use landaukit::fixtures;
use landaukit::graphs::{enumerate_star_graphs, is_separable};
use landaukit::rat::{rat_i, Rat};
use landaukit::symbolic::denominators::{inverse_product, pole_decomposition_terms};
use num::Zero;

fn main() {
    // Smallest nontrivial case: 1/(2*3) = 1/2 - 1/3 after clearing the
    // difference factors.
    let a = [rat_i(2), rat_i(3)];
    let terms = pole_decomposition_terms(&a).expect("distinct nonzero poles");
    let total: Rat = terms.iter().cloned().sum();
    println!("A = (2, 3)");
    for (i, t) in terms.iter().enumerate() {
        println!("  term {i}: {t}");
    }
    println!("  sum {total} = product {}", inverse_product(&a).unwrap());
    assert_eq!(total, inverse_product(&a).unwrap());

    // The same identity for a longer chain with mixed signs.
    let a = [rat_i(1), rat_i(-2), rat_i(4), rat_i(7)];
    let terms = pole_decomposition_terms(&a).expect("distinct nonzero poles");
    let total: Rat = terms.iter().cloned().sum();
    assert_eq!(total, inverse_product(&a).unwrap());
    println!("n = 4 chain: sum of {} terms matches the inverse product", terms.len());

    // Coinciding or vanishing poles have no split.
    assert!(pole_decomposition_terms(&[rat_i(5), rat_i(5)]).is_none());
    assert!(pole_decomposition_terms(&[Rat::zero()]).is_none());

    // Applied per side of a dressed graph, the split turns each side's
    // propagator chain into one retained pole per term: a star graph.
    let g = fixtures::fig6();
    let stars = enumerate_star_graphs(&g);
    println!(
        "two-photon parallel dressing: {} photon(s), couplings per side {:?}, {} star graphs",
        g.n, g.coupling_count, stars.len()
    );
    for sg in &stars {
        println!(
            "  stars {:?}: separable = {}",
            sg.stars,
            is_separable(sg)
        );
    }
}
