//! Periodic point search and the sibling-distinctness certificate.

use treeshift::fixtures;
use treeshift::periodic::{check_periodic, search_periodic, sibling_distinct_certificate, PeriodicSearch};

fn main() -> treeshift::Result<()> {
    for (name, x) in [
        ("full", fixtures::full_shift(2)),
        ("golden mean", fixtures::golden_mean()),
        ("swap", fixtures::irreducible_zero()),
        ("swap/identity", fixtures::swap_identity()),
    ] {
        let cert = sibling_distinct_certificate(&x)?;
        print!("{name}: certificate {}; ", cert.holds);
        match search_periodic(&x, 8)? {
            PeriodicSearch::Found { spec, codes_tried } => {
                let labels: Vec<String> = spec.labels.iter().map(|(w, &s)| format!("\"{w}\"->{}", x.alphabet().name(s))).collect();
                println!("P = {} after {codes_tried} codes, {} (replay {})", spec.code, labels.join(" "), check_periodic(&x, &spec)?);
            }
            PeriodicSearch::NoneUpToBound { codes_tried } => println!("no periodic point among {codes_tried} codes"),
        }
    }
    Ok(())
}
