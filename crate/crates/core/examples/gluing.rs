//! Connecting two patterns through an explicit complete prefix code.

use treeshift::mixing::connect_through;
use treeshift::{enumerate_cpcs, fixtures, CompletePrefixCode, Error};

fn main() -> treeshift::Result<()> {
    let x = fixtures::no_constant_cells();
    let u = fixtures::pattern(2, &[("", 0), ("0", 1), ("1", 0)]);
    for code in enumerate_cpcs(2, 4) {
        match connect_through(&x, &u, &u, &code) {
            Ok(t) => println!("{code}: {}", t.render(x.alphabet())),
            Err(Error::NoFill) => println!("{code}: no fill"),
            Err(e) => return Err(e),
        }
    }
    for k in 1..=4 {
        let ok = connect_through(&x, &u, &u, &CompletePrefixCode::uniform(2, k)).is_ok();
        println!("Σ^{k}: {}", if ok { "connects" } else { "no fill" });
    }
    Ok(())
}
